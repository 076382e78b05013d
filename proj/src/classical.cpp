#include "lgwalk/classical.hpp"

#include <cmath>

#include "lgwalk/rng.hpp"

namespace lgwalk {

int Trajectory::position_after(int k) const {
    int x = 0;
    for (int i = 0; i < k; ++i)
        x += branch(i) == Branch::right ? 1 : -1;
    return x;
}

std::vector<int> Trajectory::positions() const {
    std::vector<int> xs(static_cast<std::size_t>(steps));
    int x = 0;
    for (int i = 0; i < steps; ++i) {
        x += branch(i) == Branch::right ? 1 : -1;
        xs[static_cast<std::size_t>(i)] = x;
    }
    return xs;
}

std::vector<Trajectory> enumerate_trajectories(int n) {
    if (n < 0)
        throw ValidationError("enumerate_trajectories: n must be nonnegative");
    if (n > 24)
        throw ValidationError("enumerate_trajectories: n > 24 would enumerate > 16M paths");
    std::vector<Trajectory> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits)
        out.push_back(Trajectory{n, bits});
    return out;
}

PositionDistribution classical_binomial_distribution(int n, double p) {
    if (n < 0)
        throw ValidationError("classical_binomial_distribution: n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("classical_binomial_distribution: p must lie in [0, 1]");
    PositionDistribution dist(Window(-n, n));
    if (p == 0.0 || p == 1.0) { // deterministic transport; recurrence would divide by q
        dist.ref(p == 1.0 ? -n : n) = 1.0;
        return dist;
    }
    // k leftward steps land at x = n - 2k with binomial weight C(n,k) p^k q^(n-k).
    double q = 1.0 - p;
    double weight = std::pow(q, n); // k = 0
    for (int k = 0; k <= n; ++k) {
        dist.ref(n - 2 * k) += weight;
        if (k < n)
            weight *= (static_cast<double>(n - k) / (k + 1)) * (p / q);
    }
    return dist;
}

double classical_k_single(const Trajectory& t, const QScheme& scheme) {
    if (t.steps < 2)
        throw ValidationError("classical_k: trajectories must cover t2 and t3");
    Branch b2 = t.branch(0);
    double q1 = q_at_t1();
    double q2 = q_at_t2(b2, scheme);
    double q3 = q_at_t3(t.position_after(t.steps));
    return q2 * q1 + q3 * q2 - q3 * q1;
}

double classical_k(const std::vector<Trajectory>& trajectories, const std::vector<double>& weights,
                   const QScheme& scheme) {
    if (trajectories.size() != weights.size())
        throw ValidationError("classical_k: weights must align with trajectories");
    double total = 0;
    for (double w : weights)
        total += w;
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("classical_k: weights must sum to 1");
    double k = 0;
    for (std::size_t i = 0; i < trajectories.size(); ++i)
        k += weights[i] * classical_k_single(trajectories[i], scheme);
    return k;
}

namespace {

std::uint64_t classical_stream(Arm arm) {
    switch (arm) {
    case Arm::none: return rng_stream::classical_none;
    case Arm::condition_on_left: return rng_stream::classical_left;
    default: return rng_stream::classical_right;
    }
}

} // namespace

std::vector<EventRecord> sample_classical_events(int n, double p, std::int64_t count,
                                                 const QScheme& scheme, std::uint64_t seed,
                                                 const ClassicalSamplerOptions& options) {
    (void)scheme; // Q values are assigned at analysis time, as for quantum logs
    if (n < 2)
        throw ValidationError("sample_classical_events: walk must cover t2 and t3");
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("sample_classical_events: p must lie in [0, 1]");
    if (count < 0)
        throw ValidationError("sample_classical_events: count must be nonnegative");

    // Coin-equivalent angle, recorded for provenance: p = cos^2(theta/2).
    double theta = 2.0 * std::acos(std::sqrt(p));

    std::vector<EventRecord> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t id = 0; id < count; ++id) {
        auto g = make_stream(seed, classical_stream(options.arm), static_cast<std::uint64_t>(id));
        EventRecord ev;
        ev.run_id = id;
        ev.arm = options.arm;
        ev.theta = theta;
        ev.seed = seed;

        int x = 0;
        Branch b2 = Branch::left;
        for (int step = 0; step < n; ++step) {
            bool leftward = bernoulli(g, p);
            if (step == 0)
                b2 = leftward ? Branch::left : Branch::right;
            if (options.arm != Arm::none && options.invasive && step >= 1)
                leftward = bernoulli(g, 0.5); // scrambled coin after the t2 measurement
            x += leftward ? -1 : +1;
        }

        if (options.arm == Arm::none) {
            ev.retained = true;
        } else {
            ev.branch_at_t2 = b2;
            Branch conditioned =
                options.arm == Arm::condition_on_left ? Branch::left : Branch::right;
            ev.retained = b2 == conditioned;
        }
        ev.reported_x3 = x;
        ev.q3 = q_at_t3(x);
        out.push_back(ev);
    }
    return out;
}

} // namespace lgwalk
