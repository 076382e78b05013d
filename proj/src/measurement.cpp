#include "lgwalk/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgwalk/rng.hpp"

namespace lgwalk {

QScheme QScheme::dichotomic(double xi_value) {
    if (!(std::abs(xi_value) <= 1.0))
        throw ValidationError("dichotomic scheme requires |xi| <= 1");
    QScheme s;
    s.kind = Kind::dichotomic;
    s.xi = xi_value;
    return s;
}

double q_at_t1() { return 1.0; }

double q_at_t2(Branch branch, const QScheme& scheme) { return scheme.q2(branch); }

double q_at_t3(int x) { return x <= 0 ? -1.0 : 1.0; }

void RemovalProtocol::validate(int steps, int t2_step) const {
    if (arm == Arm::none)
        return;
    if (t2_step != 1)
        throw ValidationError("removal protocol: t2 must be 1 step");
    if (steps <= t2_step)
        throw ValidationError("removal protocol: walk must continue past t2");
    if (removal_shift <= 0 || removal_shift % 2 == 0)
        throw ValidationError("removal protocol: removal_shift must be a positive odd integer");
    int min_shift = 2 * (steps - t2_step) - 1;
    if (removal_shift < min_shift)
        throw ValidationError("removal protocol: removal_shift too small for unambiguous classification");
    if (!(excitation_prob >= 0.0 && excitation_prob <= 1.0))
        throw ValidationError("removal protocol: excitation_prob must lie in [0, 1]");
}

RemovalProtocol RemovalProtocol::conditioning_on(Branch b, int shift) {
    RemovalProtocol p;
    p.arm = b == Branch::left ? Arm::condition_on_left : Arm::condition_on_right;
    p.removal_shift = shift;
    return p;
}

void NoiseParams::validate() const {
    if (!(detection_error >= 0.0 && detection_error <= 1.0))
        throw ValidationError("noise: detection_error must lie in [0, 1]");
    if (!(prep_error >= 0.0 && prep_error <= 1.0))
        throw ValidationError("noise: prep_error must lie in [0, 1]");
}

namespace {
constexpr double kConditioningFloor = 1e-15;
}

BranchProjection project_t2(const WalkerState& state, Branch branch) {
    const Window& w = state.window();
    int idx = w.index(branch_spin(branch), branch_site(branch));
    Complex amp = state.amplitudes()[idx];
    double prob = std::norm(amp);
    if (prob < kConditioningFloor)
        throw ValidationError("project_t2: conditioning on a branch with vanishing probability");
    std::vector<Complex> amps(state.amplitudes().size(), Complex(0, 0));
    amps[idx] = amp / std::sqrt(prob);
    return {prob, unchecked_state(w, std::move(amps))};
}

BranchProjectionDensity project_t2(const WalkerDensity& rho, Branch branch) {
    const Window& w = rho.window();
    int idx = w.index(branch_spin(branch), branch_site(branch));
    double prob = rho.at(idx, idx).real();
    if (prob < kConditioningFloor)
        throw ValidationError("project_t2: conditioning on a branch with vanishing probability");
    std::size_t d = static_cast<std::size_t>(rho.dim());
    std::vector<Complex> m(d * d, Complex(0, 0));
    m[static_cast<std::size_t>(idx) * d + idx] = Complex(1, 0);
    return {prob, unchecked_density(w, std::move(m))};
}

namespace {

// Sites reachable from start after `steps` further steps: same light cone and
// parity, independent of amplitudes.
std::vector<int> reachable_sites(int start, int steps) {
    std::vector<int> out;
    for (int x = start - steps; x <= start + steps; x += 2)
        out.push_back(x);
    return out;
}

double block_mass(const PositionDistribution& dist, const std::vector<int>& sites) {
    double m = 0;
    for (int x : sites)
        m += dist.at(x);
    return m;
}

PositionDistribution block_conditional(const PositionDistribution& dist, const std::vector<int>& sites) {
    PositionDistribution out(dist.window);
    double mass = 0;
    for (int x : sites)
        mass += out.ref(x) = dist.at(x);
    // A branch can be empty (deterministic coin); leave the zero distribution.
    return mass > 1e-300 ? out.normalized() : out;
}

} // namespace

NegativeRunResult negative_measurement_run(const WalkSpec& spec, const RemovalProtocol& protocol,
                                           Spin initial_spin, int t2_step) {
    spec.validate();
    if (protocol.arm == Arm::none)
        throw ValidationError("negative_measurement_run: protocol arm must not be none");
    protocol.validate(spec.steps, t2_step);

    NegativeRunResult result;
    result.conditioned_branch = protocol.arm == Arm::condition_on_left ? Branch::left : Branch::right;

    // Which species is transported, and where. The canonical right arm moves
    // the up species leftward so the untouched down branch is the retained
    // one; the literal variant moves the down species leftward instead.
    Spin removed_species;
    int offset;
    Branch untouched_branch;
    if (protocol.arm == Arm::condition_on_left) {
        removed_species = Spin::down;
        offset = +protocol.removal_shift;
        untouched_branch = Branch::left;
    } else if (!protocol.literal_text_arm) {
        removed_species = Spin::up;
        offset = -protocol.removal_shift;
        untouched_branch = Branch::right;
    } else {
        removed_species = Spin::down;
        offset = -protocol.removal_shift;
        untouched_branch = Branch::left;
    }
    result.retained_is_conditioned = untouched_branch == result.conditioned_branch;

    const int remaining = spec.steps - t2_step;
    const Branch moved_branch = other_branch(untouched_branch);
    result.retained_support = reachable_sites(branch_site(untouched_branch), remaining);
    result.displaced_support = reachable_sites(branch_site(moved_branch) + offset, remaining);

    std::vector<int> overlap;
    std::ranges::set_intersection(result.retained_support, result.displaced_support,
                                  std::back_inserter(overlap));
    if (!overlap.empty())
        throw ValidationError("negative_measurement_run: retained and displaced supports overlap");

    Window window = default_window(spec.steps, protocol.removal_shift);
    WalkSpec tail = spec;
    tail.steps = remaining;

    if (spec.dephasing_per_step == 0.0) {
        WalkerState psi = new_localized(0, initial_spin, window);
        for (int k = 0; k < t2_step; ++k)
            psi = walk_step(psi, spec.coin);
        result.born_probability =
            std::norm(psi.amplitude(branch_spin(result.conditioned_branch), branch_site(result.conditioned_branch)));
        psi = translate_species(psi, removed_species, offset);
        for (int k = 0; k < remaining; ++k)
            psi = walk_step(psi, spec.coin);
        result.final_distribution = position_distribution(psi);
    } else {
        WalkerDensity rho = new_localized_density(0, initial_spin, window);
        auto head = spec;
        head.steps = t2_step;
        rho = run_walk_density(head, rho).back();
        int idx = window.index(branch_spin(result.conditioned_branch), branch_site(result.conditioned_branch));
        result.born_probability = rho.at(idx, idx).real();
        rho = translate_species(rho, removed_species, offset);
        rho = run_walk_density(tail, rho).back();
        result.final_distribution = position_distribution(rho);
    }

    result.retention_probability = block_mass(result.final_distribution, result.retained_support);
    result.retained_conditional = block_conditional(result.final_distribution, result.retained_support);
    result.displaced_conditional = block_conditional(result.final_distribution, result.displaced_support);

    if (result.retained_is_conditioned) {
        result.conditioned_final = result.retained_conditional;
    } else {
        // Transported atoms walked from a start displaced by `offset`; undo it.
        PositionDistribution shifted(result.displaced_conditional.window);
        for (int x : result.displaced_support)
            shifted.ref(x - offset) = result.displaced_conditional.at(x);
        result.conditioned_final = shifted;
    }
    return result;
}

std::vector<NegativeRunResult::SiteOutcome> NegativeRunResult::site_outcomes() const {
    std::vector<SiteOutcome> out;
    for (int x : retained_support)
        out.push_back({x, final_distribution.at(x), true});
    for (int x : displaced_support)
        out.push_back({x, final_distribution.at(x), false});
    std::ranges::sort(out, {}, &SiteOutcome::x);
    return out;
}

Classification classify_site(int x, const std::vector<int>& retained_support,
                             const std::vector<int>& displaced_support) {
    auto member = [](const std::vector<int>& v, int value) {
        return std::ranges::binary_search(v, value);
    };
    if (member(displaced_support, x))
        return Classification::rejected;
    if (member(retained_support, x))
        return Classification::retained;
    auto distance_to = [x](const std::vector<int>& v) {
        int best = std::numeric_limits<int>::max();
        for (int s : v)
            best = std::min(best, std::abs(x - s));
        return best;
    };
    int dr = distance_to(retained_support);
    int dd = distance_to(displaced_support);
    return dr < dd ? Classification::retained : Classification::rejected;
}

EventSampler::EventSampler(const WalkSpec& spec, const RemovalProtocol& protocol, const QScheme& scheme,
                           const NoiseParams& noise, std::uint64_t seed)
    : spec_(spec), protocol_(protocol), scheme_(scheme), noise_(noise), seed_(seed) {
    spec_.validate();
    noise_.validate();
    Window window = default_window(spec_.steps, protocol_.removal_shift);
    for (Spin s : {Spin::up, Spin::down}) {
        ArmTables& t = s == Spin::up ? up_ : down_;
        if (protocol_.arm == Arm::none) {
            t.unconditioned = run_walk(spec_, new_localized(0, s, window)).distribution_after(spec_.steps);
            t.retention_probability = 1.0;
        } else {
            t.negative = negative_measurement_run(spec_, protocol_, s);
            t.retention_probability = t.negative.retention_probability;
        }
    }
}

const NegativeRunResult& EventSampler::model(Spin initial_spin) const {
    if (protocol_.arm == Arm::none)
        throw ValidationError("sampler has no removal model for arm none");
    return tables(initial_spin).negative;
}

namespace {

int draw_from(const PositionDistribution& dist, const std::vector<int>& support, double u) {
    double acc = 0;
    for (int x : support) {
        acc += dist.at(x);
        if (u < acc)
            return x;
    }
    return support.back();
}

int draw_from_full(const PositionDistribution& dist, double u) {
    double acc = 0;
    for (int x = dist.window.x_min; x <= dist.window.x_max; ++x) {
        acc += dist.at(x);
        if (u < acc)
            return x;
    }
    return dist.window.x_max;
}

std::uint64_t stream_for_arm(Arm arm) {
    switch (arm) {
    case Arm::none: return rng_stream::arm_none;
    case Arm::condition_on_left: return rng_stream::arm_left;
    default: return rng_stream::arm_right;
    }
}

} // namespace

EventRecord EventSampler::sample(std::int64_t run_id) const {
    auto g = make_stream(seed_, stream_for_arm(protocol_.arm), static_cast<std::uint64_t>(run_id));

    EventRecord ev;
    ev.run_id = run_id;
    ev.arm = protocol_.arm;
    ev.theta = spec_.coin.theta;
    ev.seed = seed_;

    ev.prep_error = bernoulli(g, noise_.prep_error);
    const ArmTables& t = tables(ev.prep_error ? Spin::down : Spin::up);

    int true_x3 = 0;
    if (protocol_.arm == Arm::none) {
        true_x3 = draw_from_full(t.unconditioned, uniform_double(g));
        ev.retained = true;
    } else {
        const NegativeRunResult& nr = t.negative;
        bool in_retained_block = bernoulli(g, nr.retention_probability);
        Branch untouched = nr.retained_is_conditioned ? nr.conditioned_branch
                                                      : other_branch(nr.conditioned_branch);
        ev.branch_at_t2 = in_retained_block ? untouched : other_branch(untouched);
        true_x3 = in_retained_block
                      ? draw_from(nr.retained_conditional, nr.retained_support, uniform_double(g))
                      : draw_from(nr.displaced_conditional, nr.displaced_support, uniform_double(g));
        if (in_retained_block && protocol_.excitation_prob > 0)
            ev.corrupt = bernoulli(g, protocol_.excitation_prob);
    }

    ev.reported_x3 = true_x3;
    if (noise_.detection_error > 0 && bernoulli(g, noise_.detection_error))
        ev.reported_x3 += bernoulli(g, 0.5) ? 1 : -1;

    if (protocol_.arm != Arm::none) {
        const NegativeRunResult& nr = t.negative;
        ev.retained =
            classify_site(ev.reported_x3, nr.retained_support, nr.displaced_support) == Classification::retained;
    }
    ev.q3 = q_at_t3(ev.reported_x3);
    return ev;
}

std::vector<EventRecord> EventSampler::sample_many(std::int64_t first_run_id, std::int64_t count) const {
    std::vector<EventRecord> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i)
        out.push_back(sample(first_run_id + i));
    return out;
}

EventRecord sample_event(const WalkSpec& spec, const RemovalProtocol& protocol, const QScheme& scheme,
                         const NoiseParams& noise, std::uint64_t seed, std::int64_t run_id) {
    return EventSampler(spec, protocol, scheme, noise, seed).sample(run_id);
}

} // namespace lgwalk
