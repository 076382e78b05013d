#include "lgwalk/analysis.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "lgwalk/optimize.hpp"

namespace lgwalk {

double k13_from_distribution(const PositionDistribution& dist) {
    if (std::abs(dist.total() - 1.0) > 1e-9)
        throw ValidationError("k13_from_distribution: distribution is not normalized");
    double k = 0;
    for (int x = dist.window.x_min; x <= dist.window.x_max; ++x)
        k += dist.at(x) * q_at_t3(x);
    return k;
}

double k23_from_arms(double p_left, double mean_left, double p_right, double mean_right,
                     const QScheme& scheme) {
    if (std::abs(p_left + p_right - 1.0) > 1e-6)
        throw ValidationError("k23_from_arms: branch probabilities must sum to 1");
    if (std::abs(mean_left) > 1.0 + 1e-12 || std::abs(mean_right) > 1.0 + 1e-12)
        throw ValidationError("k23_from_arms: conditional means must lie in [-1, 1]");
    return p_left * scheme.q2(Branch::left) * mean_left + p_right * scheme.q2(Branch::right) * mean_right;
}

namespace {
void check_correlator_range(double v, const char* name) {
    if (std::abs(v) > 1.0 + 1e-9)
        throw ValidationError(std::string("correlator out of [-1, 1]: ") + name);
}
} // namespace

double lg_k(double k12, double k23, double k13) {
    check_correlator_range(k12, "k12");
    check_correlator_range(k23, "k23");
    check_correlator_range(k13, "k13");
    return k12 + k23 - k13;
}

double lg_k_prime(double k12, double k23, double k13) {
    check_correlator_range(k12, "k12");
    check_correlator_range(k23, "k23");
    check_correlator_range(k13, "k13");
    return k12 - k23 + k13;
}

double witness(double k) { return std::abs(k - 1.0); }

double analytic_k_constant(double theta) {
    return (19.0 - 4.0 * std::cos(2 * theta) + std::cos(4 * theta)) / 16.0;
}

double analytic_k_dichotomic(double theta) {
    return (33.0 - 4.0 * std::cos(theta) - 4.0 * std::cos(2 * theta) + 4.0 * std::cos(3 * theta) +
            3.0 * std::cos(4 * theta)) /
           32.0;
}

ThetaMax max_analytic_k_dichotomic() {
    auto [theta, neg] = scan_then_golden_minimize(
        [](double t) { return -analytic_k_dichotomic(t); }, 0.0, std::numbers::pi, 512, 1e-10);
    return {theta, -neg};
}

double venality_bound(double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw ValidationError("venality zeta must lie in [0, 1]");
    return 1.0 + 2.0 * zeta;
}

double venality_decompose(double k23_ideal, double k23_corrupt, double zeta, double k13) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw ValidationError("venality zeta must lie in [0, 1]");
    check_correlator_range(k23_ideal, "k23_ideal");
    check_correlator_range(k23_corrupt, "k23_corrupt");
    check_correlator_range(k13, "k13");
    return 1.0 + (1.0 - zeta) * k23_ideal + zeta * k23_corrupt - k13;
}

double macroscopicity(double total_duration_s, std::optional<double> ell_m) {
    if (!(total_duration_s > 0))
        throw ValidationError("macroscopicity: duration must be positive");
    double mass_ratio = kCesiumMassU * kAtomicMassUnitOverElectron;
    double mu0 = std::log10(total_duration_s * mass_ratio * mass_ratio);
    if (!ell_m.has_value())
        return mu0;
    double ell = *ell_m;
    if (!(ell > 0))
        throw ValidationError("macroscopicity: ell must be positive");
    constexpr double knee = 2e-6; // maximal separation reached by the walk
    if (ell <= knee)
        return mu0;
    return mu0 - 2.0 * std::log10(ell / knee);
}

ExactPipeline exact_lg_pipeline(const WalkSpec& spec, const QScheme& scheme) {
    spec.validate();
    if (spec.steps < 2)
        throw ValidationError("exact_lg_pipeline: needs at least 2 steps (t2 = 1 < t3)");

    ExactPipeline out;
    Window window = default_window(spec.steps, 0);
    WalkSpec tail = spec;
    tail.steps = spec.steps - 1;
    constexpr double kBranchFloor = 1e-15;

    if (spec.dephasing_per_step == 0.0) {
        WalkerState psi1 = walk_step(new_localized(0, Spin::up, window), spec.coin);
        out.p_left = std::norm(psi1.amplitude(Spin::up, -1));
        out.p_right = std::norm(psi1.amplitude(Spin::down, +1));

        WalkerState psi_final = psi1;
        for (int k = 0; k < tail.steps; ++k)
            psi_final = walk_step(psi_final, spec.coin);
        out.unconditioned = position_distribution(psi_final);

        auto conditional = [&](Branch b) {
            WalkerState psi = project_t2(psi1, b).conditioned;
            for (int k = 0; k < tail.steps; ++k)
                psi = walk_step(psi, spec.coin);
            return position_distribution(psi);
        };
        if (out.p_left > kBranchFloor) {
            out.conditional_left = conditional(Branch::left);
            out.mean_left = k13_from_distribution(out.conditional_left);
        }
        if (out.p_right > kBranchFloor) {
            out.conditional_right = conditional(Branch::right);
            out.mean_right = k13_from_distribution(out.conditional_right);
        }
    } else {
        WalkSpec head = spec;
        head.steps = 1;
        WalkerDensity rho1 =
            run_walk_density(head, new_localized_density(0, Spin::up, window)).back();
        int il = window.index(Spin::up, -1);
        int ir = window.index(Spin::down, +1);
        out.p_left = rho1.at(il, il).real();
        out.p_right = rho1.at(ir, ir).real();

        out.unconditioned = position_distribution(run_walk_density(tail, rho1).back());

        auto conditional = [&](Branch b) {
            WalkerDensity rho = project_t2(rho1, b).conditioned;
            return position_distribution(run_walk_density(tail, rho).back());
        };
        if (out.p_left > kBranchFloor) {
            out.conditional_left = conditional(Branch::left);
            out.mean_left = k13_from_distribution(out.conditional_left);
        }
        if (out.p_right > kBranchFloor) {
            out.conditional_right = conditional(Branch::right);
            out.mean_right = k13_from_distribution(out.conditional_right);
        }
    }

    out.k13 = k13_from_distribution(out.unconditioned);
    out.k12 = out.p_left * scheme.q2(Branch::left) + out.p_right * scheme.q2(Branch::right);
    out.k23 = k23_from_arms(out.p_left, out.mean_left, out.p_right, out.mean_right, scheme);
    out.k = out.k12 + out.k23 - out.k13;
    return out;
}

double combine_k(double k13, double p_left_raw, double mean_left, double p_right_raw,
                 double mean_right, const QScheme& scheme) {
    double norm = p_left_raw + p_right_raw;
    if (norm <= 0)
        throw ValidationError("combine_k: no conditioned weight in either arm");
    double pl = p_left_raw / norm;
    double pr = p_right_raw / norm;
    double k12 = pl * scheme.q2(Branch::left) + pr * scheme.q2(Branch::right);
    double k23 = pl * scheme.q2(Branch::left) * mean_left + pr * scheme.q2(Branch::right) * mean_right;
    return k12 + k23 - k13;
}

KParts k_parts_from_events(const EventGroups& groups, const QScheme& scheme, bool literal_right_arm,
                           int removal_shift) {
    if (groups.none.empty())
        throw ValidationError("k_parts_from_events: no unconditioned events");
    if (groups.left.empty() || groups.right.empty())
        throw ValidationError("k_parts_from_events: both removal arms need events");

    KParts parts;
    double q3_sum = 0;
    for (const EventRecord& ev : groups.none)
        q3_sum += ev.q3;
    parts.k13 = q3_sum / static_cast<double>(groups.none.size());

    auto accumulate = [&](const std::vector<EventRecord>& events, bool use_displaced) {
        std::int64_t kept = 0;
        double sum = 0;
        for (const EventRecord& ev : events) {
            if (use_displaced) {
                if (!ev.retained) {
                    ++kept;
                    sum += q_at_t3(ev.reported_x3 + removal_shift);
                }
            } else if (ev.retained) {
                ++kept;
                sum += ev.q3;
            }
        }
        double p_raw = static_cast<double>(kept) / static_cast<double>(events.size());
        double mean = kept > 0 ? sum / static_cast<double>(kept) : 0.0;
        return std::tuple{kept, p_raw, mean};
    };

    auto [kl, pl_raw, ml] = accumulate(groups.left, false);
    auto [kr, pr_raw, mr] = accumulate(groups.right, literal_right_arm);
    parts.kept_left = kl;
    parts.kept_right = kr;
    parts.p_left_raw = pl_raw;
    parts.p_right_raw = pr_raw;
    parts.mean_left = ml;
    parts.mean_right = mr;

    double norm = pl_raw + pr_raw;
    if (norm <= 0)
        throw ValidationError("k_parts_from_events: no conditioned events kept in either arm");
    parts.p_left = pl_raw / norm;
    parts.p_right = pr_raw / norm;

    parts.k12 = parts.p_left * scheme.q2(Branch::left) + parts.p_right * scheme.q2(Branch::right);
    parts.k23 = parts.p_left * scheme.q2(Branch::left) * parts.mean_left +
                parts.p_right * scheme.q2(Branch::right) * parts.mean_right;
    parts.k = parts.k12 + parts.k23 - parts.k13;
    return parts;
}

CorrelationReport report_from_k_parts(const KParts& parts, double zeta, std::string mode) {
    CorrelationReport r;
    r.k12 = parts.k12;
    r.k13 = parts.k13;
    r.k23 = parts.k23;
    r.k = parts.k12 + parts.k23 - parts.k13;
    r.k_prime = parts.k12 - parts.k23 + parts.k13;
    r.witness_w = witness(r.k);
    r.venality_zeta = zeta;
    r.adjusted_bound = venality_bound(zeta);
    r.estimation.mode = std::move(mode);
    r.estimation.left = ArmEstimate{0, parts.kept_left, parts.p_left_raw, parts.p_left, parts.mean_left};
    r.estimation.right =
        ArmEstimate{0, parts.kept_right, parts.p_right_raw, parts.p_right, parts.mean_right};
    return r;
}

CorrelationReport report_from_events(const EventGroups& groups, const QScheme& scheme, double zeta,
                                     bool literal_right_arm, int removal_shift) {
    KParts parts = k_parts_from_events(groups, scheme, literal_right_arm, removal_shift);
    CorrelationReport r = report_from_k_parts(parts, zeta, "sampled");
    r.estimation.events_unconditioned = static_cast<std::int64_t>(groups.none.size());
    r.estimation.left.total = static_cast<std::int64_t>(groups.left.size());
    r.estimation.right.total = static_cast<std::int64_t>(groups.right.size());
    std::int64_t corrupt = 0, total = 0;
    for (const auto* v : {&groups.none, &groups.left, &groups.right}) {
        total += static_cast<std::int64_t>(v->size());
        for (const EventRecord& ev : *v)
            corrupt += ev.corrupt ? 1 : 0;
    }
    r.estimation.corrupt_fraction = static_cast<double>(corrupt) / static_cast<double>(total);
    return r;
}

CorrelationReport report_from_exact_pipeline(const ExactPipeline& pipeline, double zeta) {
    CorrelationReport r;
    r.k12 = pipeline.k12;
    r.k13 = pipeline.k13;
    r.k23 = pipeline.k23;
    r.k = pipeline.k12 + pipeline.k23 - pipeline.k13;
    r.k_prime = pipeline.k12 - pipeline.k23 + pipeline.k13;
    r.witness_w = witness(r.k);
    r.uncertainty = Uncertainty{0.0, UncertaintyMethod::exact};
    r.venality_zeta = zeta;
    r.adjusted_bound = venality_bound(zeta);
    r.estimation.mode = "exact";
    r.estimation.left = ArmEstimate{0, 0, pipeline.p_left, pipeline.p_left, pipeline.mean_left};
    r.estimation.right = ArmEstimate{0, 0, pipeline.p_right, pipeline.p_right, pipeline.mean_right};
    return r;
}

} // namespace lgwalk
