#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgwalk/measurement.hpp"

namespace lgwalk {

enum class UncertaintyMethod { bootstrap, monte_carlo, exact };

struct Uncertainty {
    double sigma = 0;
    UncertaintyMethod method = UncertaintyMethod::exact;
};

struct ArmEstimate {
    std::int64_t total = 0; // probed atoms in the arm
    std::int64_t kept = 0;  // events entering the conditional average
    double p_raw = 0;       // kept / total
    double p = 0;           // normalized so left + right sum to 1
    double mean = 0;        // conditional <Q(t3)>
};

struct EstimationMeta {
    std::string mode; // "exact" or "sampled"
    std::int64_t events_unconditioned = 0;
    ArmEstimate left, right;
    std::optional<double> bootstrap_sigma;
    std::optional<double> bootstrap_percentile_lower;
    std::optional<double> bootstrap_percentile_upper;
    std::optional<double> monte_carlo_sigma;
    std::optional<double> corrupt_fraction;
};

/// Everything the LG test reports. k = k12 + k23 - k13 and
/// witness_w = |k - 1| hold exactly by construction; adjusted_bound is the
/// venality-relaxed macrorealist bound 1 + 2*zeta.
struct CorrelationReport {
    double k12 = 0;
    double k13 = 0;
    double k23 = 0;
    double k = 0;
    double k_prime = 0;
    double witness_w = 0;
    std::optional<Uncertainty> uncertainty;
    double venality_zeta = 0;
    double adjusted_bound = 1;
    EstimationMeta estimation;
};

/// <Q(t3)> of a final-position distribution under the sign rule; K12 is fixed
/// to 1 by the preparation convention so this value is also K13.
double k13_from_distribution(const PositionDistribution& dist);

/// Law-of-total-probability combination of the two conditioned arms:
/// K23 = p_L q2(L) m_L + p_R q2(R) m_R. Requires p_L + p_R = 1 within 1e-6.
double k23_from_arms(double p_left, double mean_left, double p_right, double mean_right,
                     const QScheme& scheme);

double lg_k(double k12, double k23, double k13);
double lg_k_prime(double k12, double k23, double k13);
double witness(double k);

/// Closed-form K(theta) for the four-step protocol with Q(t2) = 1:
/// [19 - 4 cos(2 theta) + cos(4 theta)] / 16.
double analytic_k_constant(double theta);

/// Closed-form K(theta) with the dichotomic Q(t2) (xi = -1):
/// [33 - 4 cos(theta) - 4 cos(2 theta) + 4 cos(3 theta) + 3 cos(4 theta)] / 32.
double analytic_k_dichotomic(double theta);

/// Numerically located maximum of the dichotomic curve on [0, pi],
/// golden-section refined to 1e-10 in theta.
struct ThetaMax {
    double theta = 0;
    double k = 0;
};
ThetaMax max_analytic_k_dichotomic();

/// Macrorealist bound relaxed by venality: K <= 1 + 2*zeta.
double venality_bound(double zeta);
/// K = 1 + (1-zeta) K23_ideal + zeta K23_corrupt - K13.
double venality_decompose(double k23_ideal, double k23_corrupt, double zeta, double k13);

/// Nimmrichter-Hornberger style macroscopicity for one walker run:
/// mu = log10(T (M_Cs/m_e)^2) with T in seconds, valid for superposition
/// separations up to 2 um; beyond that the measure falls off by 2 per decade
/// of separation, matched continuously at the knee.
double macroscopicity(double total_duration_s, std::optional<double> ell_m = std::nullopt);

/// Physical constants used by macroscopicity, documented for bit-level
/// reproducibility: Cs mass in unified atomic mass units, and u/m_e.
inline constexpr double kCesiumMassU = 132.905;
inline constexpr double kAtomicMassUnitOverElectron = 1822.888;

/// Exact (sampling-free) four-measurement pipeline: evolve to t2, condition
/// on each branch projectively, evolve to t3, and combine. Dephasing > 0
/// switches to density-matrix evolution.
struct ExactPipeline {
    double p_left = 0, p_right = 0;
    double mean_left = 0, mean_right = 0;
    double k12 = 0, k23 = 0, k13 = 0, k = 0;
    PositionDistribution unconditioned;
    PositionDistribution conditional_left, conditional_right;
};
ExactPipeline exact_lg_pipeline(const WalkSpec& spec, const QScheme& scheme);

/// Event-ensemble estimation shared by the CLI, bootstrap and Monte Carlo
/// paths. Events from the unconditioned arm estimate K13; the two removal
/// arms estimate the conditioned probabilities and means.
struct EventGroups {
    std::vector<EventRecord> none, left, right;
};

struct KParts {
    double k12 = 0, k23 = 0, k13 = 0, k = 0;
    double p_left_raw = 0, p_right_raw = 0;
    double p_left = 0, p_right = 0;
    double mean_left = 0, mean_right = 0;
    std::int64_t kept_left = 0, kept_right = 0;
};

/// Combines the raw arm frequencies into K. The raw retention frequencies are
/// normalized to sum to one (each arm estimates its own branch probability
/// independently) before the law-of-total-probability combination; the single
/// code path shared by event analysis, bootstrap and Monte Carlo resampling.
double combine_k(double k13, double p_left_raw, double mean_left, double p_right_raw,
                 double mean_right, const QScheme& scheme);

/// literal_right_arm selects the variant where the right-branch conditional
/// is read from the displaced window (positions shifted back by
/// removal_shift); the canonical estimator uses retained events only.
KParts k_parts_from_events(const EventGroups& groups, const QScheme& scheme,
                           bool literal_right_arm = false, int removal_shift = 5);

CorrelationReport report_from_k_parts(const KParts& parts, double zeta, std::string mode);

CorrelationReport report_from_events(const EventGroups& groups, const QScheme& scheme, double zeta,
                                     bool literal_right_arm = false, int removal_shift = 5);

CorrelationReport report_from_exact_pipeline(const ExactPipeline& pipeline, double zeta);

} // namespace lgwalk
