#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lgwalk/analysis.hpp"

namespace lgwalk {

enum class IntervalMethod { clopper_pearson, bootstrap_gaussian, bootstrap_percentile, monte_carlo };

struct IntervalEstimate {
    double point = 0;
    double lower = 0;
    double upper = 0;
    double confidence = 0;
    IntervalMethod method = IntervalMethod::clopper_pearson;
};

/// All uncertainty reporting uses the 1-sigma convention.
inline constexpr double kOneSigmaConfidence = 0.682689492137086;

/// Exact binomial confidence interval by direct bisection inversion of the
/// binomial tail sums (to 1e-10 in p). lower = 0 when successes = 0 and
/// upper = 1 when successes = trials.
IntervalEstimate clopper_pearson(std::int64_t successes, std::int64_t trials, double confidence);

/// Bootstrap uncertainty for K: events are resampled with replacement within
/// each arm, K is recomputed per resample, and sigma comes from a
/// least-squares Gaussian fit to the 50-bin resample histogram. The
/// percentile interval is reported alongside as a robustness check.
struct BootstrapResult {
    IntervalEstimate gaussian;
    IntervalEstimate percentile;
    double sigma = 0;        // Gaussian-fit sigma
    double sample_sigma = 0; // plain standard deviation of the resampled K
};

BootstrapResult bootstrap_k(const EventGroups& events, const QScheme& scheme, std::int64_t resamples,
                            std::uint64_t seed, bool literal_right_arm = false, int removal_shift = 5,
                            int bins = 50);

/// Per-arm counted distributions, the input to Monte Carlo resampling.
struct ArmCounts {
    std::map<int, std::int64_t> site_counts; // final positions of kept events
    std::int64_t total = 0;                  // probed atoms in the arm
    std::int64_t kept = 0;
};

struct PipelineCounts {
    ArmCounts none, left, right;
};

PipelineCounts counts_from_events(const EventGroups& events, bool literal_right_arm = false,
                                  int removal_shift = 5);

/// Parametric Monte Carlo: per-site counts and the retention counts are
/// perturbed by binomial draws at their empirical rates, K is recomputed per
/// draw and sigma is the standard deviation of the draws.
IntervalEstimate monte_carlo_k(const PipelineCounts& counts, const QScheme& scheme,
                               std::int64_t n_draws, std::uint64_t seed);

/// Final-position counts measured at one coin angle.
struct ThetaHistogram {
    double theta = 0;
    std::map<int, std::int64_t> counts;
};

struct DephasingFit {
    double p_d = 0;
    double chi_squared = 0;
    double reduced_chi_squared = 0;
    std::int64_t dof = 0;
};

/// One-parameter Pearson chi-squared fit of the per-step dephasing rate to
/// measured position distributions; expected counts are floored at one to
/// keep empty sites from blowing up the weights.
DephasingFit fit_dephasing(const std::vector<ThetaHistogram>& data, int steps);

/// Least-squares Gaussian fit a*exp(-(x-mu)^2 / (2 sigma^2)) to histogram
/// counts; exposed for tests.
struct GaussianFitResult {
    double amplitude = 0;
    double mean = 0;
    double sigma = 0;
    bool converged = false;
};
GaussianFitResult fit_gaussian(const std::vector<double>& centers, const std::vector<double>& counts);

} // namespace lgwalk
