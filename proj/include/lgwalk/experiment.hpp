#pragma once

#include "lgwalk/config.hpp"
#include "lgwalk/stats.hpp"

namespace lgwalk {

/// One full LG test: the unconditioned arm plus both removal arms, either
/// sampled shot by shot or evaluated exactly.
struct LgTestOutput {
    ProtocolConfig config;
    CorrelationReport report;
    EventGroups events; // empty in exact mode
};

struct AnalysisOptions {
    std::int64_t bootstrap_resamples = 10000;
    std::int64_t monte_carlo_draws = 10000;
    int histogram_bins = 50;
};

/// Recomputes the full report (point estimates, bootstrap and Monte Carlo
/// uncertainties) from an event ensemble. Reanalyzing a written log yields a
/// bit-identical report because all randomness is keyed off config.seed.
CorrelationReport analyze_events(const EventGroups& events, const ProtocolConfig& config,
                                 const AnalysisOptions& options = {});

LgTestOutput run_lg_test(const ProtocolConfig& config, bool exact,
                         const AnalysisOptions& options = {});

/// Samples the three classical arms with the same shots/seed bookkeeping.
EventGroups run_classical_arms(const ProtocolConfig& config, double p_left, bool invasive);

} // namespace lgwalk
