#include "lgwalk/experiment.hpp"

#include "lgwalk/classical.hpp"

namespace lgwalk {

CorrelationReport analyze_events(const EventGroups& events, const ProtocolConfig& config,
                                 const AnalysisOptions& options) {
    config.validate();
    QScheme scheme = config.scheme();
    CorrelationReport report = report_from_events(events, scheme, config.excitation_prob,
                                                  config.literal_right_arm, config.removal_shift);

    BootstrapResult boot = bootstrap_k(events, scheme, options.bootstrap_resamples, config.seed,
                                       config.literal_right_arm, config.removal_shift,
                                       options.histogram_bins);
    report.uncertainty = Uncertainty{boot.sigma, UncertaintyMethod::bootstrap};
    report.estimation.bootstrap_sigma = boot.sigma;
    report.estimation.bootstrap_percentile_lower = boot.percentile.lower;
    report.estimation.bootstrap_percentile_upper = boot.percentile.upper;

    PipelineCounts counts = counts_from_events(events, config.literal_right_arm, config.removal_shift);
    IntervalEstimate mc = monte_carlo_k(counts, scheme, options.monte_carlo_draws, config.seed);
    report.estimation.monte_carlo_sigma = (mc.upper - mc.lower) / 2;
    return report;
}

LgTestOutput run_lg_test(const ProtocolConfig& config, bool exact, const AnalysisOptions& options) {
    config.validate();
    LgTestOutput out;
    out.config = config;

    if (exact) {
        ExactPipeline pipeline = exact_lg_pipeline(config.walk_spec(), config.scheme());
        out.report = report_from_exact_pipeline(pipeline, config.excitation_prob);
        return out;
    }

    if (config.t2_step != 1)
        throw ValidationError("lg test: the removal protocol requires t2_step == 1");

    for (Arm arm : {Arm::none, Arm::condition_on_left, Arm::condition_on_right}) {
        EventSampler sampler(config.walk_spec(), config.protocol(arm), config.scheme(),
                             config.noise(), config.seed);
        auto events = sampler.sample_many(0, config.shots_per_arm);
        if (arm == Arm::none)
            out.events.none = std::move(events);
        else if (arm == Arm::condition_on_left)
            out.events.left = std::move(events);
        else
            out.events.right = std::move(events);
    }
    out.report = analyze_events(out.events, config, options);
    return out;
}

EventGroups run_classical_arms(const ProtocolConfig& config, double p_left, bool invasive) {
    config.validate();
    EventGroups groups;
    QScheme scheme = config.scheme();
    for (Arm arm : {Arm::none, Arm::condition_on_left, Arm::condition_on_right}) {
        ClassicalSamplerOptions opts;
        opts.arm = arm;
        opts.invasive = invasive;
        auto events =
            sample_classical_events(config.steps, p_left, config.shots_per_arm, scheme, config.seed, opts);
        if (arm == Arm::none)
            groups.none = std::move(events);
        else if (arm == Arm::condition_on_left)
            groups.left = std::move(events);
        else
            groups.right = std::move(events);
    }
    return groups;
}

} // namespace lgwalk
