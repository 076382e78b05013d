#pragma once

#include <cstdint>
#include <vector>

#include "lgwalk/measurement.hpp"

namespace lgwalk {

/// One definite realist trajectory: a branch (left/right) per step, positions
/// derived from x0 = 0. Branches are packed in a bit field so exhaustive
/// enumerations stay compact.
struct Trajectory {
    int steps = 0;
    std::uint32_t rightward_bits = 0; // bit k set: step k+1 goes right

    Branch branch(int k) const {
        return (rightward_bits >> k) & 1u ? Branch::right : Branch::left;
    }
    int position_after(int k) const;
    std::vector<int> positions() const; // x1 .. x_steps
};

/// All 2^n definite trajectories of an n-step walk; n <= 24 guards the
/// exponential blowup.
std::vector<Trajectory> enumerate_trajectories(int n);

/// Endpoint distribution of n i.i.d. steps with leftward probability p
/// (leftward = tails = the up-like branch): binomial weights on {-n..n}.
PositionDistribution classical_binomial_distribution(int n, double p);

/// Exact K for a macrorealist: Q values are read off each trajectory
/// non-invasively, so the same trajectory feeds all three correlators.
/// weights must align with enumerate_trajectories(n) and sum to 1.
double classical_k(const std::vector<Trajectory>& trajectories, const std::vector<double>& weights,
                   const QScheme& scheme);

/// K of a single definite trajectory.
double classical_k_single(const Trajectory& t, const QScheme& scheme);

/// Classical samplers emit the same EventRecord stream as the quantum
/// protocol so the identical analysis pipeline applies. When `invasive` is
/// set, a t2 measurement in a removal arm scrambles the walker's coin: the
/// remaining steps of a kept atom are redrawn with a fair coin, demonstrating
/// how measurement disturbance alone can fake a violation.
struct ClassicalSamplerOptions {
    Arm arm = Arm::none;
    bool invasive = false;
};

std::vector<EventRecord> sample_classical_events(int n, double p, std::int64_t count,
                                                 const QScheme& scheme, std::uint64_t seed,
                                                 const ClassicalSamplerOptions& options = {});

} // namespace lgwalk
