#pragma once

#include <vector>

#include "lgwalk/lattice.hpp"

namespace lgwalk {

/// Coin rotation angle. Tails probability p = cos^2(theta/2), heads q = 1-p.
///
/// The coin matrix is the symmetric beam-splitter rotation
///   |up>   -> cos(theta/2)|up> + i sin(theta/2)|down>
///   |down> -> i sin(theta/2)|up> + cos(theta/2)|down>
/// This convention reproduces the closed-form K(theta) curves of the
/// four-step protocol exactly (see analysis tests), which pins down the
/// phase freedom the walk itself leaves open.
struct CoinParams {
    double theta = 0;

    CoinParams() = default;
    explicit CoinParams(double theta_rad);

    double tails_probability() const; // leftward / up branch
    double heads_probability() const { return 1.0 - tails_probability(); }
};

enum class DephasingPlacement {
    after_step,             // once per completed coin+shift step (default)
    between_coin_and_shift, // sensitivity-check variant
};

struct WalkSpec {
    int steps = 1;
    CoinParams coin;
    double dephasing_per_step = 0;
    DephasingPlacement placement = DephasingPlacement::after_step;

    void validate() const;
};

/// Site-diagonal spin rotation by the coin angle at every site.
WalkerState apply_coin(const WalkerState& state, const CoinParams& coin);
WalkerDensity apply_coin(const WalkerDensity& rho, const CoinParams& coin);

/// State-dependent shift: up amplitudes move x -> x-1, down move x -> x+1.
WalkerState apply_shift(const WalkerState& state);
WalkerDensity apply_shift(const WalkerDensity& rho);

/// One walk step: coin, then shift.
WalkerState walk_step(const WalkerState& state, const CoinParams& coin);
WalkerDensity walk_step(const WalkerDensity& rho, const CoinParams& coin);

/// Spin dephasing channel rho -> (1-p) rho + p (P_up rho P_up + P_dn rho P_dn).
/// Scales every spin-off-diagonal block by (1-p); trace- and
/// positivity-preserving for p in [0,1].
WalkerDensity apply_dephasing(const WalkerDensity& rho, double p_d);

/// States (or densities, when dephasing > 0) at every step boundary;
/// element 0 is the initial state, element k the state after k steps.
struct WalkTrace {
    std::vector<WalkerState> pure;      // filled when dephasing == 0
    std::vector<WalkerDensity> mixed;   // filled when dephasing > 0

    bool is_pure() const { return mixed.empty(); }
    std::size_t size() const { return is_pure() ? pure.size() : mixed.size(); }
    PositionDistribution distribution_after(std::size_t step) const;
};

WalkTrace run_walk(const WalkSpec& spec, const WalkerState& initial);

/// Density-matrix evolution regardless of the dephasing value; used for
/// pure/mixed consistency checks and for conditioned evolution.
std::vector<WalkerDensity> run_walk_density(const WalkSpec& spec, const WalkerDensity& initial);

} // namespace lgwalk
