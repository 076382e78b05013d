#include "lgwalk/walk.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace lgwalk {

CoinParams::CoinParams(double theta_rad) : theta(theta_rad) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw ValidationError("coin angle must lie in [0, pi]");
}

double CoinParams::tails_probability() const {
    double c = std::cos(theta / 2);
    return c * c;
}

void WalkSpec::validate() const {
    if (steps < 1)
        throw ValidationError("walk spec: steps must be >= 1");
    if (!(dephasing_per_step >= 0.0 && dephasing_per_step <= 1.0))
        throw ValidationError("walk spec: dephasing_per_step must lie in [0, 1]");
}

namespace {

struct CoinMatrix {
    Complex uu, ud, du, dd; // columns are input spins
};

CoinMatrix coin_matrix(const CoinParams& coin) {
    double c = std::cos(coin.theta / 2);
    double s = std::sin(coin.theta / 2);
    return {Complex(c, 0), Complex(0, s), Complex(0, s), Complex(c, 0)};
}

// y = C x, site by site.
void coin_into(const Window& w, const CoinMatrix& m, const Complex* x, Complex* y) {
    for (int site = w.x_min; site <= w.x_max; ++site) {
        int iu = w.index(Spin::up, site);
        int id = w.index(Spin::down, site);
        Complex au = x[iu];
        Complex ad = x[id];
        y[iu] = m.uu * au + m.ud * ad;
        y[id] = m.du * au + m.dd * ad;
    }
}

// y = S x. Throws on support at the window edge.
void shift_into(const Window& w, const Complex* x, Complex* y, bool check_overflow = true) {
    const int dim = w.dim();
    for (int i = 0; i < dim; ++i)
        y[i] = Complex(0, 0);
    for (int site = w.x_min; site <= w.x_max; ++site) {
        Complex au = x[w.index(Spin::up, site)];
        if (std::norm(au) > 0) {
            if (site - 1 < w.x_min) {
                if (check_overflow)
                    throw ValidationError("shift: up support would leave the window");
            } else {
                y[w.index(Spin::up, site - 1)] = au;
            }
        }
        Complex ad = x[w.index(Spin::down, site)];
        if (std::norm(ad) > 0) {
            if (site + 1 > w.x_max) {
                if (check_overflow)
                    throw ValidationError("shift: down support would leave the window");
            } else {
                y[w.index(Spin::down, site + 1)] = ad;
            }
        }
    }
}

// rho -> U rho U^dag for a map given as state transformer: apply to columns,
// then to rows with conjugation (A -> U A, then A -> A U^dag row-wise).
template <typename MapInto>
std::vector<Complex> conjugate_density(const Window& w, const std::vector<Complex>& rho, MapInto&& map_into) {
    const std::size_t d = static_cast<std::size_t>(w.dim());
    std::vector<Complex> tmp(d * d), out(d * d);
    std::vector<Complex> col(d), res(d);
    // columns: tmp = U rho
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i)
            col[i] = rho[i * d + j];
        map_into(col.data(), res.data());
        for (std::size_t i = 0; i < d; ++i)
            tmp[i * d + j] = res[i];
    }
    // rows: out = tmp U^dag, i.e. conj(U conj(row))
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            col[j] = std::conj(tmp[i * d + j]);
        map_into(col.data(), res.data());
        for (std::size_t j = 0; j < d; ++j)
            out[i * d + j] = std::conj(res[j]);
    }
    return out;
}

} // namespace

WalkerState apply_coin(const WalkerState& state, const CoinParams& coin) {
    CoinMatrix m = coin_matrix(coin);
    std::vector<Complex> out(state.amplitudes().size());
    coin_into(state.window(), m, state.amplitudes().data(), out.data());
    return unchecked_state(state.window(), std::move(out));
}

WalkerDensity apply_coin(const WalkerDensity& rho, const CoinParams& coin) {
    CoinMatrix m = coin_matrix(coin);
    const Window& w = rho.window();
    auto out = conjugate_density(w, rho.matrix(),
                                 [&](const Complex* x, Complex* y) { coin_into(w, m, x, y); });
    return unchecked_density(w, std::move(out));
}

WalkerState apply_shift(const WalkerState& state) {
    std::vector<Complex> out(state.amplitudes().size());
    shift_into(state.window(), state.amplitudes().data(), out.data());
    return unchecked_state(state.window(), std::move(out));
}

WalkerDensity apply_shift(const WalkerDensity& rho) {
    const Window& w = rho.window();
    // Overflow is checked against the diagonal (site populations); the
    // column-wise pass then treats the shift as a pure permutation.
    for (int site : {w.x_min, w.x_max}) {
        int i = site == w.x_min ? w.index(Spin::up, w.x_min) : w.index(Spin::down, w.x_max);
        if (std::abs(rho.at(i, i)) > 0)
            throw ValidationError("shift: support would leave the window");
    }
    auto out = conjugate_density(w, rho.matrix(),
                                 [&](const Complex* x, Complex* y) { shift_into(w, x, y, false); });
    return unchecked_density(w, std::move(out));
}

WalkerState walk_step(const WalkerState& state, const CoinParams& coin) {
    return apply_shift(apply_coin(state, coin));
}

WalkerDensity walk_step(const WalkerDensity& rho, const CoinParams& coin) {
    return apply_shift(apply_coin(rho, coin));
}

WalkerDensity apply_dephasing(const WalkerDensity& rho, double p_d) {
    if (!(p_d >= 0.0 && p_d <= 1.0))
        throw ValidationError("dephasing probability must lie in [0, 1]");
    const Window& w = rho.window();
    const std::size_t d = static_cast<std::size_t>(w.dim());
    std::vector<Complex> out(rho.matrix());
    double keep = 1.0 - p_d;
    for (std::size_t i = 0; i < d; ++i) {
        Spin si = w.spin_of(static_cast<int>(i));
        for (std::size_t j = 0; j < d; ++j) {
            if (si != w.spin_of(static_cast<int>(j)))
                out[i * d + j] *= keep;
        }
    }
    return unchecked_density(w, std::move(out));
}

PositionDistribution WalkTrace::distribution_after(std::size_t step) const {
    return is_pure() ? position_distribution(pure.at(step)) : position_distribution(mixed.at(step));
}

WalkTrace run_walk(const WalkSpec& spec, const WalkerState& initial) {
    spec.validate();
    WalkTrace trace;
    if (spec.dephasing_per_step == 0.0) {
        trace.pure.reserve(static_cast<std::size_t>(spec.steps) + 1);
        trace.pure.push_back(initial);
        for (int k = 0; k < spec.steps; ++k)
            trace.pure.push_back(walk_step(trace.pure.back(), spec.coin));
    } else {
        trace.mixed = run_walk_density(spec, density_from_pure(initial));
    }
    return trace;
}

std::vector<WalkerDensity> run_walk_density(const WalkSpec& spec, const WalkerDensity& initial) {
    spec.validate();
    std::vector<WalkerDensity> trace;
    trace.reserve(static_cast<std::size_t>(spec.steps) + 1);
    trace.push_back(initial);
    for (int k = 0; k < spec.steps; ++k) {
        const WalkerDensity& prev = trace.back();
        if (spec.placement == DephasingPlacement::between_coin_and_shift) {
            WalkerDensity mid = apply_dephasing(apply_coin(prev, spec.coin), spec.dephasing_per_step);
            trace.push_back(apply_shift(mid));
        } else {
            trace.push_back(apply_dephasing(walk_step(prev, spec.coin), spec.dephasing_per_step));
        }
    }
    return trace;
}

} // namespace lgwalk
