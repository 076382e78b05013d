#include "lgwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lgwalk {

namespace {
constexpr double kNormTol = 1e-12;
}

double PositionDistribution::total() const {
    double s = 0;
    for (double v : p)
        s += v;
    return s;
}

PositionDistribution PositionDistribution::normalized() const {
    double t = total();
    if (t <= 1e-300)
        throw ValidationError("cannot normalize a zero-mass distribution");
    PositionDistribution out(window);
    for (std::size_t i = 0; i < p.size(); ++i)
        out.p[i] = p[i] / t;
    return out;
}

double total_variation(const PositionDistribution& a, const PositionDistribution& b) {
    int lo = std::min(a.window.x_min, b.window.x_min);
    int hi = std::max(a.window.x_max, b.window.x_max);
    double tv = 0;
    for (int x = lo; x <= hi; ++x)
        tv += std::abs(a.at(x) - b.at(x));
    return tv / 2;
}

// Internal factories skipping the norm/Hermiticity checks; used by operations
// that preserve these invariants analytically.
WalkerState unchecked_state(Window w, std::vector<Complex>&& amps) {
    WalkerState s;
    s.window_ = w;
    s.amps_ = std::move(amps);
    return s;
}

WalkerDensity unchecked_density(Window w, std::vector<Complex>&& m) {
    WalkerDensity d;
    d.window_ = w;
    d.dim_ = static_cast<std::size_t>(w.dim());
    d.m_ = std::move(m);
    return d;
}

WalkerState::WalkerState(Window w, std::vector<Complex> amplitudes)
    : window_(w), amps_(std::move(amplitudes)) {
    if (static_cast<int>(amps_.size()) != window_.dim())
        throw ValidationError("walker state: amplitude vector does not match window");
    double n2 = squared_norm();
    if (std::abs(n2 - 1.0) > kNormTol)
        throw ValidationError("walker state: squared norm differs from 1 beyond 1e-12");
}

double WalkerState::squared_norm() const {
    double s = 0;
    for (const auto& a : amps_)
        s += std::norm(a);
    return s;
}

WalkerDensity::WalkerDensity(Window w, std::vector<Complex> matrix)
    : window_(w), dim_(static_cast<std::size_t>(w.dim())), m_(std::move(matrix)) {
    if (m_.size() != dim_ * dim_)
        throw ValidationError("walker density: matrix does not match window");
    if (hermiticity_defect() > kNormTol)
        throw ValidationError("walker density: not Hermitian within 1e-12");
    if (std::abs(trace() - 1.0) > kNormTol)
        throw ValidationError("walker density: trace differs from 1 beyond 1e-12");
}

double WalkerDensity::trace() const {
    double t = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        t += m_[i * dim_ + i].real();
    return t;
}

double WalkerDensity::hermiticity_defect() const {
    double worst = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs(m_[i * dim_ + j] - std::conj(m_[j * dim_ + i])));
    return worst;
}

WalkerState new_localized(int site, Spin spin, Window window) {
    if (!window.contains(site))
        throw ValidationError("localized state: site outside window");
    std::vector<Complex> amps(window.dim(), Complex(0, 0));
    amps[window.index(spin, site)] = Complex(1, 0);
    return unchecked_state(window, std::move(amps));
}

WalkerDensity density_from_pure(const WalkerState& state) {
    int d = state.dim();
    const auto& a = state.amplitudes();
    std::vector<Complex> m(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m[static_cast<std::size_t>(i) * d + j] = a[i] * std::conj(a[j]);
    return unchecked_density(state.window(), std::move(m));
}

WalkerDensity new_localized_density(int site, Spin spin, Window window) {
    return density_from_pure(new_localized(site, spin, window));
}

PositionDistribution position_distribution(const WalkerState& state) {
    PositionDistribution d(state.window());
    const Window& w = state.window();
    for (int x = w.x_min; x <= w.x_max; ++x)
        d.ref(x) = std::norm(state.amplitude(Spin::up, x)) + std::norm(state.amplitude(Spin::down, x));
    return d;
}

PositionDistribution position_distribution(const WalkerDensity& rho) {
    PositionDistribution d(rho.window());
    const Window& w = rho.window();
    for (int x = w.x_min; x <= w.x_max; ++x) {
        int iu = w.index(Spin::up, x);
        int id = w.index(Spin::down, x);
        d.ref(x) = rho.at(iu, iu).real() + rho.at(id, id).real();
    }
    return d;
}

namespace {

// Basis permutation realizing the species translation, or an error if any
// populated site of that species would leave the window.
std::vector<int> species_shift_map(const Window& w, Spin spin, int offset,
                                   const std::vector<bool>& occupied) {
    std::vector<int> map(static_cast<std::size_t>(w.dim()), -1);
    for (int x = w.x_min; x <= w.x_max; ++x) {
        for (Spin s : {Spin::up, Spin::down}) {
            int from = w.index(s, x);
            if (s != spin) {
                map[from] = from;
                continue;
            }
            int to_site = x + offset;
            if (!w.contains(to_site)) {
                if (occupied[from])
                    throw ValidationError("translate_species: support would leave the window");
                continue; // vacuum slot, drop
            }
            map[from] = w.index(s, to_site);
        }
    }
    return map;
}

} // namespace

WalkerState translate_species(const WalkerState& state, Spin spin, int offset) {
    const Window& w = state.window();
    std::vector<bool> occ(state.amplitudes().size());
    for (std::size_t i = 0; i < occ.size(); ++i)
        occ[i] = std::norm(state.amplitudes()[i]) > 0;
    auto map = species_shift_map(w, spin, offset, occ);
    std::vector<Complex> out(state.amplitudes().size(), Complex(0, 0));
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] >= 0)
            out[static_cast<std::size_t>(map[i])] = state.amplitudes()[i];
    return unchecked_state(w, std::move(out));
}

WalkerDensity translate_species(const WalkerDensity& rho, Spin spin, int offset) {
    const Window& w = rho.window();
    std::size_t d = static_cast<std::size_t>(rho.dim());
    std::vector<bool> occ(d, false);
    for (std::size_t i = 0; i < d; ++i)
        occ[i] = std::abs(rho.at(static_cast<int>(i), static_cast<int>(i))) > 0;
    auto map = species_shift_map(w, spin, offset, occ);
    std::vector<Complex> out(d * d, Complex(0, 0));
    for (std::size_t i = 0; i < d; ++i) {
        if (map[i] < 0)
            continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (map[j] < 0)
                continue;
            out[static_cast<std::size_t>(map[i]) * d + map[j]] = rho.at(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return unchecked_density(w, std::move(out));
}

} // namespace lgwalk
