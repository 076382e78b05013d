#pragma once

#include <complex>
#include <vector>

#include "lgwalk/errors.hpp"

namespace lgwalk {

using Complex = std::complex<double>;

enum class Spin : int { up = 0, down = 1 };

inline Spin other_spin(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }

/// Inclusive integer window [x_min, x_max] of lattice sites. The window is
/// part of the state type: amplitudes outside it are structurally impossible,
/// and any operation that would push support past an edge is a hard error
/// rather than a silent truncation.
struct Window {
    int x_min = 0;
    int x_max = 0;

    Window() = default;
    Window(int lo, int hi) : x_min(lo), x_max(hi) {
        if (hi < lo)
            throw ValidationError("window: x_max < x_min");
    }

    int width() const { return x_max - x_min + 1; }
    int dim() const { return 2 * width(); }
    bool contains(int x) const { return x >= x_min && x <= x_max; }

    // Dense basis index; bijective with (spin, site).
    int index(Spin s, int x) const { return 2 * (x - x_min) + static_cast<int>(s); }
    Spin spin_of(int idx) const { return static_cast<Spin>(idx & 1); }
    int site_of(int idx) const { return x_min + idx / 2; }

    bool operator==(const Window&) const = default;
};

/// Default window for an n-step walk with removal shift r: no coin/shift
/// sequence or species transport can overflow it.
inline Window default_window(int steps, int removal_shift) {
    int half = steps + removal_shift + 1;
    return Window(-half, half);
}

/// Probability-by-site view shared by pure states, densities and classical
/// walks. Entries are indexed by lattice site within a window.
struct PositionDistribution {
    Window window;
    std::vector<double> p; // size window.width()

    PositionDistribution() = default;
    explicit PositionDistribution(Window w) : window(w), p(w.width(), 0.0) {}

    double at(int x) const { return window.contains(x) ? p[x - window.x_min] : 0.0; }
    double& ref(int x) {
        if (!window.contains(x))
            throw ValidationError("position outside window");
        return p[x - window.x_min];
    }
    double total() const;
    /// Rescales entries to sum to one. Error when the total mass is ~0.
    PositionDistribution normalized() const;
};

/// Total variation distance; sites missing from either window count in full.
double total_variation(const PositionDistribution& a, const PositionDistribution& b);

/// Pure state of the walker: complex amplitudes over the (spin, site) basis.
class WalkerState {
public:
    WalkerState(Window w, std::vector<Complex> amplitudes);

    const Window& window() const { return window_; }
    int dim() const { return window_.dim(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(Spin s, int x) const { return amps_[window_.index(s, x)]; }
    double squared_norm() const;

private:
    friend WalkerState unchecked_state(Window, std::vector<Complex>&&);
    WalkerState() = default;
    Window window_;
    std::vector<Complex> amps_;
};

/// Mixed state: Hermitian, unit-trace matrix over the same basis.
class WalkerDensity {
public:
    WalkerDensity(Window w, std::vector<Complex> matrix);

    const Window& window() const { return window_; }
    int dim() const { return window_.dim(); }
    const std::vector<Complex>& matrix() const { return m_; }
    Complex at(int row, int col) const { return m_[static_cast<std::size_t>(row) * dim_ + col]; }
    double trace() const;
    double hermiticity_defect() const; // max |m_ij - conj(m_ji)|

private:
    friend WalkerDensity unchecked_density(Window, std::vector<Complex>&&);
    WalkerDensity() = default;
    Window window_;
    std::size_t dim_ = 0;
    std::vector<Complex> m_;
};

/// Unit amplitude on (spin, site), zero elsewhere.
WalkerState new_localized(int site, Spin spin, Window window);

WalkerDensity density_from_pure(const WalkerState& state);
WalkerDensity new_localized_density(int site, Spin spin, Window window);

PositionDistribution position_distribution(const WalkerState& state);
PositionDistribution position_distribution(const WalkerDensity& rho);

/// Rigidly shifts the amplitudes of one spin species by `offset` sites; the
/// other species is untouched. Support leaving the window is an error.
WalkerState translate_species(const WalkerState& state, Spin spin, int offset);
WalkerDensity translate_species(const WalkerDensity& rho, Spin spin, int offset);

// Internal factories that skip the constructor invariant checks. Operations
// that preserve norm/Hermiticity analytically use these on hot paths.
WalkerState unchecked_state(Window w, std::vector<Complex>&& amps);
WalkerDensity unchecked_density(Window w, std::vector<Complex>&& m);

} // namespace lgwalk
