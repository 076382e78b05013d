#pragma once

// Test-only oracles, deliberately independent of the library's evolution
// code: final-state amplitudes by explicit enumeration of all 2^n coin
// branches, and a dense Hermitian eigensolver for positivity checks.

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "lgwalk/lattice.hpp"

namespace lgwalk::testing {

// Walk oracle: every step branches the spin through the coin
//   up   -> up (cos t/2), down (i sin t/2)
//   down -> up (i sin t/2), down (cos t/2)
// and then moves one site left (up) or right (down). Amplitudes of all paths
// ending in the same (spin, site) interfere.
inline std::map<std::pair<int, int>, Complex> path_sum_amplitudes(int steps, double theta,
                                                                  Spin initial_spin = Spin::up,
                                                                  int initial_site = 0) {
    const Complex keep(std::cos(theta / 2), 0);
    const Complex flip(0, std::sin(theta / 2));
    std::map<std::pair<int, int>, Complex> amps; // key: (spin index, site)
    const unsigned n_paths = 1u << steps;
    for (unsigned path = 0; path < n_paths; ++path) {
        int spin = static_cast<int>(initial_spin);
        int site = initial_site;
        Complex amp(1, 0);
        for (int k = 0; k < steps; ++k) {
            bool flip_bit = (path >> k) & 1u;
            amp *= flip_bit ? flip : keep;
            if (flip_bit)
                spin = 1 - spin;
            site += spin == 0 ? -1 : +1;
        }
        amps[{spin, site}] += amp;
    }
    return amps;
}

inline std::map<int, double> path_sum_distribution(int steps, double theta,
                                                   Spin initial_spin = Spin::up,
                                                   int initial_site = 0) {
    std::map<int, double> dist;
    for (const auto& [key, amp] : path_sum_amplitudes(steps, theta, initial_spin, initial_site))
        dist[key.second] += std::norm(amp);
    return dist;
}

// Eigenvalues of a complex Hermitian matrix via the real-symmetric embedding
// [[Re, -Im], [Im, Re]] and cyclic Jacobi; each eigenvalue appears twice.
inline std::vector<double> hermitian_eigenvalues(const std::vector<Complex>& h, int dim) {
    const int n = 2 * dim;
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            Complex v = h[static_cast<std::size_t>(i) * dim + j];
            at(i, j) = v.real();
            at(i, j + dim) = -v.imag();
            at(i + dim, j) = v.imag();
            at(i + dim, j + dim) = v.real();
        }
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += at(p, q) * at(p, q);
        if (off < 1e-26)
            break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) < 1e-300)
                    continue;
                double tau = (at(q, q) - at(p, p)) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig;
    eig.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        eig.push_back(at(i, i));
    return eig; // doubled spectrum
}

} // namespace lgwalk::testing
