#pragma once

#include <cmath>
#include <utility>

namespace lgwalk {

/// Golden-section minimization on [lo, hi]; f must be unimodal there.
/// Returns (argmin, min). tol is the absolute x tolerance.
template <typename F>
std::pair<double, double> golden_section_minimize(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double xm = (a + b) / 2;
    return {xm, f(xm)};
}

/// Coarse grid scan followed by golden-section refinement of the best
/// bracket; tolerates non-unimodal f as long as the grid resolves the basin.
template <typename F>
std::pair<double, double> scan_then_golden_minimize(F&& f, double lo, double hi, int grid, double tol) {
    int best = 0;
    double best_val = f(lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double v = f(x);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    return golden_section_minimize(f, a, b, tol);
}

} // namespace lgwalk
