#include "lgwalk/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lgwalk/optimize.hpp"
#include "lgwalk/rng.hpp"

namespace lgwalk {

namespace {

// P(X >= k) for X ~ Binomial(n, p), summed upward from k with the pmf
// recurrence; the anchor term comes from log-gamma for stability.
double binomial_tail_geq(std::int64_t n, std::int64_t k, double p) {
    if (k <= 0)
        return 1.0;
    if (k > n)
        return 0.0;
    if (p <= 0.0)
        return 0.0;
    if (p >= 1.0)
        return 1.0;
    double q = 1.0 - p;
    double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                      std::lgamma(static_cast<double>(n - k) + 1) + k * std::log(p) + (n - k) * std::log(q);
    double term = std::exp(log_term);
    double sum = term;
    for (std::int64_t j = k; j < n; ++j) {
        term *= (static_cast<double>(n - j) / static_cast<double>(j + 1)) * (p / q);
        sum += term;
        if (term < sum * 1e-18 && j > static_cast<std::int64_t>(p * n))
            break;
    }
    return std::min(sum, 1.0);
}

double binomial_tail_leq(std::int64_t n, std::int64_t k, double p) {
    return binomial_tail_geq(n, n - k, 1.0 - p);
}

} // namespace

IntervalEstimate clopper_pearson(std::int64_t successes, std::int64_t trials, double confidence) {
    if (trials < 1)
        throw ValidationError("clopper_pearson: trials must be >= 1");
    if (successes < 0 || successes > trials)
        throw ValidationError("clopper_pearson: successes must lie in [0, trials]");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ValidationError("clopper_pearson: confidence must lie in (0, 1)");

    const double alpha = 1.0 - confidence;
    const double tol = 1e-10;

    auto bisect = [tol](auto&& f, double target, bool increasing) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
            double mid = (lo + hi) / 2;
            bool below = f(mid) < target;
            if (below == increasing)
                lo = mid;
            else
                hi = mid;
        }
        return (lo + hi) / 2;
    };

    IntervalEstimate est;
    est.point = static_cast<double>(successes) / static_cast<double>(trials);
    est.confidence = confidence;
    est.method = IntervalMethod::clopper_pearson;
    // P(X >= k | p) grows with p; the lower bound solves it equal to alpha/2.
    est.lower = successes == 0
                    ? 0.0
                    : bisect([&](double p) { return binomial_tail_geq(trials, successes, p); },
                             alpha / 2, true);
    est.upper = successes == trials
                    ? 1.0
                    : bisect([&](double p) { return binomial_tail_leq(trials, successes, p); },
                             alpha / 2, false);
    return est;
}

GaussianFitResult fit_gaussian(const std::vector<double>& centers, const std::vector<double>& counts) {
    if (centers.size() != counts.size() || centers.size() < 3)
        throw ValidationError("fit_gaussian: need at least 3 aligned bins");

    // Moment start values.
    double total = 0, mean = 0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        total += counts[i];
        mean += counts[i] * centers[i];
    }
    if (total <= 0)
        throw ValidationError("fit_gaussian: histogram is empty");
    mean /= total;
    double var = 0;
    for (std::size_t i = 0; i < centers.size(); ++i)
        var += counts[i] * (centers[i] - mean) * (centers[i] - mean);
    var /= total;
    double sigma = std::sqrt(std::max(var, 1e-300));
    double amp = *std::max_element(counts.begin(), counts.end());

    // Levenberg-Marquardt on (amplitude, mean, sigma).
    double lambda = 1e-3;
    auto chi2_of = [&](double a, double m, double s) {
        double c = 0;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            double z = (centers[i] - m) / s;
            double r = a * std::exp(-0.5 * z * z) - counts[i];
            c += r * r;
        }
        return c;
    };
    double chi2 = chi2_of(amp, mean, sigma);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        double jtj[3][3] = {};
        double jtr[3] = {};
        for (std::size_t i = 0; i < centers.size(); ++i) {
            double z = (centers[i] - mean) / sigma;
            double e = std::exp(-0.5 * z * z);
            double model = amp * e;
            double r = model - counts[i];
            double d[3] = {e, model * z / sigma, model * z * z / sigma};
            for (int a = 0; a < 3; ++a) {
                jtr[a] += d[a] * r;
                for (int b = 0; b < 3; ++b)
                    jtj[a][b] += d[a] * d[b];
            }
        }
        double m[3][4];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b)
                m[a][b] = jtj[a][b] + (a == b ? lambda * jtj[a][a] : 0.0);
            m[a][3] = -jtr[a];
        }
        // Gaussian elimination, 3x3.
        bool singular = false;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::abs(m[row][col]) > std::abs(m[piv][col]))
                    piv = row;
            if (std::abs(m[piv][col]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(m[piv], m[col]);
            for (int row = 0; row < 3; ++row) {
                if (row == col)
                    continue;
                double f = m[row][col] / m[col][col];
                for (int c2 = col; c2 < 4; ++c2)
                    m[row][c2] -= f * m[col][c2];
            }
        }
        if (singular)
            break;
        double da = m[0][3] / m[0][0];
        double dm = m[1][3] / m[1][1];
        double ds = m[2][3] / m[2][2];
        double na = amp + da, nm = mean + dm, ns = sigma + ds;
        if (!(ns > 0) || !(na > 0)) {
            lambda *= 10;
            continue;
        }
        double nchi2 = chi2_of(na, nm, ns);
        if (nchi2 < chi2) {
            double rel = std::abs(chi2 - nchi2) / std::max(chi2, 1e-300);
            amp = na;
            mean = nm;
            sigma = ns;
            chi2 = nchi2;
            lambda = std::max(lambda / 10, 1e-12);
            if (rel < 1e-12 && std::abs(dm) < 1e-12 && std::abs(ds) < 1e-12) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10;
            if (lambda > 1e12) {
                converged = true; // stuck at a flat minimum
                break;
            }
        }
    }
    return {amp, mean, std::abs(sigma), converged};
}

namespace {

// Per-arm compact tables for fast resampling: kept flag and the q3 value an
// event contributes when kept.
struct ResampleTable {
    std::vector<std::uint8_t> kept;
    std::vector<double> value;
};

ResampleTable table_for(const std::vector<EventRecord>& events, bool use_displaced, int removal_shift) {
    ResampleTable t;
    t.kept.reserve(events.size());
    t.value.reserve(events.size());
    for (const EventRecord& ev : events) {
        bool keep = use_displaced ? !ev.retained : ev.retained;
        t.kept.push_back(keep ? 1 : 0);
        t.value.push_back(keep ? (use_displaced ? q_at_t3(ev.reported_x3 + removal_shift) : ev.q3) : 0.0);
    }
    return t;
}

} // namespace

BootstrapResult bootstrap_k(const EventGroups& events, const QScheme& scheme, std::int64_t resamples,
                            std::uint64_t seed, bool literal_right_arm, int removal_shift, int bins) {
    if (resamples < 1000)
        throw ValidationError("bootstrap_k: need at least 1000 resamples");
    if (events.none.empty() || events.left.empty() || events.right.empty())
        throw ValidationError("bootstrap_k: every arm needs events");
    if (bins < 3)
        throw ValidationError("bootstrap_k: need at least 3 histogram bins");

    KParts original = k_parts_from_events(events, scheme, literal_right_arm, removal_shift);

    ResampleTable none = table_for(events.none, false, removal_shift);
    ResampleTable left = table_for(events.left, false, removal_shift);
    ResampleTable right = table_for(events.right, literal_right_arm, removal_shift);

    std::vector<double> ks;
    ks.reserve(static_cast<std::size_t>(resamples));
    const std::size_t n_none = none.kept.size();
    const std::size_t n_left = left.kept.size();
    const std::size_t n_right = right.kept.size();
    for (std::int64_t b = 0; b < resamples; ++b) {
        auto g = make_stream(seed, rng_stream::bootstrap, static_cast<std::uint64_t>(b));
        double none_sum = 0;
        for (std::size_t i = 0; i < n_none; ++i)
            none_sum += none.value[uniform_index(g, n_none)];
        double k13 = none_sum / static_cast<double>(n_none);

        auto draw_arm = [&](const ResampleTable& t, std::size_t n) {
            std::int64_t kept = 0;
            double sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = uniform_index(g, n);
                kept += t.kept[j];
                sum += t.value[j];
            }
            double p_raw = static_cast<double>(kept) / static_cast<double>(n);
            double mean = kept > 0 ? sum / static_cast<double>(kept) : 0.0;
            return std::pair{p_raw, mean};
        };
        auto [pl, ml] = draw_arm(left, n_left);
        auto [pr, mr] = draw_arm(right, n_right);
        if (pl + pr <= 0)
            continue; // degenerate resample; vanishing probability at any realistic size
        ks.push_back(combine_k(k13, pl, ml, pr, mr, scheme));
    }

    BootstrapResult result;
    double mean_k = 0;
    for (double k : ks)
        mean_k += k;
    mean_k /= static_cast<double>(ks.size());
    double var = 0;
    for (double k : ks)
        var += (k - mean_k) * (k - mean_k);
    var /= static_cast<double>(ks.size());
    result.sample_sigma = std::sqrt(var);

    if (result.sample_sigma == 0.0) {
        result.sigma = 0.0; // all resamples identical
    } else {
        double lo = *std::min_element(ks.begin(), ks.end());
        double hi = *std::max_element(ks.begin(), ks.end());
        double width = (hi - lo) / bins;
        std::vector<double> centers(static_cast<std::size_t>(bins)), counts(static_cast<std::size_t>(bins), 0.0);
        for (int i = 0; i < bins; ++i)
            centers[static_cast<std::size_t>(i)] = lo + width * (i + 0.5);
        for (double k : ks) {
            int bin = std::min(bins - 1, static_cast<int>((k - lo) / width));
            counts[static_cast<std::size_t>(bin)] += 1.0;
        }
        GaussianFitResult fit = fit_gaussian(centers, counts);
        result.sigma = fit.converged && fit.sigma > 0 ? fit.sigma : result.sample_sigma;
    }

    result.gaussian = IntervalEstimate{original.k, original.k - result.sigma, original.k + result.sigma,
                                       kOneSigmaConfidence, IntervalMethod::bootstrap_gaussian};

    std::ranges::sort(ks);
    auto quantile = [&](double q) {
        double pos = q * (static_cast<double>(ks.size()) - 1);
        std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= ks.size())
            return ks.back();
        double frac = pos - static_cast<double>(i);
        return ks[i] * (1 - frac) + ks[i + 1] * frac;
    };
    double a = (1.0 - kOneSigmaConfidence) / 2;
    result.percentile = IntervalEstimate{original.k, quantile(a), quantile(1.0 - a),
                                         kOneSigmaConfidence, IntervalMethod::bootstrap_percentile};
    return result;
}

PipelineCounts counts_from_events(const EventGroups& events, bool literal_right_arm, int removal_shift) {
    PipelineCounts pc;
    auto fill = [&](const std::vector<EventRecord>& evs, ArmCounts& arm, bool use_displaced) {
        arm.total = static_cast<std::int64_t>(evs.size());
        for (const EventRecord& ev : evs) {
            bool keep = use_displaced ? !ev.retained : ev.retained;
            if (!keep)
                continue;
            int x = use_displaced ? ev.reported_x3 + removal_shift : ev.reported_x3;
            ++arm.site_counts[x];
            ++arm.kept;
        }
    };
    fill(events.none, pc.none, false);
    fill(events.left, pc.left, false);
    fill(events.right, pc.right, literal_right_arm);
    return pc;
}

namespace {

struct DrawnArm {
    double p_raw = 0;
    double mean = 0;
};

// Perturbs kept-site counts and the retention count with parametric binomial
// draws at their empirical rates.
DrawnArm draw_counts(std::mt19937_64& g, const ArmCounts& arm, bool with_retention) {
    DrawnArm out;
    double kept_total = 0, q3_weighted = 0;
    for (const auto& [site, count] : arm.site_counts) {
        double rate = static_cast<double>(count) / static_cast<double>(arm.kept);
        double drawn = static_cast<double>(binomial_draw(g, arm.kept, rate));
        kept_total += drawn;
        q3_weighted += drawn * q_at_t3(site);
    }
    out.mean = kept_total > 0 ? q3_weighted / kept_total : 0.0;
    if (with_retention) {
        double rate = static_cast<double>(arm.kept) / static_cast<double>(arm.total);
        out.p_raw = static_cast<double>(binomial_draw(g, arm.total, rate)) / static_cast<double>(arm.total);
    }
    return out;
}

} // namespace

IntervalEstimate monte_carlo_k(const PipelineCounts& counts, const QScheme& scheme,
                               std::int64_t n_draws, std::uint64_t seed) {
    if (n_draws < 1)
        throw ValidationError("monte_carlo_k: need at least one draw");
    for (const ArmCounts* arm : {&counts.none, &counts.left, &counts.right}) {
        if (arm->total < 1 || arm->kept < 1)
            throw ValidationError("monte_carlo_k: every arm needs kept events");
        std::int64_t sum = 0;
        for (const auto& [site, c] : arm->site_counts) {
            if (c < 0)
                throw ValidationError("monte_carlo_k: negative site count");
            sum += c;
        }
        if (sum != arm->kept)
            throw ValidationError("monte_carlo_k: site counts do not add up to kept total");
    }

    auto mean_of = [](const ArmCounts& arm) {
        double s = 0;
        for (const auto& [site, c] : arm.site_counts)
            s += static_cast<double>(c) * q_at_t3(site);
        return s / static_cast<double>(arm.kept);
    };
    double k13 = mean_of(counts.none);
    double pl = static_cast<double>(counts.left.kept) / static_cast<double>(counts.left.total);
    double pr = static_cast<double>(counts.right.kept) / static_cast<double>(counts.right.total);
    double original_k = combine_k(k13, pl, mean_of(counts.left), pr, mean_of(counts.right), scheme);

    double sum = 0, sum2 = 0;
    std::int64_t used = 0;
    for (std::int64_t d = 0; d < n_draws; ++d) {
        auto g = make_stream(seed, rng_stream::monte_carlo, static_cast<std::uint64_t>(d));
        DrawnArm none = draw_counts(g, counts.none, false);
        DrawnArm left = draw_counts(g, counts.left, true);
        DrawnArm right = draw_counts(g, counts.right, true);
        if (left.p_raw + right.p_raw <= 0)
            continue;
        double k = combine_k(none.mean, left.p_raw, left.mean, right.p_raw, right.mean, scheme);
        sum += k;
        sum2 += k * k;
        ++used;
    }
    if (used < 1)
        throw ValidationError("monte_carlo_k: all draws degenerate");
    double mean = sum / static_cast<double>(used);
    double var = std::max(0.0, sum2 / static_cast<double>(used) - mean * mean);
    double sigma = std::sqrt(var);

    return IntervalEstimate{original_k, original_k - sigma, original_k + sigma, kOneSigmaConfidence,
                            IntervalMethod::monte_carlo};
}

DephasingFit fit_dephasing(const std::vector<ThetaHistogram>& data, int steps) {
    if (data.empty())
        throw ValidationError("fit_dephasing: no distributions given");
    std::int64_t bins_total = 0;
    for (const ThetaHistogram& h : data) {
        std::int64_t total = 0;
        for (const auto& [site, c] : h.counts) {
            if (c < 0)
                throw ValidationError("fit_dephasing: negative count");
            total += c;
        }
        if (total < 1)
            throw ValidationError("fit_dephasing: empty distribution");
    }

    Window window = default_window(steps, 0);
    auto model_distribution = [&](double theta, double p_d) {
        WalkSpec spec{steps, CoinParams(theta), p_d};
        return run_walk(spec, new_localized(0, Spin::up, window)).distribution_after(steps);
    };

    // Model support: light cone with the parity of the step count.
    std::vector<int> support;
    for (int x = -steps; x <= steps; ++x)
        if ((x + steps) % 2 == 0)
            support.push_back(x);

    auto chi2_of = [&](double p_d) {
        double chi2 = 0;
        for (const ThetaHistogram& h : data) {
            double total = 0;
            for (const auto& [site, c] : h.counts)
                total += static_cast<double>(c);
            PositionDistribution model = model_distribution(h.theta, p_d);
            for (int x : support) {
                double expected = total * model.at(x);
                auto it = h.counts.find(x);
                double observed = it == h.counts.end() ? 0.0 : static_cast<double>(it->second);
                double w = std::max(expected, 1.0);
                chi2 += (observed - expected) * (observed - expected) / w;
            }
        }
        return chi2;
    };

    auto [p_d, chi2] = scan_then_golden_minimize(chi2_of, 0.0, 1.0, 50, 1e-8);
    bins_total = static_cast<std::int64_t>(support.size()) * static_cast<std::int64_t>(data.size());
    DephasingFit fit;
    fit.p_d = p_d;
    fit.chi_squared = chi2;
    // One normalization constraint per distribution and one fitted parameter.
    fit.dof = std::max<std::int64_t>(1, bins_total - static_cast<std::int64_t>(data.size()) - 1);
    fit.reduced_chi_squared = chi2 / static_cast<double>(fit.dof);
    return fit;
}

} // namespace lgwalk
