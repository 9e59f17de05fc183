#ifndef OCCSTAB_STATS_HPP
#define OCCSTAB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "occstab/limit_targets.hpp"

namespace occstab {

/// One-sample Kolmogorov-Smirnov distance sup_x |ECDF(x) - F(x)|, evaluated
/// at the sample points with both one-sided sups.
template <typename Cdf>
double ks_distance_cdf(std::span<const double> samples, Cdf&& cdf) {
    if (samples.empty()) throw ParameterError("ks_distance needs samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = cdf(sorted[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - F);
        d = std::max(d, F - static_cast<double>(i) / n);
    }
    return d;
}

inline double ks_distance(std::span<const double> samples, const LimitLaw& law) {
    return ks_distance_cdf(samples, [&](double x) { return law_cdf(law, x); });
}

/// Two-sample KS distance.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample needs samples");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double x = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= x) ++ia;
        while (ib < sb.size() && sb[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

/// sup over the frequency grid of |empirical CF - law CF|.
inline double cf_distance(std::span<const double> samples, const LimitLaw& law,
                          std::span<const double> freq_grid) {
    if (freq_grid.empty()) throw ParameterError("cf_distance needs a frequency grid");
    double d = 0.0;
    for (double u : freq_grid) {
        double sre = 0.0, sim = 0.0, cre = 0.0, cim = 0.0;
        for (double x : samples) {
            const double re = std::cos(u * x), im = std::sin(u * x);
            double y = re - cre, t = sre + y;
            cre = (t - sre) - y;
            sre = t;
            y = im - cim;
            t = sim + y;
            cim = (t - sim) - y;
            sim = t;
        }
        const double n = static_cast<double>(samples.size());
        const std::complex<double> emp(sre / n, sim / n);
        d = std::max(d, std::abs(emp - law_cf(law, u)));
    }
    return d;
}

struct MomentRow {
    int order = 0;
    double empirical = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z_score = 0.0;
};

/// Empirical moments 1..max_order against the law's exact moments, with
/// asymptotic standard errors sqrt((m_{2k} - m_k^2)/N).
inline std::vector<MomentRow> moment_table(std::span<const double> samples, const LimitLaw& law,
                                           int max_order = 4) {
    if (samples.size() < 2) throw ParameterError("moment_table needs at least 2 samples");
    const double n = static_cast<double>(samples.size());
    std::vector<MomentRow> rows;
    for (int m = 1; m <= max_order; ++m) {
        double s = 0.0, c = 0.0, s2 = 0.0, c2 = 0.0;
        for (double x : samples) {
            const double p = std::pow(x, m);
            double y = p - c, t = s + y;
            c = (t - s) - y;
            s = t;
            y = p * p - c2;
            t = s2 + y;
            c2 = (t - s2) - y;
            s2 = t;
        }
        MomentRow row;
        row.order = m;
        row.empirical = s / n;
        const double var = std::max(0.0, s2 / n - row.empirical * row.empirical);
        row.std_error = std::sqrt(var / n);
        row.target = law_moment(law, m);
        row.z_score = (row.std_error > 0.0) ? (row.empirical - row.target) / row.std_error
                                            : (row.empirical == row.target ? 0.0
                                                                           : std::numeric_limits<double>::infinity());
        rows.push_back(row);
    }
    return rows;
}

inline double sample_mean(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s / static_cast<double>(xs.size());
}

inline double sample_moment(std::span<const double> xs, int order) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double p = std::pow(x, order);
        double y = p - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s / static_cast<double>(xs.size());
}

inline double sample_std(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(xs.size()) - 1.0));
}

} // namespace occstab

#endif // OCCSTAB_STATS_HPP
