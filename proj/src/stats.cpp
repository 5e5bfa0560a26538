#include "mmimo/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmimo/randcore.hpp"

namespace mmimo {

namespace {
// P(T <= t) for Student's t with dof degrees of freedom, t >= 0.
double t_cdf(double t, int dof) {
    const double x = dof / (dof + t * t);
    return 1.0 - 0.5 * reg_incomplete_beta(dof / 2.0, 0.5, x);
}
}  // namespace

double t_quantile(double prob, int dof) {
    if (prob <= 0.5 || prob >= 1.0) throw std::invalid_argument("t_quantile: prob must be in (0.5,1)");
    double lo = 0.0, hi = 1.0;
    while (t_cdf(hi, dof) < prob) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (t_cdf(mid, dof) < prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ConfInterval confidence_interval(const std::vector<double>& samples, double level) {
    const size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("confidence_interval: need n >= 2");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double p = 0.5 + level / 2.0;
    const double q = n >= 200 ? 1.959964 : t_quantile(p, static_cast<int>(n) - 1);
    return {mean, q * sd / std::sqrt(static_cast<double>(n))};
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    const size_t g = groups.size();
    if (g < 2) throw std::invalid_argument("anova_oneway: need >= 2 groups");
    size_t n_total = 0;
    double grand = 0.0;
    for (const auto& grp : groups) {
        if (grp.size() < 2) throw std::invalid_argument("anova_oneway: each group needs n >= 2");
        n_total += grp.size();
        for (double v : grp) grand += v;
    }
    grand /= static_cast<double>(n_total);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& grp : groups) {
        double m = 0.0;
        for (double v : grp) m += v;
        m /= static_cast<double>(grp.size());
        ssb += static_cast<double>(grp.size()) * (m - grand) * (m - grand);
        for (double v : grp) ssw += (v - m) * (v - m);
    }
    const double d1 = static_cast<double>(g - 1);
    const double d2 = static_cast<double>(n_total - g);
    AnovaResult r;
    if (ssw == 0.0) {
        r.F = ssb == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        r.p = ssb == 0.0 ? 1.0 : 0.0;
        return r;
    }
    r.F = (ssb / d1) / (ssw / d2);
    r.p = reg_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * r.F));
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: bad input");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace mmimo
