#pragma once

#include <vector>

namespace mmimo {

struct ConfInterval {
    double mean = 0.0;
    double half_width = 0.0;
};

// mean +/- t_{0.975,n-1} s/sqrt(n); the t quantile is found by inverting the
// incomplete-beta CDF for n < 200, z = 1.959964 beyond. Throws for n < 2.
ConfInterval confidence_interval(const std::vector<double>& samples, double level = 0.95);

// Student-t upper quantile via bisection on the incomplete-beta CDF.
double t_quantile(double prob, int dof);

struct AnovaResult {
    double F = 0.0;
    double p = 1.0;
};

// One-way ANOVA; throws when fewer than 2 groups or any group has n < 2.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mmimo
