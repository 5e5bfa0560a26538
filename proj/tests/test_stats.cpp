#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmimo/stats.hpp"

using namespace mmimo;

TEST_CASE("t quantiles against table values") {
    // Two-sided 95%: nu=1 -> 12.7062, nu=3 -> 3.18245, nu=10 -> 2.22814
    CHECK(t_quantile(0.975, 1) == doctest::Approx(12.7062047).epsilon(1e-5));
    CHECK(t_quantile(0.975, 3) == doctest::Approx(3.18244631).epsilon(1e-6));
    CHECK(t_quantile(0.975, 10) == doctest::Approx(2.22813885).epsilon(1e-6));
    CHECK(t_quantile(0.975, 1000) == doctest::Approx(1.96).epsilon(1e-3));
    CHECK(t_quantile(0.995, 5) == doctest::Approx(4.03214298).epsilon(1e-6));
    CHECK_THROWS(t_quantile(0.4, 5));
}

TEST_CASE("confidence interval fixture {1,2,3,4}") {
    const ConfInterval ci = confidence_interval({1.0, 2.0, 3.0, 4.0});
    CHECK(ci.mean == doctest::Approx(2.5).epsilon(1e-12));
    // sd = sqrt(5/3), t_{.975,3} = 3.182446 -> 3.182446*1.290994/2 = 2.05404
    CHECK(ci.half_width == doctest::Approx(2.0540).epsilon(5e-4));
    CHECK_THROWS(confidence_interval({1.0}));
}

TEST_CASE("large samples switch to the normal quantile") {
    std::vector<double> v(400);
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 2);
    const ConfInterval ci = confidence_interval(v);
    const double sd = std::sqrt(0.25 * 400.0 / 399.0);
    CHECK(ci.half_width == doctest::Approx(1.959964 * sd / 20.0).epsilon(1e-9));
}

TEST_CASE("one-way ANOVA worked example") {
    // groups {1,2,3}, {2,3,4}, {3,4,5}: SSB = 6, SSW = 6, F = (6/2)/(6/6) = 3
    const AnovaResult r = anova_oneway({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}});
    CHECK(std::abs(r.F - 3.0) < 1e-12);
    // p = I_{6/(6+2*3)}(3, 1) = 0.5^3 = 0.125 exactly
    CHECK(r.p == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("ANOVA degenerate and error cases") {
    const AnovaResult same = anova_oneway({{2, 2}, {2, 2}});
    CHECK(same.F == 0.0);
    CHECK(same.p == 1.0);
    CHECK_THROWS(anova_oneway({{1, 2}}));
    CHECK_THROWS(anova_oneway({{1, 2}, {3}}));
}

TEST_CASE("ANOVA with identical groups is insignificant") {
    std::vector<double> g = {1.0, 2.5, 3.0, 4.5, 0.5};
    const AnovaResult r = anova_oneway({g, g, g});
    CHECK(r.F == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pearson correlation") {
    CHECK(pearson({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson({1, 2, 3, 4}, {8, 6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pearson({1, 2, 3, 4}, {5, 5, 5, 5}) == 0.0);
    // hand value: x={1,2,3}, y={1,3,2} -> r = 0.5
    CHECK(pearson({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(pearson({1, 2}, {1, 2, 3}));
}
