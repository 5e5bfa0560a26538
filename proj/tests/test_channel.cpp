#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmimo/channel.hpp"

using namespace mmimo;

TEST_CASE("path loss closed form") {
    CHECK(path_loss_db(100.0) == doctest::Approx(-30.5 - 36.7 * 2.0).epsilon(1e-12));
    CHECK(path_loss_db(1.0) == doctest::Approx(-30.5).epsilon(1e-12));
    CHECK(path_loss_db(250.0) == doctest::Approx(-30.5 - 36.7 * std::log10(250.0)).epsilon(1e-12));
    CHECK_THROWS(path_loss_db(0.5));
}

TEST_CASE("drop geometry: annulus, exact mobile count, doppler range") {
    RngStream rng = derive_stream(10, 0);
    const int K = 700;
    auto devs = drop_devices(K, 250.0, 10.0, 0.37, rng);
    REQUIRE(static_cast<int>(devs.size()) == K);
    int mobiles = 0;
    for (const auto& d : devs) {
        CHECK(d.distance_m >= 10.0);
        CHECK(d.distance_m <= 250.0);
        CHECK(d.distance_m ==
              doctest::Approx(std::sqrt(d.x * d.x + d.y * d.y)).epsilon(1e-12));
        if (d.mobile) {
            ++mobiles;
            CHECK(d.doppler_hz >= 5.0);
            CHECK(d.doppler_hz <= 50.0);
        } else {
            CHECK(d.doppler_hz == 0.0);
        }
    }
    CHECK(mobiles == static_cast<int>(std::lround(0.37 * K)));

    // radial CDF of a uniform annulus: F(d) = (d^2 - r0^2)/(R^2 - r0^2)
    std::vector<double> ds;
    for (const auto& d : devs) ds.push_back(d.distance_m);
    std::sort(ds.begin(), ds.end());
    double ks = 0.0;
    for (int i = 0; i < K; ++i) {
        const double f = (ds[i] * ds[i] - 100.0) / (250.0 * 250.0 - 100.0);
        ks = std::max(ks, std::abs(f - (i + 0.5) / K));
    }
    CHECK(ks < 1.949 / std::sqrt(static_cast<double>(K)));
}

TEST_CASE("shadowing statistics") {
    RngStream rng = derive_stream(11, 0);
    const double d = 120.0, sigma = 8.0;
    const int n = 20000;
    double m = 0.0, s2 = 0.0;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        const double beta = large_scale_gain(d, sigma, rng);
        xs[i] = 10.0 * std::log10(beta) - path_loss_db(d);
        m += xs[i];
    }
    m /= n;
    for (double x : xs) s2 += (x - m) * (x - m);
    s2 /= (n - 1);
    CHECK(std::abs(m) < 0.25);
    CHECK(std::sqrt(s2) == doctest::Approx(sigma).epsilon(0.03));
}

TEST_CASE("correlation matrix structure") {
    const double r = 0.8, th = 0.9;
    const CMat R = correlation_matrix(6, r, th);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(R(i, i) - 1.0) < 1e-15);
        for (int j = 0; j < 6; ++j) {
            const cplx want = std::polar(std::pow(r, std::abs(i - j)), th * (i - j));
            CHECK(std::abs(R(i, j) - want) < 1e-13);
            CHECK(std::abs(R(i, j) - std::conj(R(j, i))) < 1e-15);
        }
    }
    CHECK_THROWS(correlation_matrix(4, 1.0, 0.0));
    CHECK_THROWS(correlation_matrix(4, -0.1, 0.0));
}

TEST_CASE("AR(1) coloring equals the Cholesky factor of R") {
    // draw_column must produce exactly sqrt(beta) * L * g for the g's it consumes
    const int N = 16;
    const double beta = 3.7e-10, r = 0.9, th = 0.4;
    RngStream rng = derive_stream(12, 3);
    RngStream clone = rng;
    std::vector<cplx> h(N);
    draw_column(h.data(), N, beta, r, th, rng);

    std::vector<cplx> g(N);
    for (auto& z : g) z = clone.next_cnormal();
    const CMat L = cholesky_psd(correlation_matrix(N, r, th));
    for (int m = 0; m < N; ++m) {
        cplx want = 0.0;
        for (int k = 0; k <= m; ++k) want += L(m, k) * g[k];
        want *= std::sqrt(beta);
        CHECK(std::abs(h[m] - want) < 1e-9 * std::abs(want) + 1e-18);
    }
}

TEST_CASE("draw_channel covariance Monte Carlo") {
    const int N = 8;
    DeviceProfile d;
    d.beta = 2.0;  // scale-free check
    d.corr_r = 0.7;
    d.azimuth = 0.5;
    std::vector<DeviceProfile> devs = {d};
    RngStream rng = derive_stream(13, 0);
    const int trials = 40000;
    CMat cov(N, N);
    double theta_used = 0.0;
    for (int t = 0; t < trials; ++t) {
        ChannelRealization ch = draw_channel(devs, N, rng);
        theta_used = ch.theta[0];
        const cplx* h = ch.H.col(0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) cov(i, j) += h[i] * std::conj(h[j]);
    }
    CHECK(theta_used == doctest::Approx(M_PI * std::sin(0.5)).epsilon(1e-12));
    const CMat R = correlation_matrix(N, 0.7, theta_used);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            CHECK(std::abs(cov(i, j) / static_cast<double>(trials) - 2.0 * R(i, j)) < 0.06);
}

TEST_CASE("aging coefficient is Jakes") {
    CHECK(aging_coefficient(0.0, 0.001) == doctest::Approx(1.0));
    for (double fd : {5.0, 17.0, 50.0})
        CHECK(aging_coefficient(fd, 0.001) ==
              doctest::Approx(bessel_j0(2.0 * M_PI * fd * 0.001)).epsilon(1e-12));
}

TEST_CASE("age_channel: rho=1 freezes, otherwise decorrelates at rate rho") {
    const int N = 12;
    DeviceProfile d;
    d.beta = 1.0;
    d.corr_r = 0.6;
    d.azimuth = -0.3;
    std::vector<DeviceProfile> devs = {d};
    RngStream rng = derive_stream(14, 0);

    ChannelRealization ch = draw_channel(devs, N, rng);
    const std::vector<cplx> before(ch.H.a);
    age_channel(ch, devs, {1.0}, rng);
    for (int i = 0; i < N; ++i) CHECK(ch.H.a[i] == before[i]);

    // E[h_new h_old^*] = rho * E|h|^2 entrywise
    const double rho = 0.85;
    const int trials = 30000;
    double num = 0.0, den = 0.0;
    for (int t = 0; t < trials; ++t) {
        ChannelRealization c2 = draw_channel(devs, N, rng);
        const std::vector<cplx> old(c2.H.a);
        age_channel(c2, devs, {rho}, rng);
        for (int i = 0; i < N; ++i) {
            num += (c2.H.a[i] * std::conj(old[i])).real();
            den += std::norm(old[i]);
        }
    }
    CHECK(num / den == doctest::Approx(rho).epsilon(0.02));
}
