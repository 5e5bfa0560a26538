#include "mmimo/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmimo {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<DeviceProfile> drop_devices(int K, double cell_radius_m, double min_distance_m,
                                        double mobile_fraction, RngStream& rng) {
    if (K < 1) throw std::invalid_argument("drop_devices: K must be >= 1");
    if (!(min_distance_m > 0.0) || !(min_distance_m < cell_radius_m))
        throw std::invalid_argument("drop_devices: need 0 < min_distance < radius");
    if (mobile_fraction < 0.0 || mobile_fraction > 1.0)
        throw std::invalid_argument("drop_devices: mobile_fraction out of [0,1]");

    std::vector<DeviceProfile> devs(K);
    for (int k = 0; k < K; ++k) {
        DeviceProfile& d = devs[k];
        d.id = k;
        const double u = rng.next_double();
        d.distance_m = std::sqrt(min_distance_m * min_distance_m +
                                 u * (cell_radius_m * cell_radius_m - min_distance_m * min_distance_m));
        d.azimuth = rng.next_double() * 2.0 * kPi - kPi;
        d.x = d.distance_m * std::cos(d.azimuth);
        d.y = d.distance_m * std::sin(d.azimuth);
    }
    // Exactly round(mobile_fraction*K) mobiles, chosen by a Fisher-Yates pass.
    const int n_mobile = static_cast<int>(std::lround(mobile_fraction * K));
    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = K - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
        std::swap(idx[i], idx[j]);
    }
    for (int m = 0; m < n_mobile; ++m) {
        DeviceProfile& d = devs[idx[m]];
        d.mobile = true;
        d.doppler_hz = 5.0 + 45.0 * rng.next_double();
    }
    return devs;
}

double path_loss_db(double distance_m) {
    if (!(distance_m >= 1.0)) throw std::invalid_argument("path_loss_db: distance must be >= 1 m");
    return -30.5 - 36.7 * std::log10(distance_m);
}

double large_scale_gain(double distance_m, double shadow_sigma_db, RngStream& rng) {
    if (shadow_sigma_db < 0.0) throw std::invalid_argument("large_scale_gain: sigma must be >= 0");
    const double shadow = shadow_sigma_db * rng.next_normal();
    return std::pow(10.0, (path_loss_db(distance_m) + shadow) / 10.0);
}

CMat correlation_matrix(int N, double r, double theta) {
    if (N < 1) throw std::invalid_argument("correlation_matrix: N must be >= 1");
    if (!(r >= 0.0) || !(r < 1.0)) throw std::invalid_argument("correlation_matrix: need 0 <= r < 1");
    CMat R(N, N);
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
            const int d = m - n;
            R(m, n) = std::pow(r, std::abs(d)) * std::polar(1.0, theta * d);
        }
    return R;
}

void draw_column(cplx* out, int N, double beta, double r, double theta, RngStream& rng) {
    const cplx a = std::polar(r, theta);
    const double s = std::sqrt(1.0 - r * r);
    const double scale = std::sqrt(beta);
    out[0] = scale * rng.next_cnormal();
    for (int m = 1; m < N; ++m) out[m] = a * out[m - 1] + (s * scale) * rng.next_cnormal();
}

ChannelRealization draw_channel(const std::vector<DeviceProfile>& devices, int N, RngStream& rng) {
    const int K = static_cast<int>(devices.size());
    ChannelRealization ch;
    ch.H = CMat(N, K);
    ch.r.resize(K);
    ch.theta.resize(K);
    for (int k = 0; k < K; ++k) {
        const DeviceProfile& d = devices[k];
        if (!(d.beta > 0.0)) throw std::invalid_argument("draw_channel: beta must be > 0");
        ch.r[k] = d.corr_r;
        ch.theta[k] = kPi * std::sin(d.azimuth);
        draw_column(ch.H.col(k), N, d.beta, ch.r[k], ch.theta[k], rng);
    }
    return ch;
}

double aging_coefficient(double doppler_hz, double slot_seconds) {
    if (doppler_hz < 0.0) throw std::invalid_argument("aging_coefficient: doppler must be >= 0");
    if (!(slot_seconds > 0.0)) throw std::invalid_argument("aging_coefficient: slot must be > 0");
    return bessel_j0(2.0 * kPi * doppler_hz * slot_seconds);
}

void age_channel(ChannelRealization& ch, const std::vector<DeviceProfile>& devices,
                 const std::vector<double>& rho_per_device, RngStream& rng) {
    const int N = ch.H.rows;
    const int K = ch.H.cols;
    std::vector<cplx> fresh(N);
    for (int k = 0; k < K; ++k) {
        const double rho = rho_per_device[k];
        if (std::fabs(rho) > 1.0) throw std::invalid_argument("age_channel: |rho| must be <= 1");
        if (rho == 1.0) continue;
        draw_column(fresh.data(), N, devices[k].beta, ch.r[k], ch.theta[k], rng);
        const double s = std::sqrt(1.0 - rho * rho);
        cplx* h = ch.H.col(k);
        for (int m = 0; m < N; ++m) h[m] = rho * h[m] + s * fresh[m];
    }
}

}  // namespace mmimo
