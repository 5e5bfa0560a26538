#pragma once

#include <vector>

#include "mmimo/randcore.hpp"

namespace mmimo {

enum class TrafficClass { periodic_sensor, delay_sensitive };

struct DeviceProfile {
    int id = 0;
    double x = 0.0, y = 0.0;
    double distance_m = 0.0;
    double beta = 0.0;        // linear large-scale gain
    double doppler_hz = 0.0;  // 0 iff static
    bool mobile = false;
    int pilot = -1;
    TrafficClass traffic_class = TrafficClass::periodic_sensor;
    double azimuth = 0.0;  // angle to the BS broadside, sets theta below
    double corr_r = 0.0;   // exponential correlation magnitude
};

struct ChannelRealization {
    CMat H;  // N x K
    std::vector<double> r;      // per-device |correlation|
    std::vector<double> theta;  // per-device phase progression, pi*sin(azimuth)
};

// K devices uniform over the annulus [min_distance, radius]; exactly
// round(mobile_fraction*K) mobile with Doppler U[5,50] Hz. Positions do not
// yet carry beta (see large_scale_gain) nor pilots.
std::vector<DeviceProfile> drop_devices(int K, double cell_radius_m, double min_distance_m,
                                        double mobile_fraction, RngStream& rng);

// -30.5 - 36.7*log10(d); throws for d < 1 m.
double path_loss_db(double distance_m);

// beta = 10^((path_loss_db + X)/10), X ~ N(0, shadow_sigma_db^2).
double large_scale_gain(double distance_m, double shadow_sigma_db, RngStream& rng);

// [R]_{m,n} = r^|m-n| * exp(i*theta*(m-n)); throws unless 0 <= r < 1.
CMat correlation_matrix(int N, double r, double theta);

// Column k = sqrt(beta_k) * L_k * g_k. For the exponential model the coloring
// is applied with the AR(1) recursion h_m = a h_{m-1} + s g_m,
// a = r e^{i theta}, s = sqrt(1-r^2), which is exactly multiplication by the
// Cholesky factor of R.
ChannelRealization draw_channel(const std::vector<DeviceProfile>& devices, int N, RngStream& rng);

// Jakes autocorrelation rho = J0(2*pi*f_D*T).
double aging_coefficient(double doppler_hz, double slot_seconds);

// Gauss-Markov step: column k <- rho_k h_k + sqrt(1-rho_k^2) * fresh draw with
// the same beta_k, R_k.
void age_channel(ChannelRealization& ch, const std::vector<DeviceProfile>& devices,
                 const std::vector<double>& rho_per_device, RngStream& rng);

// Draw one correlated column into out[0..N): sqrt(beta) * L g.
void draw_column(cplx* out, int N, double beta, double r, double theta, RngStream& rng);

}  // namespace mmimo
