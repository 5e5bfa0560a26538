#pragma once

#include <vector>

namespace mmimo {

struct PowerParams {
    double p_fixed_w = 10.0;
    double p_antenna_w = 0.4;
    double pa_efficiency = 0.39;
    double p_proc_coeff_w = 0.01;
    double bandwidth_hz = 20e6;
};

// P = p_fixed + n_active*p_antenna + sum(tx)/eta + p_proc*n_active*n_scheduled
double total_power(const PowerParams& params, int n_active_antennas,
                   const std::vector<double>& tx_powers_w, int n_scheduled);

// EE = cell_se * bandwidth / total_power; throws if total_power <= 0.
double energy_efficiency(double cell_se_bpshz, double bandwidth_hz, double total_power_w);

}  // namespace mmimo
