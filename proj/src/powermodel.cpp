#include "mmimo/powermodel.hpp"

#include <stdexcept>

namespace mmimo {

double total_power(const PowerParams& params, int n_active_antennas,
                   const std::vector<double>& tx_powers_w, int n_scheduled) {
    if (n_active_antennas < 0) throw std::invalid_argument("total_power: n_active must be >= 0");
    double tx = 0.0;
    for (double p : tx_powers_w) tx += p;
    return params.p_fixed_w + n_active_antennas * params.p_antenna_w + tx / params.pa_efficiency +
           params.p_proc_coeff_w * n_active_antennas * n_scheduled;
}

double energy_efficiency(double cell_se_bpshz, double bandwidth_hz, double total_power_w) {
    if (!(total_power_w > 0.0)) throw std::invalid_argument("energy_efficiency: power must be > 0");
    return cell_se_bpshz * bandwidth_hz / total_power_w;
}

}  // namespace mmimo
