#pragma once

#include <vector>

#include "mmimo/linalg.hpp"

namespace mmimo {

enum class CombinerMethod { MRC, ZF, HYBRID };

struct CombinerMatrix {
    CMat V;  // N x K (or n_rf x K for the hybrid digital stage)
    CombinerMethod method = CombinerMethod::MRC;
};

struct AntennaSelection {
    std::vector<bool> active;
    std::vector<double> utilities;
    std::vector<double> powers_w;
    double budget_w = 0.0;
    double value = 0.0;
    double total_power_w = 0.0;
};

// Matched filter v_k = hhat_k. Throws if a column is all-zero.
CombinerMatrix mrc(const CMat& H_hat);

// V = Hhat (Hhat^H Hhat + ridge I)^{-1}. ridge=0 by default; if the Gram
// matrix is numerically singular the ridge is raised to
// 1e-10 * trace(Gram)/K. Throws if K > N.
CombinerMatrix zf(const CMat& H_hat, double ridge = 0.0);

// SINR_k = p_k |v_k^H h_k|^2 / (sum_{j!=k} p_j |v_k^H h_j|^2 + noise ||v_k||^2).
std::vector<double> uplink_sinr(const CMat& H_true, const CombinerMatrix& V,
                                const std::vector<double>& tx_powers, double noise_var);

struct SpectralEfficiency {
    std::vector<double> per_device;
    double cell_sum = 0.0;
};
SpectralEfficiency spectral_efficiency(const std::vector<double>& sinr, double pilot_overhead);

// Unitary DFT beam matrix, constant-modulus columns.
CMat dft_codebook(int N);

struct HybridStage {
    CMat F;          // N x n_rf analog beams (codebook columns, ascending index)
    CMat effective;  // n_rf x K = F^H Hhat
    std::vector<int> beams;
};
// Greedy selection of n_rf distinct beams maximizing the marginal captured
// energy sum_k |f_b^H hhat_k|^2 (marginals are independent, so this is the
// top-n_rf beams by total energy; ties by lower beam index).
HybridStage hybrid_select(const CMat& H_hat, const CMat& codebook, int n_rf);

// Exact 0/1 knapsack via branch-and-bound with fractional upper bounds.
// Ties prefer lower total power, then the lexicographically smallest index
// set. Throws if budget < 0.
AntennaSelection antenna_select_exact(const std::vector<double>& utilities,
                                      const std::vector<double>& powers_w, double budget_w);

// u_m = sum_k |hhat_{m,k}|^2.
std::vector<double> antenna_utilities(const CMat& H_hat);

}  // namespace mmimo
