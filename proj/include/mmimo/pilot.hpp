#pragma once

#include <string>
#include <vector>

#include "mmimo/channel.hpp"

namespace mmimo {

struct PilotAssignment {
    int tau_p = 0;
    std::vector<int> assignment;  // device index -> pilot in [0, tau_p)
};

enum class EstMethod { LS, MMSE };

struct EstimationResult {
    CMat H_hat;                // N x K
    std::vector<double> nmse;  // per device
    EstMethod method = EstMethod::LS;
};

// Unitary DFT pilot book, tau_p x tau_p.
CMat build_pilot_book(int tau_p);

PilotAssignment assign_random(int K, int tau_p, RngStream& rng);

// Devices ranked by s_k = 0.5*rank_norm(beta) + 0.5*rank_norm(doppler)
// (average ranks on ties, ties in the final order broken by id) and packed
// into contiguous blocks of ceil(K/tau_p) per pilot, strongest block first.
// Blocking (rather than round-robin dealing) provably minimizes the mean PCI
// for the concave per-group contribution; see README for the argument.
PilotAssignment assign_greedy(const std::vector<DeviceProfile>& devices, int tau_p);

// Tabular Q-learning over (load bucket, co-pilot interference quantile) with
// Monte Carlo episode-return credit; alpha=0.1, epsilon 1.0 -> 0.05 linear,
// greedy rollout. Pilots are capped at ceil(K/tau_p) members.
PilotAssignment assign_qlearning(const std::vector<DeviceProfile>& devices, int tau_p,
                                 int episodes, RngStream& rng,
                                 double pilot_power = 2e-3, double noise_var = 5e-13);

// Despread-and-estimate. betas must hold the true large-scale gains (used by
// the scalar-MMSE shrinkage and the NMSE normalization).
EstimationResult estimate(const ChannelRealization& H_true, const PilotAssignment& assignment,
                          const std::vector<double>& betas, double pilot_power, double noise_var,
                          EstMethod method, RngStream& rng);

// Mean over devices of S_k / (beta_k + S_k + noise_var/(pilot_power*tau_p)),
// S_k = sum of co-pilot betas.
double pci(const PilotAssignment& assignment, const std::vector<double>& betas,
           double pilot_power, double noise_var, int tau_p);

// Rank-normalized scores in [0,1] with average ranks on ties.
std::vector<double> rank_norm(const std::vector<double>& v);

}  // namespace mmimo
