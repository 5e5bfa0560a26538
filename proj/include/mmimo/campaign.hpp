#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmimo/mac.hpp"
#include "mmimo/stats.hpp"

namespace mmimo {

enum class PilotStrategy { random_uniform, greedy, qlearning };

struct ScenarioConfig {
    std::string name = "custom";
    int n_antennas = 128;
    int n_devices = 500;
    bool mobile = true;
    double mobile_fraction = 0.5;
    int tau_p = 60;
    int tau_c = 200;
    PilotStrategy pilot_strategy = PilotStrategy::random_uniform;
    CombinerMethod combiner = CombinerMethod::MRC;
    int n_rf = 32;
    bool antenna_selection = false;
    double antenna_budget_w = 19.2;
    SchedulerKind scheduler = SchedulerKind::round_robin;
    double learned_w = 0.25;
    double admission_threshold = 0.0;
    int spatial_streams = 2;
    PowerParams power;
    double noise_var_w = 5e-13;
    double pilot_power_w = 2e-3;
    double power_ctrl_target = 2.0;
    double tx_power_max_w = 0.5;
    double corr_r = 0.9;
    double delay_sensitive_fraction = 0.5;
    double horizon_ms = 400.0;
    int packet_bits = 1600;
    double sinr_min_db = 0.0;
    double cell_radius_m = 250.0;
    double min_distance_m = 10.0;
    double shadow_sigma_db = 8.0;
    int qlearn_episodes = 300;
    int pilot_frame_period = 10;
    double breaking_threshold_pct = 70.0;
    int drops = 1000;
    uint64_t master_seed = 42;

    double pilot_overhead() const { return static_cast<double>(tau_p) / tau_c; }
};

// Throws std::invalid_argument naming the offending field.
void validate_config(const ScenarioConfig& cfg);

// baseline / optimized / ai_assisted presets (frozen calibration).
ScenarioConfig preset(const std::string& name);

struct DropMetrics {
    int drop_index = 0;
    double se_cell = 0.0;
    double ee = 0.0;
    double mean_latency_ms = 0.0;
    double pci = 0.0;
    double success_pct = 0.0;
    double pilot_overhead = 0.0;
};

DropMetrics run_drop(const ScenarioConfig& cfg, int drop_index);

// Drops run independently (threaded when workers > 1) and are always
// reported in drop_index order, so output is worker-count invariant.
std::vector<DropMetrics> run_campaign(const ScenarioConfig& cfg, int n_drops, int workers = 1);

struct KpiAggregate {
    ConfInterval se_cell, ee, mean_latency_ms, pci, success_pct;
    double pilot_overhead = 0.0;
};
KpiAggregate aggregate(const std::vector<DropMetrics>& drops);

std::vector<double> kpi_column(const std::vector<DropMetrics>& drops, const std::string& kpi);
const std::vector<std::string>& kpi_names();  // canonical order

struct SweepPoint {
    int device_count = 0;
    KpiAggregate agg;
};
struct SweepResult {
    std::vector<SweepPoint> points;
    bool has_breaking_point = false;
    int breaking_point = 0;
    double threshold_pct = 70.0;
};
SweepResult sweep(const ScenarioConfig& base, const std::vector<int>& device_counts, int n_drops,
                  int workers = 1);

}  // namespace mmimo
