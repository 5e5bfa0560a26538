#include "mmimo/campaign.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mmimo {

void validate_config(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("config field '" + field + "': " + why);
    };
    if (cfg.n_antennas < 1) fail("n_antennas", "must be >= 1");
    if (cfg.n_devices < 1) fail("n_devices", "must be >= 1");
    if (cfg.tau_p < 1) fail("tau_p", "must be >= 1");
    if (cfg.tau_c < 1) fail("tau_c", "must be >= 1");
    if (cfg.tau_p > cfg.tau_c) fail("tau_p", "must be <= tau_c");
    if (cfg.n_rf < 1 || cfg.n_rf > cfg.n_antennas) fail("n_rf", "must be in [1, n_antennas]");
    if (cfg.drops < 1) fail("drops", "must be >= 1");
    if (cfg.spatial_streams < 1) fail("spatial_streams", "must be >= 1");
    if (cfg.mobile_fraction < 0.0 || cfg.mobile_fraction > 1.0)
        fail("mobile_fraction", "must be in [0,1]");
    if (cfg.delay_sensitive_fraction < 0.0 || cfg.delay_sensitive_fraction > 1.0)
        fail("delay_sensitive_fraction", "must be in [0,1]");
    if (!(cfg.corr_r >= 0.0) || cfg.corr_r >= 1.0) fail("corr_r", "must be in [0,1)");
    if (!(cfg.horizon_ms > 0.0)) fail("horizon_ms", "must be > 0");
    if (!(cfg.noise_var_w > 0.0)) fail("noise_var_w", "must be > 0");
    if (!(cfg.pilot_power_w > 0.0)) fail("pilot_power_w", "must be > 0");
    if (!(cfg.cell_radius_m > cfg.min_distance_m) || !(cfg.min_distance_m > 0.0))
        fail("cell_radius_m", "need 0 < min_distance_m < cell_radius_m");
    if (cfg.antenna_selection && !(cfg.antenna_budget_w > 0.0))
        fail("antenna_budget_w", "must be > 0 when antenna_selection is on");
    if (cfg.learned_w < 0.0 || cfg.learned_w > 1.0) fail("learned_w", "must be in [0,1]");
    if (cfg.qlearn_episodes < 1) fail("qlearn_episodes", "must be >= 1");
    if (cfg.pilot_frame_period < 1) fail("pilot_frame_period", "must be >= 1");
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    if (name == "baseline") {
        cfg.tau_p = 60;  // overhead 0.30
        cfg.pilot_strategy = PilotStrategy::random_uniform;
        cfg.combiner = CombinerMethod::MRC;
        cfg.antenna_selection = false;
        cfg.scheduler = SchedulerKind::round_robin;
        cfg.spatial_streams = 2;
        cfg.admission_threshold = 0.0;
    } else if (name == "optimized") {
        cfg.tau_p = 40;  // overhead 0.20
        cfg.pilot_strategy = PilotStrategy::greedy;
        cfg.combiner = CombinerMethod::ZF;
        cfg.antenna_selection = true;
        cfg.antenna_budget_w = 19.2;  // 48 antennas at 0.4 W
        cfg.scheduler = SchedulerKind::delay_aware;
        cfg.spatial_streams = 4;
        cfg.admission_threshold = 4.0;
    } else if (name == "ai_assisted") {
        cfg.tau_p = 30;  // overhead 0.15
        cfg.pilot_strategy = PilotStrategy::qlearning;
        cfg.combiner = CombinerMethod::HYBRID;
        cfg.n_rf = 32;  // N/4
        cfg.antenna_selection = true;
        cfg.antenna_budget_w = 19.2;
        cfg.scheduler = SchedulerKind::learned;
        cfg.learned_w = 0.25;
        cfg.spatial_streams = 4;
        cfg.admission_threshold = 1.5;
    } else {
        throw std::invalid_argument("preset: unknown name '" + name + "'");
    }
    validate_config(cfg);
    return cfg;
}

DropMetrics run_drop(const ScenarioConfig& cfg, int drop_index) {
    validate_config(cfg);
    RngStream base = derive_stream(cfg.master_seed, static_cast<uint64_t>(drop_index));
    const uint64_t drop_seed = base.next_u64();

    // Substream purposes: 1 geometry+shadowing, 2 traffic classes+pilots, 3 traffic.
    RngStream geo_rng = derive_stream(drop_seed, 1);
    RngStream assign_rng = derive_stream(drop_seed, 2);
    RngStream traffic_rng = derive_stream(drop_seed, 3);

    std::vector<DeviceProfile> devices =
        drop_devices(cfg.n_devices, cfg.cell_radius_m, cfg.min_distance_m,
                     cfg.mobile ? cfg.mobile_fraction : 0.0, geo_rng);
    std::vector<double> betas(devices.size());
    for (size_t k = 0; k < devices.size(); ++k) {
        devices[k].beta = large_scale_gain(devices[k].distance_m, cfg.shadow_sigma_db, geo_rng);
        devices[k].corr_r = cfg.corr_r;
        betas[k] = devices[k].beta;
        devices[k].traffic_class = assign_rng.next_double() < cfg.delay_sensitive_fraction
                                       ? TrafficClass::delay_sensitive
                                       : TrafficClass::periodic_sensor;
    }

    PilotAssignment asg;
    switch (cfg.pilot_strategy) {
        case PilotStrategy::random_uniform:
            asg = assign_random(cfg.n_devices, cfg.tau_p, assign_rng);
            break;
        case PilotStrategy::greedy:
            asg = assign_greedy(devices, cfg.tau_p);
            break;
        case PilotStrategy::qlearning:
            asg = assign_qlearning(devices, cfg.tau_p, cfg.qlearn_episodes, assign_rng,
                                   cfg.pilot_power_w, cfg.noise_var_w);
            break;
    }
    for (size_t k = 0; k < devices.size(); ++k) devices[k].pilot = asg.assignment[k];

    std::vector<Packet> packets = generate_traffic(devices, cfg.horizon_ms, traffic_rng,
                                                   cfg.packet_bits);

    SimConfig sc;
    sc.n_antennas = cfg.n_antennas;
    sc.tau_p = cfg.tau_p;
    sc.tau_c = cfg.tau_c;
    sc.combiner = cfg.combiner;
    sc.n_rf = cfg.n_rf;
    sc.scheduler = cfg.scheduler;
    sc.learned_w = cfg.learned_w;
    sc.spatial_streams = cfg.spatial_streams;
    sc.admission_threshold = cfg.admission_threshold;
    sc.antenna_selection = cfg.antenna_selection;
    sc.antenna_budget_w = cfg.antenna_budget_w;
    sc.p_antenna_w = cfg.power.p_antenna_w;
    sc.noise_var_w = cfg.noise_var_w;
    sc.pilot_power_w = cfg.pilot_power_w;
    sc.sinr_min = std::pow(10.0, cfg.sinr_min_db / 10.0);
    sc.pilot_frame_period = cfg.pilot_frame_period;
    sc.horizon_ms = cfg.horizon_ms;
    sc.power_ctrl_target = cfg.power_ctrl_target;
    sc.tx_power_max_w = cfg.tx_power_max_w;

    SimOutputs sim = simulate_frames(sc, devices, asg, std::move(packets), drop_seed);

    DropMetrics m;
    m.drop_index = drop_index;
    m.se_cell = sim.se_cell;
    const double p_total = total_power(cfg.power, sim.n_active_antennas, {sim.avg_tx_sum_w},
                                       cfg.spatial_streams);
    m.ee = energy_efficiency(sim.se_cell, cfg.power.bandwidth_hz, p_total) / 1e6;  // Mbit/J
    bool any_delivered = false;
    for (const Packet& p : sim.packets)
        if (p.delivered_ms) {
            any_delivered = true;
            break;
        }
    // Horizon as a finite sentinel when nothing got through (success 0 anyway).
    m.mean_latency_ms = any_delivered ? latency_stats(sim.packets).mean_ms : cfg.horizon_ms;
    m.success_pct = sim.packets.empty() ? 0.0 : success_rate(sim.packets);
    m.pci = pci(asg, betas, cfg.pilot_power_w, cfg.noise_var_w, cfg.tau_p);
    m.pilot_overhead = cfg.pilot_overhead();
    return m;
}

std::vector<DropMetrics> run_campaign(const ScenarioConfig& cfg, int n_drops, int workers) {
    if (n_drops < 1) throw std::invalid_argument("run_campaign: n_drops must be >= 1");
    std::vector<DropMetrics> out(static_cast<size_t>(n_drops));
    if (workers <= 1) {
        for (int i = 0; i < n_drops; ++i) out[i] = run_drop(cfg, i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_drops) return;
            try {
                out[i] = run_drop(cfg, i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

const std::vector<std::string>& kpi_names() {
    static const std::vector<std::string> names = {"se_cell",     "ee",  "mean_latency_ms",
                                                   "pci",         "success_pct",
                                                   "pilot_overhead"};
    return names;
}

std::vector<double> kpi_column(const std::vector<DropMetrics>& drops, const std::string& kpi) {
    std::vector<double> col;
    col.reserve(drops.size());
    for (const DropMetrics& d : drops) {
        if (kpi == "se_cell") col.push_back(d.se_cell);
        else if (kpi == "ee") col.push_back(d.ee);
        else if (kpi == "mean_latency_ms") col.push_back(d.mean_latency_ms);
        else if (kpi == "pci") col.push_back(d.pci);
        else if (kpi == "success_pct") col.push_back(d.success_pct);
        else if (kpi == "pilot_overhead") col.push_back(d.pilot_overhead);
        else throw std::invalid_argument("kpi_column: unknown kpi " + kpi);
    }
    return col;
}

KpiAggregate aggregate(const std::vector<DropMetrics>& drops) {
    KpiAggregate a;
    if (drops.size() == 1) {
        const DropMetrics& d = drops.front();
        a.se_cell = {d.se_cell, 0.0};
        a.ee = {d.ee, 0.0};
        a.mean_latency_ms = {d.mean_latency_ms, 0.0};
        a.pci = {d.pci, 0.0};
        a.success_pct = {d.success_pct, 0.0};
    } else {
        a.se_cell = confidence_interval(kpi_column(drops, "se_cell"));
        a.ee = confidence_interval(kpi_column(drops, "ee"));
        a.mean_latency_ms = confidence_interval(kpi_column(drops, "mean_latency_ms"));
        a.pci = confidence_interval(kpi_column(drops, "pci"));
        a.success_pct = confidence_interval(kpi_column(drops, "success_pct"));
    }
    a.pilot_overhead = drops.empty() ? 0.0 : drops.front().pilot_overhead;
    return a;
}

SweepResult sweep(const ScenarioConfig& base, const std::vector<int>& device_counts, int n_drops,
                  int workers) {
    if (device_counts.empty()) throw std::invalid_argument("sweep: empty device list");
    SweepResult res;
    res.threshold_pct = base.breaking_threshold_pct;
    for (int count : device_counts) {
        if (count < 1) throw std::invalid_argument("sweep: device count must be >= 1");
        ScenarioConfig cfg = base;
        cfg.n_devices = count;
        const std::vector<DropMetrics> drops = run_campaign(cfg, n_drops, workers);
        SweepPoint pt;
        pt.device_count = count;
        pt.agg = aggregate(drops);
        if (!res.has_breaking_point && pt.agg.success_pct.mean < res.threshold_pct) {
            res.has_breaking_point = true;
            res.breaking_point = count;
        }
        res.points.push_back(std::move(pt));
    }
    return res;
}

}  // namespace mmimo
