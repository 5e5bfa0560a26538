#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "mmimo/beamform.hpp"
#include "mmimo/channel.hpp"
#include "mmimo/pilot.hpp"
#include "mmimo/powermodel.hpp"

namespace mmimo {

struct Packet {
    int device_id = 0;
    double arrival_ms = 0.0;
    int size_bits = 1600;
    double deadline_ms = 0.0;
    std::optional<double> delivered_ms;
};

struct QueuedPacket {
    int packet_idx = -1;  // into the drop's packet table
    double arrival_ms = 0.0;
    double expiry_ms = 0.0;
};

using DeviceQueues = std::vector<std::deque<QueuedPacket>>;

struct FrameSchedule {
    long frame_index = 0;
    std::vector<int> granted;
    int spatial_streams = 1;
};

// periodic_sensor: 1600-bit packet every 100 ms, uniform phase, deadline
// 100 ms. delay_sensitive: Poisson at 5 pkt/s, deadline 50 ms.
std::vector<Packet> generate_traffic(const std::vector<DeviceProfile>& devices, double horizon_ms,
                                     RngStream& rng, int packet_bits = 1600);

// Candidate orderings over devices with non-empty queues (full order; the
// schedule_* wrappers below take the first spatial_streams entries).
std::vector<int> order_round_robin(const DeviceQueues& queues, int rr_pos);
std::vector<int> order_delay_aware(const DeviceQueues& queues, double now_ms);
std::vector<int> order_learned(const DeviceQueues& queues, double now_ms,
                               const std::vector<double>& channel_quality, double w);

FrameSchedule schedule_round_robin(const DeviceQueues& queues, int spatial_streams,
                                   long frame_index, int& rr_pos);
FrameSchedule schedule_delay_aware(const DeviceQueues& queues, int spatial_streams, double now_ms);
FrameSchedule schedule_learned(const DeviceQueues& queues, int spatial_streams, double now_ms,
                               const std::vector<double>& channel_quality, double w = 0.7);

enum class SchedulerKind { round_robin, delay_aware, learned };

// Everything the frame loop needs besides devices/pilots/traffic.
struct SimConfig {
    int n_antennas = 128;
    int tau_p = 60;
    int tau_c = 200;
    CombinerMethod combiner = CombinerMethod::MRC;
    int n_rf = 32;
    SchedulerKind scheduler = SchedulerKind::round_robin;
    double learned_w = 0.25;
    int spatial_streams = 2;
    double admission_threshold = 0.0;  // 0 disables link admission
    bool antenna_selection = false;
    double antenna_budget_w = 0.0;
    double p_antenna_w = 0.4;
    double noise_var_w = 5e-13;
    double pilot_power_w = 2e-3;
    double sinr_min = 1.0;  // linear
    double frame_ms = 1.0;
    int pilot_frame_period = 10;
    double horizon_ms = 400.0;
    // open-loop power control p_k = min(pmax, target*noise/beta)
    double power_ctrl_target = 2.0;
    double tx_power_max_w = 0.5;
};

struct SimOutputs {
    std::vector<Packet> packets;  // delivered_ms filled in
    double se_cell = 0.0;         // time-averaged cell SE, bps/Hz
    double avg_tx_sum_w = 0.0;    // mean over granting frames of sum of tx powers
    int n_active_antennas = 0;
    long frames = 0;
};

// The per-drop frame loop: lazy Gauss-Markov channel aging, estimation epochs
// over devices with queued traffic, link admission, scheduler ordering with a
// one-grant-per-pilot walk, combining, SINR thresholding and retry-on-failure
// until the packet deadline. drop_seed feeds the per-purpose RNG substreams.
SimOutputs simulate_frames(const SimConfig& cfg, const std::vector<DeviceProfile>& devices,
                           const PilotAssignment& assignment, std::vector<Packet> packets,
                           uint64_t drop_seed);

struct LatencyStats {
    double mean_ms = 0.0;
    double p50 = 0.0, p90 = 0.0, p99 = 0.0;
    double iqr = 0.0;
    size_t n_delivered = 0;
};

// Over delivered packets only. Throws std::invalid_argument on an empty
// input and std::runtime_error when nothing was delivered.
LatencyStats latency_stats(const std::vector<Packet>& packets);

// 100 * delivered-within-deadline / total; throws on empty input.
double success_rate(const std::vector<Packet>& packets);

}  // namespace mmimo
