#include "mmimo/mac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmimo {

std::vector<Packet> generate_traffic(const std::vector<DeviceProfile>& devices, double horizon_ms,
                                     RngStream& rng, int packet_bits) {
    if (!(horizon_ms > 0.0)) throw std::invalid_argument("generate_traffic: horizon must be > 0");
    std::vector<Packet> out;
    for (const DeviceProfile& d : devices) {
        if (d.traffic_class == TrafficClass::delay_sensitive) {
            // Poisson at 5 pkt/s = Exp(200 ms) inter-arrivals, 50 ms deadline.
            double t = rng.next_exponential(200.0);
            while (t < horizon_ms) {
                out.push_back({d.id, t, packet_bits, 50.0, std::nullopt});
                t += rng.next_exponential(200.0);
            }
        } else {
            // One packet every 100 ms from a uniform phase, 100 ms deadline.
            double t = rng.next_double() * 100.0;
            while (t < horizon_ms) {
                out.push_back({d.id, t, packet_bits, 100.0, std::nullopt});
                t += 100.0;
            }
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Packet& a, const Packet& b) { return a.arrival_ms < b.arrival_ms; });
    return out;
}

std::vector<int> order_round_robin(const DeviceQueues& queues, int rr_pos) {
    const int K = static_cast<int>(queues.size());
    std::vector<int> order;
    for (int k = 0; k < K; ++k)
        if (!queues[k].empty()) order.push_back(k);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return (a - rr_pos + K) % K < (b - rr_pos + K) % K; });
    return order;
}

std::vector<int> order_delay_aware(const DeviceQueues& queues, double now_ms) {
    std::vector<int> order;
    for (int k = 0; k < static_cast<int>(queues.size()); ++k)
        if (!queues[k].empty()) order.push_back(k);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const QueuedPacket& pa = queues[a].front();
        const QueuedPacket& pb = queues[b].front();
        const double sa = pa.expiry_ms - now_ms, sb = pb.expiry_ms - now_ms;
        if (sa != sb) return sa < sb;  // least slack first
        const double wa = now_ms - pa.arrival_ms, wb = now_ms - pb.arrival_ms;
        if (wa != wb) return wa > wb;  // longer wait first
        return a < b;
    });
    return order;
}

std::vector<int> order_learned(const DeviceQueues& queues, double now_ms,
                               const std::vector<double>& channel_quality, double w) {
    std::vector<int> backlog;
    for (int k = 0; k < static_cast<int>(queues.size()); ++k)
        if (!queues[k].empty()) backlog.push_back(k);
    // Rank-normalize channel quality over the backlog.
    std::vector<int> by_cq = backlog;
    std::stable_sort(by_cq.begin(), by_cq.end(),
                     [&](int a, int b) { return channel_quality[a] < channel_quality[b]; });
    const double denom = backlog.size() > 1 ? static_cast<double>(backlog.size() - 1) : 1.0;
    std::vector<double> prio(queues.size(), 0.0);
    for (size_t i = 0; i < by_cq.size(); ++i) prio[by_cq[i]] = (1.0 - w) * (static_cast<double>(i) / denom);
    for (int k : backlog) {
        const QueuedPacket& p = queues[k].front();
        const double deadline = p.expiry_ms - p.arrival_ms;
        const double waiting = now_ms - p.arrival_ms;
        prio[k] += w * (deadline > 0.0 ? std::min(1.0, waiting / deadline) : 1.0);
    }
    std::stable_sort(backlog.begin(), backlog.end(),
                     [&](int a, int b) { return prio[a] > prio[b]; });
    return backlog;
}

namespace {
FrameSchedule take(std::vector<int> order, int streams, long frame_index) {
    FrameSchedule fs;
    fs.frame_index = frame_index;
    fs.spatial_streams = streams;
    if (static_cast<int>(order.size()) > streams) order.resize(streams);
    fs.granted = std::move(order);
    return fs;
}
}  // namespace

FrameSchedule schedule_round_robin(const DeviceQueues& queues, int spatial_streams,
                                   long frame_index, int& rr_pos) {
    if (spatial_streams < 1) throw std::invalid_argument("schedule_round_robin: streams must be >= 1");
    FrameSchedule fs = take(order_round_robin(queues, rr_pos), spatial_streams, frame_index);
    if (!fs.granted.empty())
        rr_pos = (fs.granted.back() + 1) % static_cast<int>(queues.size());
    return fs;
}

FrameSchedule schedule_delay_aware(const DeviceQueues& queues, int spatial_streams, double now_ms) {
    if (spatial_streams < 1) throw std::invalid_argument("schedule_delay_aware: streams must be >= 1");
    return take(order_delay_aware(queues, now_ms), spatial_streams,
                static_cast<long>(now_ms));
}

FrameSchedule schedule_learned(const DeviceQueues& queues, int spatial_streams, double now_ms,
                               const std::vector<double>& channel_quality, double w) {
    if (spatial_streams < 1) throw std::invalid_argument("schedule_learned: streams must be >= 1");
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("schedule_learned: w out of [0,1]");
    return take(order_learned(queues, now_ms, channel_quality, w), spatial_streams,
                static_cast<long>(now_ms));
}

LatencyStats latency_stats(const std::vector<Packet>& packets) {
    if (packets.empty()) throw std::invalid_argument("latency_stats: no packets");
    std::vector<double> lat;
    for (const Packet& p : packets)
        if (p.delivered_ms) lat.push_back(*p.delivered_ms - p.arrival_ms);
    if (lat.empty()) throw std::runtime_error("latency_stats: nothing delivered");
    std::sort(lat.begin(), lat.end());
    auto pct = [&](double p) {
        const double h = p * static_cast<double>(lat.size() - 1);
        const size_t lo = static_cast<size_t>(h);
        const size_t hi = std::min(lo + 1, lat.size() - 1);
        return lat[lo] + (h - static_cast<double>(lo)) * (lat[hi] - lat[lo]);
    };
    LatencyStats st;
    st.n_delivered = lat.size();
    st.mean_ms = std::accumulate(lat.begin(), lat.end(), 0.0) / lat.size();
    st.p50 = pct(0.50);
    st.p90 = pct(0.90);
    st.p99 = pct(0.99);
    st.iqr = pct(0.75) - pct(0.25);
    return st;
}

double success_rate(const std::vector<Packet>& packets) {
    if (packets.empty()) throw std::invalid_argument("success_rate: no packets");
    size_t ok = 0;
    for (const Packet& p : packets)
        if (p.delivered_ms && *p.delivered_ms - p.arrival_ms <= p.deadline_ms) ++ok;
    return 100.0 * static_cast<double>(ok) / static_cast<double>(packets.size());
}

// ---------------------------------------------------------------------------
// Frame loop
// ---------------------------------------------------------------------------

namespace {

// Per-device channel column advanced lazily. The Gauss-Markov chain composes
// exactly across skipped frames: rho_eff = rho^dt with a single fresh
// innovation, which has the same joint law as stepping every frame.
struct LazyChannel {
    int N = 0;
    std::vector<cplx> h;  // N x K column-major
    std::vector<long> last_frame;
    std::vector<double> rho;  // per-frame aging coefficient
    std::vector<double> beta, r, theta;
    std::vector<RngStream> dev_rng;

    cplx* col(int k) { return h.data() + static_cast<size_t>(k) * N; }

    void advance(int k, long frame) {
        if (frame <= last_frame[k]) return;
        if (rho[k] < 1.0) {
            const double re = std::pow(rho[k], static_cast<double>(frame - last_frame[k]));
            std::vector<cplx> fresh(N);
            draw_column(fresh.data(), N, beta[k], r[k], theta[k], dev_rng[k]);
            const double s = std::sqrt(std::max(0.0, 1.0 - re * re));
            cplx* c = col(k);
            for (int m = 0; m < N; ++m) c[m] = re * c[m] + s * fresh[m];
        }
        last_frame[k] = frame;
    }
};

}  // namespace

SimOutputs simulate_frames(const SimConfig& cfg, const std::vector<DeviceProfile>& devices,
                           const PilotAssignment& assignment, std::vector<Packet> packets,
                           uint64_t drop_seed) {
    const int K = static_cast<int>(devices.size());
    const int N = cfg.n_antennas;
    const int tp = cfg.tau_p;
    if (static_cast<int>(assignment.assignment.size()) != K)
        throw std::invalid_argument("simulate_frames: assignment/device mismatch");
    if (tp > cfg.tau_c) throw std::invalid_argument("simulate_frames: tau_p > tau_c");

    const double nu = cfg.noise_var_w / (cfg.pilot_power_w * tp);
    const double overhead = static_cast<double>(tp) / cfg.tau_c;
    const long frames = static_cast<long>(cfg.horizon_ms / cfg.frame_ms + 0.5);

    // RNG substreams: 10 = initial channel, 20 = estimation noise,
    // 1000+k = per-device aging innovations.
    RngStream init_rng = derive_stream(drop_seed, 10);
    RngStream noise_rng = derive_stream(drop_seed, 20);

    LazyChannel ch;
    ch.N = N;
    ch.h.resize(static_cast<size_t>(N) * K);
    ch.last_frame.assign(K, 0);
    ch.rho.resize(K);
    ch.beta.resize(K);
    ch.r.resize(K);
    ch.theta.resize(K);
    ch.dev_rng.reserve(K);
    std::vector<double> recv(K), txp(K);
    for (int k = 0; k < K; ++k) {
        const DeviceProfile& d = devices[k];
        ch.beta[k] = d.beta;
        ch.r[k] = d.corr_r;
        ch.theta[k] = 3.14159265358979323846 * std::sin(d.azimuth);
        ch.rho[k] = d.doppler_hz > 0.0
                        ? aging_coefficient(d.doppler_hz, cfg.frame_ms * 1e-3)
                        : 1.0;
        draw_column(ch.col(k), N, ch.beta[k], ch.r[k], ch.theta[k], init_rng);
        ch.dev_rng.push_back(derive_stream(drop_seed, 1000 + static_cast<uint64_t>(k)));
        txp[k] = std::min(cfg.tx_power_max_w, cfg.power_ctrl_target * cfg.noise_var_w / d.beta);
        recv[k] = txp[k] * d.beta / cfg.noise_var_w;
    }

    DeviceQueues queues(K);
    size_t next_pkt = 0;

    std::vector<char> has_est(K, 0);
    std::vector<double> qhat(K, 0.0), sact(K, 0.0), fails(K, 0.0);
    CMat Y;  // N x tau_p despread observations of the last epoch
    std::vector<int> ant;  // active antenna rows (ascending)
    bool ant_chosen = false;
    CMat codebook;  // over active antennas, for the hybrid analog stage
    int rr_pos = 0;

    double se_acc = 0.0, tx_sum_acc = 0.0;
    long tx_frames = 0;

    for (long f = 0; f < frames; ++f) {
        const double now = static_cast<double>(f) * cfg.frame_ms;

        while (next_pkt < packets.size() && packets[next_pkt].arrival_ms <= now) {
            const Packet& p = packets[next_pkt];
            queues[p.device_id].push_back(
                {static_cast<int>(next_pkt), p.arrival_ms, p.arrival_ms + p.deadline_ms});
            ++next_pkt;
        }
        for (auto& q : queues)
            while (!q.empty() && q.front().expiry_ms <= now) q.pop_front();

        if (f % cfg.pilot_frame_period == 0) {
            // Estimation epoch over devices that actually have queued traffic.
            std::vector<int> active;
            for (int k = 0; k < K; ++k)
                if (!queues[k].empty()) active.push_back(k);
            std::fill(has_est.begin(), has_est.end(), 0);
            if (!active.empty()) {
                for (int k : active) ch.advance(k, f);
                Y = CMat(N, tp);
                const double nstd = std::sqrt(nu);
                for (int t = 0; t < tp; ++t) {
                    cplx* y = Y.col(t);
                    for (int m = 0; m < N; ++m) y[m] = nstd * noise_rng.next_cnormal();
                }
                std::vector<double> pilot_sum(tp, 0.0);
                for (int k : active) {
                    const int t = assignment.assignment[k];
                    const cplx* h = ch.col(k);
                    cplx* y = Y.col(t);
                    for (int m = 0; m < N; ++m) y[m] += h[m];
                    pilot_sum[t] += ch.beta[k];
                }
                for (int k : active) {
                    sact[k] = pilot_sum[assignment.assignment[k]] - ch.beta[k];
                    qhat[k] = ch.beta[k] / (ch.beta[k] + sact[k] + nu);
                    has_est[k] = 1;
                }
                for (double& x : fails) x = std::max(0.0, x - 1.0);
                if (!ant_chosen) {
                    if (cfg.antenna_selection) {
                        const std::vector<double> u = antenna_utilities(Y);
                        const std::vector<double> pw(N, cfg.p_antenna_w);
                        const AntennaSelection sel =
                            antenna_select_exact(u, pw, cfg.antenna_budget_w);
                        for (int m = 0; m < N; ++m)
                            if (sel.active[m]) ant.push_back(m);
                    } else {
                        ant.resize(N);
                        std::iota(ant.begin(), ant.end(), 0);
                    }
                    if (cfg.combiner == CombinerMethod::HYBRID)
                        codebook = dft_codebook(static_cast<int>(ant.size()));
                    ant_chosen = true;
                }
            }
        }

        if (!ant_chosen) continue;
        const int nact = static_cast<int>(ant.size());
        const double gain = (cfg.combiner == CombinerMethod::HYBRID ? 0.5 : 1.0) * nact;

        // Link admission on the predicted post-combining SNR.
        DeviceQueues eligible(K);
        bool any = false;
        for (int k = 0; k < K; ++k) {
            if (queues[k].empty() || !has_est[k]) continue;
            if (recv[k] * qhat[k] * gain < cfg.admission_threshold) continue;
            eligible[k].push_back(queues[k].front());  // orderings only read the head
            any = true;
        }
        if (!any) continue;

        std::vector<int> cand;
        if (cfg.scheduler == SchedulerKind::round_robin) {
            cand = order_round_robin(eligible, rr_pos);
        } else if (cfg.scheduler == SchedulerKind::delay_aware) {
            cand = order_delay_aware(eligible, now);
        } else {
            // channel quality = predicted SNR, de-duplicated per pilot (only
            // the strongest co-pilot keeps its score) and demoted by recent
            // delivery failures (ACK feedback).
            std::vector<double> cq(K, 0.0);
            std::vector<int> best_on_pilot(tp, -1);
            std::vector<int> elig;
            for (int k = 0; k < K; ++k)
                if (!eligible[k].empty()) elig.push_back(k);
            for (int k : elig) {
                int& b = best_on_pilot[assignment.assignment[k]];
                if (b < 0 || recv[k] * qhat[k] > recv[b] * qhat[b]) b = k;
            }
            for (int k : elig) {
                const double pred = recv[k] * qhat[k] * gain;
                const double dedup = best_on_pilot[assignment.assignment[k]] == k ? 1.0 : 1e-3;
                cq[k] = pred * dedup * std::pow(0.01, std::min(fails[k], 3.0));
            }
            cand = order_learned(eligible, now, cq, cfg.learned_w);
        }

        // One grant per pilot (co-pilot estimates are colinear).
        std::vector<int> grant;
        std::vector<char> pilot_used(tp, 0);
        for (int k : cand) {
            const int t = assignment.assignment[k];
            if (pilot_used[t]) continue;
            pilot_used[t] = 1;
            grant.push_back(k);
            if (static_cast<int>(grant.size()) == cfg.spatial_streams) break;
        }
        if (grant.empty()) continue;
        if (cfg.scheduler == SchedulerKind::round_robin) rr_pos = (grant.back() + 1) % K;

        const int S = static_cast<int>(grant.size());
        for (int k : grant) ch.advance(k, f);

        CMat Hg(nact, S), Ht(nact, S);
        std::vector<double> pg(S);
        for (int i = 0; i < S; ++i) {
            const int k = grant[i];
            const cplx* ye = Y.col(assignment.assignment[k]);
            const cplx* ht = ch.col(k);
            for (int j = 0; j < nact; ++j) {
                Hg(j, i) = ye[ant[j]];
                Ht(j, i) = ht[ant[j]];
            }
            pg[i] = txp[k];
        }

        CombinerMatrix V;
        CMat Ht_eff;
        const CMat* Huse = &Ht;
        if (cfg.combiner == CombinerMethod::HYBRID) {
            const int n_rf = std::min(cfg.n_rf, nact);
            const HybridStage st = hybrid_select(Hg, codebook, n_rf);
            Ht_eff = adjoint_times(st.F, Ht);
            Huse = &Ht_eff;
            double tr = 0.0;
            for (int i = 0; i < S; ++i)
                for (int j = 0; j < n_rf; ++j) tr += std::norm(st.effective(j, i));
            V = zf(st.effective, 1e-10 * tr / S);
            V.method = CombinerMethod::HYBRID;
        } else if (cfg.combiner == CombinerMethod::ZF) {
            double tr = 0.0;
            for (const cplx& v : Hg.a) tr += std::norm(v);
            V = zf(Hg, 1e-10 * tr / S);
        } else {
            V = mrc(Hg);
        }

        const std::vector<double> sinr = uplink_sinr(*Huse, V, pg, cfg.noise_var_w);
        double tx_used = 0.0;
        for (int i = 0; i < S; ++i) {
            const int k = grant[i];
            tx_used += pg[i];
            if (sinr[i] >= cfg.sinr_min) {
                const QueuedPacket qp = queues[k].front();
                queues[k].pop_front();
                packets[qp.packet_idx].delivered_ms = now + cfg.frame_ms;
                se_acc += (1.0 - overhead) * std::log2(1.0 + sinr[i]);
            } else {
                fails[k] += 1.0;
            }
        }
        tx_sum_acc += tx_used;
        ++tx_frames;
    }

    SimOutputs out;
    out.packets = std::move(packets);
    out.se_cell = se_acc / static_cast<double>(frames);
    out.avg_tx_sum_w = tx_frames > 0 ? tx_sum_acc / static_cast<double>(tx_frames) : 0.0;
    out.n_active_antennas = ant_chosen ? static_cast<int>(ant.size()) : N;
    out.frames = frames;
    return out;
}

}  // namespace mmimo
