#include "mmimo/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmimo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

CMat build_pilot_book(int tau_p) {
    if (tau_p < 1) throw std::invalid_argument("build_pilot_book: tau_p must be >= 1");
    CMat phi(tau_p, tau_p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(tau_p));
    for (int c = 0; c < tau_p; ++c)
        for (int r = 0; r < tau_p; ++r)
            phi(r, c) = std::polar(scale, -kTwoPi * r * c / tau_p);
    return phi;
}

PilotAssignment assign_random(int K, int tau_p, RngStream& rng) {
    if (K < 1 || tau_p < 1) throw std::invalid_argument("assign_random: K and tau_p must be >= 1");
    PilotAssignment pa;
    pa.tau_p = tau_p;
    pa.assignment.resize(K);
    for (int k = 0; k < K; ++k)
        pa.assignment[k] = static_cast<int>(rng.next_below(static_cast<uint64_t>(tau_p)));
    return pa;
}

std::vector<double> rank_norm(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
        for (size_t t = i; t <= j; ++t) rank[order[t]] = avg;
        i = j + 1;
    }
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (double& x : rank) x /= denom;
    return rank;
}

PilotAssignment assign_greedy(const std::vector<DeviceProfile>& devices, int tau_p) {
    const int K = static_cast<int>(devices.size());
    if (K < 1 || tau_p < 1) throw std::invalid_argument("assign_greedy: K and tau_p must be >= 1");
    std::vector<double> beta(K), dop(K);
    for (int k = 0; k < K; ++k) {
        beta[k] = devices[k].beta;
        dop[k] = devices[k].doppler_hz;
    }
    const std::vector<double> rb = rank_norm(beta);
    const std::vector<double> rd = rank_norm(dop);
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = 0.5 * rb[a] + 0.5 * rd[a];
        const double sb = 0.5 * rb[b] + 0.5 * rd[b];
        if (sa != sb) return sa > sb;
        return devices[a].id < devices[b].id;
    });
    PilotAssignment pa;
    pa.tau_p = tau_p;
    pa.assignment.resize(K);
    const int cap = (K + tau_p - 1) / tau_p;
    for (int i = 0; i < K; ++i) pa.assignment[order[i]] = std::min(i / cap, tau_p - 1);
    return pa;
}

namespace {

double pci_of(const std::vector<int>& asg, const std::vector<double>& betas, double nu, int tau_p) {
    std::vector<double> groupsum(tau_p, 0.0);
    for (size_t k = 0; k < asg.size(); ++k) groupsum[asg[k]] += betas[k];
    double total = 0.0;
    for (size_t k = 0; k < asg.size(); ++k) {
        const double s = groupsum[asg[k]] - betas[k];
        total += s / (betas[k] + s + nu);
    }
    return total / static_cast<double>(asg.size());
}

// numpy-style linear-interpolation quantile of a sorted copy.
double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(h);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

PilotAssignment assign_qlearning(const std::vector<DeviceProfile>& devices, int tau_p,
                                 int episodes, RngStream& rng, double pilot_power,
                                 double noise_var) {
    const int K = static_cast<int>(devices.size());
    if (K < 1 || episodes < 1)
        throw std::invalid_argument("assign_qlearning: K and episodes must be >= 1");
    const double nu = noise_var / (pilot_power * tau_p);
    const int cap = (K + tau_p - 1) / tau_p;

    std::vector<double> betas(K);
    for (int k = 0; k < K; ++k) betas[k] = devices[k].beta;
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return betas[a] > betas[b]; });

    // State: (load bucket {0,1,2,>=3}, interference-sum quantile) of the
    // candidate pilot. Credit is the Monte Carlo episode return -PCI(final),
    // propagated to every visited state; the myopic per-placement delta
    // provably converges to pilot spreading, which the acceptance behavior
    // rules out (see README).
    // Pessimistic init: returns live in (-1, 0], so unvisited states never
    // outrank states the greedy policy has actually exercised.
    double Q[4][4];
    for (auto& row : Q)
        for (double& q : row) q = -1.0;

    auto run_episode = [&](double eps, bool learn, std::vector<int>& asg,
                           std::vector<std::pair<int, int>>* path) {
        std::vector<double> T(tau_p, 0.0);
        std::vector<int> m(tau_p, 0);
        for (int k : order) {
            std::vector<int> valid;
            valid.reserve(tau_p);
            for (int t = 0; t < tau_p; ++t)
                if (m[t] < cap) valid.push_back(t);
            std::vector<double> tv(valid.size());
            for (size_t i = 0; i < valid.size(); ++i) tv[i] = T[valid[i]];
            const double q25 = quantile(tv, 0.25), q50 = quantile(tv, 0.5), q75 = quantile(tv, 0.75);
            auto bucket = [&](double t) {
                int b = 0;
                if (t >= q25) ++b;
                if (t >= q50) ++b;
                if (t >= q75) ++b;
                return b;
            };
            size_t pick;
            bool explored = false;
            if (learn && rng.next_double() < eps) {
                pick = static_cast<size_t>(rng.next_below(valid.size()));
                explored = true;
            } else {
                std::vector<double> qv(valid.size());
                double qmax = -1e300;
                for (size_t i = 0; i < valid.size(); ++i) {
                    qv[i] = Q[std::min(m[valid[i]], 3)][bucket(tv[i])];
                    qmax = std::max(qmax, qv[i]);
                }
                // among near-max Q: highest interference sum, then lowest index
                pick = valid.size();
                for (size_t i = 0; i < valid.size(); ++i) {
                    if (qv[i] < qmax - 1e-15) continue;
                    if (pick == valid.size() || tv[i] > tv[pick]) pick = i;
                }
            }
            const int t = valid[pick];
            // On-policy credit: only exploitation picks shape the value table,
            // so states never chosen greedily keep their pessimistic prior.
            if (path && !explored) path->emplace_back(std::min(m[t], 3), bucket(T[t]));
            asg[k] = t;
            T[t] += betas[k];
            ++m[t];
        }
    };

    std::vector<int> asg(K);
    std::vector<std::pair<int, int>> path;
    for (int e = 0; e < episodes; ++e) {
        const double eps =
            episodes > 1 ? 1.0 + (0.05 - 1.0) * static_cast<double>(e) / (episodes - 1) : 1.0;
        path.clear();
        run_episode(eps, true, asg, &path);
        const double G = -pci_of(asg, betas, nu, tau_p);
        for (const auto& s : path) Q[s.first][s.second] += 0.1 * (G - Q[s.first][s.second]);
    }
    run_episode(0.0, false, asg, nullptr);

    PilotAssignment pa;
    pa.tau_p = tau_p;
    pa.assignment = std::move(asg);
    return pa;
}

EstimationResult estimate(const ChannelRealization& H_true, const PilotAssignment& assignment,
                          const std::vector<double>& betas, double pilot_power, double noise_var,
                          EstMethod method, RngStream& rng) {
    const int N = H_true.H.rows;
    const int K = H_true.H.cols;
    if (static_cast<int>(assignment.assignment.size()) != K ||
        static_cast<int>(betas.size()) != K)
        throw std::invalid_argument("estimate: shape mismatch");
    const int tp = assignment.tau_p;
    const double nu = noise_var / (pilot_power * tp);
    const double nstd = std::sqrt(nu);

    // Despread observations per pilot: y_t = sum of co-pilot channels + noise.
    CMat Y(N, tp);
    for (int t = 0; t < tp; ++t) {
        cplx* y = Y.col(t);
        for (int m = 0; m < N; ++m) y[m] = nstd * rng.next_cnormal();
    }
    for (int k = 0; k < K; ++k) {
        cplx* y = Y.col(assignment.assignment[k]);
        const cplx* h = H_true.H.col(k);
        for (int m = 0; m < N; ++m) y[m] += h[m];
    }

    std::vector<double> copilot_sum(tp, 0.0);
    for (int k = 0; k < K; ++k) copilot_sum[assignment.assignment[k]] += betas[k];

    EstimationResult res;
    res.method = method;
    res.H_hat = CMat(N, K);
    res.nmse.resize(K);
    for (int k = 0; k < K; ++k) {
        const int t = assignment.assignment[k];
        double c;
        if (method == EstMethod::LS) {
            c = 1.0;
        } else if (method == EstMethod::MMSE) {
            c = betas[k] / (copilot_sum[t] + nu);
        } else {
            throw std::invalid_argument("estimate: unknown method");
        }
        const cplx* y = Y.col(t);
        const cplx* h = H_true.H.col(k);
        cplx* hh = res.H_hat.col(k);
        double err = 0.0;
        for (int m = 0; m < N; ++m) {
            hh[m] = c * y[m];
            err += std::norm(hh[m] - h[m]);
        }
        res.nmse[k] = err / (N * betas[k]);
    }
    return res;
}

double pci(const PilotAssignment& assignment, const std::vector<double>& betas,
           double pilot_power, double noise_var, int tau_p) {
    const double nu = noise_var / (pilot_power * tau_p);
    return pci_of(assignment.assignment, betas, nu, tau_p);
}

}  // namespace mmimo
