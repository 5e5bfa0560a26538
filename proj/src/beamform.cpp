#include "mmimo/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace mmimo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

CombinerMatrix mrc(const CMat& H_hat) {
    for (int k = 0; k < H_hat.cols; ++k) {
        const cplx* h = H_hat.col(k);
        double e = 0.0;
        for (int m = 0; m < H_hat.rows; ++m) e += std::norm(h[m]);
        if (e == 0.0) throw std::invalid_argument("mrc: zero channel column");
    }
    return CombinerMatrix{H_hat, CombinerMethod::MRC};
}

CombinerMatrix zf(const CMat& H_hat, double ridge) {
    const int N = H_hat.rows, K = H_hat.cols;
    if (K > N) throw std::invalid_argument("zf: K > N");
    CMat G = adjoint_times(H_hat, H_hat);
    double trace = 0.0;
    for (int i = 0; i < K; ++i) trace += G(i, i).real();
    auto with_ridge = [&](double rd) {
        CMat Gr = G;
        for (int i = 0; i < K; ++i) Gr(i, i) += rd;
        return hermitian_inverse(Gr);
    };
    CMat Ginv;
    try {
        Ginv = with_ridge(ridge);
    } catch (const std::runtime_error&) {
        // Gram numerically singular: raise the ridge once.
        Ginv = with_ridge(ridge + 1e-10 * trace / K);
    }
    return CombinerMatrix{times(H_hat, Ginv), CombinerMethod::ZF};
}

std::vector<double> uplink_sinr(const CMat& H_true, const CombinerMatrix& V,
                                const std::vector<double>& tx_powers, double noise_var) {
    const int K = H_true.cols;
    if (V.V.cols != K || V.V.rows != H_true.rows || static_cast<int>(tx_powers.size()) != K)
        throw std::invalid_argument("uplink_sinr: shape mismatch");
    CMat A = adjoint_times(V.V, H_true);  // K x K, A(k,j) = v_k^H h_j
    std::vector<double> out(K);
    for (int k = 0; k < K; ++k) {
        double vnorm = 0.0;
        const cplx* v = V.V.col(k);
        for (int m = 0; m < V.V.rows; ++m) vnorm += std::norm(v[m]);
        if (vnorm == 0.0) throw std::invalid_argument("uplink_sinr: zero combiner column");
        const double sig = tx_powers[k] * std::norm(A(k, k));
        double intf = 0.0;
        for (int j = 0; j < K; ++j)
            if (j != k) intf += tx_powers[j] * std::norm(A(k, j));
        out[k] = sig / (intf + noise_var * vnorm);
    }
    return out;
}

SpectralEfficiency spectral_efficiency(const std::vector<double>& sinr, double pilot_overhead) {
    if (!(pilot_overhead >= 0.0) || pilot_overhead >= 1.0)
        throw std::invalid_argument("spectral_efficiency: overhead must be in [0,1)");
    SpectralEfficiency se;
    se.per_device.reserve(sinr.size());
    for (double s : sinr) {
        const double v = (1.0 - pilot_overhead) * std::log2(1.0 + s);
        se.per_device.push_back(v);
        se.cell_sum += v;
    }
    return se;
}

CMat dft_codebook(int N) {
    if (N < 1) throw std::invalid_argument("dft_codebook: N must be >= 1");
    CMat F(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int b = 0; b < N; ++b)
        for (int m = 0; m < N; ++m)
            F(m, b) = std::polar(scale, -kTwoPi * m * b / N);
    return F;
}

HybridStage hybrid_select(const CMat& H_hat, const CMat& codebook, int n_rf) {
    const int N = H_hat.rows;
    if (codebook.rows != N) throw std::invalid_argument("hybrid_select: codebook shape mismatch");
    if (n_rf < 1 || n_rf > codebook.cols) throw std::invalid_argument("hybrid_select: bad n_rf");

    // Captured energy per beam; greedy selection with independent marginals
    // reduces to the top-n_rf beams (ties resolved toward lower index).
    CMat P = adjoint_times(codebook, H_hat);  // beams x K
    std::vector<double> energy(codebook.cols, 0.0);
    for (int b = 0; b < codebook.cols; ++b)
        for (int k = 0; k < H_hat.cols; ++k) energy[b] += std::norm(P(b, k));
    std::vector<int> idx(codebook.cols);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return energy[a] > energy[b]; });
    std::vector<int> beams(idx.begin(), idx.begin() + n_rf);
    std::sort(beams.begin(), beams.end());

    HybridStage st;
    st.beams = beams;
    st.F = CMat(N, n_rf);
    st.effective = CMat(n_rf, H_hat.cols);
    for (int j = 0; j < n_rf; ++j) {
        const cplx* src = codebook.col(beams[j]);
        std::copy(src, src + N, st.F.col(j));
        for (int k = 0; k < H_hat.cols; ++k) st.effective(j, k) = P(beams[j], k);
    }
    return st;
}

AntennaSelection antenna_select_exact(const std::vector<double>& utilities,
                                      const std::vector<double>& powers_w, double budget_w) {
    const int n = static_cast<int>(utilities.size());
    if (powers_w.size() != utilities.size())
        throw std::invalid_argument("antenna_select_exact: length mismatch");
    if (budget_w < 0.0) throw std::invalid_argument("antenna_select_exact: negative budget");
    for (int i = 0; i < n; ++i) {
        if (utilities[i] < 0.0) throw std::invalid_argument("antenna_select_exact: negative utility");
        if (!(powers_w[i] > 0.0)) throw std::invalid_argument("antenna_select_exact: powers must be > 0");
    }

    // Items in value-density order for tight fractional bounds.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return utilities[a] * powers_w[b] > utilities[b] * powers_w[a];
    });

    std::vector<char> cur(n, 0), best(n, 0);
    double best_value = -1.0, best_power = 0.0;
    std::vector<int> best_set;

    // Slack bookkeeping accumulates rounding error (powers like 0.2 are not
    // binary-representable), so all feasibility/tie comparisons carry eps.
    constexpr double eps = 1e-12;
    auto consider = [&](double value, double power) {
        std::vector<int> set;
        for (int i = 0; i < n; ++i)
            if (cur[i]) set.push_back(i);
        const bool better = value > best_value + eps ||
                            (std::abs(value - best_value) <= eps &&
                             (power < best_power - eps ||
                              (std::abs(power - best_power) <= eps && set < best_set)));
        if (better) {
            best_value = value;
            best_power = power;
            best_set = std::move(set);
            for (int i = 0; i < n; ++i) best[i] = cur[i];
        }
    };

    // DFS over the density-sorted items with a fractional-knapsack bound.
    auto bound = [&](int depth, double value, double slack) {
        double b = value;
        for (int i = depth; i < n; ++i) {
            const int it = order[i];
            if (powers_w[it] <= slack + eps) {
                slack -= powers_w[it];
                b += utilities[it];
            } else {
                b += utilities[it] * (slack / powers_w[it]);
                break;
            }
        }
        return b;
    };

    std::function<void(int, double, double)> dfs = [&](int depth, double value, double slack) {
        if (depth == n) {
            consider(value, budget_w - slack);
            return;
        }
        if (bound(depth, value, slack) < best_value - eps) return;
        const int it = order[depth];
        if (powers_w[it] <= slack + eps) {
            cur[it] = 1;
            dfs(depth + 1, value + utilities[it], slack - powers_w[it]);
            cur[it] = 0;
        }
        dfs(depth + 1, value, slack);
    };
    dfs(0, 0.0, budget_w);

    AntennaSelection sel;
    sel.active.assign(n, false);
    for (int i = 0; i < n; ++i) sel.active[i] = best[i] != 0;
    sel.utilities = utilities;
    sel.powers_w = powers_w;
    sel.budget_w = budget_w;
    sel.value = std::max(best_value, 0.0);
    sel.total_power_w = best_power;
    return sel;
}

std::vector<double> antenna_utilities(const CMat& H_hat) {
    std::vector<double> u(H_hat.rows, 0.0);
    for (int k = 0; k < H_hat.cols; ++k) {
        const cplx* h = H_hat.col(k);
        for (int m = 0; m < H_hat.rows; ++m) u[m] += std::norm(h[m]);
    }
    return u;
}

}  // namespace mmimo
