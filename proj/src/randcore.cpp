#include "mmimo/randcore.hpp"

#include <cmath>
#include <stdexcept>

namespace mmimo {

namespace {
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

RngStream derive_stream(uint64_t master_seed, uint64_t stream_id) {
    RngStream r;
    r.stream_id = stream_id;
    // SplitMix64 walk starting from a state that folds in the stream id.
    uint64_t x = master_seed + kGolden * (stream_id + 1);
    for (auto& w : r.s) {
        x += kGolden;
        w = mix64(x);
    }
    if (r.s[0] == 0 && r.s[1] == 0 && r.s[2] == 0 && r.s[3] == 0) r.s[0] = 1;
    return r;
}

uint64_t RngStream::next_u64() {
    // xoshiro256++
    const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

double RngStream::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::next_double_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (have_spare) {
        have_spare = false;
        return spare;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double z0 = r * std::cos(kTwoPi * u2);
    spare = r * std::sin(kTwoPi * u2);
    have_spare = true;
    return z0;
}

cplx RngStream::next_cnormal() {
    const double re = next_normal();
    const double im = next_normal();
    return cplx(re, im) * 0.7071067811865475244;
}

double RngStream::next_exponential(double mean) { return -mean * std::log(next_double_open()); }

uint64_t RngStream::next_below(uint64_t n) {
    // Lemire-style rejection-free enough for our n << 2^64 use; use simple
    // modulo rejection to stay exactly uniform.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

std::vector<double> draw_std_normal(RngStream& rng, size_t count) {
    std::vector<double> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) out.push_back(rng.next_normal());
    return out;
}

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j0: non-finite input");
    const double ax = std::fabs(x);
    if (ax < 9.0) {
        // Power series sum_k (-x^2/4)^k / (k!)^2; worst-case cancellation at
        // x=9 keeps ~13 good digits.
        const double q = -0.25 * ax * ax;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
        }
        return sum;
    }
    // Hankel asymptotic expansion, optimally truncated (error ~ e^{-2x}).
    const double inv = 1.0 / ax;
    double p = 1.0, q = 0.0;
    double term = 1.0;  // A_m / ax^m with alternating signs folded in below
    double prev = 1e300;
    for (int m = 1; m <= 40; ++m) {
        const double odd = 2.0 * m - 1.0;
        term *= odd * odd / (8.0 * m) * inv;
        if (std::fabs(term) > prev) break;  // series started diverging
        prev = std::fabs(term);
        const int r = m % 4;
        if (r == 1) q -= term;
        else if (r == 2) p -= term;
        else if (r == 3) q += term;
        else p += term;
        if (prev < 1e-17) break;
    }
    const double chi = ax - 0.78539816339744830962;
    return std::sqrt(2.0 / (3.14159265358979323846 * ax)) *
           (p * std::cos(chi) - q * std::sin(chi));
}

CMat cholesky_psd(const CMat& R) {
    if (R.rows != R.cols) throw std::invalid_argument("cholesky_psd: not square");
    const int n = R.rows;
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += R(i, i).real();
    const double jitter = 1e-12 * trace / n;

    for (int attempt = 0; attempt < 2; ++attempt) {
        CMat L(n, n);
        const double bump = attempt == 0 ? 0.0 : jitter;
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            double d = R(j, j).real() + bump;
            for (int k = 0; k < j; ++k) d -= std::norm(L(j, k));
            if (d <= 0.0) {
                if (d > -1e-14 * (trace / n + 1.0) && attempt == 1) {
                    d = 0.0;  // exactly semidefinite after jitter: zero pivot
                } else {
                    ok = false;
                    break;
                }
            }
            const double piv = std::sqrt(d);
            L(j, j) = piv;
            for (int i = j + 1; i < n; ++i) {
                cplx s = R(i, j);
                for (int k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
                L(i, j) = piv > 0.0 ? s / piv : cplx(0.0, 0.0);
            }
        }
        if (ok) return L;
    }
    throw std::runtime_error("cholesky_psd: not PSD");
}

double lgamma_lanczos(double x) {
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double c[9] = {0.99999999999980993,     676.5203681218851,
                                -1259.1392167224028,     771.32342877765313,
                                -176.61502916214059,     12.507343278686905,
                                -0.13857109526572012,    9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        const double pi = 3.14159265358979323846;
        return std::log(pi / std::sin(pi * x)) - lgamma_lanczos(1.0 - x);
    }
    x -= 1.0;
    double a = c[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
    return 0.91893853320467274178 + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace {
// Continued fraction for I_x(a,b) by the modified Lentz method.
double betacf(double a, double b, double x) {
    const double eps = 1e-15, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}
}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_incomplete_beta: a,b must be > 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("reg_incomplete_beta: x out of [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lnbt = lgamma_lanczos(a + b) - lgamma_lanczos(a) - lgamma_lanczos(b) +
                        a * std::log(x) + b * std::log(1.0 - x);
    const double bt = std::exp(lnbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace mmimo
