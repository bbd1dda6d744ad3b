#include "fvote/binomial.hpp"

#include <array>
#include <cmath>

namespace fvote {

namespace {

constexpr long double kLn2Pi = 1.837877066409345483560659472811235279722794947275566825634L;

/// Stirling remainder: log(n!) - (n + 1/2) log n + n - log(sqrt(2 pi)).
long double stirlerr(long double n) {
    static const std::array<long double, 16> table = [] {
        std::array<long double, 16> t{};
        t[0] = 0.0L;  // unused; n = 0 never reaches here
        for (int i = 1; i < 16; ++i) {
            const long double x = i;
            t[static_cast<std::size_t>(i)] =
                std::lgamma(x + 1.0L) - (x + 0.5L) * std::log(x) + x - 0.5L * kLn2Pi;
        }
        return t;
    }();
    if (n < 16.0L) {
        return table[static_cast<std::size_t>(n)];
    }
    constexpr long double s0 = 1.0L / 12.0L;
    constexpr long double s1 = 1.0L / 360.0L;
    constexpr long double s2 = 1.0L / 1260.0L;
    constexpr long double s3 = 1.0L / 1680.0L;
    constexpr long double s4 = 1.0L / 1188.0L;
    const long double nn = n * n;
    if (n > 500.0L) return (s0 - s1 / nn) / n;
    if (n > 80.0L) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35.0L) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

/// Deviance term x log(x / np) + np - x, evaluated without cancellation.
long double bd0(long double x, long double np) {
    if (std::fabs(x - np) < 0.1L * (x + np)) {
        long double v = (x - np) / (x + np);
        long double s = (x - np) * v;
        long double ej = 2.0L * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const long double s1 = s + ej / static_cast<long double>(2 * j + 1);
            if (s1 == s) {
                return s1;
            }
            s = s1;
        }
    }
    return x * std::log(x / np) + np - x;
}

long double pmf_ld(std::uint64_t n, std::uint64_t i, long double p) {
    const long double q = 1.0L - p;
    if (i > n) return 0.0L;
    if (p <= 0.0L) return i == 0 ? 1.0L : 0.0L;
    if (q <= 0.0L) return i == n ? 1.0L : 0.0L;
    const auto nl = static_cast<long double>(n);
    if (i == 0) {
        if (n == 0) return 1.0L;
        const long double lc = p < 0.1L ? -bd0(nl, nl * q) - nl * p : nl * std::log(q);
        return std::exp(lc);
    }
    if (i == n) {
        const long double lc = q < 0.1L ? -bd0(nl, nl * p) - nl * q : nl * std::log(p);
        return std::exp(lc);
    }
    const auto xl = static_cast<long double>(i);
    const long double lc = stirlerr(nl) - stirlerr(xl) - stirlerr(nl - xl) - bd0(xl, nl * p) -
                           bd0(nl - xl, nl * q);
    const long double lf = kLn2Pi + std::log(xl) + std::log1p(-xl / nl);
    return std::exp(lc - 0.5L * lf);
}

struct Neumaier {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    long double value() const { return sum + comp; }
};

} // namespace

double binomial_pmf(std::uint64_t n, std::uint64_t i, double x) {
    return static_cast<double>(pmf_ld(n, i, x));
}

double binomial_upper_tail(std::uint64_t n, std::uint64_t m, double x) {
    if (m == 0) return 1.0;
    if (m > n) return 0.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const long double p = x;
    const long double q = 1.0L - p;
    const long double odds = p / q;

    auto mode = static_cast<std::uint64_t>(std::floor(static_cast<long double>(n + 1) * p));
    if (mode > n) mode = n;
    const std::uint64_t start = mode > m ? mode : m;
    const long double t0 = pmf_ld(n, start, p);
    if (t0 == 0.0L) {
        return 0.0;
    }
    constexpr long double cutoff = 1e-21L;
    Neumaier acc;
    acc.add(t0);
    long double t = t0;
    for (std::uint64_t i = start; i < n; ++i) {
        t *= static_cast<long double>(n - i) / static_cast<long double>(i + 1) * odds;
        acc.add(t);
        if (t < cutoff * acc.sum) break;
    }
    t = t0;
    for (std::uint64_t i = start; i > m; --i) {
        t *= static_cast<long double>(i) / static_cast<long double>(n - i + 1) / odds;
        acc.add(t);
        if (t < cutoff * acc.sum) break;
    }
    const long double v = acc.value();
    return static_cast<double>(v > 1.0L ? 1.0L : v);
}

double log_central_binomial_mass(std::uint64_t k) {
    if (k == 0) return 0.0;
    // (2k choose k) / 4^k = pmf(2k, k, 1/2)
    return static_cast<double>(std::log(pmf_ld(2 * k, k, 0.5L)));
}

} // namespace fvote
