#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fvote/betrayal.hpp"

namespace fvote {

/// Numerical maximum of |h| over [0,1].
struct MaxEstimate {
    double value = 0.0;
    double argmax = 0.0;
    double error = 0.0;  // estimated amount by which value may undershoot the true max

    double upper() const noexcept { return value + error; }
};

/// Maximizes |h| on a uniform grid of `grid` intervals, then refines the best
/// bracket by golden-section search. The error estimate bounds how far an
/// unrefined cell could rise above its endpoints given the local slope.
MaxEstimate maximize_abs(const std::function<double(double)>& h, int grid = 10000);

/// Derived constants of the updating function H_f.
struct UpdatingProfile {
    std::string name;
    double eps_h = 0.0;  // H_f'(1/2) - 1
    double eps_c = 0.0;  // 1 - H_f'(0)
    MaxEstimate k1f;     // max |f'|
    MaxEstimate k2f;     // max |f''|
    MaxEstimate k1g;     // max |g'|, g = f (1 - f)
    MaxEstimate k2hf;    // max |H_f''|
    double kf = 0.0;     // max(K2(f), K2(H_f))
    bool h_prime_zero_vanishes = false;  // H_f'(0) == 0 (to 1e-12)

    /// K(f) inflated by the grid error bounds.
    double kf_upper() const noexcept { return std::max(k2f.upper(), k2hf.upper()); }
};

/// Throws NotSmooth for a betrayal function that is not C^2.
UpdatingProfile derive_profile(const BetrayalSpec& f);

/// g(x) = f(x) (1 - f(x)) and its first derivative.
double bernoulli_variance(const BetrayalSpec& f, double x);
double bernoulli_variance_d1(const BetrayalSpec& f, double x);

struct ConditionVerdict {
    bool pass = false;
    double witness = 0.0;  // the value the verdict was decided on
    std::string detail;
};

struct QuasiMajorityReport {
    std::string name;
    bool f_zero = false;      // f(0) = 0
    bool range_ok = false;    // f([0,1]) ⊆ [0,1] on the grid
    bool surjective = false;  // max f = 1 on the grid; reported, not required
    std::array<ConditionVerdict, 5> conditions{};
    bool quasi_majority = false;

    /// 1-based indices of failing conditions.
    std::vector<int> failed() const;
};

/// Checks the five quasi-majority conditions: (1) f is C^2; (2) 0 < f(1/2) < 1;
/// (3) H_f(x) < x on (0, 1/2), certified with margin 1e-9 on a 10^4 grid;
/// (4) H_f'(1/2) > 1; (5) H_f'(0) < 1. Strict inequalities in (4) and (5) are
/// also certified with margin 1e-9.
QuasiMajorityReport quasi_majority_check(const BetrayalSpec& f);

/// Constants of best-of-(2k+1) used by the growing-k analysis.
struct BokConstants {
    unsigned k = 0;
    double f1_half = 0.0;         // f'_{2k+1}(1/2) = (2k+1) C(2k,k) 4^-k
    bool lower_ok = false;        // f1_half >= 1.05 sqrt(k), decided in exact integers
    bool upper_ok = false;        // f1_half <= 2 sqrt(k), decided in exact integers
    bool upper_sqrt_pi_ok = false;  // f1_half <= 3 sqrt(k / pi)
    MaxEstimate f1_max;           // max |f'| on [0,1]
    bool f1_peak_at_half = false; // max |f'| attained at 1/2
    MaxEstimate f2_max;           // max |f''| on [0,1]
    bool f2_ok = false;           // max |f''| < 1.6 k
};

BokConstants bok_growing_constants(unsigned k, bool with_second_derivative = true);

/// For each bound, the smallest k0 such that the bound holds for every
/// k in [k0, k_max]; nullopt when it fails at k_max itself.
struct BokThresholds {
    unsigned k_max = 0;
    std::optional<unsigned> lower;
    std::optional<unsigned> upper;
    std::optional<unsigned> second_derivative;
    std::vector<unsigned> lower_failures;
    std::vector<unsigned> upper_failures;
    std::vector<unsigned> second_derivative_failures;
};

BokThresholds bok_threshold_scan(unsigned k_max, bool with_second_derivative = true);

} // namespace fvote
