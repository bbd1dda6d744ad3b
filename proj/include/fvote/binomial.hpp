#pragma once

#include <cstdint>

namespace fvote {

/// Pr[Bin(n, x) = i]. Uses Loader's saddle-point form, so the relative error
/// stays near machine precision for n in the millions.
double binomial_pmf(std::uint64_t n, std::uint64_t i, double x);

/// Pr[Bin(n, x) >= m]. Sums outward from the largest term with the ratio
/// recurrence in long double and Neumaier-compensated accumulation.
double binomial_upper_tail(std::uint64_t n, std::uint64_t m, double x);

/// log C(2k, k) - k log 4, the central binomial mass (2k choose k) / 4^k in log space.
double log_central_binomial_mass(std::uint64_t k);

} // namespace fvote
