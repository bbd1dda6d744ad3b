#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

#include "fvote/error.hpp"
#include "fvote/profile.hpp"

namespace fvote {

namespace {

using boost::multiprecision::cpp_int;

/// (2k+1) C(2k,k) in exact integers, advanced one k at a time.
class CentralTerm {
public:
    void advance_to(unsigned k) {
        while (k_ < k) {
            ++k_;
            central_ = central_ * 2 * (2 * k_ - 1) / k_;  // C(2k,k) from C(2k-2,k-1); exact
        }
    }
    cpp_int numerator() const { return central_ * (2 * k_ + 1); }
    unsigned k() const { return k_; }

private:
    unsigned k_ = 0;
    cpp_int central_ = 1;
};

struct ExactBounds {
    bool lower = false;
    bool upper = false;
};

/// f'(1/2) = N / 4^k with N = (2k+1) C(2k,k). Squaring both sides keeps the
/// comparisons with 1.05 sqrt(k) and 2 sqrt(k) in the integers.
ExactBounds exact_bounds(const CentralTerm& t) {
    const unsigned k = t.k();
    const cpp_int n = t.numerator();
    const cpp_int n2 = n * n;
    const cpp_int pow16 = cpp_int(1) << (4 * k);
    ExactBounds b;
    b.lower = n2 * 10000 >= cpp_int(11025) * k * pow16;
    b.upper = n2 <= cpp_int(4) * k * pow16;
    return b;
}

long double central_slope(unsigned k) {
    long double r = 1.0L;
    for (unsigned j = 1; j <= k; ++j) {
        r *= static_cast<long double>(2 * j - 1) / static_cast<long double>(2 * j);
    }
    return static_cast<long double>(2 * k + 1) * r;
}

} // namespace

BokConstants bok_growing_constants(unsigned k, bool with_second_derivative) {
    if (k < 1) throw InvalidParam("best-of-(2k+1) constants need k >= 1");
    BokConstants c;
    c.k = k;
    const long double slope = central_slope(k);
    c.f1_half = static_cast<double>(slope);

    CentralTerm term;
    term.advance_to(k);
    const ExactBounds exact = exact_bounds(term);
    c.lower_ok = exact.lower;
    c.upper_ok = exact.upper;
    c.upper_sqrt_pi_ok =
        slope <= 3.0L * std::sqrt(static_cast<long double>(k) / std::numbers::pi_v<long double>);

    const BetrayalSpec f = BetrayalSpec::best_of(2 * k + 1);
    c.f1_max = maximize_abs([&f](double x) { return f.d1(x); });
    c.f1_peak_at_half = std::abs(c.f1_max.argmax - 0.5) <= 1e-6 &&
                        c.f1_max.value <= c.f1_half * (1.0 + 1e-12);
    if (with_second_derivative) {
        c.f2_max = maximize_abs([&f](double x) { return f.d2(x); });
        c.f2_ok = c.f2_max.upper() < 1.6 * k;
    }
    return c;
}

BokThresholds bok_threshold_scan(unsigned k_max, bool with_second_derivative) {
    if (k_max < 1) throw InvalidParam("threshold scan needs k_max >= 1");
    BokThresholds t;
    t.k_max = k_max;
    CentralTerm term;
    for (unsigned k = 1; k <= k_max; ++k) {
        term.advance_to(k);
        const ExactBounds b = exact_bounds(term);
        if (!b.lower) t.lower_failures.push_back(k);
        if (!b.upper) t.upper_failures.push_back(k);
        if (with_second_derivative) {
            const BetrayalSpec f = BetrayalSpec::best_of(2 * k + 1);
            const MaxEstimate m = maximize_abs([&f](double x) { return f.d2(x); });
            if (!(m.upper() < 1.6 * k)) t.second_derivative_failures.push_back(k);
        }
    }
    auto threshold = [k_max](const std::vector<unsigned>& failures) -> std::optional<unsigned> {
        if (failures.empty()) return 1u;
        if (failures.back() == k_max) return std::nullopt;
        return failures.back() + 1;
    };
    t.lower = threshold(t.lower_failures);
    t.upper = threshold(t.upper_failures);
    if (with_second_derivative) t.second_derivative = threshold(t.second_derivative_failures);
    return t;
}

} // namespace fvote
