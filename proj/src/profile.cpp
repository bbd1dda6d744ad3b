#include "fvote/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fvote/error.hpp"

namespace fvote {

namespace {

constexpr double kMargin = 1e-9;
constexpr int kGrid = 10000;

std::pair<double, double> golden_max(const std::function<double(double)>& h, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::abs(h(c));
    double fd = std::abs(h(d));
    for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = std::abs(h(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = std::abs(h(d));
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace

MaxEstimate maximize_abs(const std::function<double(double)>& h, int grid) {
    if (grid < 2) throw InvalidParam("maximize_abs needs at least two grid intervals");
    const double dx = 1.0 / grid;
    std::vector<double> a(static_cast<std::size_t>(grid) + 1);
    for (int i = 0; i <= grid; ++i) {
        a[static_cast<std::size_t>(i)] = std::abs(h(static_cast<double>(i) * dx));
    }
    const auto n = a.size();

    MaxEstimate best;
    const auto top = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
    best.value = a[top];
    best.argmax = static_cast<double>(top) * dx;

    // Refine every discrete local maximum that is competitive with the best.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || a[i] >= a[i - 1];
        const bool right = i + 1 == n || a[i] >= a[i + 1];
        if (left && right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return a[x] > a[y]; });
    if (peaks.size() > 8) peaks.resize(8);
    for (std::size_t i : peaks) {
        const double lo = static_cast<double>(i == 0 ? 0 : i - 1) * dx;
        const double hi = static_cast<double>(std::min(n - 1, i + 1)) * dx;
        const auto [x, v] = golden_max(h, lo, hi);
        if (v > best.value) {
            best.value = v;
            best.argmax = x;
        }
    }

    // Within a cell, |h| can exceed its larger endpoint by at most M dx^2 / 8
    // where M bounds the curvature; M is read off neighboring second differences.
    std::vector<double> curv(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        curv[i] = std::abs(a[i + 1] - 2.0 * a[i] + a[i - 1]) / (dx * dx);
    }
    double err = 0.0;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        double m = 0.0;
        for (std::size_t j = (c == 0 ? 0 : c - 1); j <= std::min(n - 1, c + 2); ++j) {
            m = std::max(m, curv[j]);
        }
        const double bound = std::max(a[c], a[c + 1]) + 2.0 * m * dx * dx / 8.0;
        err = std::max(err, bound - best.value);
    }
    best.error = std::max(0.0, err);
    return best;
}

double bernoulli_variance(const BetrayalSpec& f, double x) {
    const double v = f(x);
    return v * (1.0 - v);
}

double bernoulli_variance_d1(const BetrayalSpec& f, double x) {
    return f.d1(x) * (1.0 - 2.0 * f(x));
}

UpdatingProfile derive_profile(const BetrayalSpec& f) {
    if (!f.smooth()) {
        throw NotSmooth("betrayal function '" + f.name() + "' is not C^2; profile unavailable");
    }
    UpdatingProfile p;
    p.name = f.name();
    const double h1_half = updating_derivative(f, 0.5);
    const double h1_zero = updating_derivative(f, 0.0);
    p.eps_h = h1_half - 1.0;
    p.eps_c = 1.0 - h1_zero;
    p.h_prime_zero_vanishes = std::abs(h1_zero) <= 1e-12;

    p.k1f = maximize_abs([&f](double x) { return f.d1(x); });
    p.k2f = maximize_abs([&f](double x) { return f.d2(x); });
    p.k1g = maximize_abs([&f](double x) { return bernoulli_variance_d1(f, x); });
    p.k2hf = maximize_abs([&f](double x) { return updating_second_derivative(f, x); });
    if (!f.analytic_derivatives()) {
        // Central-difference roundoff at step 1e-5.
        constexpr double eps = std::numeric_limits<double>::epsilon();
        p.k1f.error += 4.0 * eps / 1e-5;
        p.k1g.error += 4.0 * eps / 1e-5;
        p.k2f.error += 16.0 * eps / 1e-10;
        p.k2hf.error += 64.0 * eps / 1e-10;
    }
    p.kf = std::max(p.k2f.value, p.k2hf.value);
    return p;
}

std::vector<int> QuasiMajorityReport::failed() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        if (!conditions[i].pass) out.push_back(static_cast<int>(i) + 1);
    }
    return out;
}

QuasiMajorityReport quasi_majority_check(const BetrayalSpec& f) {
    QuasiMajorityReport r;
    r.name = f.name();

    r.f_zero = std::abs(f(0.0)) <= 1e-12;
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = f(static_cast<double>(i) / kGrid);
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
    }
    r.range_ok = fmin >= -1e-12 && fmax <= 1.0 + 1e-12;
    r.surjective = r.f_zero && fmax >= 1.0 - 1e-9;

    auto& c = r.conditions;
    c[0].pass = f.smooth();
    c[0].witness = f.smooth() ? 1.0 : 0.0;
    c[0].detail = f.smooth() ? "C^2" : "not C^2";

    const double f_half = f(0.5);
    c[1].pass = f_half > 0.0 && f_half < 1.0;
    c[1].witness = f_half;
    c[1].detail = "f(1/2)";

    // (3): min over x in (0, 1/2) of x - H(x), on interior grid points.
    double gap = std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (int i = 1; i < kGrid; ++i) {
        const double x = 0.5 * static_cast<double>(i) / kGrid;
        const double d = x - updating_function(f, x);
        if (d < gap) {
            gap = d;
            at = x;
        }
    }
    c[2].pass = gap >= kMargin;
    c[2].witness = gap;
    c[2].detail = "min x - H(x) at x=" + std::to_string(at);

    const double h1_half = updating_derivative(f, 0.5);
    c[3].pass = h1_half - 1.0 >= kMargin;
    c[3].witness = h1_half;
    c[3].detail = "H'(1/2)";

    const double h1_zero = updating_derivative(f, 0.0);
    c[4].pass = 1.0 - h1_zero >= kMargin;
    c[4].witness = h1_zero;
    c[4].detail = "H'(0)";

    r.quasi_majority = r.f_zero && r.range_ok &&
                       std::all_of(c.begin(), c.end(), [](const auto& v) { return v.pass; });
    return r;
}

} // namespace fvote
