#include "fvote/betrayal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fvote/binomial.hpp"
#include "fvote/error.hpp"

namespace fvote {

namespace {

constexpr double kFdStep = 1e-5;
constexpr unsigned kDirectSumLimit = 24;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

/// First derivative by central differences, one-sided second-order stencils
/// near the ends of [0, 1].
double fd1(const std::function<double(double)>& f, double x) {
    const double h = kFdStep;
    if (x - h < 0.0) return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2 * h);
    if (x + h > 1.0) return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2 * h);
    return (f(x + h) - f(x - h)) / (2 * h);
}

double fd2(const std::function<double(double)>& f, double x) {
    const double h = kFdStep;
    if (x - h < 0.0) return (2 * f(x) - 5 * f(x + h) + 4 * f(x + 2 * h) - f(x + 3 * h)) / (h * h);
    if (x + h > 1.0) return (2 * f(x) - 5 * f(x - h) + 4 * f(x - 2 * h) - f(x - 3 * h)) / (h * h);
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

double best_of_direct(unsigned k, unsigned m, double x) {
    const double y = 1.0 - x;
    double xp[kDirectSumLimit + 1];
    double yp[kDirectSumLimit + 1];
    xp[0] = yp[0] = 1.0;
    for (unsigned i = 1; i <= k; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    double coef = 1.0;  // C(k, i), built from i = k downwards
    double acc = 0.0;
    for (unsigned i = k; i >= m; --i) {
        acc += coef * xp[i] * yp[k - i];
        coef = coef * i / (k - i + 1);
        if (i == m) break;
    }
    return acc;
}

void check_betrayal_range(const std::string& name, const std::function<double(double)>& f) {
    if (std::abs(f(0.0)) > 1e-12) {
        throw InvalidParam("betrayal function '" + name + "' has f(0) != 0");
    }
    constexpr int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        const double v = f(static_cast<double>(i) / grid);
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
            throw InvalidParam("betrayal function '" + name + "' leaves [0,1] at x=" +
                               std::to_string(static_cast<double>(i) / grid));
        }
    }
}

class NaturalSpline {
public:
    explicit NaturalSpline(std::vector<double> y) : y_(std::move(y)), m_(y_.size(), 0.0) {
        const std::size_t n = y_.size();
        if (n < 2) {
            throw InvalidParam("tabulated betrayal function needs at least two values");
        }
        h_ = 1.0 / static_cast<double>(n - 1);
        if (n == 2) return;
        // Tridiagonal system for interior second derivatives, natural ends.
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
            const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
            c[i] = 1.0 / denom;
            d[i] = (rhs - (i > 1 ? d[i - 1] : 0.0)) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double operator()(double x) const {
        x = clamp01(x);
        const std::size_t n = y_.size();
        std::size_t i = std::min(n - 2, static_cast<std::size_t>(x / h_));
        const double a = (static_cast<double>(i + 1) * h_ - x) / h_;
        const double b = 1.0 - a;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h_ * h_ / 6.0;
    }

private:
    std::vector<double> y_;
    std::vector<double> m_;
    double h_ = 1.0;
};

} // namespace

double best_of_k(unsigned k, double x) {
    if (k == 0) throw InvalidParam("best-of-k needs k >= 1");
    const unsigned m = k / 2 + 1;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (k <= kDirectSumLimit) return best_of_direct(k, m, x);
    return binomial_upper_tail(k, m, x);
}

BetrayalSpec BetrayalSpec::pull() {
    BetrayalSpec s;
    s.kind_ = BetrayalKind::Pull;
    return s;
}

BetrayalSpec BetrayalSpec::best_of(unsigned k) {
    if (k == 0) throw InvalidParam("best-of-k needs k >= 1");
    BetrayalSpec s;
    s.kind_ = BetrayalKind::BestOf;
    s.k_ = k;
    s.symmetric_ = (k % 2) == 1;
    return s;
}

BetrayalSpec BetrayalSpec::careful(unsigned k) {
    if (k == 0) throw InvalidParam("k-careful needs k >= 1");
    BetrayalSpec s;
    s.kind_ = BetrayalKind::Careful;
    s.k_ = k;
    s.symmetric_ = k == 1;
    return s;
}

BetrayalSpec BetrayalSpec::majority() {
    BetrayalSpec s;
    s.kind_ = BetrayalKind::Majority;
    s.smooth_ = false;
    s.symmetric_ = true;
    return s;
}

BetrayalSpec BetrayalSpec::lazy(double rho, const BetrayalSpec& inner) {
    if (!(rho > 0.0 && rho <= 1.0)) throw InvalidParam("lazy needs 0 < rho <= 1");
    BetrayalSpec s;
    s.kind_ = BetrayalKind::Lazy;
    s.rho_ = rho;
    s.k_ = inner.k_;
    s.smooth_ = inner.smooth_;
    s.symmetric_ = rho == 1.0 && inner.symmetric_;
    s.inner_ = std::make_shared<const BetrayalSpec>(inner);
    return s;
}

BetrayalSpec BetrayalSpec::custom(std::string name, std::function<double(double)> f, bool smooth,
                                  bool symmetric) {
    if (!f) throw InvalidParam("custom betrayal function is empty");
    check_betrayal_range(name, f);
    BetrayalSpec s;
    s.kind_ = BetrayalKind::Custom;
    s.smooth_ = smooth;
    s.symmetric_ = symmetric;
    s.label_ = std::move(name);
    s.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    return s;
}

BetrayalSpec BetrayalSpec::tabulated(std::string name, std::vector<double> values) {
    NaturalSpline spline(std::move(values));
    return custom(std::move(name), [spline](double x) { return spline(x); }, true);
}

std::string BetrayalSpec::name() const {
    switch (kind_) {
    case BetrayalKind::Pull: return "pull";
    case BetrayalKind::BestOf: return "best-of-" + std::to_string(k_);
    case BetrayalKind::Careful: return std::to_string(k_) + "-careful";
    case BetrayalKind::Majority: return "majority";
    case BetrayalKind::Lazy: {
        std::ostringstream os;
        os << "lazy:" << rho_ << ':' << inner_->name();
        return os.str();
    }
    case BetrayalKind::Custom: return label_;
    }
    return "?";
}

double BetrayalSpec::eval(double x) const {
    switch (kind_) {
    case BetrayalKind::Pull: return clamp01(x);
    case BetrayalKind::BestOf: return best_of_k(k_, x);
    case BetrayalKind::Careful: return std::pow(clamp01(x), static_cast<double>(k_));
    case BetrayalKind::Majority: return x < 0.5 ? 0.0 : (x > 0.5 ? 1.0 : 0.5);
    case BetrayalKind::Lazy: return rho_ * inner_->eval(x);
    case BetrayalKind::Custom: return (*fn_)(x);
    }
    return 0.0;
}

double BetrayalSpec::d1(double x) const {
    switch (kind_) {
    case BetrayalKind::Pull: return 1.0;
    case BetrayalKind::BestOf: {
        const unsigned m = k_ / 2 + 1;
        return k_ * binomial_pmf(k_ - 1, m - 1, clamp01(x));
    }
    case BetrayalKind::Careful:
        return k_ * std::pow(clamp01(x), static_cast<double>(k_ - 1));
    case BetrayalKind::Majority:
        return x == 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    case BetrayalKind::Lazy: return rho_ * inner_->d1(x);
    case BetrayalKind::Custom: return fd1(*fn_, x);
    }
    return 0.0;
}

double BetrayalSpec::d2(double x) const {
    switch (kind_) {
    case BetrayalKind::Pull: return 0.0;
    case BetrayalKind::BestOf: {
        if (k_ < 2) return 0.0;
        const unsigned m = k_ / 2 + 1;
        const double y = clamp01(x);
        const double lower = m >= 2 ? binomial_pmf(k_ - 2, m - 2, y) : 0.0;
        const double upper = binomial_pmf(k_ - 2, m - 1, y);
        return static_cast<double>(k_) * static_cast<double>(k_ - 1) * (lower - upper);
    }
    case BetrayalKind::Careful:
        if (k_ < 2) return 0.0;
        return static_cast<double>(k_) * static_cast<double>(k_ - 1) *
               std::pow(clamp01(x), static_cast<double>(k_ - 2));
    case BetrayalKind::Majority:
        return x == 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    case BetrayalKind::Lazy: return rho_ * inner_->d2(x);
    case BetrayalKind::Custom: return fd2(*fn_, x);
    }
    return 0.0;
}

double BetrayalSpec::flip_probability(std::uint32_t hits, std::uint32_t deg) const {
    if (kind_ == BetrayalKind::Majority) {
        const std::uint64_t twice = 2ULL * hits;
        return twice < deg ? 0.0 : (twice > deg ? 1.0 : 0.5);
    }
    if (hits == 0) return eval(0.0);
    if (hits == deg) return eval(1.0);
    return eval(static_cast<double>(hits) / static_cast<double>(deg));
}

double updating_function(const BetrayalSpec& f, double x) {
    return x * (1.0 - f(1.0 - x)) + (1.0 - x) * f(x);
}

double updating_derivative(const BetrayalSpec& f, double x) {
    if (f.smooth()) {
        return 1.0 - f(1.0 - x) + x * f.d1(1.0 - x) - f(x) + (1.0 - x) * f.d1(x);
    }
    const auto h_fn = [&f](double y) { return updating_function(f, y); };
    return fd1(h_fn, x);
}

double updating_second_derivative(const BetrayalSpec& f, double x) {
    if (!f.smooth()) {
        throw NotSmooth("H'' needs a C^2 betrayal function; '" + f.name() + "' is not");
    }
    return 2.0 * f.d1(1.0 - x) - x * f.d2(1.0 - x) - 2.0 * f.d1(x) + (1.0 - x) * f.d2(x);
}

BetrayalSpec parse_betrayal(const std::string& text) {
    auto parse_uint = [&](const std::string& s) -> unsigned {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || v == 0 || v > 1000000) {
            throw ParseError("bad integer '" + s + "' in betrayal spec '" + text + "'");
        }
        return static_cast<unsigned>(v);
    };
    if (text == "pull") return BetrayalSpec::pull();
    if (text == "majority") return BetrayalSpec::majority();
    if (text.rfind("best-of-", 0) == 0) return BetrayalSpec::best_of(parse_uint(text.substr(8)));
    if (const auto pos = text.find("-careful"); pos != std::string::npos && pos + 8 == text.size()) {
        return BetrayalSpec::careful(parse_uint(text.substr(0, pos)));
    }
    if (text.rfind("lazy:", 0) == 0) {
        const auto colon = text.find(':', 5);
        if (colon == std::string::npos) {
            throw ParseError("lazy spec needs the form lazy:<rho>:<inner>");
        }
        double rho = 0.0;
        try {
            rho = std::stod(text.substr(5, colon - 5));
        } catch (const std::exception&) {
            throw ParseError("bad rho in '" + text + "'");
        }
        return BetrayalSpec::lazy(rho, parse_betrayal(text.substr(colon + 1)));
    }
    throw ParseError("unknown betrayal function '" + text + "'");
}

std::vector<BetrayalSpec> builtin_betrayals() {
    return {BetrayalSpec::pull(),
            BetrayalSpec::best_of(2),
            BetrayalSpec::best_of(3),
            BetrayalSpec::best_of(4),
            BetrayalSpec::best_of(5),
            BetrayalSpec::best_of(7),
            BetrayalSpec::careful(2),
            BetrayalSpec::careful(3),
            BetrayalSpec::majority(),
            BetrayalSpec::lazy(0.5, BetrayalSpec::best_of(2)),
            BetrayalSpec::lazy(0.7, BetrayalSpec::best_of(3))};
}

} // namespace fvote
