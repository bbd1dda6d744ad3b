#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fvote {

enum class BetrayalKind { Pull, BestOf, Careful, Majority, Lazy, Custom };

/// A betrayal function f: [0,1] -> [0,1] with f(0) = 0. A vertex holding one
/// opinion switches with probability f(x), where x is the fraction of its
/// neighbors holding the other opinion.
///
/// Built-in kinds carry analytic first and second derivatives. Custom kinds
/// (a callable or a tabulated spline) fall back to central differences with
/// step 1e-5.
class BetrayalSpec {
public:
    static BetrayalSpec pull();
    /// Sample k neighbors with replacement; switch on a floor(k/2)+1 majority.
    static BetrayalSpec best_of(unsigned k);
    /// Switch only when all k samples disagree: f(x) = x^k.
    static BetrayalSpec careful(unsigned k);
    /// Strict neighborhood majority with a fair coin on exact ties.
    static BetrayalSpec majority();
    /// Run the inner process with probability rho, else keep the opinion.
    static BetrayalSpec lazy(double rho, const BetrayalSpec& inner);
    /// Throws InvalidParam if f(0) != 0 or f leaves [0,1] on a 10^4 grid.
    static BetrayalSpec custom(std::string name, std::function<double(double)> f, bool smooth,
                               bool symmetric = false);
    /// Natural cubic spline through values at equally spaced points of [0,1].
    static BetrayalSpec tabulated(std::string name, std::vector<double> values);

    BetrayalKind kind() const noexcept { return kind_; }
    unsigned k() const noexcept { return k_; }
    double rho() const noexcept { return rho_; }
    const BetrayalSpec& inner() const { return *inner_; }

    std::string name() const;
    bool smooth() const noexcept { return smooth_; }
    /// f(1-x) = 1 - f(x) on [0,1].
    bool symmetric() const noexcept { return symmetric_; }
    bool analytic_derivatives() const noexcept { return kind_ != BetrayalKind::Custom; }

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double d1(double x) const;
    double d2(double x) const;

    /// f(hits / deg). Majority's tie is decided on the integers.
    double flip_probability(std::uint32_t hits, std::uint32_t deg) const;

private:
    BetrayalSpec() = default;

    BetrayalKind kind_ = BetrayalKind::Pull;
    unsigned k_ = 1;
    double rho_ = 1.0;
    bool smooth_ = true;
    bool symmetric_ = true;
    std::string label_;
    std::shared_ptr<const BetrayalSpec> inner_;
    std::shared_ptr<const std::function<double(double)>> fn_;
};

/// f_k(x) = Pr[Bin(k, x) >= floor(k/2) + 1].
double best_of_k(unsigned k, double x);

/// H_f(x) = x (1 - f(1 - x)) + (1 - x) f(x).
double updating_function(const BetrayalSpec& f, double x);
/// H_f'(x); central differences of H when f is not smooth.
double updating_derivative(const BetrayalSpec& f, double x);
/// H_f''(x); requires a smooth f.
double updating_second_derivative(const BetrayalSpec& f, double x);

/// Parses names such as "pull", "majority", "best-of-3", "3-careful",
/// "lazy:0.5:best-of-2".
BetrayalSpec parse_betrayal(const std::string& text);

/// The built-in family used by corpus tests.
std::vector<BetrayalSpec> builtin_betrayals();

} // namespace fvote
