#include "fvote/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fvote/error.hpp"
#include "fvote/rng.hpp"

namespace fvote {

std::string to_string(SpectralMethod m) {
    switch (m) {
    case SpectralMethod::Auto: return "auto";
    case SpectralMethod::Dense: return "dense";
    case SpectralMethod::Iterative: return "iterative";
    }
    return "?";
}

namespace {

std::vector<double> inverse_sqrt_degrees(const Graph& g) {
    std::vector<double> isd(g.n());
    for (std::size_t v = 0; v < g.n(); ++v) {
        isd[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<Vertex>(v))));
    }
    return isd;
}

SpectralSummary finish(double lambda2, double lambda_n, SpectralMethod method, double tol,
                       long iterations) {
    if (lambda2 >= 1.0 - tol) {
        throw Disconnected("second walk eigenvalue is 1 within tolerance; graph is disconnected");
    }
    SpectralSummary s;
    s.lambda2 = lambda2;
    s.lambda_n = lambda_n;
    s.lambda = std::min(1.0, std::max(std::abs(lambda2), std::abs(lambda_n)));
    s.method = method;
    s.tol = tol;
    s.iterations = iterations;
    return s;
}

SpectralSummary dense_expansion(const Graph& g) {
    const std::size_t n = g.n();
    const auto isd = inverse_sqrt_degrees(g);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < n; ++u) {
        for (Vertex w : g.neighbors(static_cast<Vertex>(u))) {
            m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(w)) = isd[u] * isd[w];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NoConvergence("dense symmetric eigensolver failed", 0);
    }
    const auto& ev = es.eigenvalues();  // ascending
    // Backward-stable solver: eigenvalue error is O(n eps ||M||), ||M|| = 1.
    const double err = std::max(1e-14, 8.0 * static_cast<double>(n) *
                                           std::numeric_limits<double>::epsilon());
    return finish(ev(static_cast<Eigen::Index>(n) - 2), ev(0), SpectralMethod::Dense, err, 0);
}

class NormalizedAdjacency {
public:
    explicit NormalizedAdjacency(const Graph& g) : g_(g), isd_(inverse_sqrt_degrees(g)), z_(g.n()) {}

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        const std::size_t n = g_.n();
        for (std::size_t v = 0; v < n; ++v) {
            z_[v] = isd_[v] * x(static_cast<Eigen::Index>(v));
        }
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (Vertex w : g_.neighbors(static_cast<Vertex>(v))) {
                acc += z_[w];
            }
            y(static_cast<Eigen::Index>(v)) = isd_[v] * acc;
        }
    }

private:
    const Graph& g_;
    std::vector<double> isd_;
    std::vector<double> z_;
};

SpectralSummary lanczos_expansion(const Graph& g, const SpectralOptions& opts) {
    const auto n = static_cast<Eigen::Index>(g.n());
    Eigen::VectorXd top(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        top(v) = std::sqrt(static_cast<double>(g.degree(static_cast<Vertex>(v))));
    }
    top.normalize();

    // The deflated operator acts on an (n-1)-dimensional space.
    const long cap = std::min<long>(static_cast<long>(n) - 1, opts.max_iter);
    if (cap <= 0) {
        return finish(0.0, 0.0, SpectralMethod::Iterative, 0.0, 0);
    }

    SplitMix64 rng(opts.seed);
    Eigen::VectorXd q(n);
    for (Eigen::Index v = 0; v < n; ++v) {
        q(v) = rng.uniform() - 0.5;
    }
    q -= top.dot(q) * top;
    q.normalize();

    NormalizedAdjacency op(g);
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd w(n);

    double theta_min = 0.0, theta_max = 0.0, res_min = 0.0, res_max = 0.0;
    long steps = 0;
    bool done = false;
    while (!done) {
        basis.push_back(q);
        op.apply(q, w);
        const double a = q.dot(w);
        alpha.push_back(a);
        w -= a * q;
        if (basis.size() > 1) {
            w -= beta.back() * basis[basis.size() - 2];
        }
        for (int pass = 0; pass < 2; ++pass) {
            w -= top.dot(w) * top;
            for (const auto& b : basis) {
                w -= b.dot(w) * b;
            }
        }
        const double b = w.norm();
        steps = static_cast<long>(basis.size());
        const bool exhausted = b <= 1e-13 || steps >= cap;

        if (exhausted || steps % 4 == 0 || steps <= 2) {
            const auto m = static_cast<Eigen::Index>(steps);
            Eigen::VectorXd diag(m);
            Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
            for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
            for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            theta_min = tri.eigenvalues()(0);
            theta_max = tri.eigenvalues()(m - 1);
            res_min = b * std::abs(tri.eigenvectors()(m - 1, 0));
            res_max = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
            if (b <= 1e-13 || (steps >= cap && cap == static_cast<long>(n) - 1)) {
                // Krylov space is invariant (or spans everything): Ritz values are exact.
                res_min = res_max = std::max(res_min, res_max);
                done = true;
            } else if (res_min <= opts.tol && res_max <= opts.tol) {
                done = true;
            } else if (steps >= cap) {
                throw NoConvergence("Lanczos did not reach tolerance " + std::to_string(opts.tol) +
                                        " within " + std::to_string(opts.max_iter) + " iterations",
                                    opts.max_iter);
            }
        }
        if (!done) {
            beta.push_back(b);
            q = w / b;
        }
    }
    const double achieved = std::max({res_min, res_max, 1e-14});
    return finish(theta_max, theta_min, SpectralMethod::Iterative, achieved, steps);
}

} // namespace

SpectralSummary expansion(const Graph& g, const SpectralOptions& opts) {
    if (!(opts.tol > 0.0)) {
        throw InvalidParam("spectral tolerance must be positive");
    }
    if (g.n() == 1) {
        // P = [1]; no non-trivial spectrum.
        return finish(0.0, 0.0, SpectralMethod::Dense, 0.0, 0);
    }
    SpectralMethod method = opts.method;
    if (method == SpectralMethod::Auto) {
        method = g.n() <= opts.dense_limit ? SpectralMethod::Dense : SpectralMethod::Iterative;
    }
    return method == SpectralMethod::Dense ? dense_expansion(g) : lanczos_expansion(g, opts);
}

} // namespace fvote
