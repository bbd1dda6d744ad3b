#pragma once

#include <cstdint>
#include <string>

#include "fvote/graph.hpp"

namespace fvote {

enum class SpectralMethod { Auto, Dense, Iterative };

std::string to_string(SpectralMethod m);

struct SpectralOptions {
    double tol = 1e-8;
    long max_iter = 100000;
    SpectralMethod method = SpectralMethod::Auto;
    std::size_t dense_limit = 2048;  // Auto picks Dense for n <= dense_limit
    std::uint64_t seed = 0x5EEDC0DEULL;
};

/// Extreme non-trivial eigenvalues of the walk matrix P = D^-1 A.
struct SpectralSummary {
    double lambda = 0.0;    // max(|lambda2|, |lambda_n|)
    double lambda2 = 0.0;
    double lambda_n = 0.0;
    SpectralMethod method = SpectralMethod::Dense;
    double tol = 0.0;       // error bound achieved on lambda2 and lambda_n
    long iterations = 0;
};

/// Computes lambda on the symmetrized operator D^-1/2 A D^-1/2, which is
/// similar to P. Dense uses a full symmetric eigensolve. Iterative runs
/// Lanczos with full reorthogonalization on the complement of the top
/// eigenvector (entries proportional to sqrt(deg)) and stops when both
/// extreme Ritz residuals are below tol.
///
/// Throws NoConvergence when max_iter Lanczos steps do not reach tol, and
/// Disconnected when lambda2 is within tol of 1.
SpectralSummary expansion(const Graph& g, const SpectralOptions& opts = {});

} // namespace fvote
