#pragma once

#include <functional>

#include "spw/linalg.hpp"

namespace spw {

// Eigenvalues ascending; column j of `vectors` is the eigenvector for
// values[j].  The basis is orthonormal to roundoff.
struct EigenDecomposition {
  std::vector<double> values;
  CMat vectors;
};

// Cyclic Jacobi for Hermitian matrices (real symmetric is the special case
// with zero imaginary parts).  Sweeps rotate every off-diagonal pair until
// the off-diagonal Frobenius norm drops below tol_scale * ||A||_F.
// Self-contained on purpose: every spectral decomposition in this project
// (model construction, group generators, frame operators) goes through this
// one routine, so its behaviour is uniform and easy to audit.
EigenDecomposition hermitian_eigen(const CMat& A, double tol_scale = 1e-12,
                                   int max_sweeps = 64);

// Conjugate gradients for a Hermitian positive definite operator given as a
// matrix-free closure.  Stops at relative residual rtol; throws
// std::runtime_error if max_iter is exhausted first.
CVec solve_hpd(const std::function<void(const CVec&, CVec&)>& apply, const CVec& b,
               double rtol = 1e-12, int max_iter = 0);

}  // namespace spw
