#pragma once

#include <functional>

#include "spw/model.hpp"

namespace spw {

// Apply the spectral multiplier F(sqrt(L)): coefficient i is scaled by
// F(lambda_i).  Throws if sizes mismatch or F produces a non-finite value.
SpectralVector apply_multiplier(const SpectralModel& model,
                                const std::function<cdbl(double)>& symbol,
                                const SpectralVector& f);

// Orthogonal projection onto the band [0, omega]: coefficients with
// lambda_i > omega are zeroed.  Exact and idempotent by construction.
SpectralVector pw_project(const SpectralModel& model, double omega, const SpectralVector& f);

// Relative band-limit test: the energy outside [0, omega] is at most
// rel_tol * ||f||.  The zero vector is band limited to every band.
bool in_paley_wiener(const SpectralModel& model, double omega, const SpectralVector& f,
                     double rel_tol = default_tolerances().algebraic);

// Graded smoothness norm (sum_i (1 + lambda_i^2)^r |c_i|^2)^{1/2}, the norm
// of (I + L)^{r/2} f in these coordinates.  r < 0 throws.
double sobolev_norm(const SpectralModel& model, double r, const SpectralVector& f);

// || L^{s/2} f || = (sum_i lambda_i^{2s} |c_i|^2)^{1/2} with 0^0 = 1,
// so s = 0 recovers the plain norm.  s < 0 throws.
double laplacian_power_norm(const SpectralModel& model, double s, const SpectralVector& f);

// Exact best-approximation error from the band [0, omega]: the projection
// residual || f - pw_project(f) ||, since the projection is the minimizer.
double best_approximation_error(const SpectralModel& model, double omega,
                                const SpectralVector& f);

struct BernsteinReport {
  double omega = 0.0;
  double order = 0.0;  // the power s in ||L^{s/2} f|| <= omega^s ||f||
  double ratio = 0.0;  // lhs / rhs; at most 1 for band-limited f
};

// Checks the Bernstein ratio for band-limited f; throws std::invalid_argument
// if f is not (numerically) in the band or omega <= 0 or order < 0.
BernsteinReport bernstein_check(const SpectralModel& model, double omega, double order,
                                const SpectralVector& f);

struct RieszBoasResult {
  SpectralVector approx;    // truncated series applied to f
  double error = 0.0;       // || approx - i sqrt(L) f ||
  int half_terms = 0;       // K: the series used shifts k = 1-K .. K
};

// Approximates i sqrt(L) f for band-limited f by the shifted-translation
// series (omega / pi^2) * sum_k (-1)^{k-1} / (k - 1/2)^2 * e^{i (pi/omega)(k-1/2) sqrt(L)} f.
// The truncation keeps the symmetric block k = 1-K .. K; the paired terms
// k and 1-k combine into 2i * sin((pi/omega)(k-1/2) lambda) / (k-1/2)^2, so
// the truncated symbol is exactly odd and vanishes at lambda = 0 for every K.
// Requires f in PW_omega and K >= 1.
RieszBoasResult riesz_boas_apply(const SpectralModel& model, double omega,
                                 const SpectralVector& f, int half_terms);

}  // namespace spw
