#pragma once

#include "spw/kernels.hpp"
#include "spw/model.hpp"

namespace spw {

// Cached unitary diagonalizations of the group generators: D_j has purely
// imaginary spectrum, D_j = U_j diag(i mu_j) U_j^H, so the one-parameter
// group e^{t D_j} is U_j diag(e^{i t mu_j}) U_j^H.  Axes whose generator is
// already diagonal in model coordinates (the circle, the z-rotation on the
// sphere) skip the basis change entirely.
struct GroupCache {
  struct Axis {
    bool diagonal = false;
    std::vector<double> mu;  // frequencies of D_j
    CMat u;                  // empty when diagonal
  };
  int dim = 0;
  std::vector<Axis> axes;

  int axis_count() const { return static_cast<int>(axes.size()); }
};

// Builds the cache by running the Jacobi solver on the Hermitian matrices
// -i D_j.  Throws if the model has no generators, if a diagonalization fails
// its unitarity check (1e-10) or the reconstruction check (1e-8).
GroupCache build_group_cache(const SpectralModel& model);

// e^{t D_j} f.  Unitary; satisfies the group law to roundoff.
SpectralVector group_apply(const SpectralModel& model, const GroupCache& cache, int axis,
                           double t, const SpectralVector& f, Exec ex = default_exec());

// D_j f.
SpectralVector generator_apply(const SpectralModel& model, int axis, const SpectralVector& f);

struct ModulusGrid {
  int points_per_axis = 33;  // uniform on [0, s], endpoints included
};

// Mixed modulus of smoothness of order r at step s: the sum over all index
// tuples (j_1, ..., j_r) in {1..d}^r of the sup over the box [0, s]^r of
// ||(T_{j_1}(tau_1) - I) ... (T_{j_r}(tau_r) - I) f||.  The sup is taken
// over the finite grid, so the result is a certified lower bound of the
// true modulus that grows monotonically under grid refinement.
// r * d is capped at 6 (tuple count and box dimension stay small).
double mixed_modulus(const SpectralModel& model, const GroupCache& cache, int r, double s,
                     const SpectralVector& f, const ModulusGrid& grid = {},
                     Exec ex = default_exec());

struct ModulusRefinement {
  double value = 0.0;
  int points_per_axis = 0;  // grid that produced `value`
  int refinements = 0;
  bool converged = false;
};

// Doubles the grid (P -> 2P - 1, so old points are kept and the value can
// only grow) until the relative change drops below rel_tol.
ModulusRefinement mixed_modulus_refined(const SpectralModel& model, const GroupCache& cache,
                                        int r, double s, const SpectralVector& f,
                                        const ModulusGrid& initial = {},
                                        double rel_tol = 1e-3, int max_refinements = 4,
                                        Exec ex = default_exec());

// One factor of the Hardy-Steklov smoothing operator along a single axis:
//   H_{j,r}(s) f = (s/r)^{-r} * integral over [0, s/r]^r of
//                  sum_{k=1}^{r} (-1)^k C(r,k) T_j(k (tau_1 + ... + tau_r)) f
// evaluated by tensor Gauss-Legendre quadrature of the given order per axis.
SpectralVector hardy_steklov_axis(const SpectralModel& model, const GroupCache& cache,
                                  int axis, int r, double s, const SpectralVector& f,
                                  int quadrature_order, Exec ex = default_exec());

// Full product H_r(s) = H_{1,r}(s) ... H_{d,r}(s); the axis-d factor is
// applied first.  Tensor quadrature per factor; r * d capped at 6,
// quadrature order must be >= 2.
SpectralVector hardy_steklov(const SpectralModel& model, const GroupCache& cache, int r,
                             double s, const SpectralVector& f, int quadrature_order,
                             Exec ex = default_exec());

// Closed-form route for models whose generators are all diagonal in model
// coordinates (and hence commute): each factor is the scalar multiplier
//   m(mu, s) = sum_{k=1}^{r} (-1)^k C(r,k) ((e^{i k mu s / r} - 1)/(i k mu s / r))^r
// with value -1 at mu = 0.  Kept separate from the quadrature route so the
// two can be compared as independent computations.
SpectralVector hardy_steklov_multiplier(const SpectralModel& model, int r, double s,
                                        const SpectralVector& f);

// Sign sigma with sigma * H_r(s) f -> f as s -> 0+.  Each axis factor tends
// to -I (the alternating binomial sum is -1), so sigma = (-1)^d regardless
// of r.  A published variant of the statement carries (-1)^{d(r+1)} instead;
// the diagnostic records both and whether they agree (they differ exactly
// when d and r are both odd).
int steklov_sign(int d, int r);

struct SteklovSignInfo {
  int implemented = 0;  // (-1)^d
  int alternate = 0;    // (-1)^{d(r+1)}
  bool agree = false;
};
SteklovSignInfo steklov_sign_diagnostic(int d, int r);

// Two-sided bracket for the Peetre K-functional
//   K(t, f) = inf_g ( ||f - g|| + t * ||g||_r ),   ||g||_r = sobolev_norm(r, g).
// lower: the closed-form quadratic relaxation
//   K2(t, f)^2 = sum_i |c_i|^2 t^2 m_i / (1 + t^2 m_i),  m_i = (1 + lambda_i^2)^r,
// whose minimizer is g_i = c_i / (1 + t^2 m_i).  upper: the actual objective
// evaluated at candidate minimizers g(beta) = (I + beta M)^{-1} f for beta on
// a log grid plus beta = 0, beta = t^2 and g = 0.  Since the beta = t^2
// candidate is the quadratic minimizer, upper <= sqrt(2) * lower always.
struct KBracket {
  double lower = 0.0;
  double upper = 0.0;
  double t = 0.0;
  double r = 0.0;
};
KBracket k_functional(const SpectralModel& model, double t, const SpectralVector& f, double r);

struct ModulusKRow {
  double s = 0.0;
  double omega = 0.0;      // mixed modulus of order r at s
  double k_lower = 0.0;    // bracket for K(s^r, f)
  double k_upper = 0.0;
  double bound_rhs = 0.0;  // min(s^r, 1) * ||f||
};

struct ModulusKReport {
  std::vector<ModulusKRow> rows;
  double c_hat = 0.0;  // min_s k_lower / omega
  double big_c_hat = 0.0;  // max_s k_upper / (omega + bound_rhs)
  bool degenerate = false;  // f = 0 (or every row vanished)
};

// Empirical two-sided equivalence between the modulus and the K-functional:
// c * Omega^r(s, f) <= K(s^r, f) <= C (Omega^r(s, f) + min(s^r, 1) ||f||).
ModulusKReport modulus_k_equivalence(const SpectralModel& model, const GroupCache& cache,
                                     int r, const SpectralVector& f,
                                     const std::vector<double>& s_list,
                                     const ModulusGrid& grid = {}, Exec ex = default_exec());

struct ModulusInequalityReport {
  // Omega^m(s, f) <= s^k * sum over k-tuples beta of Omega^{m-k}(s, D_beta f).
  double reduction_lhs = 0.0;
  double reduction_rhs = 0.0;
  bool reduction_ok = false;
  double reduction_constant = 0.0;  // lhs / rhs when rhs > 0
  // Omega^m(a s, f) <= (1 + a)^m * Omega^m(s, f).
  double scaling_lhs = 0.0;
  double scaling_rhs = 0.0;
  bool scaling_ok = false;
};

// Checks the two working inequalities for the mixed modulus on a concrete
// vector; 0 <= k <= m required, m * d capped as in mixed_modulus.
ModulusInequalityReport modulus_inequalities_check(const SpectralModel& model,
                                                  const GroupCache& cache,
                                                  const SpectralVector& f, int m, int k,
                                                  double a, double s,
                                                  const ModulusGrid& grid = {},
                                                  Exec ex = default_exec());

}  // namespace spw
