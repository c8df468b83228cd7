#pragma once

#include <string>
#include <vector>

#include "spw/frames.hpp"
#include "spw/model.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"
#include "spw/semigroup.hpp"

namespace spw {

// Shared smoothness parameters.  q may be infinity (sup form); r is the
// integer order used by the modulus and K-functional routes and must
// exceed alpha there.
struct BesovParams {
  double alpha = 0.5;
  double q = 2.0;
  int r = 1;
};

enum class BesovMethod { modulus, kfun, approx, lp, frame, derivative, zygmund };

const char* besov_method_name(BesovMethod method);

// One computed norm value plus everything needed to reproduce it: the
// truncation window actually used ([s_min, s_max] log grid for integral
// forms, [j_min, j_max] for dyadic sums) and the certified tail bounds that
// were added to the truncated integral.
struct BesovReport {
  double value = 0.0;
  BesovMethod method = BesovMethod::modulus;
  double s_min = 0.0;
  double s_max = 0.0;
  int grid_points = 0;
  int j_min = 0;
  int j_max = 0;
  double tail_low = 0.0;   // additive tail contribution below s_min (q-domain)
  double tail_high = 0.0;  // additive tail contribution beyond s_max
  double lower_value = 0.0;  // K-functional route only: bracket integrals
  double upper_value = 0.0;
};

// Integration window for the s- and t-integrals.  The defaults cover
// [1e-4, 1e2] with 200 log-spaced points; outside the window the integrand
// is controlled analytically and the bounds are added to the result.
struct NormWindow {
  double s_min = 1e-4;
  double s_max = 1e2;
  int points = 200;
};

// ||f|| + (integral of (s^{-alpha} Omega^r(s, f))^q ds/s)^{1/q}.
// The grid sup inside Omega makes the reported value a certified lower
// bound that grows monotonically under inner-grid refinement; the tails are
// certified upper bounds of the discarded integral pieces.
BesovReport besov_modulus(const SpectralModel& model, const GroupCache& cache,
                          const BesovParams& params, const SpectralVector& f,
                          const NormWindow& window = {}, const ModulusGrid& grid = {},
                          Exec ex = default_exec());

// Interpolation-space norm (integral of (t^{-alpha/r} K(t, f))^q dt/t)^{1/q}
// with K replaced by the midpoint of its two-sided bracket; the bracket
// integrals themselves land in lower_value / upper_value (their ratio is
// at most sqrt(2), inherited from the pointwise bracket).
BesovReport besov_kfun(const SpectralModel& model, const BesovParams& params,
                       const SpectralVector& f, const NormWindow& window = {});

// ||f|| + (sum_{j=0}^{levels} (2^{j alpha} E(f, 2^j))^q)^{1/q} with E the
// best band-limited approximation error.  Exact once 2^levels reaches the
// top of the spectrum; beyond that every added term is zero and the value
// is bit-identical.
BesovReport besov_approx(const SpectralModel& model, const BesovParams& params,
                         const SpectralVector& f, int levels);

// (sum_j (2^{j alpha} ||F_j(sqrt(L)) f||)^q)^{1/q} over the dyadic bands.
BesovReport besov_lp(const SpectralModel& model, const PartitionOfUnity& pou,
                     const BesovParams& params, const SpectralVector& f);

// (sum_j 2^{j alpha q} (sum_k |<f, Phi_k^j>|^2)^{q/2})^{1/q} from the frame
// analysis coefficients.
BesovReport besov_frame(const FrameSystem& system, const BesovParams& params,
                        const SpectralVector& f, Exec ex = default_exec());

// Non-integer alpha: Sobolev norm of order floor(alpha) plus, for every
// tuple of floor(alpha) generator indices, the integral of
// (s^{floor(alpha)-alpha} Omega^1(s, D_tuple f))^q ds/s raised to 1/q.
// For alpha < 1 the tuple is empty and this coincides with besov_modulus
// at r = 1, bit for bit.
BesovReport besov_derivative(const SpectralModel& model, const GroupCache& cache,
                             double alpha, double q, const SpectralVector& f,
                             const NormWindow& window = {}, const ModulusGrid& grid = {},
                             Exec ex = default_exec());

// Integer alpha = k: Sobolev norm of order k - 1 plus, per (k-1)-tuple, the
// integral of (s^{-1} Omega^2(s, D_tuple f))^q ds/s raised to 1/q.
BesovReport besov_zygmund(const SpectralModel& model, const GroupCache& cache, int k,
                          double q, const SpectralVector& f, const NormWindow& window = {},
                          const ModulusGrid& grid = {}, Exec ex = default_exec());

// Repeats besov_modulus with the inner sup grid doubled (P -> 2P - 1) until
// the value's relative change drops below rel_tol.  The value can only
// grow, so the sequence is monotone.
struct BesovRefinement {
  BesovReport report;
  int refinements = 0;
  int points_per_axis = 0;
  bool converged = false;
};
BesovRefinement besov_modulus_converged(const SpectralModel& model, const GroupCache& cache,
                                        const BesovParams& params, const SpectralVector& f,
                                        const NormWindow& window = {},
                                        const ModulusGrid& initial = {},
                                        double rel_tol = 1e-3, int max_refinements = 3,
                                        Exec ex = default_exec());

// Cross-method comparison over a deterministic single-mode sweep, a random
// ensemble, and one doubled vector (scale-invariance probe).  Methods that
// do not apply to the given parameters (derivative needs non-integer alpha,
// zygmund integer alpha, frame a system) are skipped.
struct EquivalenceRow {
  std::string vector_id;
  std::vector<double> values;  // aligned with EquivalenceTable::methods
};

struct EquivalencePair {
  BesovMethod a = BesovMethod::modulus;
  BesovMethod b = BesovMethod::modulus;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double spread = 0.0;  // ratio_max / ratio_min
};

struct EquivalenceTable {
  BesovParams params;
  std::vector<BesovMethod> methods;
  std::vector<EquivalenceRow> rows;
  std::vector<EquivalencePair> pairs;
  double worst_spread = 0.0;
  double spread_bound = 0.0;
  bool scale_invariant = false;  // ratios of f and 2f agree to 1e-10
  bool all_finite = false;
  bool pass = false;
};

EquivalenceTable equivalence_report(const SpectralModel& model, const GroupCache& cache,
                                    const PartitionOfUnity& pou, const FrameSystem* system,
                                    const BesovParams& params, int ensemble_size,
                                    double spread_bound, RandomStream& rng,
                                    Exec ex = default_exec());

}  // namespace spw
