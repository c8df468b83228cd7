#pragma once

#include "spw/kernels.hpp"
#include "spw/model.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"

namespace spw {

// Weighted point-sampling functionals A_k f = sqrt(w_k) f(x_k) in Riesz
// form: column k of `mu` is the coefficient vector with <mu_k, f> = A_k f.
// `resolved_band` is the largest lambda for which the underlying quadrature
// is exact on products of basis functions, i.e. the band on which discrete
// Parseval holds: sum_k |A_k f|^2 = ||f||^2 for f in PW_resolved.
struct SamplingSet {
  double rho = 0.0;
  std::vector<double> weights;
  std::vector<std::vector<double>> points;
  CMat mu;  // dim x count
  double resolved_band = 0.0;

  int count() const { return mu.cols; }
};

// Node layout per model kind at mesh parameter rho: the circle takes
// ceil(2 pi / rho) equispaced nodes, the sphere a Gauss-Legendre grid of
// ceil(pi / rho) latitudes by ceil(2 pi / rho) longitudes, and a graph
// always uses all vertices with unit weights (rho reported as 1).  Models
// of other kinds fall back to their stored node data.  Deliberately
// *allows* undersampled sets -- aliasing behaviour is part of what the
// Poincare calibration must exercise.
SamplingSet build_sampling_set(const SpectralModel& model, double rho);

struct PoincareReport {
  double c_hat = 0.0;   // min over resolved band-limited draws of sum|A_k f|^2 / ||f||^2
  double big_c_hat = 0.0;  // max over draws of ||f||^2 / (sum|A_k f|^2 + rho^{2m} ||L^{m/2} f||^2)
  double m = 0.0;
  double rho = 0.0;
  int trials = 0;
  bool ok = false;  // both constants finite and positive, c_hat <= C_hat, and
                    // big_c_hat <= C_target when a positive target was given
};

// Empirical two-sided sampling inequality
//   c sum_k |A_k f|^2  <=  ||f||^2  <=  C (sum_k |A_k f|^2 + rho^{2m} ||L^{m/2} f||^2)
// over `trials` random draws with unit Sobolev-m norm.  The left constant is
// probed on draws projected to the resolved band; the right on unprojected
// draws, so aliasing (samples of a high mode vanishing on a coarse grid)
// lands on the remainder term.  Requires m > the model's minimum sampling
// order and trials >= 10.  Pass C_target <= 0 to skip the target comparison.
PoincareReport poincare_calibrate(const SpectralModel& model, const SamplingSet& set,
                                  double m, int trials, double C_target, RandomStream& rng);

struct PwFrame {
  CMat atoms;  // dim x count, column k = band-limited representer
  double omega = 0.0;
  double delta = 0.0;
  double lower = 0.0;  // measured frame bounds on PW_omega
  double upper = 0.0;
  bool rank_deficient = false;  // lower vanished: not a frame
  bool rho_ok = true;   // sampling density consistent with the calibrated
                        // relation rho = (delta / C)^{1/(2m)} / omega (10% slack)
  double rho_required = 0.0;
};

// Band-limited frame on PW_omega obtained by projecting the sampling
// representers.  Bounds are measured exactly (dense eigensolve of the frame
// operator restricted to the band) up to 4096 atoms, beyond that by
// power/inverse-power iteration at tolerance 1e-10.  A degenerate system is
// reported through the flags, not thrown.
PwFrame pw_frame(const SpectralModel& model, const SamplingSet& set, double omega,
                 double delta, double m, double poincare_c);

// One dyadic band of a frame system.  Atoms are stored sparsely: only the
// coordinates in `support` (where F_j is nonzero on the spectrum) are kept.
// Canonical duals are generally not band-supported, so they are dense rows.
struct FrameBand {
  int index = 0;
  double omega = 0.0;
  double rho = 0.0;
  std::vector<int> support;
  CMat atoms;  // count x |support|
  CMat dual;   // count x dim (filled by dual_frame)

  int count() const { return atoms.rows; }
};

struct FrameSystem {
  int dim = 0;
  double delta = 0.0;
  double lower = 0.0;  // measured global frame bounds
  double upper = 0.0;
  bool has_dual = false;
  double dual_lower = 0.0;
  double dual_upper = 0.0;
  std::vector<FrameBand> bands;

  int atom_count() const {
    int n = 0;
    for (const FrameBand& b : bands) n += b.count();
    return n;
  }
};

// Nearly-Parseval system: per band j, sample at rho_j = (delta/C)^{1/(2m)} /
// 2^{j+1}, project the representers to PW_{2^{j+1}}, then shape with F_j.
// Bands whose support misses the spectrum entirely carry no atoms.  Each
// populated band must be a genuine frame over its slice of PW (else the
// band index is named in the error); the recorded global bounds come from
// the assembled frame operator.
FrameSystem build_frame_system(const SpectralModel& model, const PartitionOfUnity& pou,
                               double delta, double m, double poincare_c,
                               Exec ex = default_exec());

// Per-band analysis coefficients <f, Phi_k^j> (inner product conjugate in
// the atom), in band order.
std::vector<CVec> analysis(const FrameSystem& system, const SpectralVector& f,
                           Exec ex = default_exec());

// Applies the frame operator S f = sum_{j,k} <f, Phi_k^j> Phi_k^j.
SpectralVector frame_operator_apply(const FrameSystem& system, const SpectralVector& f,
                                    Exec ex = default_exec());

// Canonical dual: Psi_k^j = S^{-1} Phi_k^j via conjugate gradients at
// relative residual 1e-12.  Throws when the system is not a frame.
FrameSystem dual_frame(const FrameSystem& system, Exec ex = default_exec());

// sum c_{jk} Psi_k^j for coefficients in band order; requires the dual.
SpectralVector reconstruct(const FrameSystem& system, const std::vector<CVec>& coefficients,
                           Exec ex = default_exec());

std::string frame_to_json(const FrameSystem& system);
FrameSystem frame_from_json(const std::string& text);
void save_frame(const FrameSystem& system, const std::string& path);
FrameSystem load_frame(const std::string& path);

}  // namespace spw
