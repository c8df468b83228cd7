#pragma once

#include <optional>
#include <string>

#include "spw/linalg.hpp"
#include "spw/tolerances.hpp"

namespace spw {

// Point evaluation data attached to a model: quadrature nodes x_k with
// weights w_k, and the matrix of basis-function values.  eval(i, k) is the
// value of the i-th spectral basis function at node k, so a coefficient
// vector c samples to f(x_k) = sum_i c_i * eval(i, k), i.e. eval^T c.
// The weighted sampling functional A_k f = sqrt(w_k) f(x_k) is then the
// inner product against mu_k with (mu_k)_i = sqrt(w_k) * conj(eval(i, k)).
struct NodeData {
  std::vector<std::vector<double>> points;  // coordinates of each node
  std::vector<double> weights;
  CMat eval;  // dim x node_count

  int count() const { return static_cast<int>(weights.size()); }
};

// A finite-dimensional stand-in for a self-adjoint operator L >= 0 together
// with (optionally) the one-parameter unitary groups it generates.  The
// ambient space is C^dim written in the eigenbasis of sqrt(L), so the
// "Fourier transform" is the identity on stored coefficients and sqrt(L)
// acts diagonally through sqrt_eigenvalues.
//
// generators[j] is a skew-Hermitian matrix D_j (in the same coordinates)
// with L = -sum_j D_j^2; models without a group structure leave the list
// empty and the group-based constructions refuse to run on them.
struct SpectralModel {
  int dim = 0;
  std::vector<double> sqrt_eigenvalues;  // ascending, >= 0
  std::vector<CMat> generators;
  std::optional<NodeData> nodes;

  // Descriptive metadata, not part of the operator data itself.
  std::string kind = "custom";
  // Smallest Sobolev order m for which the sampling inequality is expected
  // to hold on this model family; the calibration suites refuse smaller m.
  double min_sampling_order = 0.0;

  bool has_generators() const { return !generators.empty(); }
  bool has_nodes() const { return nodes.has_value(); }
  int generator_count() const { return static_cast<int>(generators.size()); }
  double max_sqrt_eigenvalue() const {
    return sqrt_eigenvalues.empty() ? 0.0 : sqrt_eigenvalues.back();
  }

  // Throws std::invalid_argument when the structural contracts fail:
  // eigenvalues finite, nonnegative, ascending; generators square,
  // skew-Hermitian, and consistent with L = -sum D_j^2; node data shapes.
  void validate(const Tolerances& tol = default_tolerances()) const;
};

// A vector expressed in the model's spectral coordinates.
struct SpectralVector {
  CVec c;

  SpectralVector() = default;
  explicit SpectralVector(int n) : c(n, cdbl(0.0)) {}
  explicit SpectralVector(CVec coeffs) : c(std::move(coeffs)) {}

  int size() const { return static_cast<int>(c.size()); }
  double norm() const { return norm2(c); }
};

std::string model_to_json(const SpectralModel& model);
SpectralModel model_from_json(const std::string& text);
void save_model(const SpectralModel& model, const std::string& path);
SpectralModel load_model(const std::string& path);

}  // namespace spw
