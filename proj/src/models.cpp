#include "spw/models.hpp"

#include <cmath>
#include <stdexcept>

#include "spw/eig.hpp"
#include "spw/quadrature.hpp"

namespace spw {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

int circle_mode_number(int index) {
  const int half = (index + 1) / 2;
  return (index % 2 == 1) ? -half : half;
}

std::pair<int, int> sphere_degree_order(int index) {
  int n = static_cast<int>(std::sqrt(static_cast<double>(index)));
  while ((n + 1) * (n + 1) <= index) ++n;
  while (n * n > index) --n;
  return {n, index - n * n - n};
}

SpectralModel circle_model(int degree, int node_count) {
  if (degree < 0) throw std::invalid_argument("circle_model: degree must be >= 0");
  const int dim = 2 * degree + 1;
  if (node_count == 0) node_count = dim;
  if (node_count < dim)
    throw std::invalid_argument("circle_model: undersampled model (need >= 2*degree+1 nodes)");

  SpectralModel model;
  model.kind = "circle";
  model.min_sampling_order = 1.0;
  model.dim = dim;
  model.sqrt_eigenvalues.resize(dim);
  for (int i = 0; i < dim; ++i) model.sqrt_eigenvalues[i] = std::abs(circle_mode_number(i));

  CMat d(dim, dim);
  for (int i = 0; i < dim; ++i) d(i, i) = cdbl(0.0, circle_mode_number(i));
  model.generators.push_back(std::move(d));

  NodeData nd;
  nd.points.resize(node_count);
  nd.weights.assign(node_count, kTwoPi / node_count);
  nd.eval = CMat(dim, node_count);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (int k = 0; k < node_count; ++k) {
    const double theta = kTwoPi * k / node_count;
    nd.points[k] = {theta};
    for (int i = 0; i < dim; ++i) {
      const double n = circle_mode_number(i);
      nd.eval(i, k) = amp * cdbl(std::cos(n * theta), std::sin(n * theta));
    }
  }
  model.nodes = std::move(nd);
  model.validate();
  return model;
}

double normalized_legendre(int n, int m, double x) {
  if (m < 0) {
    // theta_n^{-m} = (-1)^m theta_n^m under this normalization.
    const double v = normalized_legendre(n, -m, x);
    return (-m) % 2 == 0 ? v : -v;
  }
  if (n < m) throw std::invalid_argument("normalized_legendre: need n >= |m|");

  // Diagonal start theta_m^m, then two-term upward recurrence in degree.
  // Normalization: integral over [-1,1] of theta_n^m(x)^2 dx = 1.
  double pmm = std::sqrt(0.5);
  if (m > 0) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int k = 1; k <= m; ++k)
      pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sx;
  }
  if (n == m) return pmm;

  double p_prev = pmm;                                  // theta_m^m
  double p = std::sqrt(2.0 * m + 3.0) * x * pmm;        // theta_{m+1}^m
  for (int k = m + 2; k <= n; ++k) {
    const double a = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
    const double b =
        std::sqrt(((k - 1.0) * (k - 1.0) - double(m) * m) / (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
    const double p_next = a * (x * p - b * p_prev);
    p_prev = p;
    p = p_next;
  }
  return p;
}

SpectralModel sphere_model(int degree, int n_lat, int n_lon) {
  if (degree < 0) throw std::invalid_argument("sphere_model: degree must be >= 0");
  const int dim = (degree + 1) * (degree + 1);
  if (n_lat == 0) n_lat = degree + 1;
  if (n_lon == 0) n_lon = 2 * degree + 1;
  if (n_lat < degree + 1 || n_lon < 2 * degree + 1)
    throw std::invalid_argument("sphere_model: undersampled model");

  SpectralModel model;
  model.kind = "sphere";
  model.min_sampling_order = 1.5;
  model.dim = dim;
  model.sqrt_eigenvalues.resize(dim);
  {
    int i = 0;
    for (int n = 0; n <= degree; ++n)
      for (int m = -n; m <= n; ++m) model.sqrt_eigenvalues[i++] = std::sqrt(double(n) * (n + 1));
  }

  // Rotation generators from the ladder operators within each degree block:
  // Jp |n,m> = sqrt(n(n+1) - m(m+1)) |n,m+1>, Jm its adjoint, Jz |n,m> = m.
  // D1 = i (Jp + Jm)/2, D2 = (Jp - Jm)/2, D3 = i Jz; all skew-Hermitian and
  // -sum D_j^2 = Jx^2 + Jy^2 + Jz^2 = n(n+1) blockwise.
  CMat d1(dim, dim), d2(dim, dim), d3(dim, dim);
  {
    int base = 0;
    for (int n = 0; n <= degree; ++n) {
      const int block = 2 * n + 1;
      for (int mi = 0; mi < block; ++mi) {
        const int m = mi - n;
        d3(base + mi, base + mi) = cdbl(0.0, m);
        if (mi + 1 < block) {
          const double up = std::sqrt(double(n) * (n + 1) - double(m) * (m + 1));
          // Jp entry: row (m+1), column m.
          d1(base + mi + 1, base + mi) += cdbl(0.0, 0.5 * up);
          d2(base + mi + 1, base + mi) += cdbl(0.5 * up, 0.0);
          // Jm entry: row m, column (m+1).
          d1(base + mi, base + mi + 1) += cdbl(0.0, 0.5 * up);
          d2(base + mi, base + mi + 1) += cdbl(-0.5 * up, 0.0);
        }
      }
      base += block;
    }
  }
  model.generators.push_back(std::move(d1));
  model.generators.push_back(std::move(d2));
  model.generators.push_back(std::move(d3));

  // Product quadrature grid: Gauss-Legendre in x = cos(theta) tensored with
  // equispaced longitudes.  Exact on products of basis functions up to the
  // model bandwidth, which is what makes the sampling frames tight.
  const QuadratureRule lat = gauss_legendre(n_lat);
  NodeData nd;
  const int node_count = n_lat * n_lon;
  nd.points.resize(node_count);
  nd.weights.resize(node_count);
  nd.eval = CMat(dim, node_count);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  int k = 0;
  for (int a = 0; a < n_lat; ++a) {
    const double x = lat.nodes[a];
    const double theta = std::acos(x);
    for (int b = 0; b < n_lon; ++b, ++k) {
      const double phi = kTwoPi * b / n_lon;
      nd.points[k] = {theta, phi};
      nd.weights[k] = lat.weights[a] * (kTwoPi / n_lon);
      int i = 0;
      for (int n = 0; n <= degree; ++n)
        for (int m = -n; m <= n; ++m, ++i) {
          const double leg = normalized_legendre(n, m, x);
          nd.eval(i, k) = amp * leg * cdbl(std::cos(m * phi), std::sin(m * phi));
        }
    }
  }
  model.nodes = std::move(nd);
  model.validate();
  return model;
}

SpectralModel graph_model(const std::vector<std::vector<double>>& laplacian) {
  const int n = static_cast<int>(laplacian.size());
  if (n == 0) throw std::invalid_argument("graph_model: empty matrix");
  if (n > 2048) throw std::invalid_argument("graph_model: matrix larger than 2048 x 2048");

  CMat a(n, n);
  double scale = 0.0;
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(laplacian[r].size()) != n)
      throw std::invalid_argument("graph_model: matrix is not square");
    for (int c = 0; c < n; ++c) {
      a(r, c) = laplacian[r][c];
      scale = std::max(scale, std::abs(laplacian[r][c]));
    }
  }
  scale = std::max(scale, 1.0);
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      if (std::abs(laplacian[r][c] - laplacian[c][r]) > 1e-12 * scale)
        throw std::invalid_argument("graph_model: matrix is not symmetric");

  EigenDecomposition eig = hermitian_eigen(a);
  for (double& v : eig.values) {
    if (v < -1e-10)
      throw std::invalid_argument("graph_model: matrix is not positive semidefinite");
    if (v < 0.0) v = 0.0;
  }

  SpectralModel model;
  model.kind = "graph";
  model.min_sampling_order = 0.0;
  model.dim = n;
  model.sqrt_eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) model.sqrt_eigenvalues[i] = std::sqrt(eig.values[i]);

  // The vertex set is the natural node set: unit weights, and the i-th basis
  // function evaluated at vertex k is the eigenvector entry U(k, i).
  NodeData nd;
  nd.points.resize(n);
  nd.weights.assign(n, 1.0);
  nd.eval = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    nd.points[k] = {double(k)};
    for (int i = 0; i < n; ++i) nd.eval(i, k) = eig.vectors(k, i);
  }
  model.nodes = std::move(nd);
  model.validate();
  return model;
}

}  // namespace spw
