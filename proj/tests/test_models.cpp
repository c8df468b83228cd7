#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "spw/models.hpp"
#include "spw/quadrature.hpp"
#include "spw/rng.hpp"
#include "test_util.hpp"

using namespace spw;

namespace {

// Discrete quadrature energy sum_k w_k |f(x_k)|^2 from the model's node data.
double node_energy(const SpectralModel& model, const SpectralVector& f) {
  const NodeData& nd = *model.nodes;
  double s = 0.0;
  for (int k = 0; k < nd.count(); ++k) {
    cdbl sample = 0.0;
    for (int i = 0; i < model.dim; ++i) sample += f.c[i] * nd.eval(i, k);
    s += nd.weights[k] * std::norm(sample);
  }
  return s;
}

CMat casimir(const SpectralModel& model) {
  CMat sum(model.dim, model.dim);
  for (const CMat& d : model.generators) {
    const CMat dd = matmul(d, d);
    for (size_t i = 0; i < sum.a.size(); ++i) sum.a[i] -= dd.a[i];
  }
  return sum;
}

}  // namespace

TEST_CASE("circle model: spectrum, mode order, generator") {
  const SpectralModel m = circle_model(2);
  m.validate();
  CHECK(m.dim == 5);
  CHECK(m.kind == "circle");
  const std::vector<double> want{0.0, 1.0, 1.0, 2.0, 2.0};
  for (int i = 0; i < 5; ++i) CHECK(m.sqrt_eigenvalues[i] == want[i]);

  const std::vector<int> modes{0, -1, 1, -2, 2};
  for (int i = 0; i < 5; ++i) {
    CHECK(circle_mode_number(i) == modes[i]);
    // d/dtheta is diagonal with entry i*n on mode n.
    CHECK(std::abs(m.generators[0](i, i) - cdbl(0.0, modes[i])) < 1e-15);
  }
  // L = -D^2 reproduces the eigenvalues.
  const CMat c = casimir(m);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(c(i, i) - cdbl(modes[i] * modes[i])) < 1e-14);
}

TEST_CASE("circle nodes give exact discrete Parseval on the full band") {
  const SpectralModel m = circle_model(6);
  RandomStream rng(2);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  CHECK(node_energy(m, f) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-13));
}

TEST_CASE("circle rejects undersampled node counts") {
  CHECK_THROWS_AS((void)circle_model(2, 3), std::invalid_argument);
  CHECK_NOTHROW((void)circle_model(2, 5));
  CHECK_NOTHROW((void)circle_model(2, 9));
}

TEST_CASE("sphere model: dimension, spectrum, Casimir, node quadrature") {
  const SpectralModel m = sphere_model(2);
  m.validate();
  CHECK(m.dim == 9);
  CHECK(m.kind == "sphere");
  for (int i = 0; i < m.dim; ++i) {
    const auto [n, order] = sphere_degree_order(i);
    CHECK(m.sqrt_eigenvalues[i] == doctest::Approx(std::sqrt(n * (n + 1.0))).epsilon(1e-14));
    CHECK(order >= -n);
    CHECK(order <= n);
  }

  // -sum_j D_j^2 is block diagonal with n(n+1) per degree block.
  const CMat c = casimir(m);
  CMat want(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i) {
    const auto [n, order] = sphere_degree_order(i);
    (void)order;
    want(i, i) = n * (n + 1.0);
  }
  CHECK(max_abs_diff(c, want) < 1e-12);

  RandomStream rng(5);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  CHECK(node_energy(m, f) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-12));
}

TEST_CASE("sphere generators close under commutation: [D_a, D_b] = -D_c cyclically") {
  const SpectralModel m = sphere_model(3);
  const CMat& d1 = m.generators[0];
  const CMat& d2 = m.generators[1];
  const CMat& d3 = m.generators[2];
  CHECK(testutil::max_diff_scaled(testutil::commutator(d1, d2), d3, cdbl(-1.0)) < 1e-10);
  CHECK(testutil::max_diff_scaled(testutil::commutator(d2, d3), d1, cdbl(-1.0)) < 1e-10);
  CHECK(testutil::max_diff_scaled(testutil::commutator(d3, d1), d2, cdbl(-1.0)) < 1e-10);
}

TEST_CASE("normalized legendre functions are orthonormal on [-1, 1]") {
  const QuadratureRule rule = gauss_legendre(16);
  for (int m_ord = 0; m_ord <= 2; ++m_ord)
    for (int n1 = m_ord; n1 <= 3; ++n1)
      for (int n2 = m_ord; n2 <= 3; ++n2) {
        double s = 0.0;
        for (size_t k = 0; k < rule.nodes.size(); ++k)
          s += rule.weights[k] * normalized_legendre(n1, m_ord, rule.nodes[k]) *
               normalized_legendre(n2, m_ord, rule.nodes[k]);
        CHECK(s == doctest::Approx(n1 == n2 ? 1.0 : 0.0).epsilon(1e-12));
      }
  // Spot value: the n=1, m=0 function is sqrt(3/2) x.
  CHECK(normalized_legendre(1, 0, 0.3) == doctest::Approx(std::sqrt(1.5) * 0.3).epsilon(1e-14));
}

TEST_CASE("graph model: path and cycle spectra") {
  // Path on 3 vertices: eigenvalues 0, 1, 3.
  const SpectralModel p3 = graph_model({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
  p3.validate();
  CHECK(p3.kind == "graph");
  CHECK(!p3.has_generators());
  CHECK(p3.sqrt_eigenvalues[0] == doctest::Approx(0.0));
  CHECK(p3.sqrt_eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p3.sqrt_eigenvalues[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  // Cycle on 4 vertices: Laplacian eigenvalues 2 - 2cos(2 pi k / 4) = 0, 2, 2, 4.
  const SpectralModel c4 = graph_model({{2, -1, 0, -1}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {-1, 0, -1, 2}});
  CHECK(c4.sqrt_eigenvalues[0] == doctest::Approx(0.0));
  CHECK(c4.sqrt_eigenvalues[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(c4.sqrt_eigenvalues[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(c4.sqrt_eigenvalues[3] == doctest::Approx(2.0).epsilon(1e-12));

  // Vertices double as an exact node set (orthogonal eigenvector matrix).
  RandomStream rng(9);
  const SpectralVector f(rng.next_complex_vector(c4.dim));
  CHECK(node_energy(c4, f) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-12));
}

TEST_CASE("graph model rejects asymmetric and indefinite input") {
  CHECK_THROWS_AS((void)graph_model({{1, 2}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS((void)graph_model({{-1, 0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("model JSON round trip preserves everything") {
  const SpectralModel m = sphere_model(2);
  const SpectralModel back = model_from_json(model_to_json(m));
  back.validate();
  CHECK(back.dim == m.dim);
  CHECK(back.kind == m.kind);
  CHECK(back.min_sampling_order == m.min_sampling_order);
  for (int i = 0; i < m.dim; ++i)
    CHECK(back.sqrt_eigenvalues[i] == m.sqrt_eigenvalues[i]);
  REQUIRE(back.generator_count() == m.generator_count());
  for (int j = 0; j < m.generator_count(); ++j)
    CHECK(max_abs_diff(back.generators[j], m.generators[j]) == 0.0);
  REQUIRE(back.has_nodes());
  CHECK(max_abs_diff(back.nodes->eval, m.nodes->eval) == 0.0);
  for (size_t k = 0; k < m.nodes->weights.size(); ++k)
    CHECK(back.nodes->weights[k] == m.nodes->weights[k]);
}

TEST_CASE("model file save and load") {
  const SpectralModel m = circle_model(3);
  const std::string path = "test_model_roundtrip.json";
  save_model(m, path);
  const SpectralModel back = load_model(path);
  CHECK(back.dim == m.dim);
  CHECK(back.sqrt_eigenvalues == m.sqrt_eigenvalues);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_model("no_such_file.json"), std::runtime_error);
}

TEST_CASE("validate rejects broken structure") {
  SpectralModel m = circle_model(2);
  SUBCASE("descending eigenvalues") {
    std::swap(m.sqrt_eigenvalues[0], m.sqrt_eigenvalues[4]);
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }
  SUBCASE("negative eigenvalue") {
    m.sqrt_eigenvalues[0] = -0.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }
  SUBCASE("non-skew generator") {
    m.generators[0](0, 0) = 1.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }
}
