#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spw/eig.hpp"
#include "spw/linalg.hpp"
#include "spw/quadrature.hpp"
#include "spw/rng.hpp"

using namespace spw;

TEST_CASE("inner product is conjugate-linear in the first slot") {
  const CVec x{cdbl(0.0, 1.0), cdbl(2.0, 0.0)};
  const CVec y{cdbl(1.0, 0.0), cdbl(0.0, 3.0)};
  const cdbl d = dot(x, y);
  // conj(i)*1 + conj(2)*3i = -i + 6i = 5i
  CHECK(d.real() == doctest::Approx(0.0));
  CHECK(d.imag() == doctest::Approx(5.0));
  CHECK(norm2_sq(x) == doctest::Approx(5.0));
}

TEST_CASE("matvec and adjoint are consistent: <A^H y, x> = <y, A x>") {
  RandomStream rng(7);
  CMat A(4, 3);
  for (auto& v : A.a) v = rng.next_complex_normal();
  const CVec x = rng.next_complex_vector(3);
  const CVec y = rng.next_complex_vector(4);
  CVec ax, ahy;
  matvec(A, x, ax);
  matvec_adjoint(A, y, ahy);
  const cdbl lhs = dot(ahy, x);
  const cdbl rhs = dot(y, ax);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("jacobi eigensolver reproduces known spectra") {
  SUBCASE("real symmetric 2x2") {
    CMat a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const EigenDecomposition e = hermitian_eigen(a);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-13));
  }
  SUBCASE("complex Hermitian: Pauli-y has eigenvalues -1, 1") {
    CMat a(2, 2);
    a(0, 1) = cdbl(0.0, -1.0);
    a(1, 0) = cdbl(0.0, 1.0);
    const EigenDecomposition e = hermitian_eigen(a);
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("jacobi eigensolver: reconstruction and orthonormality on a random Hermitian") {
  const int n = 12;
  RandomStream rng(11);
  CMat a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = rng.next_normal();
    for (int j = i + 1; j < n; ++j) {
      const cdbl v = rng.next_complex_normal();
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  const EigenDecomposition e = hermitian_eigen(a);
  for (int j = 1; j < n; ++j) CHECK(e.values[j - 1] <= e.values[j]);

  // U^H U = I
  const CMat gram = matmul(adjoint(e.vectors), e.vectors);
  CHECK(max_abs_diff(gram, CMat::identity(n)) < 1e-12);

  // U diag(values) U^H = A
  CMat lam(n, n);
  for (int i = 0; i < n; ++i) lam(i, i) = e.values[i];
  const CMat rebuilt = matmul(matmul(e.vectors, lam), adjoint(e.vectors));
  CHECK(max_abs_diff(rebuilt, a) < 1e-10);
}

TEST_CASE("conjugate gradients solves an HPD system and rejects a non-PD one") {
  const int n = 10;
  RandomStream rng(3);
  CMat b(n, n);
  for (auto& v : b.a) v = rng.next_complex_normal();
  // A = B^H B + I is HPD.
  CMat a = matmul(adjoint(b), b);
  for (int i = 0; i < n; ++i) a(i, i) += 1.0;

  const CVec rhs = rng.next_complex_vector(n);
  const auto apply = [&](const CVec& x, CVec& y) { matvec(a, x, y); };
  const CVec x = solve_hpd(apply, rhs);
  CVec ax;
  matvec(a, x, ax);
  CHECK(norm2(sub(ax, rhs)) < 1e-10 * norm2(rhs));

  const auto negative = [&](const CVec& v, CVec& y) {
    y = v;
    for (auto& val : y) val = -val;
  };
  CHECK_THROWS_AS((void)solve_hpd(negative, rhs), std::runtime_error);
}

TEST_CASE("gauss-legendre nodes and weights match the classical values") {
  const QuadratureRule r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  const QuadratureRule r3 = gauss_legendre(3);
  CHECK(r3.nodes[1] == doctest::Approx(0.0));
  CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
  CHECK(r3.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  // n = 3 handles degree 5; integral of x^4 over [0, 1] is 1/5.
  const QuadratureRule r = gauss_legendre(3, 0.0, 1.0);
  double s = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    s += r.weights[i] * std::pow(r.nodes[i], 4);
  CHECK(s == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("random stream is deterministic per seed and statistically sane") {
  RandomStream a(123), b(123), c(124);
  bool identical = true, differs = false;
  for (int i = 0; i < 64; ++i) {
    const uint64_t va = a.next_u64();
    identical = identical && (va == b.next_u64());
    differs = differs || (va != c.next_u64());
  }
  CHECK(identical);
  CHECK(differs);

  RandomStream g(777);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = g.next_normal();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  RandomStream h(5);
  double e2 = 0.0;
  for (int i = 0; i < n; ++i) e2 += std::norm(h.next_complex_normal());
  CHECK(e2 / n == doctest::Approx(1.0).epsilon(0.05));
}
