#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spw/models.hpp"
#include "spw/rng.hpp"
#include "spw/spectral.hpp"

using namespace spw;

namespace {

// Puts weight 1 on every stored coordinate whose mode number is n.
SpectralVector circle_mode(const SpectralModel& m, int n, cdbl weight = 1.0) {
  SpectralVector f(m.dim);
  for (int i = 0; i < m.dim; ++i)
    if (circle_mode_number(i) == n) f.c[i] = weight;
  return f;
}

}  // namespace

TEST_CASE("band projection zeroes strictly above the cut and keeps the rest bitwise") {
  const SpectralModel m = circle_model(3);
  RandomStream rng(1);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const SpectralVector p = pw_project(m, 2.0, f);
  for (int i = 0; i < m.dim; ++i) {
    if (m.sqrt_eigenvalues[i] > 2.0) CHECK(p.c[i] == cdbl(0.0));
    else CHECK(p.c[i] == f.c[i]);  // the eigenvalue 2 itself stays
  }
  // Idempotent, and a second projection changes nothing bitwise.
  const SpectralVector pp = pw_project(m, 2.0, p);
  CHECK(pp.c == p.c);

  CHECK(in_paley_wiener(m, 2.0, p));
  CHECK(!in_paley_wiener(m, 2.0, f));
  CHECK(in_paley_wiener(m, 0.5, SpectralVector(m.dim)));  // zero vector
}

TEST_CASE("multiplier application matches a hand computation and rejects bad symbols") {
  const SpectralModel m = circle_model(2);
  SpectralVector f(m.dim);
  for (int i = 0; i < m.dim; ++i) f.c[i] = 1.0;
  const SpectralVector g =
      apply_multiplier(m, [](double x) { return cdbl(x * x); }, f);
  for (int i = 0; i < m.dim; ++i) {
    const double lam = m.sqrt_eigenvalues[i];
    CHECK(g.c[i] == cdbl(lam * lam));
  }
  CHECK_THROWS_AS(
      (void)apply_multiplier(m, [](double) { return cdbl(std::nan("")); }, f),
      std::domain_error);
}

TEST_CASE("sobolev norm: closed form on a single mode, and negative order throws") {
  const SpectralModel m = circle_model(3);
  const SpectralVector f = circle_mode(m, 2, cdbl(3.0));
  // One coordinate carries mode +2 with weight 3 and eigenvalue 2:
  // norm = 3 * (1 + 4)^{r/2}.
  CHECK(sobolev_norm(m, 0.0, f) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sobolev_norm(m, 1.0, f) == doctest::Approx(3.0 * std::sqrt(5.0)).epsilon(1e-14));
  CHECK(sobolev_norm(m, 2.5, f) == doctest::Approx(3.0 * std::pow(5.0, 1.25)).epsilon(1e-13));
  CHECK_THROWS_AS((void)sobolev_norm(m, -1.0, f), std::domain_error);
}

TEST_CASE("laplacian power norm: zero eigenvalue contributes via 0^0 = 1 at s = 0") {
  const SpectralModel m = circle_model(2);
  const SpectralVector f = circle_mode(m, 0);
  CHECK(laplacian_power_norm(m, 0.0, f) == doctest::Approx(1.0));
  CHECK(laplacian_power_norm(m, 1.0, f) == doctest::Approx(0.0));
  const SpectralVector g = circle_mode(m, 2);
  CHECK(laplacian_power_norm(m, 1.5, g) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
  CHECK_THROWS_AS((void)laplacian_power_norm(m, -0.5, f), std::domain_error);
}

TEST_CASE("best approximation error is exactly the projection residual") {
  const SpectralModel m = circle_model(3);
  RandomStream rng(4);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  double outside = 0.0;
  for (int i = 0; i < m.dim; ++i)
    if (m.sqrt_eigenvalues[i] > 1.0) outside += std::norm(f.c[i]);
  CHECK(best_approximation_error(m, 1.0, f) == doctest::Approx(std::sqrt(outside)));
  // Band-limited input: error identically zero.
  CHECK(best_approximation_error(m, 3.0, f) == 0.0);
}

TEST_CASE("bernstein ratio: exact on single modes, throws off-band") {
  const SpectralModel m = circle_model(4);
  const SpectralVector edge = circle_mode(m, 2);
  const BernsteinReport at_edge = bernstein_check(m, 2.0, 1.0, edge);
  CHECK(at_edge.ratio == doctest::Approx(1.0).epsilon(1e-15));
  const BernsteinReport inside = bernstein_check(m, 4.0, 1.0, edge);
  CHECK(inside.ratio == doctest::Approx(0.5).epsilon(1e-15));
  const BernsteinReport squared = bernstein_check(m, 4.0, 2.0, edge);
  CHECK(squared.ratio == doctest::Approx(0.25).epsilon(1e-15));

  const SpectralVector outside = circle_mode(m, 4);
  CHECK_THROWS_AS((void)bernstein_check(m, 2.0, 1.0, outside), std::invalid_argument);
  CHECK_THROWS_AS((void)bernstein_check(m, -1.0, 1.0, edge), std::invalid_argument);
}

TEST_CASE("bernstein ratio stays below one on random band-limited vectors") {
  const SpectralModel m = circle_model(8);
  RandomStream rng(6);
  for (int t = 0; t < 25; ++t) {
    const SpectralVector f = pw_project(m, 5.0, SpectralVector(rng.next_complex_vector(m.dim)));
    for (double s : {0.5, 1.0, 2.0}) {
      const BernsteinReport rep = bernstein_check(m, 5.0, s, f);
      CHECK(rep.ratio <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("jackson inequality: exact ratio on a single mode") {
  const SpectralModel m = circle_model(4);
  const SpectralVector f = circle_mode(m, 2);
  // E(f, 1) = ||f|| = 1, and E * omega^r / ||L^{r/2} f|| = (omega/lambda)^r.
  const double e = best_approximation_error(m, 1.0, f);
  CHECK(e == doctest::Approx(1.0));
  // ratio (omega/lambda)^r with omega = 1, lambda = 2
  CHECK(e * 1.0 / laplacian_power_norm(m, 1.0, f) == doctest::Approx(0.5));
  CHECK(e * 1.0 / laplacian_power_norm(m, 2.0, f) == doctest::Approx(0.25));
}

TEST_CASE("truncated series for i sqrt(L): odd symbol, zero mode fixed exactly") {
  const SpectralModel m = circle_model(4);
  const SpectralVector dc = circle_mode(m, 0, cdbl(2.0, -1.0));
  for (int k : {1, 2, 7}) {
    const RieszBoasResult r = riesz_boas_apply(m, 4.0, dc, k);
    CHECK(norm2(r.approx.c) == 0.0);  // exact, for every truncation length
    CHECK(r.error == 0.0);
  }
}

TEST_CASE("truncated series converges to i sqrt(L) f on band-limited vectors") {
  const SpectralModel m = circle_model(4);
  RandomStream rng(8);
  const SpectralVector f(rng.next_complex_vector(m.dim));

  // The target is i sqrt(L) f computed independently as a diagonal product.
  SpectralVector target(m.dim);
  for (int i = 0; i < m.dim; ++i)
    target.c[i] = cdbl(0.0, m.sqrt_eigenvalues[i]) * f.c[i];

  double prev = 1e300;
  for (int k : {8, 64, 512, 4096}) {
    const RieszBoasResult r = riesz_boas_apply(m, 4.0, f, k);
    // The reported error is against the same target.
    CHECK(r.error == doctest::Approx(norm2(sub(r.approx.c, target.c))).epsilon(1e-12));
    CHECK(r.error <= prev * 1.01);
    prev = r.error;
  }
  CHECK(prev < 1e-3 * norm2(f.c));  // 1/K convergence has kicked in

  CHECK_THROWS_AS((void)riesz_boas_apply(m, 2.0, f, 8), std::invalid_argument);
  CHECK_THROWS_AS((void)riesz_boas_apply(m, 4.0, f, 0), std::domain_error);
}
