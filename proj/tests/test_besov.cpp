#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "spw/besov.hpp"
#include "spw/models.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"

using namespace spw;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

SpectralVector circle_mode(const SpectralModel& m, int n, cdbl weight = 1.0) {
  SpectralVector f(m.dim);
  for (int i = 0; i < m.dim; ++i)
    if (circle_mode_number(i) == n) f.c[i] = weight;
  return f;
}

}  // namespace

TEST_CASE("approximation norm: closed form for a single mode, stable beyond coverage") {
  const SpectralModel m = circle_model(4);
  const SpectralVector f = circle_mode(m, 3);
  const double nf = norm2(f.c);
  const double alpha = 0.5, q = 2.0;

  // E(f, 1) = E(f, 2) = ||f||, E(f, 4) = 0, so the dyadic sum is
  // ||f||^q (1 + 2^{alpha q}) and the norm is ||f|| (1 + (1 + 2^{alpha q})^{1/q}).
  const double want = nf * (1.0 + std::pow(1.0 + std::pow(2.0, alpha * q), 1.0 / q));
  const BesovReport rep = besov_approx(m, {alpha, q, 1}, f, 2);
  CHECK(rep.value == doctest::Approx(want).epsilon(1e-14));

  // Adding levels past the spectrum changes nothing, bit for bit.
  const BesovReport more = besov_approx(m, {alpha, q, 1}, f, 9);
  CHECK(more.value == rep.value);

  // q = infinity takes the sup instead: max(||f||, 2^{alpha} ||f||).
  const BesovReport sup = besov_approx(m, {alpha, kInf, 1}, f, 2);
  CHECK(sup.value == doctest::Approx(nf * (1.0 + std::sqrt(2.0))).epsilon(1e-14));

  // Too few levels to cover the spectrum: the error names the requirement.
  try {
    (void)besov_approx(m, {alpha, q, 1}, f, 1);
    FAIL("expected a coverage error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("band-sum norm: closed form for a mode split across two bands") {
  const SpectralModel m = circle_model(4);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  const SpectralVector f = circle_mode(m, 3);
  const double nf = norm2(f.c);

  // G_1(3) = G_2(3) = 1/2, every other band vanishes at lambda = 3, so
  // the sum is (2^{alpha} sqrt(1/2))^q + (2^{2 alpha} sqrt(1/2))^q.
  const double alpha = 0.5, q = 2.0;
  const double want = nf * std::sqrt(std::pow(2.0, 2.0 * alpha) * 0.5 +
                                     std::pow(2.0, 4.0 * alpha) * 0.5);
  const BesovReport rep = besov_lp(m, pou, {alpha, q, 1}, f);
  CHECK(rep.value == doctest::Approx(want).epsilon(1e-13));

  const BesovReport sup = besov_lp(m, pou, {alpha, kInf, 1}, f);
  CHECK(sup.value ==
        doctest::Approx(nf * std::pow(2.0, 2.0 * alpha) * std::sqrt(0.5)).epsilon(1e-13));
}

TEST_CASE("modulus-route norm: finite, positive, homogeneous") {
  const SpectralModel m = circle_model(4);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(1);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const BesovParams p{0.5, 2.0, 1};

  const BesovReport rep = besov_modulus(m, cache, p, f);
  CHECK(std::isfinite(rep.value));
  CHECK(rep.value > 0.0);
  CHECK(rep.tail_low >= 0.0);
  CHECK(rep.tail_high >= 0.0);
  CHECK(rep.grid_points == 200);

  SpectralVector two(f.c);
  scale(2.0, two.c);
  const BesovReport doubled = besov_modulus(m, cache, p, two);
  CHECK(doubled.value == doctest::Approx(2.0 * rep.value).epsilon(1e-10));

  CHECK(besov_modulus(m, cache, p, SpectralVector(m.dim)).value == 0.0);
  CHECK_THROWS_AS((void)besov_modulus(m, cache, {1.5, 2.0, 1}, f), std::invalid_argument);
  CHECK_THROWS_AS((void)besov_modulus(m, cache, {0.5, 0.5, 1}, f), std::invalid_argument);
}

TEST_CASE("derivative route with floor(alpha) = 0 equals the order-1 modulus route bitwise") {
  const SpectralModel m = circle_model(4);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(2);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const double alpha = 0.3, q = 2.0;
  const BesovReport via_modulus = besov_modulus(m, cache, {alpha, q, 1}, f);
  const BesovReport via_derivative = besov_derivative(m, cache, alpha, q, f);
  CHECK(via_derivative.value == via_modulus.value);
  CHECK_THROWS_AS((void)besov_derivative(m, cache, 1.0, q, f), std::invalid_argument);
}

TEST_CASE("zygmund route with k = 1 equals the order-2 modulus route at alpha = 1 bitwise") {
  const SpectralModel m = circle_model(4);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(3);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const BesovReport via_modulus = besov_modulus(m, cache, {1.0, 2.0, 2}, f);
  const BesovReport via_zygmund = besov_zygmund(m, cache, 1, 2.0, f);
  CHECK(via_zygmund.value == via_modulus.value);
  CHECK_THROWS_AS((void)besov_zygmund(m, cache, 0, 2.0, f), std::invalid_argument);
}

TEST_CASE("k-functional route: bracket integrals stay within sqrt(2) of each other") {
  const SpectralModel m = circle_model(8);
  RandomStream rng(4);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const BesovReport rep = besov_kfun(m, {0.7, 2.0, 2}, f);
  CHECK(std::isfinite(rep.value));
  CHECK(rep.lower_value > 0.0);
  CHECK(rep.lower_value <= rep.upper_value * (1.0 + 1e-12));
  CHECK(rep.upper_value <= std::sqrt(2.0) * rep.lower_value * (1.0 + 1e-12));
  CHECK(rep.value >= rep.lower_value * (1.0 - 1e-12));
  CHECK(rep.value <= rep.upper_value * (1.0 + 1e-12));
}

TEST_CASE("frame-coefficient norm equals the band-sum norm for a tight system") {
  const SpectralModel m = circle_model(8);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  const FrameSystem sys = build_frame_system(m, pou, 0.1, 2.0, 1.0);
  RandomStream rng(5);
  const BesovParams p{0.5, 2.0, 1};
  for (int t = 0; t < 5; ++t) {
    const SpectralVector f(rng.next_complex_vector(m.dim));
    const double via_frame = besov_frame(sys, p, f).value;
    const double via_bands = besov_lp(m, pou, p, f).value;
    CHECK(via_frame == doctest::Approx(via_bands).epsilon(1e-9));
  }
}

TEST_CASE("modulus-route refinement grows monotonically and converges") {
  const SpectralModel m = circle_model(4);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(6);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const BesovParams p{0.5, 2.0, 1};

  const double coarse = besov_modulus(m, cache, p, f, {}, ModulusGrid{9}).value;
  const double fine = besov_modulus(m, cache, p, f, {}, ModulusGrid{17}).value;
  CHECK(coarse <= fine * (1.0 + 1e-14));

  const BesovRefinement ref =
      besov_modulus_converged(m, cache, p, f, {}, ModulusGrid{9}, 1e-3, 3);
  CHECK(ref.report.value >= fine - 1e-14);
  CHECK(ref.points_per_axis > 9);
  CHECK(ref.refinements >= 1);
}

TEST_CASE("window parameters are validated") {
  const SpectralModel m = circle_model(2);
  const GroupCache cache = build_group_cache(m);
  const SpectralVector f = circle_mode(m, 1);
  NormWindow bad;
  bad.s_min = 1.0;
  bad.s_max = 0.5;
  CHECK_THROWS_AS((void)besov_modulus(m, cache, {0.5, 2.0, 1}, f, bad),
                  std::invalid_argument);
  NormWindow tiny;
  tiny.points = 1;
  CHECK_THROWS_AS((void)besov_modulus(m, cache, {0.5, 2.0, 1}, f, tiny),
                  std::invalid_argument);
}

TEST_CASE("method equivalence table on a small model") {
  const SpectralModel m = circle_model(4);
  const GroupCache cache = build_group_cache(m);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  const FrameSystem sys = build_frame_system(m, pou, 0.1, 2.0, 1.0);
  RandomStream rng(7);
  const BesovParams p{0.5, 2.0, 1};
  const EquivalenceTable table = equivalence_report(m, cache, pou, &sys, p, 4, 100.0, rng);

  CHECK(table.all_finite);
  CHECK(table.scale_invariant);
  CHECK(table.pass);
  CHECK(table.worst_spread < 100.0);
  CHECK(table.methods.size() >= 5);  // modulus, kfun, approx, lp, frame, derivative
  // mode sweep plus ensemble plus the doubled probe
  CHECK(table.rows.size() == static_cast<size_t>(m.dim) + 4 + 1);
  for (const EquivalenceRow& row : table.rows)
    REQUIRE(row.values.size() == table.methods.size());
  CHECK(!table.pairs.empty());
  for (const EquivalencePair& pair : table.pairs) {
    CHECK(pair.ratio_min > 0.0);
    CHECK(pair.ratio_max >= pair.ratio_min);
  }
}
