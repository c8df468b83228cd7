#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "spw/frames.hpp"
#include "spw/models.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"
#include "spw/spectral.hpp"

using namespace spw;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;

double coefficient_energy(const std::vector<CVec>& coeffs) {
  double s = 0.0;
  for (const CVec& band : coeffs) s += norm2_sq(band);
  return s;
}
}  // namespace

TEST_CASE("circle sampling set: layout and discrete Parseval on the resolved band") {
  const SpectralModel m = circle_model(6);
  const double rho = 0.1;
  const SamplingSet set = build_sampling_set(m, rho);
  const int want_nodes = static_cast<int>(std::ceil(kTwoPi / rho));
  CHECK(set.count() == want_nodes);
  CHECK(set.weights[0] == doctest::Approx(kTwoPi / want_nodes).epsilon(1e-14));
  CHECK(set.resolved_band == doctest::Approx(6.0));  // grid resolves past the spectrum

  // sum_k |<mu_k, f>|^2 = ||f||^2 for f within the resolved band.
  RandomStream rng(1);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  CVec samples;
  matvec_adjoint(set.mu, f.c, samples);
  CHECK(norm2_sq(samples) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-12));
}

TEST_CASE("coarse circle sampling reports a smaller resolved band") {
  const SpectralModel m = circle_model(8);
  const SamplingSet set = build_sampling_set(m, kTwoPi / 5.0);  // five nodes
  CHECK(set.count() == 5);
  CHECK(set.resolved_band == doctest::Approx(2.0));  // (5 - 1) / 2
  CHECK_THROWS_AS((void)build_sampling_set(m, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)build_sampling_set(m, 1e-9), std::invalid_argument);
}

TEST_CASE("sphere sampling set achieves discrete Parseval on a fine grid") {
  const SpectralModel m = sphere_model(3);
  const SamplingSet set = build_sampling_set(m, 0.2);
  CHECK(set.resolved_band == doctest::Approx(m.max_sqrt_eigenvalue()));
  RandomStream rng(2);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  CVec samples;
  matvec_adjoint(set.mu, f.c, samples);
  CHECK(norm2_sq(samples) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-11));
}

TEST_CASE("graph sampling uses the vertices verbatim") {
  const SpectralModel g = graph_model({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
  const SamplingSet set = build_sampling_set(g, 0.42);
  CHECK(set.count() == 3);
  CHECK(set.rho == 1.0);
  RandomStream rng(3);
  const SpectralVector f(rng.next_complex_vector(3));
  CVec samples;
  matvec_adjoint(set.mu, f.c, samples);
  CHECK(norm2_sq(samples) == doctest::Approx(norm2_sq(f.c)).epsilon(1e-12));
}

TEST_CASE("poincare calibration: exact Parseval regime pins both constants at one") {
  const SpectralModel m = circle_model(1);
  const SamplingSet set = build_sampling_set(m, 0.0025);
  RandomStream rng(4);
  const PoincareReport rep = poincare_calibrate(m, set, 2.0, 16, 0.0, rng);
  CHECK(std::abs(rep.c_hat - 1.0) <= 1e-10);
  CHECK(std::abs(rep.big_c_hat - 1.0) <= 1e-10);
  CHECK(rep.ok);
  CHECK(rep.trials == 16);
}

TEST_CASE("poincare calibration survives an aliased grid via the remainder term") {
  const SpectralModel m = circle_model(8);
  const SamplingSet set = build_sampling_set(m, kTwoPi / 5.0);
  RandomStream rng(5);
  const PoincareReport rep = poincare_calibrate(m, set, 2.0, 20, 0.0, rng);
  // Draws restricted to the resolved band still sample exactly ...
  CHECK(rep.c_hat == doctest::Approx(1.0).epsilon(1e-9));
  // ... while aliasing pushes work onto rho^{2m} ||L^{m/2} f||^2: C_hat stays finite.
  CHECK(std::isfinite(rep.big_c_hat));
  CHECK(rep.big_c_hat > 0.0);
}

TEST_CASE("poincare calibration argument validation") {
  const SpectralModel m = circle_model(2);
  const SamplingSet set = build_sampling_set(m, 0.5);
  RandomStream rng(6);
  CHECK_THROWS_AS((void)poincare_calibrate(m, set, 2.0, 5, 0.0, rng), std::invalid_argument);
  // The circle family requires orders strictly above 1.
  CHECK_THROWS_AS((void)poincare_calibrate(m, set, 1.0, 16, 0.0, rng), std::invalid_argument);
}

TEST_CASE("band frame from a fine sampling set is nearly Parseval") {
  const SpectralModel m = circle_model(4);
  const SamplingSet set = build_sampling_set(m, 0.05);
  const PwFrame frame = pw_frame(m, set, 2.0, 0.1, 2.0, 1.0);
  CHECK(!frame.rank_deficient);
  CHECK(frame.lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(frame.upper == doctest::Approx(1.0).epsilon(1e-10));
  // Atoms are band limited by construction.
  for (int k = 0; k < frame.atoms.cols; ++k) {
    for (int i = 0; i < m.dim; ++i)
      if (m.sqrt_eigenvalues[i] > 2.0) CHECK(frame.atoms(i, k) == cdbl(0.0));
  }
}

TEST_CASE("undersampling a band is flagged as rank deficient") {
  const SpectralModel m = circle_model(4);  // the full band at omega = 4 has 9 modes
  const SamplingSet set = build_sampling_set(m, kTwoPi / 5.0);  // 5 nodes only
  const PwFrame frame = pw_frame(m, set, 4.0, 0.1, 2.0, 1.0);
  CHECK(frame.rank_deficient);
}

TEST_CASE("frame system on the circle: bounds, tightness, dual, reconstruction") {
  const SpectralModel m = circle_model(8);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  const double delta = 0.1;
  const FrameSystem sys = build_frame_system(m, pou, delta, 2.0, 1.0);

  CHECK(sys.dim == m.dim);
  // Bands whose support misses the spectrum carry no atoms; everything else does.
  REQUIRE(sys.bands.size() == 4);
  const std::vector<int> supports{3, 4, 10, 8};
  for (size_t b = 0; b < sys.bands.size(); ++b) {
    CHECK(static_cast<int>(sys.bands[b].support.size()) == supports[b]);
    CHECK(sys.bands[b].count() > 0);
  }
  CHECK(sys.atom_count() == 337);

  // Exact per-band quadrature makes the system tight to roundoff.
  CHECK(sys.lower >= 1.0 - delta - 1e-8);
  CHECK(sys.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sys.upper == doctest::Approx(1.0).epsilon(1e-9));

  RandomStream rng(7);
  const SpectralVector f(rng.next_complex_vector(m.dim));

  // Frame energy brackets the norm as the bounds promise.
  const std::vector<CVec> coeffs = analysis(sys, f);
  const double energy = coefficient_energy(coeffs);
  CHECK(energy >= (sys.lower - 1e-12) * norm2_sq(f.c));
  CHECK(energy <= (sys.upper + 1e-12) * norm2_sq(f.c));

  // S f recovers f here (tight frame, bounds 1).
  const SpectralVector sf = frame_operator_apply(sys, f);
  CHECK(norm2(sub(sf.c, f.c)) < 1e-9 * norm2(f.c));

  const FrameSystem dual = dual_frame(sys);
  REQUIRE(dual.has_dual);
  CHECK(dual.dual_lower == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dual.dual_upper == doctest::Approx(1.0).epsilon(1e-8));

  const SpectralVector g = reconstruct(dual, analysis(dual, f));
  CHECK(norm2(sub(g.c, f.c)) <= 1e-10 * norm2(f.c));

  // For a tight frame the canonical dual coincides with the frame itself.
  for (size_t b = 0; b < dual.bands.size(); ++b) {
    const FrameBand& band = dual.bands[b];
    for (int k = 0; k < band.count(); ++k)
      for (int si = 0; si < static_cast<int>(band.support.size()); ++si) {
        const cdbl atom = band.atoms(k, si);
        const cdbl dual_entry = band.dual(k, band.support[si]);
        CHECK(std::abs(atom - dual_entry) < 1e-9);
      }
  }

  CHECK_THROWS_AS((void)reconstruct(sys, coeffs), std::domain_error);  // no dual yet
}

TEST_CASE("frame construction rejects bad parameters and missing coverage") {
  const SpectralModel m = circle_model(8);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  CHECK_THROWS_AS((void)build_frame_system(m, pou, 0.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)build_frame_system(m, pou, 1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)build_frame_system(m, pou, 0.1, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)build_frame_system(m, pou, 0.1, 0.5, 1.0), std::invalid_argument);

  const PartitionOfUnity small = build_partition(3);
  try {
    (void)build_frame_system(m, small, 0.1, 2.0, 1.0);
    FAIL("expected a coverage error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("frame JSON round trip preserves atoms, bounds and the dual") {
  const SpectralModel m = circle_model(4);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  FrameSystem sys = dual_frame(build_frame_system(m, pou, 0.2, 2.0, 1.0));

  const FrameSystem back = frame_from_json(frame_to_json(sys));
  CHECK(back.dim == sys.dim);
  CHECK(back.delta == sys.delta);
  CHECK(back.lower == sys.lower);
  CHECK(back.upper == sys.upper);
  REQUIRE(back.has_dual == sys.has_dual);
  CHECK(back.dual_lower == sys.dual_lower);
  REQUIRE(back.bands.size() == sys.bands.size());
  for (size_t b = 0; b < sys.bands.size(); ++b) {
    CHECK(back.bands[b].index == sys.bands[b].index);
    CHECK(back.bands[b].omega == sys.bands[b].omega);
    CHECK(back.bands[b].rho == sys.bands[b].rho);
    CHECK(back.bands[b].support == sys.bands[b].support);
    CHECK(max_abs_diff(back.bands[b].atoms, sys.bands[b].atoms) == 0.0);
    CHECK(max_abs_diff(back.bands[b].dual, sys.bands[b].dual) == 0.0);
  }

  const std::string path = "test_frame_roundtrip.json";
  save_frame(sys, path);
  const FrameSystem loaded = load_frame(path);
  CHECK(loaded.atom_count() == sys.atom_count());
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_frame("no_such_frame.json"), std::runtime_error);

  // Reconstruction from the loaded system still works at full precision.
  RandomStream rng(8);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  const SpectralVector g = reconstruct(loaded, analysis(loaded, f));
  CHECK(norm2(sub(g.c, f.c)) <= 1e-10 * norm2(f.c));
}
