#include "spw/frames.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "spw/eig.hpp"
#include "spw/models.hpp"
#include "spw/quadrature.hpp"
#include "spw/spectral.hpp"

namespace spw {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kNodeCap = 200000;

SamplingSet circle_sampling(const SpectralModel& model, double rho) {
  // Compare before converting: a tiny rho would overflow the int count.
  if (std::ceil(kTwoPi / rho) > kNodeCap)
    throw std::invalid_argument("build_sampling_set: rho too small (node cap exceeded)");
  const int count = static_cast<int>(std::ceil(kTwoPi / rho));
  SamplingSet set;
  set.rho = rho;
  set.weights.assign(count, kTwoPi / count);
  set.points.resize(count);
  set.mu = CMat(model.dim, count);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (int k = 0; k < count; ++k) {
    const double theta = kTwoPi * k / count;
    const double sw = std::sqrt(set.weights[k]);
    set.points[k] = {theta};
    for (int i = 0; i < model.dim; ++i) {
      const double n = circle_mode_number(i);
      // conj of the basis value, scaled by sqrt(w).
      set.mu(i, k) = sw * amp * cdbl(std::cos(n * theta), -std::sin(n * theta));
    }
  }
  const int resolved_mode = (count - 1) / 2;
  set.resolved_band = std::min(static_cast<double>(resolved_mode), model.max_sqrt_eigenvalue());
  return set;
}

SamplingSet sphere_sampling(const SpectralModel& model, double rho) {
  const int degree = static_cast<int>(std::lround(std::sqrt(double(model.dim)))) - 1;
  if (std::ceil(kPi / rho) * std::ceil(kTwoPi / rho) > kNodeCap)
    throw std::invalid_argument("build_sampling_set: rho too small (node cap exceeded)");
  const int n_lat = static_cast<int>(std::ceil(kPi / rho));
  const int n_lon = static_cast<int>(std::ceil(kTwoPi / rho));
  const QuadratureRule lat = gauss_legendre(n_lat);

  SamplingSet set;
  set.rho = rho;
  const int count = n_lat * n_lon;
  set.weights.resize(count);
  set.points.resize(count);
  set.mu = CMat(model.dim, count);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  int k = 0;
  for (int a = 0; a < n_lat; ++a) {
    const double x = lat.nodes[a];
    const double theta = std::acos(x);
    for (int b = 0; b < n_lon; ++b, ++k) {
      const double phi = kTwoPi * b / n_lon;
      const double w = lat.weights[a] * (kTwoPi / n_lon);
      const double sw = std::sqrt(w);
      set.weights[k] = w;
      set.points[k] = {theta, phi};
      for (int i = 0; i < model.dim; ++i) {
        const auto [n, m] = sphere_degree_order(i);
        const double leg = normalized_legendre(n, m, x);
        set.mu(i, k) = sw * amp * leg * cdbl(std::cos(m * phi), -std::sin(m * phi));
      }
    }
  }
  const int resolved_degree =
      std::min(degree, std::min(n_lat - 1, (n_lon - 1) / 2));
  set.resolved_band =
      resolved_degree >= 0 ? std::sqrt(double(resolved_degree) * (resolved_degree + 1)) : 0.0;
  return set;
}

SamplingSet node_data_sampling(const SpectralModel& model, double rho, double resolved) {
  const NodeData& nd = *model.nodes;
  SamplingSet set;
  set.rho = rho;
  set.weights = nd.weights;
  set.points = nd.points;
  set.mu = CMat(model.dim, nd.count());
  for (int k = 0; k < nd.count(); ++k) {
    const double sw = std::sqrt(nd.weights[k]);
    for (int i = 0; i < model.dim; ++i) set.mu(i, k) = sw * std::conj(nd.eval(i, k));
  }
  set.resolved_band = resolved;
  return set;
}

// Extreme eigenvalues of a Hermitian positive semidefinite frame operator.
// Small systems are resolved exactly; past the atom threshold we fall back
// to power iteration (largest) and inverse-power iteration (smallest), both
// stopped when the Rayleigh quotient settles to 1e-10.  Those estimates are
// always interior to the true spectrum, so recorded bounds never widen.
std::pair<double, double> extreme_frame_bounds(const CMat& s, int atom_count) {
  const int n = s.rows;
  if (n == 1) return {s(0, 0).real(), s(0, 0).real()};
  if (atom_count <= 4096) {
    EigenDecomposition eig = hermitian_eigen(s);
    return {eig.values.front(), eig.values.back()};
  }

  const auto rayleigh = [&](const CVec& v) {
    CVec sv;
    matvec(s, v, sv, Exec::serial);
    return dot(v, sv).real() / norm2_sq(v);
  };
  const auto start = [&]() {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + double(i) / (2.0 * n);
    scale(1.0 / norm2(v), v);
    return v;
  };

  double upper = 0.0;
  {
    CVec v = start();
    double prev = rayleigh(v);
    for (int it = 0; it < 100000; ++it) {
      CVec sv;
      matvec(s, v, sv, Exec::serial);
      const double nn = norm2(sv);
      if (nn == 0.0) break;
      scale(1.0 / nn, sv);
      v = std::move(sv);
      const double cur = rayleigh(v);
      if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    upper = prev;
  }

  double lower = 0.0;
  try {
    CVec v = start();
    double prev = rayleigh(v);
    for (int it = 0; it < 100000; ++it) {
      CVec w = solve_hpd(
          [&](const CVec& x, CVec& y) { matvec(s, x, y, Exec::serial); }, v, 1e-12);
      const double nn = norm2(w);
      if (nn == 0.0) break;
      scale(1.0 / nn, w);
      v = std::move(w);
      const double cur = rayleigh(v);
      if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    lower = prev;
  } catch (const std::runtime_error&) {
    lower = 0.0;  // operator numerically singular
  }
  return {lower, upper};
}

void check_frame_inputs(const SpectralModel& model, double delta, double m, double c) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("frame construction: delta must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("frame construction: calibrated C must be > 0");
  if (!(m > model.min_sampling_order))
    throw std::invalid_argument(
        "frame construction: smoothness order must exceed the model's minimum sampling order");
}

}  // namespace

SamplingSet build_sampling_set(const SpectralModel& model, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("build_sampling_set: rho must be > 0");
  if (model.kind == "circle") return circle_sampling(model, rho);
  if (model.kind == "sphere") return sphere_sampling(model, rho);
  if (!model.has_nodes())
    throw std::domain_error("build_sampling_set: model has no node data");
  if (model.kind == "graph") {
    SamplingSet set = node_data_sampling(model, 1.0, model.max_sqrt_eigenvalue());
    return set;
  }
  // Unknown kind: use the stored nodes verbatim and make no exactness claim.
  return node_data_sampling(model, rho, 0.0);
}

PoincareReport poincare_calibrate(const SpectralModel& model, const SamplingSet& set,
                                  double m, int trials, double C_target, RandomStream& rng) {
  if (trials < 10)
    throw std::invalid_argument("poincare_calibrate: need at least 10 trials");
  if (!(m > model.min_sampling_order))
    throw std::invalid_argument(
        "poincare_calibrate: order must exceed the model's minimum sampling order");

  const double rho2m = std::pow(set.rho, 2.0 * m);
  PoincareReport rep;
  rep.m = m;
  rep.rho = set.rho;
  rep.trials = trials;

  double cmin = 0.0, cmax = 0.0;
  bool have_min = false, have_max = false;
  for (int trial = 0; trial < trials; ++trial) {
    SpectralVector f(rng.next_complex_vector(model.dim));
    const double hm = sobolev_norm(model, m, f);
    if (hm == 0.0) continue;  // measure-zero draw
    scale(1.0 / hm, f.c);

    // Right-hand constant on the raw draw (aliasing allowed: whatever the
    // samples miss must be carried by the rho^{2m} remainder).
    CVec samples;
    matvec_adjoint(set.mu, f.c, samples, Exec::serial);
    const double denom = norm2_sq(samples) + rho2m * std::pow(laplacian_power_norm(model, m, f), 2);
    if (denom > 0.0) {
      const double c = norm2_sq(f.c) / denom;
      cmax = have_max ? std::max(cmax, c) : c;
      have_max = true;
    }

    // Left-hand constant on the draw projected into the resolved band.
    SpectralVector g = pw_project(model, set.resolved_band, f);
    const double gnorm_sq = norm2_sq(g.c);
    if (gnorm_sq > 0.0) {
      CVec gs;
      matvec_adjoint(set.mu, g.c, gs, Exec::serial);
      const double c = norm2_sq(gs) / gnorm_sq;
      cmin = have_min ? std::min(cmin, c) : c;
      have_min = true;
    }
  }

  rep.c_hat = cmin;
  rep.big_c_hat = cmax;
  // On exactly-resolved ensembles both constants sit at 1, with C_hat a hair
  // below c_hat (the Sobolev remainder only inflates its denominator), so the
  // ordering check carries a small slack.
  rep.ok = have_min && have_max && std::isfinite(rep.big_c_hat) && rep.c_hat > 0.0 &&
           rep.c_hat <= rep.big_c_hat * (1.0 + 1e-9) + 1e-9 &&
           (C_target <= 0.0 || rep.big_c_hat <= C_target);
  return rep;
}

PwFrame pw_frame(const SpectralModel& model, const SamplingSet& set, double omega,
                 double delta, double m, double poincare_c) {
  check_frame_inputs(model, delta, m, poincare_c);
  if (!(omega > 0.0)) throw std::invalid_argument("pw_frame: omega must be > 0");

  PwFrame frame;
  frame.omega = omega;
  frame.delta = delta;
  frame.rho_required = std::pow(delta / poincare_c, 1.0 / (2.0 * m)) / omega;
  frame.rho_ok = std::abs(set.rho - frame.rho_required) <= 0.1 * frame.rho_required;

  const int count = set.count();
  frame.atoms = CMat(model.dim, count);
  std::vector<int> band;  // coordinates inside the band
  for (int i = 0; i < model.dim; ++i)
    if (model.sqrt_eigenvalues[i] <= omega) band.push_back(i);
  for (int k = 0; k < count; ++k)
    for (int i : band) frame.atoms(i, k) = set.mu(i, k);

  // Frame operator restricted to PW_omega.
  const int p = static_cast<int>(band.size());
  CMat s(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      cdbl acc = 0.0;
      for (int k = 0; k < count; ++k)
        acc += frame.atoms(band[a], k) * std::conj(frame.atoms(band[b], k));
      s(a, b) = acc;
    }
  const auto [lo, hi] = extreme_frame_bounds(s, count);
  frame.lower = lo;
  frame.upper = hi;
  frame.rank_deficient = !(lo > 1e-12);
  return frame;
}

FrameSystem build_frame_system(const SpectralModel& model, const PartitionOfUnity& pou,
                               double delta, double m, double poincare_c, Exec ex) {
  check_frame_inputs(model, delta, m, poincare_c);
  const double lam_max = model.max_sqrt_eigenvalue();
  if (!pou.covers(lam_max))
    throw std::invalid_argument("build_frame_system: spectrum not covered; need j_max >= " +
                                std::to_string(required_j_max(lam_max)));

  FrameSystem sys;
  sys.dim = model.dim;
  sys.delta = delta;

  const double mesh_scale = std::pow(delta / poincare_c, 1.0 / (2.0 * m));
  for (int j = 0; j <= pou.j_max(); ++j) {
    std::vector<int> support;
    for (int i = 0; i < model.dim; ++i)
      if (pou.G(j, model.sqrt_eigenvalues[i]) > 0.0) support.push_back(i);
    if (support.empty()) continue;  // band misses the spectrum entirely

    FrameBand band;
    band.index = j;
    band.omega = std::ldexp(1.0, j + 1);  // 2^{j+1}
    band.rho = mesh_scale / band.omega;
    band.support = std::move(support);

    const SamplingSet set = build_sampling_set(model, band.rho);
    const PwFrame pwf = pw_frame(model, set, band.omega, delta, m, poincare_c);
    if (pwf.rank_deficient)
      throw std::runtime_error("build_frame_system: band " + std::to_string(j) +
                               " is rank-deficient (not a frame over its band)");

    const int count = set.count();
    const int width = static_cast<int>(band.support.size());
    band.atoms = CMat(count, width);
    parallel_for(count, ex, [&](int k) {
      for (int si = 0; si < width; ++si) {
        const int i = band.support[si];
        band.atoms(k, si) = pou.F(j, model.sqrt_eigenvalues[i]) * pwf.atoms(i, k);
      }
    });
    sys.bands.push_back(std::move(band));
  }

  // Global frame operator; entries accumulate atom-by-atom in band order so
  // the assembly is deterministic under either execution policy.
  CMat s(model.dim, model.dim);
  for (const FrameBand& band : sys.bands) {
    const int width = static_cast<int>(band.support.size());
    parallel_for(width, ex, [&](int a) {
      for (int b = 0; b < width; ++b) {
        cdbl acc = 0.0;
        for (int k = 0; k < band.count(); ++k)
          acc += band.atoms(k, a) * std::conj(band.atoms(k, b));
        s(band.support[a], band.support[b]) += acc;
      }
    });
  }
  const auto [lo, hi] = extreme_frame_bounds(s, sys.atom_count());
  sys.lower = lo;
  sys.upper = hi;
  return sys;
}

std::vector<CVec> analysis(const FrameSystem& system, const SpectralVector& f, Exec ex) {
  if (f.size() != system.dim)
    throw std::invalid_argument("analysis: vector size does not match frame system");
  std::vector<CVec> out;
  out.reserve(system.bands.size());
  for (const FrameBand& band : system.bands) {
    CVec coeffs(band.count());
    const int width = static_cast<int>(band.support.size());
    parallel_for(band.count(), ex, [&](int k) {
      cdbl acc = 0.0;
      for (int si = 0; si < width; ++si)
        acc += std::conj(band.atoms(k, si)) * f.c[band.support[si]];
      coeffs[k] = acc;
    });
    out.push_back(std::move(coeffs));
  }
  return out;
}

SpectralVector frame_operator_apply(const FrameSystem& system, const SpectralVector& f,
                                    Exec ex) {
  const std::vector<CVec> coeffs = analysis(system, f, ex);
  SpectralVector g(system.dim);
  for (size_t bi = 0; bi < system.bands.size(); ++bi) {
    const FrameBand& band = system.bands[bi];
    const CVec& c = coeffs[bi];
    const int width = static_cast<int>(band.support.size());
    parallel_for(width, ex, [&](int si) {
      cdbl acc = 0.0;
      for (int k = 0; k < band.count(); ++k) acc += c[k] * band.atoms(k, si);
      g.c[band.support[si]] += acc;
    });
  }
  return g;
}

FrameSystem dual_frame(const FrameSystem& system, Exec ex) {
  if (!(system.lower > 0.0))
    throw std::domain_error("dual_frame: lower frame bound is zero; operator not invertible");

  // Assemble the frame operator densely once; every dual atom is then a
  // small Hermitian positive definite solve against it.
  CMat s(system.dim, system.dim);
  for (const FrameBand& band : system.bands) {
    const int width = static_cast<int>(band.support.size());
    for (int a = 0; a < width; ++a)
      for (int b = 0; b < width; ++b) {
        cdbl acc = 0.0;
        for (int k = 0; k < band.count(); ++k)
          acc += band.atoms(k, a) * std::conj(band.atoms(k, b));
        s(band.support[a], band.support[b]) += acc;
      }
  }

  FrameSystem out = system;
  for (FrameBand& band : out.bands) {
    const int width = static_cast<int>(band.support.size());
    band.dual = CMat(band.count(), system.dim);
    parallel_for(band.count(), ex, [&](int k) {
      CVec rhs(system.dim, cdbl(0.0));
      for (int si = 0; si < width; ++si) rhs[band.support[si]] = band.atoms(k, si);
      const CVec psi = solve_hpd(
          [&](const CVec& x, CVec& y) { matvec(s, x, y, Exec::serial); }, rhs, 1e-12);
      for (int i = 0; i < system.dim; ++i) band.dual(k, i) = psi[i];
    });
  }

  CMat sd(system.dim, system.dim);
  for (const FrameBand& band : out.bands) {
    parallel_for(system.dim, ex, [&](int a) {
      for (int b = 0; b < system.dim; ++b) {
        cdbl acc = 0.0;
        for (int k = 0; k < band.count(); ++k)
          acc += band.dual(k, a) * std::conj(band.dual(k, b));
        sd(a, b) += acc;
      }
    });
  }
  const auto [lo, hi] = extreme_frame_bounds(sd, out.atom_count());
  out.dual_lower = lo;
  out.dual_upper = hi;
  out.has_dual = true;
  return out;
}

SpectralVector reconstruct(const FrameSystem& system, const std::vector<CVec>& coefficients,
                           Exec ex) {
  if (!system.has_dual)
    throw std::domain_error("reconstruct: canonical dual not computed");
  if (coefficients.size() != system.bands.size())
    throw std::invalid_argument("reconstruct: coefficient band count mismatch");
  for (size_t bi = 0; bi < system.bands.size(); ++bi)
    if (static_cast<int>(coefficients[bi].size()) != system.bands[bi].count())
      throw std::invalid_argument("reconstruct: coefficient count mismatch in band " +
                                  std::to_string(system.bands[bi].index));

  SpectralVector g(system.dim);
  parallel_for(system.dim, ex, [&](int i) {
    cdbl acc = 0.0;
    for (size_t bi = 0; bi < system.bands.size(); ++bi) {
      const FrameBand& band = system.bands[bi];
      const CVec& c = coefficients[bi];
      for (int k = 0; k < band.count(); ++k) acc += c[k] * band.dual(k, i);
    }
    g.c[i] = acc;
  });
  return g;
}

namespace {

using nlohmann::json;

json cvec_to_json(const cdbl* row, int n) {
  json out = json::array();
  for (int i = 0; i < n; ++i) out.push_back(json::array({row[i].real(), row[i].imag()}));
  return out;
}

}  // namespace

std::string frame_to_json(const FrameSystem& system) {
  json j;
  j["delta"] = system.delta;
  j["dim"] = system.dim;
  j["bounds"] = json::array({system.lower, system.upper});
  json bands = json::array();
  for (const FrameBand& band : system.bands) {
    json b;
    b["index"] = band.index;
    b["omega"] = band.omega;
    b["rho"] = band.rho;
    b["support"] = band.support;
    json atoms = json::array();
    for (int k = 0; k < band.count(); ++k)
      atoms.push_back(cvec_to_json(&band.atoms.a[static_cast<size_t>(k) * band.atoms.cols],
                                   band.atoms.cols));
    b["atoms"] = std::move(atoms);
    if (system.has_dual) {
      json dual = json::array();
      for (int k = 0; k < band.count(); ++k)
        dual.push_back(cvec_to_json(&band.dual.a[static_cast<size_t>(k) * band.dual.cols],
                                    band.dual.cols));
      b["dual"] = std::move(dual);
    }
    bands.push_back(std::move(b));
  }
  j["bands"] = std::move(bands);
  if (system.has_dual) j["dual_bounds"] = json::array({system.dual_lower, system.dual_upper});
  return j.dump(2) + "\n";
}

FrameSystem frame_from_json(const std::string& text) {
  json j = json::parse(text);
  FrameSystem system;
  system.delta = j.at("delta").get<double>();
  system.dim = j.at("dim").get<int>();
  system.lower = j.at("bounds")[0].get<double>();
  system.upper = j.at("bounds")[1].get<double>();
  system.has_dual = j.contains("dual_bounds");
  if (system.has_dual) {
    system.dual_lower = j["dual_bounds"][0].get<double>();
    system.dual_upper = j["dual_bounds"][1].get<double>();
  }
  for (const json& b : j.at("bands")) {
    FrameBand band;
    band.index = b.at("index").get<int>();
    band.omega = b.at("omega").get<double>();
    band.rho = b.at("rho").get<double>();
    band.support = b.at("support").get<std::vector<int>>();
    const json& atoms = b.at("atoms");
    const int count = static_cast<int>(atoms.size());
    const int width = static_cast<int>(band.support.size());
    band.atoms = CMat(count, width);
    for (int k = 0; k < count; ++k)
      for (int i = 0; i < width; ++i)
        band.atoms(k, i) = cdbl(atoms[k][i][0].get<double>(), atoms[k][i][1].get<double>());
    if (system.has_dual) {
      const json& dual = b.at("dual");
      band.dual = CMat(count, system.dim);
      for (int k = 0; k < count; ++k)
        for (int i = 0; i < system.dim; ++i)
          band.dual(k, i) = cdbl(dual[k][i][0].get<double>(), dual[k][i][1].get<double>());
    }
    system.bands.push_back(std::move(band));
  }
  return system;
}

void save_frame(const FrameSystem& system, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << frame_to_json(system);
}

FrameSystem load_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return frame_from_json(ss.str());
}

}  // namespace spw
