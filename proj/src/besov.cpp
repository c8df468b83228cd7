#include "spw/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spw/spectral.hpp"

namespace spw {

namespace {

bool infinite_q(double q) { return std::isinf(q); }

void check_q(double q) {
  if (!(q >= 1.0) && !infinite_q(q))
    throw std::invalid_argument("besov: q must be >= 1 (or infinity)");
}

void check_window(const NormWindow& w) {
  if (!(w.s_min > 0.0) || !(w.s_max > w.s_min) || w.points < 2)
    throw std::invalid_argument("besov: malformed integration window");
}

std::vector<double> log_points(const NormWindow& w) {
  std::vector<double> s(w.points);
  const double la = std::log(w.s_min), lb = std::log(w.s_max);
  for (int i = 0; i < w.points; ++i)
    s[i] = std::exp(la + (lb - la) * i / (w.points - 1));
  s.front() = w.s_min;
  s.back() = w.s_max;
  return s;
}

struct PieceIntegral {
  double combined = 0.0;  // (grid + tails)^{1/q}, or the sup for q = infinity
  double tail_low = 0.0;
  double tail_high = 0.0;
};

// (integral over [s_min, s_max] of (s^{-a} w(s))^q ds/s)^{1/q} by the
// trapezoid rule in log s, plus certified bounds for the two discarded
// tails: w(s) <= low_c * s^{low_pow} near zero (low_pow > a makes the tail
// integrable) and w(s) <= high_c at infinity (a > 0 does the same there).
PieceIntegral integrate_log(const std::vector<double>& s, const std::vector<double>& w,
                            double a, double q, double low_c, double low_pow,
                            double high_c) {
  const int n = static_cast<int>(s.size());
  PieceIntegral out;
  if (infinite_q(q)) {
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::pow(s[i], -a) * w[i]);
    out.tail_low = low_c * std::pow(s.front(), low_pow - a);
    out.tail_high = high_c * std::pow(s.back(), -a);
    out.combined = std::max(sup, std::max(out.tail_low, out.tail_high));
    return out;
  }
  const double h = (std::log(s.back()) - std::log(s.front())) / (n - 1);
  double grid = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fi = std::pow(std::pow(s[i], -a) * w[i], q);
    grid += (i == 0 || i == n - 1) ? 0.5 * fi : fi;
  }
  grid *= h;
  out.tail_low = std::pow(low_c, q) * std::pow(s.front(), (low_pow - a) * q) /
                 ((low_pow - a) * q);
  out.tail_high = std::pow(high_c, q) * std::pow(s.back(), -a * q) / (a * q);
  out.combined = std::pow(grid + out.tail_low + out.tail_high, 1.0 / q);
  return out;
}

// Worst-case modulus growth on the model: Omega^r(s, g) is at most
// s^r (d lambda_max)^r ||g|| for small s and (2d)^r ||g|| always.
std::pair<double, double> modulus_tail_constants(int r, int d, double lambda_max,
                                                 double g_norm) {
  return {std::pow(d * lambda_max, r) * g_norm, std::pow(2.0 * d, r) * g_norm};
}

// Iterates over index tuples in {0..d-1}^len in lexicographic order.
bool next_tuple(std::vector<int>& tuple, int d) {
  for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
    if (++tuple[i] < d) return true;
    tuple[i] = 0;
  }
  return false;
}

SpectralVector apply_tuple(const SpectralModel& model, const std::vector<int>& tuple,
                           const SpectralVector& f) {
  SpectralVector g = f;
  for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i)
    g = generator_apply(model, tuple[i], g);
  return g;
}

int required_levels(double lambda_max) {
  int levels = 0;
  double reach = 1.0;
  while (reach < lambda_max) {
    reach *= 2.0;
    ++levels;
  }
  return levels;
}

}  // namespace

const char* besov_method_name(BesovMethod method) {
  switch (method) {
    case BesovMethod::modulus: return "modulus";
    case BesovMethod::kfun: return "kfun";
    case BesovMethod::approx: return "approx";
    case BesovMethod::lp: return "lp";
    case BesovMethod::frame: return "frame";
    case BesovMethod::derivative: return "derivative";
    case BesovMethod::zygmund: return "zygmund";
  }
  return "?";
}

BesovReport besov_modulus(const SpectralModel& model, const GroupCache& cache,
                          const BesovParams& params, const SpectralVector& f,
                          const NormWindow& window, const ModulusGrid& grid, Exec ex) {
  check_q(params.q);
  check_window(window);
  if (!(params.alpha > 0.0) || !(params.alpha < params.r))
    throw std::invalid_argument("besov_modulus: need 0 < alpha < r");

  BesovReport rep;
  rep.method = BesovMethod::modulus;
  rep.s_min = window.s_min;
  rep.s_max = window.s_max;
  rep.grid_points = window.points;
  const double norm_f = norm2(f.c);
  if (norm_f == 0.0) return rep;

  const int d = cache.axis_count();
  const auto [low_c, high_c] =
      modulus_tail_constants(params.r, d, model.max_sqrt_eigenvalue(), norm_f);
  const std::vector<double> s = log_points(window);
  std::vector<double> w(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    w[i] = mixed_modulus(model, cache, params.r, s[i], f, grid, ex);
  const PieceIntegral piece =
      integrate_log(s, w, params.alpha, params.q, low_c, params.r, high_c);
  rep.value = norm_f + piece.combined;
  rep.tail_low = piece.tail_low;
  rep.tail_high = piece.tail_high;
  return rep;
}

BesovReport besov_kfun(const SpectralModel& model, const BesovParams& params,
                       const SpectralVector& f, const NormWindow& window) {
  check_q(params.q);
  check_window(window);
  if (!(params.alpha > 0.0) || !(params.alpha < params.r))
    throw std::invalid_argument("besov_kfun: need 0 < alpha < r");

  BesovReport rep;
  rep.method = BesovMethod::kfun;
  rep.s_min = window.s_min;
  rep.s_max = window.s_max;
  rep.grid_points = window.points;
  const double norm_f = norm2(f.c);
  if (norm_f == 0.0) return rep;

  const double theta = params.alpha / params.r;
  const double hr = sobolev_norm(model, params.r, f);
  const std::vector<double> t = log_points(window);
  std::vector<double> lo(t.size()), hi(t.size()), mid(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    const KBracket kb = k_functional(model, t[i], f, params.r);
    lo[i] = kb.lower;
    hi[i] = kb.upper;
    mid[i] = 0.5 * (kb.lower + kb.upper);
  }
  // K(t, f) <= t ||f||_{H^r} (split f into the smooth part alone) and
  // K(t, f) <= ||f|| (split into the rough part alone); both tails use these.
  const PieceIntegral pm = integrate_log(t, mid, theta, params.q, hr, 1.0, norm_f);
  const PieceIntegral pl = integrate_log(t, lo, theta, params.q, hr, 1.0, norm_f);
  const PieceIntegral ph = integrate_log(t, hi, theta, params.q, hr, 1.0, norm_f);
  rep.value = pm.combined;
  rep.lower_value = pl.combined;
  rep.upper_value = ph.combined;
  rep.tail_low = pm.tail_low;
  rep.tail_high = pm.tail_high;
  return rep;
}

BesovReport besov_approx(const SpectralModel& model, const BesovParams& params,
                         const SpectralVector& f, int levels) {
  check_q(params.q);
  if (!(params.alpha > 0.0))
    throw std::invalid_argument("besov_approx: alpha must be positive");
  const int needed = required_levels(model.max_sqrt_eigenvalue());
  if (levels < needed)
    throw std::invalid_argument("besov_approx: levels too small; need at least " +
                                std::to_string(needed) +
                                " so the dyadic bands reach the top of the spectrum");

  BesovReport rep;
  rep.method = BesovMethod::approx;
  rep.j_min = 0;
  rep.j_max = levels;
  const double norm_f = norm2(f.c);
  if (norm_f == 0.0) return rep;

  double acc = 0.0;
  for (int j = 0; j <= levels; ++j) {
    const double term =
        std::pow(2.0, j * params.alpha) * best_approximation_error(model, std::ldexp(1.0, j), f);
    acc = infinite_q(params.q) ? std::max(acc, term) : acc + std::pow(term, params.q);
  }
  rep.value = norm_f + (infinite_q(params.q) ? acc : std::pow(acc, 1.0 / params.q));
  return rep;
}

BesovReport besov_lp(const SpectralModel& model, const PartitionOfUnity& pou,
                     const BesovParams& params, const SpectralVector& f) {
  check_q(params.q);
  if (!(params.alpha > 0.0)) throw std::invalid_argument("besov_lp: alpha must be positive");

  BesovReport rep;
  rep.method = BesovMethod::lp;
  rep.j_min = 0;
  rep.j_max = pou.j_max();
  const std::vector<SpectralVector> pieces = lp_decompose(model, pou, f);
  double acc = 0.0;
  for (int j = 0; j <= pou.j_max(); ++j) {
    const double term = std::pow(2.0, j * params.alpha) * norm2(pieces[j].c);
    acc = infinite_q(params.q) ? std::max(acc, term) : acc + std::pow(term, params.q);
  }
  rep.value = infinite_q(params.q) ? acc : std::pow(acc, 1.0 / params.q);
  return rep;
}

BesovReport besov_frame(const FrameSystem& system, const BesovParams& params,
                        const SpectralVector& f, Exec ex) {
  check_q(params.q);
  if (!(params.alpha > 0.0))
    throw std::invalid_argument("besov_frame: alpha must be positive");

  BesovReport rep;
  rep.method = BesovMethod::frame;
  if (!system.bands.empty()) {
    rep.j_min = system.bands.front().index;
    rep.j_max = system.bands.back().index;
  }
  const std::vector<CVec> coeffs = analysis(system, f, ex);
  double acc = 0.0;
  for (size_t bi = 0; bi < system.bands.size(); ++bi) {
    const double term =
        std::pow(2.0, system.bands[bi].index * params.alpha) * norm2(coeffs[bi]);
    acc = infinite_q(params.q) ? std::max(acc, term) : acc + std::pow(term, params.q);
  }
  rep.value = infinite_q(params.q) ? acc : std::pow(acc, 1.0 / params.q);
  return rep;
}

BesovReport besov_derivative(const SpectralModel& model, const GroupCache& cache,
                             double alpha, double q, const SpectralVector& f,
                             const NormWindow& window, const ModulusGrid& grid, Exec ex) {
  check_q(q);
  check_window(window);
  if (!(alpha > 0.0)) throw std::invalid_argument("besov_derivative: alpha must be positive");
  const int whole = static_cast<int>(std::floor(alpha));
  const double frac = alpha - whole;
  if (frac == 0.0)
    throw std::invalid_argument(
        "besov_derivative: alpha is an integer; use besov_zygmund for the Zygmund form");
  const int d = cache.axis_count();
  if (whole * d > 6)
    throw std::invalid_argument("besov_derivative: floor(alpha) * axis count exceeds the cap of 6");

  BesovReport rep;
  rep.method = BesovMethod::derivative;
  rep.s_min = window.s_min;
  rep.s_max = window.s_max;
  rep.grid_points = window.points;
  if (norm2(f.c) == 0.0) return rep;

  const std::vector<double> s = log_points(window);
  const double lamx = model.max_sqrt_eigenvalue();
  double sum = 0.0;
  std::vector<int> tuple(whole, 0);
  bool more = true;
  while (more) {
    const SpectralVector g = apply_tuple(model, tuple, f);
    const double ng = norm2(g.c);
    if (ng > 0.0) {
      const auto [low_c, high_c] = modulus_tail_constants(1, d, lamx, ng);
      std::vector<double> w(s.size());
      for (size_t i = 0; i < s.size(); ++i)
        w[i] = mixed_modulus(model, cache, 1, s[i], g, grid, ex);
      const PieceIntegral piece = integrate_log(s, w, frac, q, low_c, 1.0, high_c);
      sum += piece.combined;
      rep.tail_low += piece.tail_low;
      rep.tail_high += piece.tail_high;
    }
    more = whole > 0 && next_tuple(tuple, d);
  }
  rep.value = sobolev_norm(model, whole, f) + sum;
  return rep;
}

BesovReport besov_zygmund(const SpectralModel& model, const GroupCache& cache, int k,
                          double q, const SpectralVector& f, const NormWindow& window,
                          const ModulusGrid& grid, Exec ex) {
  check_q(q);
  check_window(window);
  if (k < 1) throw std::invalid_argument("besov_zygmund: order k must be a positive integer");
  const int d = cache.axis_count();
  if ((k - 1) * d > 6)
    throw std::invalid_argument("besov_zygmund: (k - 1) * axis count exceeds the cap of 6");

  BesovReport rep;
  rep.method = BesovMethod::zygmund;
  rep.s_min = window.s_min;
  rep.s_max = window.s_max;
  rep.grid_points = window.points;
  if (norm2(f.c) == 0.0) return rep;

  const std::vector<double> s = log_points(window);
  const double lamx = model.max_sqrt_eigenvalue();
  double sum = 0.0;
  std::vector<int> tuple(k - 1, 0);
  bool more = true;
  while (more) {
    const SpectralVector g = apply_tuple(model, tuple, f);
    const double ng = norm2(g.c);
    if (ng > 0.0) {
      const auto [low_c, high_c] = modulus_tail_constants(2, d, lamx, ng);
      std::vector<double> w(s.size());
      for (size_t i = 0; i < s.size(); ++i)
        w[i] = mixed_modulus(model, cache, 2, s[i], g, grid, ex);
      const PieceIntegral piece = integrate_log(s, w, 1.0, q, low_c, 2.0, high_c);
      sum += piece.combined;
      rep.tail_low += piece.tail_low;
      rep.tail_high += piece.tail_high;
    }
    more = k > 1 && next_tuple(tuple, d);
  }
  rep.value = sobolev_norm(model, k - 1, f) + sum;
  return rep;
}

BesovRefinement besov_modulus_converged(const SpectralModel& model, const GroupCache& cache,
                                        const BesovParams& params, const SpectralVector& f,
                                        const NormWindow& window, const ModulusGrid& initial,
                                        double rel_tol, int max_refinements, Exec ex) {
  BesovRefinement out;
  ModulusGrid grid = initial;
  out.report = besov_modulus(model, cache, params, f, window, grid, ex);
  out.points_per_axis = grid.points_per_axis;
  for (int step = 0; step < max_refinements; ++step) {
    grid.points_per_axis = 2 * grid.points_per_axis - 1;
    const BesovReport next = besov_modulus(model, cache, params, f, window, grid, ex);
    const double change = std::abs(next.value - out.report.value);
    out.report = next;
    out.points_per_axis = grid.points_per_axis;
    ++out.refinements;
    if (change <= rel_tol * std::max(next.value, 1e-300)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

namespace {

// Evaluates one method on one vector; NaN marks "not applicable" and is
// filtered out when the method list is assembled, so it never leaks out.
double evaluate_method(BesovMethod method, const SpectralModel& model,
                       const GroupCache& cache, const PartitionOfUnity& pou,
                       const FrameSystem* system, const BesovParams& params, int levels,
                       const SpectralVector& f, Exec ex) {
  switch (method) {
    case BesovMethod::modulus: return besov_modulus(model, cache, params, f, {}, {}, ex).value;
    case BesovMethod::kfun: return besov_kfun(model, params, f).value;
    case BesovMethod::approx: return besov_approx(model, params, f, levels).value;
    case BesovMethod::lp: return besov_lp(model, pou, params, f).value;
    case BesovMethod::frame: return besov_frame(*system, params, f, ex).value;
    case BesovMethod::derivative:
      return besov_derivative(model, cache, params.alpha, params.q, f, {}, {}, ex).value;
    case BesovMethod::zygmund:
      return besov_zygmund(model, cache, static_cast<int>(std::lround(params.alpha)),
                           params.q, f, {}, {}, ex)
          .value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

EquivalenceTable equivalence_report(const SpectralModel& model, const GroupCache& cache,
                                    const PartitionOfUnity& pou, const FrameSystem* system,
                                    const BesovParams& params, int ensemble_size,
                                    double spread_bound, RandomStream& rng, Exec ex) {
  check_q(params.q);
  EquivalenceTable table;
  table.params = params;
  table.spread_bound = spread_bound;

  const int d = cache.axis_count();
  const bool integer_alpha = params.alpha == std::floor(params.alpha);
  if (params.alpha < params.r) {
    table.methods.push_back(BesovMethod::modulus);
    table.methods.push_back(BesovMethod::kfun);
  }
  table.methods.push_back(BesovMethod::approx);
  table.methods.push_back(BesovMethod::lp);
  if (system != nullptr) table.methods.push_back(BesovMethod::frame);
  if (!integer_alpha && static_cast<int>(std::floor(params.alpha)) * d <= 6)
    table.methods.push_back(BesovMethod::derivative);
  if (integer_alpha && params.alpha >= 1.0 &&
      (static_cast<int>(std::lround(params.alpha)) - 1) * d <= 6)
    table.methods.push_back(BesovMethod::zygmund);

  const int levels = required_levels(model.max_sqrt_eigenvalue());
  const auto add_row = [&](const std::string& id, const SpectralVector& f) {
    EquivalenceRow row;
    row.vector_id = id;
    for (BesovMethod m : table.methods)
      row.values.push_back(
          evaluate_method(m, model, cache, pou, system, params, levels, f, ex));
    table.rows.push_back(std::move(row));
  };

  for (int i = 0; i < model.dim; ++i) {
    SpectralVector f(model.dim);
    f.c[i] = 1.0;
    add_row("mode_" + std::to_string(i), f);
  }
  SpectralVector first_random;
  for (int t = 0; t < ensemble_size; ++t) {
    SpectralVector f(rng.next_complex_vector(model.dim));
    if (t == 0) first_random = f;
    add_row("rand_" + std::to_string(t), f);
  }
  if (ensemble_size > 0) {
    SpectralVector doubled = first_random;
    scale(2.0, doubled.c);
    add_row("rand_0_x2", doubled);
  }

  table.all_finite = true;
  for (const EquivalenceRow& row : table.rows)
    for (double v : row.values)
      if (!std::isfinite(v)) table.all_finite = false;

  const int nm = static_cast<int>(table.methods.size());
  table.worst_spread = 0.0;
  table.scale_invariant = true;
  const EquivalenceRow* base_row = nullptr;
  const EquivalenceRow* doubled_row = nullptr;
  for (const EquivalenceRow& row : table.rows) {
    if (row.vector_id == "rand_0") base_row = &row;
    if (row.vector_id == "rand_0_x2") doubled_row = &row;
  }
  for (int a = 0; a < nm; ++a)
    for (int b = a + 1; b < nm; ++b) {
      EquivalencePair pair;
      pair.a = table.methods[a];
      pair.b = table.methods[b];
      bool any = false;
      for (const EquivalenceRow& row : table.rows) {
        const double va = row.values[a], vb = row.values[b];
        if (!(va > 0.0) || !(vb > 0.0) || !std::isfinite(va) || !std::isfinite(vb)) continue;
        const double ratio = va / vb;
        if (!any) {
          pair.ratio_min = pair.ratio_max = ratio;
          any = true;
        } else {
          pair.ratio_min = std::min(pair.ratio_min, ratio);
          pair.ratio_max = std::max(pair.ratio_max, ratio);
        }
      }
      pair.spread = any && pair.ratio_min > 0.0 ? pair.ratio_max / pair.ratio_min
                                                : std::numeric_limits<double>::infinity();
      table.worst_spread = std::max(table.worst_spread, pair.spread);
      if (base_row != nullptr && doubled_row != nullptr) {
        const double r1 = base_row->values[a] / base_row->values[b];
        const double r2 = doubled_row->values[a] / doubled_row->values[b];
        if (!(std::abs(r1 - r2) <= 1e-10 * std::max(1.0, std::abs(r1))))
          table.scale_invariant = false;
      }
      table.pairs.push_back(pair);
    }

  table.pass = table.all_finite && table.scale_invariant &&
               table.worst_spread < table.spread_bound;
  return table;
}

}  // namespace spw
