#include "spw/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spw/eig.hpp"
#include "spw/quadrature.hpp"
#include "spw/spectral.hpp"

namespace spw {

namespace {

bool exactly_diagonal(const CMat& m) {
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (r != c && m(r, c) != cdbl(0.0)) return false;
  return true;
}

void check_axis(const GroupCache& cache, int axis, const char* who) {
  if (axis < 0 || axis >= cache.axis_count())
    throw std::out_of_range(std::string(who) + ": axis index out of range");
}

void check_vector(const GroupCache& cache, const SpectralVector& f, const char* who) {
  if (f.size() != cache.dim)
    throw std::invalid_argument(std::string(who) + ": vector size does not match model dim");
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Move a vector into the eigencoordinates of `target` axis.  `basis` tracks
// the current frame: -1 for model coordinates, otherwise the axis whose U
// was applied last.  Diagonal axes share the model frame.
CVec to_axis_frame(const GroupCache& cache, int target, CVec v, int& basis) {
  const GroupCache::Axis& ax = cache.axes[target];
  const int goal = ax.diagonal ? -1 : target;
  if (basis == goal) return v;
  CVec in_model;
  if (basis >= 0) {
    matvec(cache.axes[basis].u, v, in_model, Exec::serial);
  } else {
    in_model = std::move(v);
  }
  basis = goal;
  if (goal < 0) return in_model;
  CVec out;
  matvec_adjoint(ax.u, in_model, out, Exec::serial);
  return out;
}

// Grid sup for one index tuple, recursing over the remaining factors.  The
// vector arrives in an arbitrary frame; each level re-expresses it in the
// frame of its own axis (a no-op when consecutive axes share a frame, which
// is the common case on the circle) and then applies T(tau) - I diagonally.
double modulus_recurse(const GroupCache& cache, const std::vector<int>& tuple, int level,
                       double s, int pts, CVec v, int basis) {
  if (level == 0) return norm2(v);
  const int j = tuple[level - 1];
  v = to_axis_frame(cache, j, std::move(v), basis);
  const GroupCache::Axis& ax = cache.axes[j];
  const int n = static_cast<int>(v.size());
  double best = 0.0;
  CVec w(n);
  for (int g = 1; g < pts; ++g) {
    const double tau = s * g / (pts - 1);
    for (int i = 0; i < n; ++i) {
      const double ph = ax.mu[i] * tau;
      w[i] = (cdbl(std::cos(ph) - 1.0, std::sin(ph))) * v[i];
    }
    best = std::max(best, modulus_recurse(cache, tuple, level - 1, s, pts, w, basis));
  }
  return best;
}

double tuple_grid_sup(const GroupCache& cache, const std::vector<int>& tuple, int r, double s,
                      int pts, const CVec& f, Exec ex) {
  const int j = tuple[r - 1];  // innermost factor, applied first
  int basis = -1;
  CVec v = to_axis_frame(cache, j, f, basis);
  const GroupCache::Axis& ax = cache.axes[j];
  const int n = static_cast<int>(v.size());
  // The outermost tau loop carries the parallelism; everything below it is
  // sequential, so each grid line is an independent deterministic job.
  return parallel_max(pts, ex, [&](int g) -> double {
    if (g == 0) return 0.0;
    const double tau = s * g / (pts - 1);
    CVec w(n);
    for (int i = 0; i < n; ++i) {
      const double ph = ax.mu[i] * tau;
      w[i] = (cdbl(std::cos(ph) - 1.0, std::sin(ph))) * v[i];
    }
    return modulus_recurse(cache, tuple, r - 1, s, pts, std::move(w), basis);
  });
}

std::vector<std::vector<int>> index_tuples(int d, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(r, 0);
  while (true) {
    out.push_back(cur);
    int pos = r - 1;
    while (pos >= 0 && cur[pos] == d - 1) cur[pos--] = 0;
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

void check_modulus_args(const GroupCache& cache, int r, double s, const ModulusGrid& grid) {
  if (r < 1) throw std::invalid_argument("mixed_modulus: order must be >= 1");
  if (s < 0.0) throw std::invalid_argument("mixed_modulus: step must be >= 0");
  if (r * cache.axis_count() > 6)
    throw std::invalid_argument("mixed_modulus: r * axis_count exceeds the supported cap of 6");
  if (grid.points_per_axis < 2)
    throw std::invalid_argument("mixed_modulus: grid needs at least 2 points per axis");
}

}  // namespace

GroupCache build_group_cache(const SpectralModel& model) {
  if (!model.has_generators())
    throw std::domain_error("build_group_cache: model has no group structure");
  GroupCache cache;
  cache.dim = model.dim;
  for (const CMat& d : model.generators) {
    GroupCache::Axis ax;
    if (exactly_diagonal(d)) {
      ax.diagonal = true;
      ax.mu.resize(model.dim);
      for (int i = 0; i < model.dim; ++i) ax.mu[i] = d(i, i).imag();
    } else {
      // -i D is Hermitian with the same invariant subspaces.
      CMat h(model.dim, model.dim);
      for (size_t i = 0; i < h.a.size(); ++i) h.a[i] = cdbl(0.0, -1.0) * d.a[i];
      EigenDecomposition eig = hermitian_eigen(h);
      ax.mu = std::move(eig.values);
      ax.u = std::move(eig.vectors);

      const CMat uut = matmul(ax.u, adjoint(ax.u));
      CMat id = CMat::identity(model.dim);
      for (size_t i = 0; i < id.a.size(); ++i) id.a[i] = uut.a[i] - id.a[i];
      if (frobenius(id) > 1e-10)
        throw std::runtime_error("build_group_cache: eigenbasis failed unitarity check");

      CMat rec(model.dim, model.dim);
      for (int r = 0; r < model.dim; ++r)
        for (int c = 0; c < model.dim; ++c) {
          cdbl s = 0.0;
          for (int k = 0; k < model.dim; ++k)
            s += ax.u(r, k) * cdbl(0.0, ax.mu[k]) * std::conj(ax.u(c, k));
          rec(r, c) = s - d(r, c);
        }
      if (frobenius(rec) > 1e-8)
        throw std::runtime_error("build_group_cache: generator reconstruction check failed");
    }
    cache.axes.push_back(std::move(ax));
  }
  return cache;
}

SpectralVector group_apply(const SpectralModel& model, const GroupCache& cache, int axis,
                           double t, const SpectralVector& f, Exec ex) {
  (void)model;
  check_axis(cache, axis, "group_apply");
  check_vector(cache, f, "group_apply");
  const GroupCache::Axis& ax = cache.axes[axis];
  SpectralVector out(cache.dim);
  if (ax.diagonal) {
    for (int i = 0; i < cache.dim; ++i) {
      const double ph = ax.mu[i] * t;
      out.c[i] = cdbl(std::cos(ph), std::sin(ph)) * f.c[i];
    }
    return out;
  }
  CVec v;
  matvec_adjoint(ax.u, f.c, v, ex);
  for (int i = 0; i < cache.dim; ++i) {
    const double ph = ax.mu[i] * t;
    v[i] *= cdbl(std::cos(ph), std::sin(ph));
  }
  matvec(ax.u, v, out.c, ex);
  return out;
}

SpectralVector generator_apply(const SpectralModel& model, int axis, const SpectralVector& f) {
  if (axis < 0 || axis >= model.generator_count())
    throw std::out_of_range("generator_apply: axis index out of range");
  if (f.size() != model.dim)
    throw std::invalid_argument("generator_apply: vector size does not match model dim");
  SpectralVector out(model.dim);
  matvec(model.generators[axis], f.c, out.c, Exec::serial);
  return out;
}

double mixed_modulus(const SpectralModel& model, const GroupCache& cache, int r, double s,
                     const SpectralVector& f, const ModulusGrid& grid, Exec ex) {
  (void)model;
  check_vector(cache, f, "mixed_modulus");
  check_modulus_args(cache, r, s, grid);
  if (s == 0.0) return 0.0;

  double total = 0.0;
  for (const std::vector<int>& tuple : index_tuples(cache.axis_count(), r))
    total += tuple_grid_sup(cache, tuple, r, s, grid.points_per_axis, f.c, ex);
  return total;
}

ModulusRefinement mixed_modulus_refined(const SpectralModel& model, const GroupCache& cache,
                                        int r, double s, const SpectralVector& f,
                                        const ModulusGrid& initial, double rel_tol,
                                        int max_refinements, Exec ex) {
  ModulusRefinement res;
  ModulusGrid grid = initial;
  res.value = mixed_modulus(model, cache, r, s, f, grid, ex);
  res.points_per_axis = grid.points_per_axis;
  for (int step = 0; step < max_refinements; ++step) {
    grid.points_per_axis = 2 * grid.points_per_axis - 1;  // keep old points
    const double next = mixed_modulus(model, cache, r, s, f, grid, ex);
    const double change = std::abs(next - res.value);
    res.value = next;
    res.points_per_axis = grid.points_per_axis;
    res.refinements = step + 1;
    if (change <= rel_tol * std::max(next, 1e-300)) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged && res.refinements == 0) res.converged = true;  // no refinement requested
  return res;
}

SpectralVector hardy_steklov_axis(const SpectralModel& model, const GroupCache& cache,
                                  int axis, int r, double s, const SpectralVector& f,
                                  int quadrature_order, Exec ex) {
  (void)model;
  check_axis(cache, axis, "hardy_steklov_axis");
  check_vector(cache, f, "hardy_steklov_axis");
  if (r < 1) throw std::invalid_argument("hardy_steklov_axis: order must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("hardy_steklov_axis: step must be > 0");
  if (quadrature_order < 2)
    throw std::invalid_argument("hardy_steklov_axis: quadrature order must be >= 2");
  double tensor = 1.0;
  for (int i = 0; i < r; ++i) tensor *= quadrature_order;
  if (tensor > 4e6)
    throw std::invalid_argument("hardy_steklov_axis: tensor quadrature too large");

  const GroupCache::Axis& ax = cache.axes[axis];
  int basis = -1;
  CVec v = to_axis_frame(cache, axis, f.c, basis);
  const int n = static_cast<int>(v.size());

  const QuadratureRule rule = gauss_legendre(quadrature_order, 0.0, s / r);

  // Flatten the tensor product of nodes: per tuple, the translation argument
  // depends only on tau_1 + ... + tau_r, and the weight is the product.
  const int tuples = static_cast<int>(tensor);
  std::vector<double> tau_sum(tuples), weight(tuples);
  {
    std::vector<int> idx(r, 0);
    for (int tindex = 0; tindex < tuples; ++tindex) {
      double ts = 0.0, w = 1.0;
      for (int pos = 0; pos < r; ++pos) {
        ts += rule.nodes[idx[pos]];
        w *= rule.weights[idx[pos]];
      }
      tau_sum[tindex] = ts;
      weight[tindex] = w;
      int pos = r - 1;
      while (pos >= 0 && idx[pos] == quadrature_order - 1) idx[pos--] = 0;
      if (pos >= 0) ++idx[pos];
    }
  }

  std::vector<double> binom(r + 1);
  for (int k = 1; k <= r; ++k) binom[k] = binomial(r, k);
  const double scale = std::pow(r / s, r);

  CVec acc(n);
  // Each eigencoordinate accumulates its own quadrature sum in a fixed
  // order, so this loop parallelizes without changing any result.
  parallel_for(n, ex, [&](int i) {
    const double mu = ax.mu[i];
    cdbl sum = 0.0;
    for (int tindex = 0; tindex < tuples; ++tindex) {
      const double ph = mu * tau_sum[tindex];
      const cdbl base(std::cos(ph), std::sin(ph));
      cdbl power = 1.0;
      cdbl inner = 0.0;
      double sign = -1.0;
      for (int k = 1; k <= r; ++k) {
        power *= base;  // e^{i k mu (tau_1+...+tau_r)}
        inner += sign * binom[k] * power;
        sign = -sign;
      }
      sum += weight[tindex] * inner;
    }
    acc[i] = scale * sum * v[i];
  });

  SpectralVector out(n);
  if (basis < 0) {
    out.c = std::move(acc);
  } else {
    matvec(cache.axes[basis].u, acc, out.c, ex);
  }
  return out;
}

SpectralVector hardy_steklov(const SpectralModel& model, const GroupCache& cache, int r,
                             double s, const SpectralVector& f, int quadrature_order,
                             Exec ex) {
  if (r * cache.axis_count() > 6)
    throw std::invalid_argument("hardy_steklov: r * axis_count exceeds the supported cap of 6");
  SpectralVector g = f;
  for (int j = cache.axis_count() - 1; j >= 0; --j)
    g = hardy_steklov_axis(model, cache, j, r, s, g, quadrature_order, ex);
  return g;
}

SpectralVector hardy_steklov_multiplier(const SpectralModel& model, int r, double s,
                                        const SpectralVector& f) {
  if (!model.has_generators())
    throw std::domain_error("hardy_steklov_multiplier: model has no group structure");
  if (r < 1) throw std::invalid_argument("hardy_steklov_multiplier: order must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("hardy_steklov_multiplier: step must be > 0");
  if (f.size() != model.dim)
    throw std::invalid_argument("hardy_steklov_multiplier: vector size mismatch");
  for (const CMat& d : model.generators)
    if (!exactly_diagonal(d))
      throw std::domain_error(
          "hardy_steklov_multiplier: requires commuting diagonal generators");

  std::vector<double> binom(r + 1);
  for (int k = 1; k <= r; ++k) binom[k] = binomial(r, k);

  // phi(z) = (e^{iz} - 1) / (iz), the mean of e^{i u} over u in [0, z];
  // phi(0) = 1, series used near zero to avoid cancellation.
  const auto phi = [](double z) -> cdbl {
    if (std::abs(z) < 1e-6)
      return cdbl(1.0 - z * z / 6.0, z / 2.0 - z * z * z / 24.0);
    const cdbl num(std::cos(z) - 1.0, std::sin(z));
    return num / cdbl(0.0, z);
  };

  SpectralVector out = f;
  for (const CMat& d : model.generators) {
    for (int i = 0; i < model.dim; ++i) {
      const double mu = d(i, i).imag();
      cdbl m = 0.0;
      double sign = -1.0;
      for (int k = 1; k <= r; ++k) {
        const cdbl p = phi(k * mu * s / r);
        cdbl pr = 1.0;
        for (int e = 0; e < r; ++e) pr *= p;
        m += sign * binom[k] * pr;
        sign = -sign;
      }
      out.c[i] *= m;
    }
  }
  return out;
}

int steklov_sign(int d, int r) {
  (void)r;
  return d % 2 == 0 ? 1 : -1;
}

SteklovSignInfo steklov_sign_diagnostic(int d, int r) {
  SteklovSignInfo info;
  info.implemented = steklov_sign(d, r);
  info.alternate = (d * (r + 1)) % 2 == 0 ? 1 : -1;
  info.agree = info.implemented == info.alternate;
  return info;
}

KBracket k_functional(const SpectralModel& model, double t, const SpectralVector& f, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("k_functional: t must be > 0");
  if (!(r > 0.0)) throw std::invalid_argument("k_functional: order must be > 0");
  if (f.size() != model.dim)
    throw std::invalid_argument("k_functional: vector size does not match model dim");

  const int n = model.dim;
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) {
    const double lam = model.sqrt_eigenvalues[i];
    m[i] = std::pow(1.0 + lam * lam, r);
  }

  KBracket kb;
  kb.t = t;
  kb.r = r;

  double lower_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tm = t * t * m[i];
    lower_sq += std::norm(f.c[i]) * tm / (1.0 + tm);
  }
  kb.lower = std::sqrt(lower_sq);

  // Candidate minimizers g(beta)_i = c_i / (1 + beta m_i).  beta = 0 gives
  // g = f (small t), g = 0 gives ||f|| (large t), and beta = t^2 is the
  // exact minimizer of the quadratic relaxation, which pins the sqrt(2)
  // bracket guarantee.  The log grid fills in everything between.
  const auto objective = [&](double beta) -> double {
    double res_sq = 0.0, smooth_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const cdbl g = f.c[i] / (1.0 + beta * m[i]);
      res_sq += std::norm(f.c[i] - g);
      smooth_sq += m[i] * std::norm(g);
    }
    return std::sqrt(res_sq) + t * std::sqrt(smooth_sq);
  };

  double upper = f.norm();  // g = 0
  upper = std::min(upper, objective(0.0));
  upper = std::min(upper, objective(t * t));
  for (int k = 0; k <= 160; ++k)
    upper = std::min(upper, objective(std::pow(10.0, -8.0 + 0.1 * k)));
  kb.upper = upper;
  return kb;
}

ModulusKReport modulus_k_equivalence(const SpectralModel& model, const GroupCache& cache,
                                     int r, const SpectralVector& f,
                                     const std::vector<double>& s_list,
                                     const ModulusGrid& grid, Exec ex) {
  ModulusKReport report;
  const double fn = f.norm();
  bool any_lower = false, any_upper = false;
  double cmin = 0.0, cmax = 0.0;
  for (double s : s_list) {
    ModulusKRow row;
    row.s = s;
    row.omega = mixed_modulus(model, cache, r, s, f, grid, ex);
    const KBracket kb = k_functional(model, std::pow(s, r), f, static_cast<double>(r));
    row.k_lower = kb.lower;
    row.k_upper = kb.upper;
    row.bound_rhs = std::min(std::pow(s, r), 1.0) * fn;
    report.rows.push_back(row);

    if (row.omega > 0.0) {
      const double c = row.k_lower / row.omega;
      cmin = any_lower ? std::min(cmin, c) : c;
      any_lower = true;
    }
    const double denom = row.omega + row.bound_rhs;
    if (denom > 0.0) {
      const double c = row.k_upper / denom;
      cmax = any_upper ? std::max(cmax, c) : c;
      any_upper = true;
    }
  }
  report.c_hat = cmin;
  report.big_c_hat = cmax;
  report.degenerate = !(any_lower && any_upper);
  return report;
}

ModulusInequalityReport modulus_inequalities_check(const SpectralModel& model,
                                                  const GroupCache& cache,
                                                  const SpectralVector& f, int m, int k,
                                                  double a, double s,
                                                  const ModulusGrid& grid, Exec ex) {
  if (k < 0 || k > m) throw std::invalid_argument("modulus_inequalities_check: need 0 <= k <= m");
  if (!(a > 0.0)) throw std::invalid_argument("modulus_inequalities_check: need a > 0");

  ModulusInequalityReport rep;
  rep.reduction_lhs = mixed_modulus(model, cache, m, s, f, grid, ex);

  // s^k * sum over k-tuples of Omega^{m-k}(s, D_{j_1} ... D_{j_k} f);
  // with m = k the inner modulus degenerates to the plain norm, and k = 0
  // makes both sides identical.
  if (k == 0) {
    rep.reduction_rhs = rep.reduction_lhs;
  } else {
    double rhs = 0.0;
    for (const std::vector<int>& tup : index_tuples(cache.axis_count(), k)) {
      SpectralVector g = f;
      for (int pos = k - 1; pos >= 0; --pos) g = generator_apply(model, tup[pos], g);
      rhs += (m == k) ? g.norm() : mixed_modulus(model, cache, m - k, s, g, grid, ex);
    }
    rep.reduction_rhs = std::pow(s, k) * rhs;
  }
  rep.reduction_ok = rep.reduction_lhs <= rep.reduction_rhs * (1.0 + 1e-9) + 1e-12;
  rep.reduction_constant =
      rep.reduction_rhs > 0.0 ? rep.reduction_lhs / rep.reduction_rhs : 0.0;

  rep.scaling_lhs = mixed_modulus(model, cache, m, a * s, f, grid, ex);
  rep.scaling_rhs = std::pow(1.0 + a, m) * mixed_modulus(model, cache, m, s, f, grid, ex);
  rep.scaling_ok = rep.scaling_lhs <= rep.scaling_rhs * (1.0 + 1e-9) + 1e-12;
  return rep;
}

}  // namespace spw
