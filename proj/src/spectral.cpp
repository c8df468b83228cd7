#include "spw/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace spw {

namespace {

void check_size(const SpectralModel& model, const SpectralVector& f, const char* who) {
  if (f.size() != model.dim)
    throw std::invalid_argument(std::string(who) + ": vector size does not match model dim");
}

}  // namespace

SpectralVector apply_multiplier(const SpectralModel& model,
                                const std::function<cdbl(double)>& symbol,
                                const SpectralVector& f) {
  check_size(model, f, "apply_multiplier");
  SpectralVector g(model.dim);
  for (int i = 0; i < model.dim; ++i) {
    const cdbl m = symbol(model.sqrt_eigenvalues[i]);
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw std::domain_error("apply_multiplier: symbol produced a non-finite value");
    g.c[i] = m * f.c[i];
  }
  return g;
}

SpectralVector pw_project(const SpectralModel& model, double omega, const SpectralVector& f) {
  check_size(model, f, "pw_project");
  if (!(omega >= 0.0)) throw std::invalid_argument("pw_project: omega must be >= 0");
  SpectralVector g = f;
  for (int i = 0; i < model.dim; ++i)
    if (model.sqrt_eigenvalues[i] > omega) g.c[i] = 0.0;
  return g;
}

bool in_paley_wiener(const SpectralModel& model, double omega, const SpectralVector& f,
                     double rel_tol) {
  check_size(model, f, "in_paley_wiener");
  double outside = 0.0;
  for (int i = 0; i < model.dim; ++i)
    if (model.sqrt_eigenvalues[i] > omega) outside += std::norm(f.c[i]);
  return std::sqrt(outside) <= rel_tol * f.norm();
}

double sobolev_norm(const SpectralModel& model, double r, const SpectralVector& f) {
  check_size(model, f, "sobolev_norm");
  if (r < 0.0) throw std::domain_error("sobolev_norm: order must be >= 0");
  double s = 0.0;
  for (int i = 0; i < model.dim; ++i) {
    const double lam = model.sqrt_eigenvalues[i];
    s += std::pow(1.0 + lam * lam, r) * std::norm(f.c[i]);
  }
  return std::sqrt(s);
}

double laplacian_power_norm(const SpectralModel& model, double s, const SpectralVector& f) {
  check_size(model, f, "laplacian_power_norm");
  if (s < 0.0) throw std::domain_error("laplacian_power_norm: order must be >= 0");
  double acc = 0.0;
  for (int i = 0; i < model.dim; ++i) {
    const double lam = model.sqrt_eigenvalues[i];
    acc += std::pow(lam, 2.0 * s) * std::norm(f.c[i]);
  }
  return std::sqrt(acc);
}

double best_approximation_error(const SpectralModel& model, double omega,
                                const SpectralVector& f) {
  check_size(model, f, "best_approximation_error");
  double outside = 0.0;
  for (int i = 0; i < model.dim; ++i)
    if (model.sqrt_eigenvalues[i] > omega) outside += std::norm(f.c[i]);
  return std::sqrt(outside);
}

BernsteinReport bernstein_check(const SpectralModel& model, double omega, double order,
                                const SpectralVector& f) {
  check_size(model, f, "bernstein_check");
  if (!(omega > 0.0)) throw std::invalid_argument("bernstein_check: omega must be > 0");
  if (order < 0.0) throw std::invalid_argument("bernstein_check: order must be >= 0");
  if (!in_paley_wiener(model, omega, f))
    throw std::invalid_argument("bernstein_check: vector is not band limited to omega");

  BernsteinReport rep;
  rep.omega = omega;
  rep.order = order;
  const double denom = std::pow(omega, order) * f.norm();
  rep.ratio = denom == 0.0 ? 0.0 : laplacian_power_norm(model, order, f) / denom;
  return rep;
}

RieszBoasResult riesz_boas_apply(const SpectralModel& model, double omega,
                                 const SpectralVector& f, int half_terms) {
  check_size(model, f, "riesz_boas_apply");
  if (half_terms < 1) throw std::domain_error("riesz_boas_apply: need at least one term");
  if (!(omega > 0.0)) throw std::invalid_argument("riesz_boas_apply: omega must be > 0");
  if (!in_paley_wiener(model, omega, f))
    throw std::invalid_argument("riesz_boas_apply: vector is not band limited to omega");

  const double pi = 3.14159265358979323846264338328;
  RieszBoasResult res;
  res.half_terms = half_terms;
  res.approx = apply_multiplier(
      model,
      [&](double lam) {
        double s = 0.0;
        double sign = 1.0;
        for (int k = 1; k <= half_terms; ++k) {
          const double shift = k - 0.5;
          s += sign * std::sin(pi / omega * shift * lam) / (shift * shift);
          sign = -sign;
        }
        return cdbl(0.0, 2.0 * omega / (pi * pi) * s);
      },
      f);

  double err = 0.0;
  for (int i = 0; i < model.dim; ++i) {
    const cdbl exact = cdbl(0.0, model.sqrt_eigenvalues[i]) * f.c[i];
    err += std::norm(res.approx.c[i] - exact);
  }
  res.error = std::sqrt(err);
  return res;
}

}  // namespace spw
