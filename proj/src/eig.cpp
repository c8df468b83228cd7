#include "spw/eig.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spw {

namespace {

double offdiag_frobenius(const CMat& A) {
  double s = 0.0;
  for (int p = 0; p < A.rows; ++p)
    for (int q = p + 1; q < A.cols; ++q) s += 2.0 * std::norm(A(p, q));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eigen(const CMat& A, double tol_scale, int max_sweeps) {
  if (A.rows != A.cols) throw std::invalid_argument("hermitian_eigen: matrix not square");
  const int n = A.rows;

  CMat M = A;
  // Work on the Hermitian average so tiny asymmetries from the caller do not
  // drift through the sweeps; callers validate symmetry separately.
  for (int p = 0; p < n; ++p) {
    M(p, p) = cdbl(M(p, p).real(), 0.0);
    for (int q = p + 1; q < n; ++q) {
      const cdbl v = 0.5 * (M(p, q) + std::conj(M(q, p)));
      M(p, q) = v;
      M(q, p) = std::conj(v);
    }
  }

  CMat V = CMat::identity(n);
  const double scale = frobenius(M);
  const double stop = tol_scale * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius(M) <= stop) break;
    if (sweep == max_sweeps - 1)
      throw std::runtime_error("hermitian_eigen: no convergence in max_sweeps");

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdbl apq = M(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Unitary plane rotation R with R(p,p)=c, R(p,q)=s*e^{i phi},
        // R(q,p)=-s*e^{-i phi}, R(q,q)=c, phase e^{i phi} = apq/|apq|.
        // The angle is the classic stable choice t = tan(theta) solving
        // tan(2 theta) = 2|apq| / (aqq - app); M <- R^H M R zeroes (p,q).
        const cdbl phase = apq / mag;
        const double tau = (M(q, q).real() - M(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cdbl s = t * c * phase;
        const double h = t * mag;

        M(p, p) -= h;
        M(q, q) += h;
        M(p, q) = 0.0;
        M(q, p) = 0.0;

        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cdbl mkp = M(k, p);
          const cdbl mkq = M(k, q);
          M(k, p) = c * mkp - std::conj(s) * mkq;
          M(k, q) = s * mkp + c * mkq;
          M(p, k) = std::conj(M(k, p));
          M(q, k) = std::conj(M(k, q));
        }
        for (int k = 0; k < n; ++k) {
          const cdbl vkp = V(k, p);
          const cdbl vkq = V(k, q);
          V(k, p) = c * vkp - std::conj(s) * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenDecomposition out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = M(i, i).real();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return out.values[i] < out.values[j]; });

  std::vector<double> sorted(n);
  CMat W(n, n);
  for (int j = 0; j < n; ++j) {
    sorted[j] = out.values[order[j]];
    for (int i = 0; i < n; ++i) W(i, j) = V(i, order[j]);
  }
  out.values = std::move(sorted);
  out.vectors = std::move(W);
  return out;
}

CVec solve_hpd(const std::function<void(const CVec&, CVec&)>& apply, const CVec& b,
               double rtol, int max_iter) {
  const int n = static_cast<int>(b.size());
  if (max_iter <= 0) max_iter = std::max(4 * n, 200);

  const double bnorm = norm2(b);
  CVec x(n, 0.0);
  if (bnorm == 0.0) return x;

  CVec r = b;
  CVec p = r;
  CVec sp(n);
  double rr = norm2_sq(r);

  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= rtol * bnorm) return x;
    apply(p, sp);
    const cdbl psp = dot(p, sp);
    if (psp.real() <= 0.0)
      throw std::runtime_error("solve_hpd: operator not positive definite");
    const double alpha = rr / psp.real();
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * sp[i];
    }
    const double rr_new = norm2_sq(r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= rtol * bnorm) return x;
  throw std::runtime_error("solve_hpd: conjugate gradients did not converge");
}

}  // namespace spw
