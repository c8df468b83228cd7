#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

namespace spw {

using cdbl = std::complex<double>;
using CVec = std::vector<cdbl>;

// Dense row-major complex matrix.  Sized for desk-scale spectral models
// (hundreds of rows, a couple thousand at most), so no blocking or views;
// plain loops keep the parallel kernels easy to reason about.
struct CMat {
  int rows = 0;
  int cols = 0;
  CVec a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cdbl& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const cdbl& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

// Inner product, conjugate-linear in the first argument.
inline cdbl dot(const CVec& x, const CVec& y) {
  assert(x.size() == y.size());
  cdbl s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double norm2_sq(const CVec& x) {
  double s = 0.0;
  for (const cdbl& v : x) s += std::norm(v);
  return s;
}

inline double norm2(const CVec& x) { return std::sqrt(norm2_sq(x)); }

inline void axpy(cdbl alpha, const CVec& x, CVec& y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(cdbl alpha, CVec& x) {
  for (cdbl& v : x) v *= alpha;
}

inline CVec sub(const CVec& x, const CVec& y) {
  assert(x.size() == y.size());
  CVec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

// y = A x
inline void matvec(const CMat& A, const CVec& x, CVec& y) {
  assert(static_cast<int>(x.size()) == A.cols);
  y.assign(A.rows, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    cdbl s = 0.0;
    const cdbl* row = &A.a[static_cast<size_t>(r) * A.cols];
    for (int c = 0; c < A.cols; ++c) s += row[c] * x[c];
    y[r] = s;
  }
}

// y = A^H x
inline void matvec_adjoint(const CMat& A, const CVec& x, CVec& y) {
  assert(static_cast<int>(x.size()) == A.rows);
  y.assign(A.cols, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    const cdbl xr = x[r];
    const cdbl* row = &A.a[static_cast<size_t>(r) * A.cols];
    for (int c = 0; c < A.cols; ++c) y[c] += std::conj(row[c]) * xr;
  }
}

inline CMat matmul(const CMat& A, const CMat& B) {
  assert(A.cols == B.rows);
  CMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const cdbl aik = A(i, k);
      if (aik == cdbl(0.0)) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

inline CMat adjoint(const CMat& A) {
  CMat B(A.cols, A.rows);
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c) B(c, r) = std::conj(A(r, c));
  return B;
}

inline double frobenius(const CMat& A) {
  double s = 0.0;
  for (const cdbl& v : A.a) s += std::norm(v);
  return std::sqrt(s);
}

inline double max_abs_diff(const CMat& A, const CMat& B) {
  assert(A.rows == B.rows && A.cols == B.cols);
  double m = 0.0;
  for (size_t i = 0; i < A.a.size(); ++i) m = std::max(m, std::abs(A.a[i] - B.a[i]));
  return m;
}

}  // namespace spw
