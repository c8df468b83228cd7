#include "spw/kernels.hpp"

namespace spw {

namespace {
Exec g_default = Exec::parallel;
}

Exec default_exec() { return g_default; }
void set_default_exec(Exec e) { g_default = e; }

void matvec(const CMat& A, const CVec& x, CVec& y, Exec ex) {
  y.assign(A.rows, cdbl(0.0));
  parallel_for(A.rows, ex, [&](int r) {
    cdbl s = 0.0;
    const cdbl* row = &A.a[static_cast<size_t>(r) * A.cols];
    for (int c = 0; c < A.cols; ++c) s += row[c] * x[c];
    y[r] = s;
  });
}

void matvec_adjoint(const CMat& A, const CVec& x, CVec& y, Exec ex) {
  y.assign(A.cols, cdbl(0.0));
  parallel_for(A.cols, ex, [&](int c) {
    cdbl s = 0.0;
    for (int r = 0; r < A.rows; ++r) s += std::conj(A(r, c)) * x[r];
    y[c] = s;
  });
}

}  // namespace spw
