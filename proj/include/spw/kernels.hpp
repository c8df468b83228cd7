#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spw/linalg.hpp"

namespace spw {

// Execution policy for the data-parallel kernels.  `parallel` uses OpenMP
// when compiled in; `serial` is the reference path the tests compare
// against.  Every parallel loop below splits work over *independent output
// slots* (matrix rows, grid lines, atoms) and keeps each slot's summation
// order identical to the serial path, so the two policies produce
// bit-identical results -- the test suite asserts this, and it is what makes
// suite outputs reproducible regardless of thread count.
enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec e);

template <typename Body>
void parallel_for(int n, Exec ex, Body&& body) {
#ifdef _OPENMP
  if (ex == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)ex;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

// Max-reduction over i of value(i).  Floating max is exact (no rounding), so
// the reduction order cannot change the result.
template <typename Value>
double parallel_max(int n, Exec ex, Value&& value) {
  double best = 0.0;
#ifdef _OPENMP
  if (ex == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(max : best)
    for (int i = 0; i < n; ++i) best = std::max(best, value(i));
    return best;
  }
#else
  (void)ex;
#endif
  for (int i = 0; i < n; ++i) best = std::max(best, value(i));
  return best;
}

// y = A x, rows in parallel.
void matvec(const CMat& A, const CVec& x, CVec& y, Exec ex);

// y = A^H x, output entries in parallel; each entry sums over rows in
// ascending order exactly as the serial scatter loop does.
void matvec_adjoint(const CMat& A, const CVec& x, CVec& y, Exec ex);

}  // namespace spw
