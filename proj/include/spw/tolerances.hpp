#pragma once

namespace spw {

// Two families of tolerances are used throughout:
//   * algebraic: identities that hold exactly in exact arithmetic
//     (group laws, Parseval, projector idempotence) and only see roundoff.
//   * iterative: quantities limited by a truncation or an iteration
//     (quadrature agreement, eigensolver residuals, CG solves).
// Individual routines that need a tighter or looser bar take an explicit
// parameter; these are the defaults they fall back to.
struct Tolerances {
  double algebraic = 1e-10;
  double iterative = 1e-8;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace spw
