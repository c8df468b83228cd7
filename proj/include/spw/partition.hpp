#pragma once

#include <utility>

#include "spw/model.hpp"

namespace spw {

// Dyadic quadratic partition of unity on the nonnegative axis.  g is a
// smooth non-increasing cutoff with g = 1 on [0,1] and g = 0 on [2,inf),
// built from the bump psi(u) = exp(-1/u); h(u) = g(u) - g(2u) lives on
// [1/2, 2]; F_0 = sqrt(g), F_j(x) = sqrt(h(2^{-j} x)) for j >= 1; G_j =
// F_j^2.  The G_j telescope: sum_{j=0..n} G_j(x) = g(2^{-n} x), so they sum
// to 1 wherever 2^{-J_max} x <= 1.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(int j_max);

  int j_max() const { return j_max_; }
  double g(double x) const;
  double h(double x) const;
  double F(int j, double x) const;
  double G(int j, double x) const;

  // Closed support of F_j: [0, 2] for j = 0, [2^{j-1}, 2^{j+1}] for j >= 1.
  std::pair<double, double> support(int j) const;

  // True when the bands 0..j_max sum to 1 on all of [0, lambda_max], which
  // by the telescoping identity means 2^{j_max - 1} > lambda_max.
  bool covers(double lambda_max) const;

 private:
  int j_max_ = 0;
};

PartitionOfUnity build_partition(int j_max);

// Smallest J >= 1 with 2^{J-1} > lambda_max, i.e. the least band count for
// which the partition covers a spectrum reaching lambda_max.
int required_j_max(double lambda_max);

// Littlewood-Paley pieces (F_j(sqrt(L)) f)_{j=0..j_max}; each F_j is applied
// pointwise on the stored eigenvalues.  Throws when the spectrum is not
// covered, naming the required band count.
std::vector<SpectralVector> lp_decompose(const SpectralModel& model,
                                         const PartitionOfUnity& pou,
                                         const SpectralVector& f);

// Shared evaluation grid for reports and tests: {0} followed by count-1
// log-spaced points from 1e-3 up to 2^{j_max - 1}.
std::vector<double> partition_grid(int j_max, int count = 10000);

}  // namespace spw
