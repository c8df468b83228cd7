#include "spw/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spw/spectral.hpp"

namespace spw {

namespace {

// exp(-1/u) continued by 0 for u <= 0; all derivatives vanish at 0.
double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

PartitionOfUnity::PartitionOfUnity(int j_max) : j_max_(j_max) {
  if (j_max < 1) throw std::invalid_argument("PartitionOfUnity: j_max must be >= 1");
}

double PartitionOfUnity::g(double x) const {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double a = bump(2.0 - x);
  const double b = bump(x - 1.0);
  return a / (a + b);  // denominators never both underflow: (2-x)+(x-1) = 1
}

double PartitionOfUnity::h(double x) const { return g(x) - g(2.0 * x); }

double PartitionOfUnity::F(int j, double x) const {
  return std::sqrt(std::max(0.0, G(j, x)));
}

double PartitionOfUnity::G(int j, double x) const {
  if (j < 0 || j > j_max_) throw std::out_of_range("PartitionOfUnity: band index out of range");
  if (j == 0) return g(x);
  return h(std::ldexp(x, -j));  // h(2^{-j} x)
}

std::pair<double, double> PartitionOfUnity::support(int j) const {
  if (j < 0 || j > j_max_) throw std::out_of_range("PartitionOfUnity: band index out of range");
  if (j == 0) return {0.0, 2.0};
  return {std::ldexp(1.0, j - 1), std::ldexp(1.0, j + 1)};
}

bool PartitionOfUnity::covers(double lambda_max) const {
  return std::ldexp(1.0, j_max_ - 1) > lambda_max;
}

PartitionOfUnity build_partition(int j_max) { return PartitionOfUnity(j_max); }

int required_j_max(double lambda_max) {
  int j = 1;
  while (!(std::ldexp(1.0, j - 1) > lambda_max)) ++j;
  return j;
}

std::vector<SpectralVector> lp_decompose(const SpectralModel& model,
                                         const PartitionOfUnity& pou,
                                         const SpectralVector& f) {
  if (f.size() != model.dim)
    throw std::invalid_argument("lp_decompose: vector size does not match model dim");
  const double lam_max = model.max_sqrt_eigenvalue();
  if (!pou.covers(lam_max))
    throw std::invalid_argument("lp_decompose: spectrum not covered; need j_max >= " +
                                std::to_string(required_j_max(lam_max)));

  std::vector<SpectralVector> parts;
  parts.reserve(pou.j_max() + 1);
  for (int j = 0; j <= pou.j_max(); ++j)
    parts.push_back(apply_multiplier(
        model, [&](double lam) { return cdbl(pou.F(j, lam)); }, f));
  return parts;
}

std::vector<double> partition_grid(int j_max, int count) {
  if (count < 2) throw std::invalid_argument("partition_grid: need at least 2 points");
  std::vector<double> grid;
  grid.reserve(count);
  grid.push_back(0.0);
  const double lo = std::log10(1e-3);
  const double hi = std::log10(std::ldexp(1.0, j_max - 1));
  for (int i = 0; i < count - 1; ++i)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (count - 2)));
  return grid;
}

}  // namespace spw
