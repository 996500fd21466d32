#pragma once

#include <cstddef>
#include <vector>

namespace tollsafe {

/// First `n` prime numbers (2, 3, 5, ...).
std::vector<int> first_primes(std::size_t n);

/// Radical-inverse of `index` in the given base, in (0, 1).
double radical_inverse(unsigned long long index, int base);

/// Quasi-random standard-normal draws for grouped simulation.
///
/// Dimension d uses the d-th prime as base. The first `skip` points of the
/// sequence are discarded; group g receives points skip + g*draws + r for
/// r = 0..draws-1 (index starts at 1), so groups never share points and the
/// draws are reproducible for a fixed (skip, draws) pair. Each uniform
/// coordinate is mapped through the inverse normal CDF.
class HaltonNormal {
 public:
  HaltonNormal(std::size_t dimensions, std::size_t draws, std::size_t skip = 100);

  std::size_t dimensions() const { return dims_; }
  std::size_t draws() const { return draws_; }

  /// Normal draw for (group, draw r, dimension k).
  double draw(std::size_t group, std::size_t r, std::size_t dim) const;

  /// All `dimensions` coordinates of draw r for a group.
  std::vector<double> point(std::size_t group, std::size_t r) const;

 private:
  std::size_t dims_, draws_, skip_;
  std::vector<int> bases_;
};

}  // namespace tollsafe
