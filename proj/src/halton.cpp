#include "tollsafe/halton.hpp"

#include "tollsafe/error.hpp"
#include "tollsafe/special_functions.hpp"

namespace tollsafe {

std::vector<int> first_primes(std::size_t n) {
  std::vector<int> primes;
  for (int candidate = 2; primes.size() < n; ++candidate) {
    bool is_prime = true;
    for (int p : primes) {
      if (static_cast<long>(p) * p > candidate) break;
      if (candidate % p == 0) {
        is_prime = false;
        break;
      }
    }
    if (is_prime) primes.push_back(candidate);
  }
  return primes;
}

double radical_inverse(unsigned long long index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

HaltonNormal::HaltonNormal(std::size_t dimensions, std::size_t draws, std::size_t skip)
    : dims_(dimensions), draws_(draws), skip_(skip), bases_(first_primes(dimensions)) {
  if (dimensions == 0 || draws == 0)
    throw config_error("HaltonNormal: dimensions and draws must be positive");
}

double HaltonNormal::draw(std::size_t group, std::size_t r, std::size_t dim) const {
  if (dim >= dims_ || r >= draws_)
    throw internal_error("HaltonNormal::draw: index out of range");
  unsigned long long index = skip_ + group * draws_ + r + 1;  // sequence starts at 1
  return inverse_normal_cdf(radical_inverse(index, bases_[dim]));
}

std::vector<double> HaltonNormal::point(std::size_t group, std::size_t r) const {
  std::vector<double> out(dims_);
  for (std::size_t k = 0; k < dims_; ++k) out[k] = draw(group, r, k);
  return out;
}

}  // namespace tollsafe
