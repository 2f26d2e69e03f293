#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "avgbin/graphs.hpp"

namespace avgbin {

// Occupation vector: particle count per vertex.
using ParticleConfig = std::vector<std::uint32_t>;

class SizeLimitError : public std::length_error {
 public:
  SizeLimitError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : std::length_error(what), requested_(requested), cap_(cap) {}
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_, cap_;
};

inline constexpr std::size_t kEnumerationCap = 2'000'000;
inline constexpr std::size_t kTransientCap = 200'000;

// C(n+k-1, k), saturating at UINT64_MAX.
std::uint64_t count_configs(std::size_t n, std::size_t k);
// n^k, saturating at UINT64_MAX.
std::uint64_t count_tuples(std::size_t n, std::size_t k);

// All occupation vectors of k particles on n sites, in descending
// lexicographic order: (k,0,...,0) first, (0,...,0,k) last. Indexing uses
// combinatorial ranking, no hash table.
class UnlabeledSpace {
 public:
  UnlabeledSpace(std::size_t n, std::size_t k, std::size_t cap = kEnumerationCap);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return size_; }
  std::span<const std::uint32_t> config(std::size_t i) const {
    return std::span<const std::uint32_t>(data_).subspan(i * n_, n_);
  }
  // Throws std::invalid_argument unless xi has n entries summing to k.
  std::size_t index(std::span<const std::uint32_t> xi) const;
  // Same without validation.
  std::size_t index_unchecked(std::span<const std::uint32_t> xi) const;

 private:
  // ways(m, r): configurations of r particles on m sites.
  std::uint64_t ways(std::size_t m, std::size_t r) const { return ways_[m * (k_ + 1) + r]; }

  std::size_t n_, k_, size_;
  std::vector<std::uint64_t> ways_;
  std::vector<std::uint32_t> data_;
};

// Labeled tuples x in V^k, row-major: index = ((x_0 * n + x_1) * n + ...).
std::size_t tuple_index(std::span<const Vertex> xs, std::size_t n);
void tuple_from_index(std::size_t index, std::size_t n, std::span<Vertex> out);
ParticleConfig occupation_of(std::span<const Vertex> xs, std::size_t n);

// mu_{k,p}(xi) = k! prod p(x)^xi(x) / xi(x)!, with 0^0 = 1; p is any
// probability vector.
double multinomial_pmf(std::span<const double> p, std::span<const std::uint32_t> xi);
std::vector<double> multinomial_measure(std::span<const double> p, const UnlabeledSpace& space);
std::vector<double> multinomial_measure(const SiteWeights& pi, const UnlabeledSpace& space);
// pi^{(x)k} over V^k in tuple order.
std::vector<double> product_measure(std::span<const double> pi, std::size_t k);

}  // namespace avgbin
