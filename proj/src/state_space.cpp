#include "avgbin/state_space.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace avgbin {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial_saturating(std::uint64_t top, std::uint64_t r) {
  r = std::min(r, top - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (top - r + i) / i;
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::uint64_t count_configs(std::size_t n, std::size_t k) {
  if (n == 0) return k == 0 ? 1 : 0;
  return binomial_saturating(n + k - 1, k);
}

std::uint64_t count_tuples(std::size_t n, std::size_t k) {
  unsigned __int128 acc = 1;
  for (std::size_t i = 0; i < k; ++i) {
    acc *= n;
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

UnlabeledSpace::UnlabeledSpace(std::size_t n, std::size_t k, std::size_t cap) : n_(n), k_(k) {
  if (n == 0) throw std::invalid_argument("configuration space needs n >= 1");
  const std::uint64_t count = count_configs(n, k);
  if (count > cap) {
    throw SizeLimitError("state space for n=" + std::to_string(n) + ", k=" + std::to_string(k) + " has " +
                             (count == kSaturated ? std::string("more than 2^64") : std::to_string(count)) +
                             " configurations, above the cap of " + std::to_string(cap),
                         count, cap);
  }
  size_ = static_cast<std::size_t>(count);

  ways_.assign((n + 1) * (k + 1), 0);
  ways_[0] = 1;
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t r = 0; r <= k; ++r) ways_[m * (k + 1) + r] = count_configs(m, r);

  data_.resize(size_ * n);
  std::vector<std::uint32_t> xi(n, 0);
  xi[0] = static_cast<std::uint32_t>(k);
  for (std::size_t i = 0; i < size_; ++i) {
    std::copy(xi.begin(), xi.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n));
    if (n == 1 || i + 1 == size_) break;
    // Descending-lex successor: move one particle from the last non-empty
    // site before n-1 to its right neighbour, and gather the tail there.
    std::size_t j = n - 1;
    while (j-- > 0 && xi[j] == 0) {
    }
    std::uint32_t tail = 0;
    for (std::size_t q = j + 1; q < n; ++q) {
      tail += xi[q];
      xi[q] = 0;
    }
    --xi[j];
    xi[j + 1] = tail + 1;
  }
}

std::size_t UnlabeledSpace::index_unchecked(std::span<const std::uint32_t> xi) const {
  std::size_t rank = 0;
  std::size_t remaining = k_;
  for (std::size_t i = 0; i + 1 < n_; ++i) {
    // Configurations sharing the prefix with a larger value at site i come
    // first; by the hockey-stick identity they number ways(n-i, r-xi_i-1).
    if (remaining > xi[i]) rank += ways(n_ - i, remaining - xi[i] - 1);
    remaining -= xi[i];
  }
  return rank;
}

std::size_t UnlabeledSpace::index(std::span<const std::uint32_t> xi) const {
  if (xi.size() != n_) throw std::invalid_argument("configuration has wrong number of sites");
  std::uint64_t total = 0;
  for (std::uint32_t v : xi) total += v;
  if (total != k_) throw std::invalid_argument("configuration holds " + std::to_string(total) + " particles, expected " + std::to_string(k_));
  return index_unchecked(xi);
}

std::size_t tuple_index(std::span<const Vertex> xs, std::size_t n) {
  std::size_t idx = 0;
  for (Vertex x : xs) idx = idx * n + static_cast<std::size_t>(x);
  return idx;
}

void tuple_from_index(std::size_t index, std::size_t n, std::span<Vertex> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Vertex>(index % n);
    index /= n;
  }
}

ParticleConfig occupation_of(std::span<const Vertex> xs, std::size_t n) {
  ParticleConfig xi(n, 0);
  for (Vertex x : xs) ++xi.at(static_cast<std::size_t>(x));
  return xi;
}

double multinomial_pmf(std::span<const double> p, std::span<const std::uint32_t> xi) {
  if (p.size() != xi.size()) throw std::invalid_argument("multinomial_pmf: dimension mismatch");
  std::uint64_t k = 0;
  double log_mass = 0.0;
  for (std::size_t x = 0; x < xi.size(); ++x) {
    k += xi[x];
    if (xi[x] == 0) continue;
    if (p[x] <= 0.0) return 0.0;
    log_mass += xi[x] * std::log(p[x]) - std::lgamma(xi[x] + 1.0);
  }
  return std::exp(log_mass + std::lgamma(static_cast<double>(k) + 1.0));
}

std::vector<double> multinomial_measure(std::span<const double> p, const UnlabeledSpace& space) {
  if (p.size() != space.n()) throw std::invalid_argument("multinomial_measure: weights do not match the space");
  std::vector<double> mu(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) mu[i] = multinomial_pmf(p, space.config(i));
  return mu;
}

std::vector<double> multinomial_measure(const SiteWeights& pi, const UnlabeledSpace& space) {
  return multinomial_measure(pi.values(), space);
}

std::vector<double> product_measure(std::span<const double> pi, std::size_t k) {
  const std::size_t n = pi.size();
  std::vector<double> mu{1.0};
  for (std::size_t level = 0; level < k; ++level) {
    std::vector<double> next(mu.size() * n);
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t x = 0; x < n; ++x) next[i * n + x] = mu[i] * pi[x];
    mu = std::move(next);
  }
  return mu;
}

}  // namespace avgbin
