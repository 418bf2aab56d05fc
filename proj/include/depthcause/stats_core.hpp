#ifndef DEPTHCAUSE_STATS_CORE_HPP
#define DEPTHCAUSE_STATS_CORE_HPP

#include "depthcause/types.hpp"

#include <cstdint>
#include <random>

namespace depthcause {

// Median with the even-n convention: midpoint of the two central order
// statistics.
double median(const Vector& x);

// Median absolute deviation about the median, no consistency factor.
double mad(const Vector& x);

// Right-continuous empirical CDF: #{x_i <= q} / n.
double ecdf(const Vector& x, double q);

// Ascending ranks 1..n; tied values get the average of their rank range.
// The ranks always sum to n(n+1)/2.
Vector mid_ranks(const Vector& x);

// In-place median over a scratch buffer (nth_element based, O(n)).
double median_inplace(std::vector<double>& buf);

// Seeded random stream. Identical (seed, stream_id) reproduces the same
// variate sequence on every run; distinct stream ids give independent
// substreams, so parallel consumers can each own one.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller, pairwise cached.
  double normal();

  // Unbiased uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// k distinct indices drawn uniformly from {0,...,n-1}, returned sorted.
std::vector<Index> sample_index_subset(Index n, Index k, RandomStream& stream);

}  // namespace depthcause

#endif
