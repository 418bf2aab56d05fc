#include "depthcause/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace depthcause {

double median_inplace(std::vector<double>& buf) {
  const std::size_t n = buf.size();
  if (n == 0) throw std::invalid_argument("median of empty vector");
  const std::size_t mid = n / 2;
  std::nth_element(buf.begin(), buf.begin() + mid, buf.end());
  double hi = buf[mid];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(buf.begin(), buf.begin() + mid);
  return 0.5 * (lo + hi);
}

double median(const Vector& x) {
  std::vector<double> buf(x.data(), x.data() + x.size());
  return median_inplace(buf);
}

double mad(const Vector& x) {
  const double med = median(x);
  std::vector<double> buf(x.size());
  for (Index i = 0; i < x.size(); ++i) buf[i] = std::abs(x[i] - med);
  return median_inplace(buf);
}

double ecdf(const Vector& x, double q) {
  if (x.size() == 0) throw std::invalid_argument("ecdf of empty vector");
  Index count = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] <= q) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(x.size());
}

Vector mid_ranks(const Vector& x) {
  const Index n = x.size();
  if (n == 0) throw std::invalid_argument("mid_ranks of empty vector");
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return x[a] < x[b]; });
  Vector ranks(n);
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // positions i..j (0-based) share the average of ranks i+1..j+1
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_stream_seed(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state = a ^ stream_id;
  std::uint64_t b = splitmix64(state);
  return splitmix64(state) ^ b;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(mix_stream_seed(seed, stream_id)),
      seed_(seed),
      stream_id_(stream_id) {}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // open-interval uniform keeps log() finite
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index with n = 0");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r < threshold);
  return r % n;
}

std::vector<Index> sample_index_subset(Index n, Index k, RandomStream& stream) {
  if (k < 0 || k > n)
    throw std::invalid_argument("subset size out of range");
  std::vector<Index> pool(n);
  for (Index i = 0; i < n; ++i) pool[i] = i;
  // partial Fisher-Yates
  for (Index i = 0; i < k; ++i) {
    const Index j =
        i + static_cast<Index>(stream.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<Index> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace depthcause
