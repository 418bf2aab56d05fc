#include "depthcause/functional_depth.hpp"

#include "depthcause/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace depthcause {

namespace {

// For one grid column: below[i] = #{j: x_j(t) < x_i(t)}, above[i] the strict
// count on the other side. One sort plus a sweep over tie runs.
void column_order_counts(const Matrix& curves, Index col,
                         std::vector<std::pair<double, int>>& buf,
                         std::vector<int>& below, std::vector<int>& above) {
  const int n = static_cast<int>(curves.rows());
  buf.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = {curves(i, col), i};
  std::sort(buf.begin(), buf.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  below.assign(static_cast<std::size_t>(n), 0);
  above.assign(static_cast<std::size_t>(n), 0);
  int lo = 0;
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && buf[static_cast<std::size_t>(hi)].first == buf[static_cast<std::size_t>(lo)].first)
      ++hi;
    for (int k = lo; k < hi; ++k) {
      const int i = buf[static_cast<std::size_t>(k)].second;
      below[static_cast<std::size_t>(i)] = lo;
      above[static_cast<std::size_t>(i)] = n - hi;
    }
    lo = hi;
  }
}

// Per-curve histogram of the integer pointwise-outlyingness level
// k(t) = |below - above| in [0, n-1], then suffix counts
// suffix[i][k] = #{t: k(t) >= k}. Integer form keeps the left-tail
// comparison free of rounding.
std::vector<std::vector<int>> ed_suffix_counts(const FunctionalSample& sample) {
  const int n = static_cast<int>(sample.n());
  const Index m = sample.m();
  std::vector<std::vector<int>> hist(static_cast<std::size_t>(n),
                                     std::vector<int>(static_cast<std::size_t>(n), 0));
  std::vector<std::pair<double, int>> buf;
  std::vector<int> below, above;
  for (Index j = 0; j < m; ++j) {
    column_order_counts(sample.curves, j, buf, below, above);
    for (int i = 0; i < n; ++i) {
      const int k = std::abs(below[static_cast<std::size_t>(i)] - above[static_cast<std::size_t>(i)]);
      ++hist[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
  }
  for (auto& h : hist)
    for (int k = n - 2; k >= 0; --k)
      h[static_cast<std::size_t>(k)] += h[static_cast<std::size_t>(k) + 1];
  return hist;
}

// +1 if curve a is deeper: at the largest outlyingness level where the
// suffix counts differ, a has fewer grid points that far out.
int compare_suffix(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k] ? 1 : -1;
  }
  return 0;
}

}  // namespace

DepthVector mbd(const FunctionalSample& sample) {
  const Index n = sample.n();
  const Index m = sample.m();
  if (n < 2) throw DataError("modified band depth needs at least two curves");
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  Vector acc = Vector::Zero(n);
  std::vector<std::pair<double, int>> buf;
  std::vector<int> below, above;
  for (Index j = 0; j < m; ++j) {
    column_order_counts(sample.curves, j, buf, below, above);
    for (Index i = 0; i < n; ++i) {
      const double a = below[static_cast<std::size_t>(i)];
      const double c = above[static_cast<std::size_t>(i)];
      acc[i] += pairs - 0.5 * a * (a - 1.0) - 0.5 * c * (c - 1.0);
    }
  }
  DepthVector out;
  out.values = acc / (pairs * static_cast<double>(m));
  out.method = DepthMethod::MBD;
  out.units = sample.units;
  return out;
}

DepthVector fm_depth(const FunctionalSample& sample) {
  const Index n = sample.n();
  const Index m = sample.m();
  if (n < 1) throw DataError("empty functional sample");
  Vector acc = Vector::Zero(n);
  std::vector<std::pair<double, int>> buf;
  std::vector<int> below, above;
  for (Index j = 0; j < m; ++j) {
    column_order_counts(sample.curves, j, buf, below, above);
    for (Index i = 0; i < n; ++i) {
      const double f = static_cast<double>(n - above[static_cast<std::size_t>(i)]) /
                       static_cast<double>(n);
      acc[i] += 1.0 - std::abs(0.5 - f);
    }
  }
  DepthVector out;
  out.values = acc / static_cast<double>(m);
  out.method = DepthMethod::FM;
  out.units = sample.units;
  return out;
}

DepthVector extremal_depth(const FunctionalSample& sample) {
  const Index n = sample.n();
  if (n < 1) throw DataError("empty functional sample");
  const auto suffix = ed_suffix_counts(sample);
  DepthVector out;
  out.values.resize(n);
  for (Index i = 0; i < n; ++i) {
    int dominated = 0;
    for (Index j = 0; j < n; ++j)
      if (compare_suffix(suffix[static_cast<std::size_t>(i)],
                         suffix[static_cast<std::size_t>(j)]) >= 0)
        ++dominated;
    out.values[i] = static_cast<double>(dominated) / static_cast<double>(n);
  }
  out.method = DepthMethod::ED;
  out.units = sample.units;
  return out;
}

DepthVector functional_depth(const FunctionalSample& sample, DepthMethod method) {
  switch (method) {
    case DepthMethod::MBD: return mbd(sample);
    case DepthMethod::FM: return fm_depth(sample);
    case DepthMethod::ED: return extremal_depth(sample);
    case DepthMethod::PROJECTION: break;
  }
  throw std::invalid_argument("projection depth is not a functional depth");
}

PointwiseDepthCurve ed_pointwise_depth(const FunctionalSample& sample, Index i) {
  const Index n = sample.n();
  const Index m = sample.m();
  if (i < 0 || i >= n) throw std::invalid_argument("curve index out of range");
  PointwiseDepthCurve out;
  out.grid = sample.grid;
  out.values.resize(m);
  std::vector<std::pair<double, int>> buf;
  std::vector<int> below, above;
  for (Index j = 0; j < m; ++j) {
    column_order_counts(sample.curves, j, buf, below, above);
    const int k = std::abs(below[static_cast<std::size_t>(i)] - above[static_cast<std::size_t>(i)]);
    out.values[j] = 1.0 - static_cast<double>(k) / static_cast<double>(n);
  }
  return out;
}

DepthCdf ed_depth_cdf(const FunctionalSample& sample, Index i) {
  const Index n = sample.n();
  const Index m = sample.m();
  PointwiseDepthCurve pw = ed_pointwise_depth(sample, i);
  // Counts per integer level k, then levels ascending in depth 1 - k/n.
  std::vector<Index> count(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < m; ++j) {
    const int k = static_cast<int>(std::lround((1.0 - pw.values[j]) * static_cast<double>(n)));
    ++count[static_cast<std::size_t>(k)];
  }
  std::vector<double> levels;
  std::vector<double> masses;
  Index cum = 0;
  for (Index k = n - 1; k >= 0; --k) {
    if (count[static_cast<std::size_t>(k)] == 0) continue;
    cum += count[static_cast<std::size_t>(k)];
    levels.push_back(1.0 - static_cast<double>(k) / static_cast<double>(n));
    masses.push_back(static_cast<double>(cum) / static_cast<double>(m));
  }
  DepthCdf out;
  out.levels = Eigen::Map<const Vector>(levels.data(), static_cast<Index>(levels.size()));
  out.masses = Eigen::Map<const Vector>(masses.data(), static_cast<Index>(masses.size()));
  return out;
}

int compare_depth_cdf(const DepthCdf& a, const DepthCdf& b) {
  Index ia = 0;
  Index ib = 0;
  double ma = 0.0;
  double mb = 0.0;
  while (ia < a.levels.size() || ib < b.levels.size()) {
    double level;
    if (ia >= a.levels.size()) level = b.levels[ib];
    else if (ib >= b.levels.size()) level = a.levels[ia];
    else level = std::min(a.levels[ia], b.levels[ib]);
    if (ia < a.levels.size() && a.levels[ia] == level) ma = a.masses[ia++];
    if (ib < b.levels.size() && b.levels[ib] == level) mb = b.masses[ib++];
    if (ma != mb) return ma < mb ? 1 : -1;
  }
  return 0;
}

bool ed_grid_is_sparse(const FunctionalSample& sample) {
  return sample.m() < 2 * sample.n();
}

std::pair<UnitId, Vector> functional_median(const FunctionalSample& sample, DepthMethod method) {
  if (sample.n() == 1) return {sample.units[0], sample.curves.row(0)};
  const DepthVector depths = functional_depth(sample, method);
  Index best = 0;
  for (Index i = 1; i < depths.n(); ++i)
    if (depths.values[i] > depths.values[best]) best = i;
  return {sample.units[static_cast<std::size_t>(best)], sample.curves.row(best)};
}

MedianDifference median_difference(const FunctionalSample& sample_f,
                                   const FunctionalSample& sample_c,
                                   DepthMethod method) {
  if (sample_f.m() != sample_c.m() || (sample_f.grid.array() != sample_c.grid.array()).any())
    throw DataError("factual and counterfactual samples have different grids");
  const Vector med_f = functional_median(sample_f, method).second;
  const Vector med_c = functional_median(sample_c, method).second;
  MedianDifference out;
  out.grid = sample_f.grid;
  out.diff = med_f - med_c;
  out.sup_norm = out.diff.cwiseAbs().maxCoeff();
  double integral = 0.0;
  for (Index j = 1; j < out.grid.size(); ++j) {
    const double dt = out.grid[j] - out.grid[j - 1];
    integral += 0.5 * dt * (out.diff[j - 1] * out.diff[j - 1] + out.diff[j] * out.diff[j]);
  }
  out.l2_norm = std::sqrt(integral);
  return out;
}

double causal_strength(const MedianDifference& md, double tau) {
  const Index m = md.grid.size();
  if (m == 1) return std::abs(md.diff[0]) > tau ? 1.0 : 0.0;
  double measure = 0.0;
  double total = md.grid[m - 1] - md.grid[0];
  for (Index j = 1; j < m; ++j) {
    const double dt = md.grid[j] - md.grid[j - 1];
    const double a = std::abs(md.diff[j - 1]) > tau ? 1.0 : 0.0;
    const double b = std::abs(md.diff[j]) > tau ? 1.0 : 0.0;
    measure += 0.5 * dt * (a + b);
  }
  return measure / total;
}

}  // namespace depthcause
