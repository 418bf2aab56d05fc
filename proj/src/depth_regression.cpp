#include "depthcause/depth_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace depthcause {

namespace {

struct Observation {
  double t;
  double y;
};

// Wrong-side counts for every split point in one pass over observations
// sorted by t. For split u, the line is a nonfit witness when all points
// with t <= u sit on one residual side and all points with t > u on the
// other; depth is the minimal count over splits and both orientations.
int depth_sorted(double slope, double intercept, const std::vector<Observation>& obs) {
  const int n = static_cast<int>(obs.size());
  // pos[i] = residual >= 0, neg[i] = residual <= 0 (zeros count as both).
  // A line through an observation has a true zero residual there, but the
  // evaluated one lands within a few ulps of zero; snapping keeps the point
  // in both classes, which is what makes lines through data points deepest.
  std::vector<int> pos_prefix(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> neg_prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    const double contribution = slope * obs[static_cast<std::size_t>(i)].t;
    double r = obs[static_cast<std::size_t>(i)].y - (intercept + contribution);
    const double scale = std::abs(obs[static_cast<std::size_t>(i)].y) +
                         std::abs(intercept) + std::abs(contribution);
    if (std::abs(r) <= 8.0 * std::numeric_limits<double>::epsilon() * scale) r = 0.0;
    pos_prefix[static_cast<std::size_t>(i) + 1] =
        pos_prefix[static_cast<std::size_t>(i)] + (r >= 0.0 ? 1 : 0);
    neg_prefix[static_cast<std::size_t>(i) + 1] =
        neg_prefix[static_cast<std::size_t>(i)] + (r <= 0.0 ? 1 : 0);
  }
  int best = n;
  // Splits after position c (c observations with t <= u): c runs over 0, n
  // and every boundary between consecutive distinct t values.
  for (int c = 0; c <= n; ++c) {
    if (c > 0 && c < n &&
        obs[static_cast<std::size_t>(c) - 1].t == obs[static_cast<std::size_t>(c)].t)
      continue;
    const int pos_left = pos_prefix[static_cast<std::size_t>(c)];
    const int neg_left = neg_prefix[static_cast<std::size_t>(c)];
    const int pos_right = pos_prefix[static_cast<std::size_t>(n)] - pos_left;
    const int neg_right = neg_prefix[static_cast<std::size_t>(n)] - neg_left;
    best = std::min(best, std::min(pos_left + neg_right, neg_left + pos_right));
  }
  return best;
}

std::vector<Observation> sorted_observations(const Vector& t, const Vector& y) {
  if (t.size() != y.size()) throw std::invalid_argument("t and y lengths differ");
  if (t.size() < 1) throw std::invalid_argument("empty regression input");
  std::vector<Observation> obs(static_cast<std::size_t>(t.size()));
  for (Index i = 0; i < t.size(); ++i) obs[static_cast<std::size_t>(i)] = {t[i], y[i]};
  std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
    return a.t < b.t;
  });
  return obs;
}

}  // namespace

int regression_depth(double slope, double intercept, const Vector& t, const Vector& y) {
  return depth_sorted(slope, intercept, sorted_observations(t, y));
}

LinearFit deepest_line(const Vector& t, const Vector& y) {
  const auto obs = sorted_observations(t, y);
  const int n = static_cast<int>(obs.size());
  if (n < 2 || obs.front().t == obs.back().t)
    throw DataError("deepest line needs at least two distinct t values");

  bool have = false;
  LinearFit best;
  double best_l1 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dt = obs[static_cast<std::size_t>(j)].t - obs[static_cast<std::size_t>(i)].t;
      if (dt == 0.0) continue;
      const double slope = (obs[static_cast<std::size_t>(j)].y -
                            obs[static_cast<std::size_t>(i)].y) / dt;
      const double intercept = obs[static_cast<std::size_t>(i)].y -
                               slope * obs[static_cast<std::size_t>(i)].t;
      const int depth = depth_sorted(slope, intercept, obs);
      double l1 = 0.0;
      for (const auto& o : obs) l1 += std::abs(o.y - (intercept + slope * o.t));
      const bool better =
          !have || depth > best.rdepth ||
          (depth == best.rdepth &&
           (l1 < best_l1 ||
            (l1 == best_l1 && (slope < best.slope ||
                               (slope == best.slope && intercept < best.intercept)))));
      if (better) {
        best.slope = slope;
        best.intercept = intercept;
        best.rdepth = depth;
        best_l1 = l1;
        have = true;
      }
    }
  }

  Vector residuals(n);
  for (int i = 0; i < n; ++i)
    residuals[i] = obs[static_cast<std::size_t>(i)].y -
                   (best.intercept + best.slope * obs[static_cast<std::size_t>(i)].t);
  best.sigma = sigma_hat(residuals);
  return best;
}

double sigma_hat(const Vector& residuals) {
  if (residuals.size() < 1) throw std::invalid_argument("empty residual vector");
  return 1.4826 * mad(residuals);
}

ReplicatedSeries replicate_series(const LinearFit& fit, double t0, double t1, Index m,
                                  RandomStream& stream) {
  if (m < 1) throw std::invalid_argument("replication length must be positive");
  if (m > 1 && !(t1 > t0)) throw std::invalid_argument("replication needs t1 > t0");
  ReplicatedSeries out;
  out.grid.resize(m);
  out.values.resize(m);
  for (Index j = 0; j < m; ++j) {
    const double t =
        m == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(m - 1);
    out.grid[j] = t;
    out.values[j] = fit.intercept + fit.slope * t + fit.sigma * stream.normal();
  }
  return out;
}

std::vector<LinearFit> fit_units(const FunctionalSample& sample) {
  std::vector<LinearFit> fits;
  fits.reserve(static_cast<std::size_t>(sample.n()));
  for (Index i = 0; i < sample.n(); ++i)
    fits.push_back(deepest_line(sample.grid, sample.curves.row(i).transpose()));
  return fits;
}

FunctionalSample replicate_sample(const FunctionalSample& sample,
                                  const std::vector<LinearFit>& fits, Index m,
                                  RandomStream& stream) {
  if (static_cast<Index>(fits.size()) != sample.n())
    throw std::invalid_argument("one fit per unit required");
  const double t0 = sample.grid[0];
  const double t1 = sample.grid[sample.grid.size() - 1];
  FunctionalSample out;
  out.units = sample.units;
  out.curves.resize(sample.n(), m);
  for (Index i = 0; i < sample.n(); ++i) {
    ReplicatedSeries series = replicate_series(fits[static_cast<std::size_t>(i)], t0, t1, m, stream);
    if (i == 0) out.grid = series.grid;
    out.curves.row(i) = series.values.transpose();
  }
  return out;
}

}  // namespace depthcause
