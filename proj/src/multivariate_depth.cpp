#include "depthcause/multivariate_depth.hpp"

#include "depthcause/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace depthcause {

namespace {

// Substream reserved for direction generation under a given master seed.
constexpr std::uint64_t kDirectionStreamTag = 1ULL << 56;

// Directions with per-direction projected median and MAD precomputed, so a
// query costs one dot product per direction.
struct PreparedDirections {
  Matrix dirs;
  Vector med;
  Vector mad;
};

void push_perp(std::vector<double>& xs, std::vector<double>& ys, double vx, double vy,
               double scale) {
  const double norm = std::hypot(vx, vy);
  if (norm <= 1e-14 * scale) return;
  xs.push_back(-vy / norm);
  ys.push_back(vx / norm);
}

// Candidate directions where the projected order statistics realizing the
// median or the MAD can change: perpendiculars to pair differences, to
// deviations from a candidate median center, and to opposite-sign deviation
// ties. Centers run over sample points and pair midpoints (odd/even n).
// Between consecutive candidates the outlyingness ratio is monotone in the
// angle, so the supremum is attained on this set; the circular grid rows
// passed in act as a safety net.
Matrix exact2d_directions(const Matrix& points, const Matrix& grid) {
  const Index n = points.rows();
  double scale = 1.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, points.row(i).norm());

  std::vector<double> cx, cy;
  cx.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  cy.reserve(cx.capacity());
  for (Index a = 0; a < n; ++a) {
    cx.push_back(points(a, 0));
    cy.push_back(points(a, 1));
    for (Index b = a + 1; b < n; ++b) {
      cx.push_back(0.5 * (points(a, 0) + points(b, 0)));
      cy.push_back(0.5 * (points(a, 1) + points(b, 1)));
    }
  }

  std::vector<double> xs, ys;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      push_perp(xs, ys, points(i, 0) - points(j, 0), points(i, 1) - points(j, 1), scale);
  for (std::size_t c = 0; c < cx.size(); ++c) {
    for (Index i = 0; i < n; ++i) {
      push_perp(xs, ys, points(i, 0) - cx[c], points(i, 1) - cy[c], scale);
      for (Index j = i + 1; j < n; ++j)
        push_perp(xs, ys, points(i, 0) + points(j, 0) - 2.0 * cx[c],
                  points(i, 1) + points(j, 1) - 2.0 * cy[c], scale);
    }
  }

  Matrix dirs(static_cast<Index>(xs.size()) + grid.rows(), 2);
  for (std::size_t d = 0; d < xs.size(); ++d) {
    dirs(static_cast<Index>(d), 0) = xs[d];
    dirs(static_cast<Index>(d), 1) = ys[d];
  }
  dirs.bottomRows(grid.rows()) = grid;
  return dirs;
}

PreparedDirections prepare_directions(const MultivariateSample& sample,
                                      const DirectionSet& dirs) {
  if (sample.n() < 1) throw DataError("empty multivariate sample");
  const Index l = sample.l();

  PreparedDirections prep;
  switch (dirs.kind) {
    case DirectionKind::Exact1D:
      if (l != 1) throw std::invalid_argument("exact 1-d directions require 1 column");
      prep.dirs = Matrix::Ones(1, 1);
      break;
    case DirectionKind::Exact2D:
      if (l != 2) throw std::invalid_argument("exact 2-d directions require 2 columns");
      prep.dirs = exact2d_directions(sample.points, dirs.directions);
      break;
    case DirectionKind::MonteCarlo:
      if (dirs.directions.cols() != l)
        throw std::invalid_argument("direction dimension does not match the sample");
      prep.dirs = dirs.directions;
      break;
  }

  const Index k = prep.dirs.rows();
  const Index n = sample.n();
  prep.med.resize(k);
  prep.mad.resize(k);
  Vector proj(n);
  std::vector<double> buf(static_cast<std::size_t>(n));
  for (Index d = 0; d < k; ++d) {
    proj.noalias() = sample.points * prep.dirs.row(d).transpose();
    for (Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = proj[i];
    const double med = median_inplace(buf);
    for (Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = std::abs(proj[i] - med);
    prep.med[d] = med;
    prep.mad[d] = median_inplace(buf);
  }
  return prep;
}

double outlyingness(const Vector& x, const PreparedDirections& prep) {
  double worst = 0.0;
  for (Index d = 0; d < prep.dirs.rows(); ++d) {
    const double dev = std::abs(prep.dirs.row(d).dot(x) - prep.med[d]);
    if (prep.mad[d] > 0.0) {
      worst = std::max(worst, dev / prep.mad[d]);
    } else if (dev != 0.0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

double depth_from_outlyingness(double o) {
  return std::isinf(o) ? 0.0 : 1.0 / (1.0 + o);
}

}  // namespace

DirectionSet DirectionSet::exact_1d() {
  DirectionSet set;
  set.kind = DirectionKind::Exact1D;
  set.directions = Matrix::Ones(1, 1);
  return set;
}

DirectionSet DirectionSet::exact_2d(int circular_grid) {
  if (circular_grid < 1) throw std::invalid_argument("circular grid needs at least one angle");
  DirectionSet set;
  set.kind = DirectionKind::Exact2D;
  set.directions.resize(circular_grid, 2);
  for (int g = 0; g < circular_grid; ++g) {
    const double theta = std::numbers::pi * g / circular_grid;
    set.directions(g, 0) = std::cos(theta);
    set.directions(g, 1) = std::sin(theta);
  }
  return set;
}

DirectionSet DirectionSet::monte_carlo(int k, int dim, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("need at least one direction");
  if (dim < 1) throw std::invalid_argument("direction dimension must be positive");
  DirectionSet set;
  set.kind = DirectionKind::MonteCarlo;
  set.directions.resize(k, dim);
  RandomStream stream(seed, kDirectionStreamTag);
  for (int r = 0; r < k; ++r) {
    double norm = 0.0;
    do {
      for (int c = 0; c < dim; ++c) set.directions(r, c) = stream.normal();
      norm = set.directions.row(r).norm();
    } while (norm <= 1e-12);
    set.directions.row(r) /= norm;
  }
  return set;
}

DirectionSet DirectionSet::for_dimension(Index dim, int count, std::uint64_t seed) {
  if (dim == 1) return exact_1d();
  if (dim == 2) return exact_2d();
  return monte_carlo(count, static_cast<int>(dim), seed);
}

double projection_depth(const Vector& x, const MultivariateSample& sample,
                        const DirectionSet& dirs) {
  if (x.size() != sample.l())
    throw std::invalid_argument("query dimension does not match the sample");
  const PreparedDirections prep = prepare_directions(sample, dirs);
  return depth_from_outlyingness(outlyingness(x, prep));
}

DepthVector projection_depths(const MultivariateSample& sample, const DirectionSet& dirs) {
  const PreparedDirections prep = prepare_directions(sample, dirs);
  DepthVector out;
  out.values.resize(sample.n());
  for (Index i = 0; i < sample.n(); ++i) {
    const Vector x = sample.points.row(i).transpose();
    out.values[i] = depth_from_outlyingness(outlyingness(x, prep));
  }
  out.method = DepthMethod::PROJECTION;
  out.units = sample.units;
  return out;
}

Vector depth_ranks(const MultivariateSample& sample, const DirectionSet& dirs) {
  return mid_ranks(projection_depths(sample, dirs).values);
}

}  // namespace depthcause
