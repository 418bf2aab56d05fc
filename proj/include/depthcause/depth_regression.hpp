#ifndef DEPTHCAUSE_DEPTH_REGRESSION_HPP
#define DEPTHCAUSE_DEPTH_REGRESSION_HPP

#include "depthcause/stats_core.hpp"
#include "depthcause/types.hpp"

#include <vector>

namespace depthcause {

struct LinearFit {
  double slope = 0.0;      // value per time unit
  double intercept = 0.0;
  int rdepth = 0;
  double sigma = 0.0;      // residual scale, >= 0
};

// Regression depth of the line y = intercept + slope * t: the smallest
// wrong-side count over all split points u (midpoints between consecutive
// distinct t values plus the two infinite splits). Residuals of exactly
// zero count toward both sign classes.
int regression_depth(double slope, double intercept, const Vector& t,
                     const Vector& y);

// Deepest line among all candidates through two observations with distinct
// t. Ties are broken by smaller L1 residual sum, then lexicographically by
// (slope, intercept). The winner's depth is at least ceil(n/3). Fills
// sigma with sigma_hat of the winning residuals.
LinearFit deepest_line(const Vector& t, const Vector& y);

// Normal-consistent MAD scale: 1.4826 * median(|r_i - median(r)|).
double sigma_hat(const Vector& residuals);

// m equally spaced points on [t0, t1] (endpoints included; m = 1 degenerates
// to {t0}), y_j = intercept + slope * t_j + sigma * eps_j with eps_j i.i.d.
// standard normal from the stream.
struct ReplicatedSeries {
  Vector grid;
  Vector values;
};

ReplicatedSeries replicate_series(const LinearFit& fit, double t0, double t1,
                                  Index m, RandomStream& stream);

// Deepest-line fit of every unit's trajectory against the sample grid.
std::vector<LinearFit> fit_units(const FunctionalSample& sample);

// Replicates each unit's series onto a uniform m-grid spanning the sample
// grid, consuming the stream unit by unit in row order.
FunctionalSample replicate_sample(const FunctionalSample& sample,
                                  const std::vector<LinearFit>& fits, Index m,
                                  RandomStream& stream);

}  // namespace depthcause

#endif
