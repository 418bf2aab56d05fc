#ifndef DEPTHCAUSE_FUNCTIONAL_DEPTH_HPP
#define DEPTHCAUSE_FUNCTIONAL_DEPTH_HPP

#include "depthcause/types.hpp"

#include <utility>

namespace depthcause {

// Pointwise depth of one curve across the grid, values in [0,1].
struct PointwiseDepthCurve {
  Vector grid;
  Vector values;
};

// Distribution of a curve's pointwise depths: cumulative fraction of grid
// points with depth <= level. Masses are nondecreasing and end at 1.
struct DepthCdf {
  Vector levels;  // sorted distinct depth levels
  Vector masses;  // cumulative fractions
};

// Modified band depth with bands of two curves; pairs containing the
// candidate curve count, so every sample curve has MBD >= 2/n.
DepthVector mbd(const FunctionalSample& sample);

// Fraiman-Muniz depth: grid average of 1 - |1/2 - F_t(x(t))| with the
// right-continuous pointwise ECDF.
DepthVector fm_depth(const FunctionalSample& sample);

// Extremal depth: curves ordered by left-tail comparison of their pointwise
// depth distributions; ED(g) = fraction of sample curves g dominates, with
// identical distributions counting as mutual domination.
DepthVector extremal_depth(const FunctionalSample& sample);

DepthVector functional_depth(const FunctionalSample& sample, DepthMethod method);

// ED's pointwise depth of sample curve i:
// D(t) = 1 - |#{below} - #{above}| / n.
PointwiseDepthCurve ed_pointwise_depth(const FunctionalSample& sample, Index i);

DepthCdf ed_depth_cdf(const FunctionalSample& sample, Index i);

// +1 if a is deeper than b (smaller mass at the smallest differing level),
// -1 for the reverse, 0 for identical distributions.
int compare_depth_cdf(const DepthCdf& a, const DepthCdf& b);

// Empirical ED needs many more grid points than curves; below this the
// depth distribution is too coarse to order curves reliably.
bool ed_grid_is_sparse(const FunctionalSample& sample);

// Deepest sample curve under the chosen method; ties go to the smallest
// unit index.
std::pair<UnitId, Vector> functional_median(const FunctionalSample& sample,
                                            DepthMethod method);

// Pointwise difference of two functional medians with sup and L2 norms
// (trapezoidal integral over the grid).
struct MedianDifference {
  Vector grid;
  Vector diff;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
};

MedianDifference median_difference(const FunctionalSample& sample_f,
                                   const FunctionalSample& sample_c,
                                   DepthMethod method);

// Fraction of the time-domain measure where |diff| exceeds tau, trapezoidal
// measure on the grid. A single-point grid degenerates to the indicator at
// that point.
double causal_strength(const MedianDifference& md, double tau);

}  // namespace depthcause

#endif
