#ifndef DEPTHCAUSE_MULTIVARIATE_DEPTH_HPP
#define DEPTHCAUSE_MULTIVARIATE_DEPTH_HPP

#include "depthcause/types.hpp"

#include <cstdint>

namespace depthcause {

enum class DirectionKind {
  Exact1D,     // single direction, closed form
  Exact2D,     // data-driven critical angles plus a circular safety grid
  MonteCarlo,  // k seeded random unit directions (lower bound on O)
};

// Directions over which the projection-depth supremum is evaluated. Rows of
// `directions` are unit vectors; for the exact 2-d mode they hold only the
// circular safety grid, the critical angles are derived per query.
struct DirectionSet {
  DirectionKind kind = DirectionKind::MonteCarlo;
  Matrix directions;

  static DirectionSet exact_1d();
  static DirectionSet exact_2d(int circular_grid = 1024);
  // Sequentially generated, so the first k1 rows of a (k2, seed) set equal
  // the (k1, seed) set whenever k1 <= k2.
  static DirectionSet monte_carlo(int k, int dim, std::uint64_t seed);

  // The direction policy the pipeline uses: exact for dim <= 2, Monte Carlo
  // with `count` directions otherwise.
  static DirectionSet for_dimension(Index dim, int count, std::uint64_t seed);
};

// PD(x) = 1 / (1 + O(x)) with O(x) = sup_u |u.x - med(u.sample)| / mad(u.sample).
// A direction with zero MAD contributes 0 when u.x sits at the projected
// median and infinity otherwise (PD = 0).
double projection_depth(const Vector& x, const MultivariateSample& sample,
                        const DirectionSet& dirs);

DepthVector projection_depths(const MultivariateSample& sample,
                              const DirectionSet& dirs);

// Mid-ranks of the rows' projection depths in the pooled sample, ascending
// in depth: rank 1 = most outlying, rank n = deepest.
Vector depth_ranks(const MultivariateSample& sample, const DirectionSet& dirs);

}  // namespace depthcause

#endif
