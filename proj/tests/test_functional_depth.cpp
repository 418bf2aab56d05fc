#include "depthcause/functional_depth.hpp"

#include "depthcause/stats_core.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

#include <cmath>
#include <vector>

using depthcause::DataError;
using depthcause::DepthMethod;
using depthcause::DepthVector;
using depthcause::FunctionalSample;
using depthcause::Index;
using depthcause::Matrix;
using depthcause::RandomStream;
using depthcause::Vector;

namespace {

FunctionalSample constants(std::initializer_list<double> levels, Index m = 3) {
  Matrix curves(static_cast<Index>(levels.size()), m);
  Index i = 0;
  for (double c : levels) curves.row(i++).setConstant(c);
  return synthetic::make_functional(curves, synthetic::uniform_grid(m));
}

// Two constants and the diagonal t: the diagonal touches each constant at
// one endpoint and stays inside their band everywhere.
FunctionalSample crossing_fixture() {
  Matrix curves(3, 5);
  curves.row(0).setConstant(0.0);
  curves.row(1).setConstant(1.0);
  curves.row(2) << 0.0, 0.25, 0.5, 0.75, 1.0;
  return synthetic::make_functional(curves, synthetic::uniform_grid(5));
}

// A curve that dips below and rises above the two constants.
FunctionalSample excursion_fixture() {
  Matrix curves(3, 5);
  curves.row(0).setConstant(0.0);
  curves.row(1).setConstant(1.0);
  curves.row(2) << -0.5, -0.5, 0.5, 1.5, 1.5;
  return synthetic::make_functional(curves, synthetic::uniform_grid(5));
}

FunctionalSample random_sample(RandomStream& rs, Index n, Index m, bool with_ties) {
  Matrix curves(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j)
      curves(i, j) = with_ties ? 0.5 * static_cast<double>(rs.uniform_index(5))
                               : rs.normal();
  return synthetic::make_functional(curves, synthetic::uniform_grid(m));
}

}  // namespace

TEST_CASE("mbd on three constant curves") {
  const DepthVector d = depthcause::mbd(constants({0.0, 1.0, 2.0}));
  CHECK(d.values[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d.values[1] == doctest::Approx(1.0));
  CHECK(d.values[2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("mbd on the crossing fixtures") {
  // Diagonal: ties with a constant at each end lift the constants' count in
  // exactly one column each; the diagonal sits inside every band.
  const DepthVector d = depthcause::mbd(crossing_fixture());
  CHECK(d.values[0] == doctest::Approx(11.0 / 15.0));
  CHECK(d.values[1] == doctest::Approx(11.0 / 15.0));
  CHECK(d.values[2] == doctest::Approx(1.0));

  // Excursion: the wanderer leaves the band on four of five columns.
  const DepthVector e = depthcause::mbd(excursion_fixture());
  CHECK(e.values[0] == doctest::Approx(12.0 / 15.0));
  CHECK(e.values[1] == doctest::Approx(12.0 / 15.0));
  CHECK(e.values[2] == doctest::Approx(11.0 / 15.0));
}

TEST_CASE("mbd bounds and small-n behavior") {
  const DepthVector two = depthcause::mbd(constants({3.0, -1.0}));
  CHECK(two.values[0] == 1.0);
  CHECK(two.values[1] == 1.0);

  FunctionalSample one = constants({5.0});
  CHECK_THROWS_AS(depthcause::mbd(one), DataError);

  RandomStream rs(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rs.uniform_index(6));
    const FunctionalSample s = random_sample(rs, n, 4, trial % 2 == 0);
    const DepthVector d = depthcause::mbd(s);
    for (Index i = 0; i < n; ++i) {
      CHECK(d.values[i] >= 2.0 / static_cast<double>(n) - 1e-15);
      CHECK(d.values[i] <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("fm depth on constant fixtures") {
  const DepthVector d = depthcause::fm_depth(constants({0.0, 1.0, 2.0}));
  CHECK(d.values[0] == doctest::Approx(5.0 / 6.0));
  CHECK(d.values[1] == doctest::Approx(5.0 / 6.0));
  CHECK(d.values[2] == doctest::Approx(1.0 / 2.0));

  const DepthVector single = depthcause::fm_depth(constants({4.0}));
  CHECK(single.values[0] == doctest::Approx(0.5));
}

TEST_CASE("fm depth on the crossing fixtures") {
  // With n = 3 the right-continuous ECDF gives pointwise depth 5/6 to the
  // bottom and middle values and 1/2 to the top.
  const DepthVector d = depthcause::fm_depth(crossing_fixture());
  CHECK(d.values[0] == doctest::Approx(5.0 / 6.0));
  CHECK(d.values[1] == doctest::Approx(1.0 / 2.0));
  CHECK(d.values[2] == doctest::Approx(23.0 / 30.0));

  const DepthVector e = depthcause::fm_depth(excursion_fixture());
  CHECK(e.values[0] == doctest::Approx(5.0 / 6.0));
  CHECK(e.values[1] == doctest::Approx(19.0 / 30.0));
  CHECK(e.values[2] == doctest::Approx(21.0 / 30.0));
}

TEST_CASE("extremal depth on constant fixtures") {
  const DepthVector d = depthcause::extremal_depth(constants({0.0, 1.0, 2.0}));
  CHECK(d.values[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d.values[1] == doctest::Approx(1.0));
  CHECK(d.values[2] == doctest::Approx(2.0 / 3.0));

  const DepthVector two = depthcause::extremal_depth(constants({0.0, 1.0}));
  CHECK(two.values[0] == 1.0);
  CHECK(two.values[1] == 1.0);

  const DepthVector single = depthcause::extremal_depth(constants({9.0}));
  CHECK(single.values[0] == 1.0);
}

TEST_CASE("extremal depth on the crossing fixtures") {
  // Diagonal: both constants share the same pointwise depth distribution
  // (mass 0.8 at 1/3), the diagonal is strictly deeper.
  const DepthVector d = depthcause::extremal_depth(crossing_fixture());
  CHECK(d.values[0] == doctest::Approx(2.0 / 3.0));
  CHECK(d.values[1] == doctest::Approx(2.0 / 3.0));
  CHECK(d.values[2] == doctest::Approx(1.0));

  // Excursion: the wanderer's left tail is heavier (mass 0.8 at 1/3 versus
  // 0.6), so both constants dominate it.
  const DepthVector e = depthcause::extremal_depth(excursion_fixture());
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  CHECK(e.values[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ed pointwise depth of the middle constant curve") {
  const FunctionalSample s = constants({0.0, 1.0, 2.0});
  const auto p0 = depthcause::ed_pointwise_depth(s, 0);
  const auto p1 = depthcause::ed_pointwise_depth(s, 1);
  for (Index j = 0; j < s.m(); ++j) {
    CHECK(p0.values[j] == doctest::Approx(1.0 / 3.0));
    CHECK(p1.values[j] == doctest::Approx(1.0));
  }
}

TEST_CASE("ed depth cdf is a distribution and matches the oracle") {
  RandomStream rs(22);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 1 + static_cast<Index>(rs.uniform_index(5));
    const Index m = 1 + static_cast<Index>(rs.uniform_index(6));
    const FunctionalSample s = random_sample(rs, n, m, true);
    for (Index i = 0; i < n; ++i) {
      const auto cdf = depthcause::ed_depth_cdf(s, i);
      REQUIRE(cdf.levels.size() == cdf.masses.size());
      for (Index k = 1; k < cdf.levels.size(); ++k) {
        CHECK(cdf.levels[k] > cdf.levels[k - 1]);
        CHECK(cdf.masses[k] >= cdf.masses[k - 1]);
      }
      CHECK(cdf.masses[cdf.masses.size() - 1] == doctest::Approx(1.0));

      const auto ref = oracles::ed_cdf(s, i);
      Index k = 0;
      for (const auto& [level, mass] : ref) {
        REQUIRE(k < cdf.levels.size());
        CHECK(cdf.levels[k] == doctest::Approx(level).epsilon(1e-12));
        CHECK(cdf.masses[k] == doctest::Approx(mass).epsilon(1e-12));
        ++k;
      }
      CHECK(k == cdf.levels.size());
    }
  }
}

TEST_CASE("compare_depth_cdf agrees with the left-tail oracle") {
  RandomStream rs(23);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + static_cast<Index>(rs.uniform_index(4));
    const Index m = 1 + static_cast<Index>(rs.uniform_index(6));
    const FunctionalSample s = random_sample(rs, n, m, true);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const int got = depthcause::compare_depth_cdf(depthcause::ed_depth_cdf(s, i),
                                                      depthcause::ed_depth_cdf(s, j));
        const int want = oracles::ed_compare(oracles::ed_cdf(s, i), oracles::ed_cdf(s, j));
        CHECK(got == want);
        const int rev = depthcause::compare_depth_cdf(depthcause::ed_depth_cdf(s, j),
                                                      depthcause::ed_depth_cdf(s, i));
        CHECK(rev == -got);
      }
  }
}

TEST_CASE("extremal depth values are consistent with pairwise comparisons") {
  RandomStream rs(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rs.uniform_index(5));
    const FunctionalSample s = random_sample(rs, n, 6, true);
    const DepthVector d = depthcause::extremal_depth(s);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const int c = depthcause::compare_depth_cdf(depthcause::ed_depth_cdf(s, i),
                                                    depthcause::ed_depth_cdf(s, j));
        if (c > 0) CHECK(d.values[i] > d.values[j]);
        if (c == 0) CHECK(d.values[i] == doctest::Approx(d.values[j]));
      }
  }
}

TEST_CASE("all three depths match independent oracles on random samples") {
  RandomStream rs(25);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rs.uniform_index(4));
    const Index m = 1 + static_cast<Index>(rs.uniform_index(6));
    const FunctionalSample s = random_sample(rs, n, m, trial % 2 == 0);
    const DepthVector dm = depthcause::mbd(s);
    const DepthVector df = depthcause::fm_depth(s);
    const DepthVector de = depthcause::extremal_depth(s);
    for (Index i = 0; i < n; ++i) {
      CHECK(dm.values[i] == doctest::Approx(oracles::mbd(s, i)).epsilon(1e-12));
      CHECK(df.values[i] == doctest::Approx(oracles::fm(s, i)).epsilon(1e-12));
      CHECK(de.values[i] == doctest::Approx(oracles::ed(s, i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("depths are invariant under increasing affine maps of the values") {
  RandomStream rs(26);
  for (int trial = 0; trial < 20; ++trial) {
    const FunctionalSample s = random_sample(rs, 5, 4, trial % 2 == 0);
    FunctionalSample t = s;
    t.curves = (2.5 * s.curves.array() - 7.0).matrix();
    for (auto method : {DepthMethod::MBD, DepthMethod::FM, DepthMethod::ED}) {
      const DepthVector a = depthcause::functional_depth(s, method);
      const DepthVector b = depthcause::functional_depth(t, method);
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("functional_depth rejects the projection method") {
  const FunctionalSample s = constants({0.0, 1.0});
  CHECK_THROWS_AS(depthcause::functional_depth(s, DepthMethod::PROJECTION),
                  std::invalid_argument);
}

TEST_CASE("ed_grid_is_sparse thresholds at m < 2n") {
  Matrix c1(3, 5);
  c1.setZero();
  CHECK(depthcause::ed_grid_is_sparse(
      synthetic::make_functional(c1, synthetic::uniform_grid(5))));
  Matrix c2(3, 6);
  c2.setZero();
  CHECK_FALSE(depthcause::ed_grid_is_sparse(
      synthetic::make_functional(c2, synthetic::uniform_grid(6))));
}

TEST_CASE("functional_median picks the deepest curve, ties to lowest index") {
  const FunctionalSample s = constants({0.0, 1.0, 2.0});
  for (auto method : {DepthMethod::MBD, DepthMethod::ED}) {
    const auto [unit, curve] = depthcause::functional_median(s, method);
    CHECK(unit.index == 1);
    CHECK(curve == s.curves.row(1).transpose());
  }

  // FM ties the bottom and middle constants at 5/6; the tie goes low.
  const auto [fm_unit, fm_curve] = depthcause::functional_median(s, DepthMethod::FM);
  CHECK(fm_unit.index == 0);
  CHECK(fm_curve == s.curves.row(0).transpose());

  const FunctionalSample dup = constants({0.0, 1.0, 1.0, 2.0});
  const auto [unit, curve] = depthcause::functional_median(dup, DepthMethod::MBD);
  CHECK(unit.index == 1);

  const FunctionalSample one = constants({5.0});
  const auto [u1, c1] = depthcause::functional_median(one, DepthMethod::MBD);
  CHECK(u1.index == 0);
  CHECK(c1[0] == 5.0);
}

TEST_CASE("median_difference norms on a hand fixture") {
  // Both groups are triples of constants, so the medians are the middle
  // curves t |-> 1 and t |-> 2t respectively (here encoded directly).
  const Vector grid = synthetic::uniform_grid(5);  // 0, .25, .5, .75, 1
  Matrix f(3, 5), c(3, 5);
  for (Index j = 0; j < 5; ++j) {
    const double t = grid[j];
    f(0, j) = t - 1.0;
    f(1, j) = t;
    f(2, j) = t + 1.0;
    c(0, j) = 1.0 - t - 1.0;
    c(1, j) = 1.0 - t;
    c(2, j) = 1.0 - t + 1.0;
  }
  const auto md = depthcause::median_difference(synthetic::make_functional(f, grid),
                                                synthetic::make_functional(c, grid),
                                                DepthMethod::MBD);
  // diff(t) = t - (1 - t) = 2t - 1.
  CHECK(md.sup_norm == doctest::Approx(1.0));
  CHECK(md.l2_norm == doctest::Approx(std::sqrt(0.375)));
  CHECK(md.diff[0] == doctest::Approx(-1.0));
  CHECK(md.diff[2] == doctest::Approx(0.0));
  CHECK(md.diff[4] == doctest::Approx(1.0));

  // A constant shift between identical shapes.
  Matrix c2 = f;
  c2.array() -= 0.75;
  const auto md2 = depthcause::median_difference(synthetic::make_functional(f, grid),
                                                 synthetic::make_functional(c2, grid),
                                                 DepthMethod::ED);
  CHECK(md2.sup_norm == doctest::Approx(0.75));
  CHECK(md2.l2_norm == doctest::Approx(0.75));
}

TEST_CASE("median_difference requires matching grids and singleton groups work") {
  const FunctionalSample a = constants({0.0, 1.0, 2.0}, 3);
  const FunctionalSample b = constants({0.5}, 3);
  const auto md = depthcause::median_difference(a, b, DepthMethod::MBD);
  CHECK(md.sup_norm == doctest::Approx(0.5));

  const FunctionalSample wide = constants({0.5}, 4);
  CHECK_THROWS_AS(depthcause::median_difference(a, wide, DepthMethod::MBD), DataError);
}

TEST_CASE("causal_strength measures the exceedance fraction") {
  depthcause::MedianDifference md;
  md.grid = synthetic::uniform_grid(1001);
  md.diff = md.grid;  // |diff(t)| = t on [0,1]
  md.sup_norm = 1.0;
  CHECK(depthcause::causal_strength(md, 0.5) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(depthcause::causal_strength(md, 2.0) == 0.0);

  depthcause::MedianDifference flat;
  flat.grid = synthetic::uniform_grid(5);
  flat.diff = Vector::Constant(5, -0.3);
  CHECK(depthcause::causal_strength(flat, 0.1) == doctest::Approx(1.0));
  CHECK(depthcause::causal_strength(flat, 0.3) == 0.0);

  depthcause::MedianDifference point;
  point.grid = synthetic::uniform_grid(1, 2.0, 2.0);
  point.diff = Vector::Constant(1, 0.4);
  CHECK(depthcause::causal_strength(point, 0.1) == 1.0);
  CHECK(depthcause::causal_strength(point, 0.5) == 0.0);
}
