#ifndef DEPTHCAUSE_PIPELINE_HPP
#define DEPTHCAUSE_PIPELINE_HPP

#include "depthcause/depth_regression.hpp"
#include "depthcause/functional_depth.hpp"
#include "depthcause/multivariate_depth.hpp"
#include "depthcause/rank_tests.hpp"
#include "depthcause/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace depthcause {

enum class SplitMode { Threshold, Quantile };
enum class ReplicationMode { None, Linear };

// Substream ids reserved under one master seed; direction generation uses
// 1 << 56 (multivariate_depth). Inner repetition (i, j) draws from
// kInnerStreamTag | i << 28 | j.
inline constexpr std::uint64_t kInnerStreamTag = 2ULL << 56;
inline constexpr std::uint64_t kBaselineStreamTag = 3ULL << 56;
inline constexpr std::uint64_t kPermutationStreamTag = 4ULL << 56;

struct PipelineConfig {
  DepthMethod depth_method = DepthMethod::MBD;
  SplitMode split_mode = SplitMode::Threshold;
  double alpha = 0.5;              // threshold separating F from C
  double quantile = 0.25;          // |C| = floor(quantile * n) in quantile mode
  ReplicationMode replication = ReplicationMode::Linear;
  Index replicate_m = 500;
  int inner_reps = 1000;
  int outer_reps = 100;
  int baseline_reps = 1000;
  std::uint64_t seed = 42;
  bool outlyingness_variant = false;
  double outlyingness_fraction = 0.8;  // one-sided grid fraction for the variant
  int direction_count = 10000;         // Monte Carlo directions when l > 2
  bool sigma_zero = false;             // replicate without noise
  double strength_tau = 0.0;

  void validate() const;
};

// Plain `key = value` config file with '#' comments; unknown keys are
// rejected. Missing keys keep the values already in `defaults`.
PipelineConfig parse_config_file(const std::string& path,
                                 const PipelineConfig& defaults = PipelineConfig{});
std::string config_echo(const PipelineConfig& cfg);

// F = central (factual) units, C = peripheral (counterfactual) units.
// Disjoint, covering, both nonempty.
struct GroupSplit {
  std::vector<Index> F;
  std::vector<Index> C;
};

// Threshold mode: F = {depth >= alpha}. Quantile mode: C = lowest
// floor(q*n) depths, ties by unit index. Throws DegenerateAnalysisError
// when a group comes out empty.
GroupSplit split_groups(const DepthVector& depths, const PipelineConfig& cfg);

// Outlyingness-oriented variant: F collects the curves that are not
// depth-maximal and sit strictly above (or strictly below) the functional
// median on more than `outlyingness_fraction` of the grid; C is the rest.
GroupSplit outlyingness_split(const DepthVector& depths,
                              const FunctionalSample& functional,
                              const PipelineConfig& cfg);

// One repetition: optional linear replication of every unit's series, depth
// on the (replicated) curves, group split, Wilcoxon rank sum of the
// outcomes' depth ranks over C.
WilcoxonResult run_once(const FunctionalSample& functional,
                        const MultivariateSample& outcomes,
                        const PipelineConfig& cfg, RandomStream& stream);

// Mean and sd of the Wilcoxon statistic over `reps` uniformly random
// size-n_c groups.
std::pair<double, double> run_baseline(const MultivariateSample& outcomes,
                                       int n_c, int reps, RandomStream& stream,
                                       int direction_count = 10000);
std::pair<double, double> run_baseline_ranks(const Vector& ranks, int n_c,
                                             int reps, RandomStream& stream);

struct CausalReport {
  DepthMethod method = DepthMethod::MBD;
  Vector outer_means;          // per-outer-repetition mean W
  double grand_mean_w = 0.0;
  double sd_of_means = 0.0;
  double baseline_mean_w = 0.0;
  double baseline_sd = 0.0;
  double null_mean = 0.0;
  GroupSplit split;            // on the original, unreplicated data
  std::vector<DepthVector> depth_table;  // MBD, FM, ED on the original data
  MedianDifference median_diff;
  double strength = 0.0;
  double p_value = 1.0;
};

// Full procedure: outer_reps independent averages of inner_reps Wilcoxon
// statistics (each inner repetition re-replicates and re-splits; outcome
// ranks stay fixed), random-split baseline, and the median-difference
// summary on the original data. Outer repetitions own disjoint substreams
// and are aggregated by index, so any thread count gives identical output.
CausalReport run_pipeline(const FunctionalSample& functional,
                          const MultivariateSample& outcomes,
                          const PipelineConfig& cfg, int threads = 1);

}  // namespace depthcause

#endif
