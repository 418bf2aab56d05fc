#include "depthcause/pipeline.hpp"

#include "depthcause/data_model.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace depthcause {

namespace {

std::uint64_t inner_stream_id(int outer, int inner) {
  return kInnerStreamTag | (static_cast<std::uint64_t>(outer) << 28) |
         static_cast<std::uint64_t>(inner);
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_config_double(const std::string& value, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config: non-numeric value for " + key + ": '" + value + "'");
  return v;
}

long long parse_config_int(const std::string& value, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config: non-integer value for " + key + ": '" + value + "'");
  return v;
}

std::uint64_t parse_config_u64(const std::string& value, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config: non-integer value for " + key + ": '" + value + "'");
  return v;
}

bool parse_config_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: expected true/false for " + key + ", got '" + value + "'");
}

DepthMethod parse_method(const std::string& value) {
  if (value == "mbd") return DepthMethod::MBD;
  if (value == "fm") return DepthMethod::FM;
  if (value == "ed") return DepthMethod::ED;
  throw std::invalid_argument("config: unknown depth_method '" + value + "'");
}

double sample_sd(const Vector& x) {
  const Index n = x.size();
  if (n < 2) return 0.0;
  const double mean = x.mean();
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) ss += (x[i] - mean) * (x[i] - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("config: alpha must be in (0,1)");
  if (!(quantile > 0.0 && quantile < 1.0))
    throw std::invalid_argument("config: quantile must be in (0,1)");
  if (replicate_m < 1) throw std::invalid_argument("config: replicate_m must be >= 1");
  if (inner_reps < 1) throw std::invalid_argument("config: inner_reps must be >= 1");
  if (outer_reps < 1) throw std::invalid_argument("config: outer_reps must be >= 1");
  if (baseline_reps < 1) throw std::invalid_argument("config: baseline_reps must be >= 1");
  if (direction_count < 1) throw std::invalid_argument("config: direction_count must be >= 1");
  if (!(outlyingness_fraction >= 0.0 && outlyingness_fraction < 1.0))
    throw std::invalid_argument("config: outlyingness_fraction must be in [0,1)");
  if (strength_tau < 0.0) throw std::invalid_argument("config: strength_tau must be >= 0");
  if (depth_method == DepthMethod::PROJECTION)
    throw std::invalid_argument("config: depth_method must be one of mbd, fm, ed");
}

PipelineConfig parse_config_file(const std::string& path, const PipelineConfig& defaults) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  PipelineConfig cfg = defaults;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    if (key == "depth_method") cfg.depth_method = parse_method(value);
    else if (key == "split_mode") {
      if (value == "threshold") cfg.split_mode = SplitMode::Threshold;
      else if (value == "quantile") cfg.split_mode = SplitMode::Quantile;
      else throw std::invalid_argument("config: unknown split_mode '" + value + "'");
    } else if (key == "alpha") cfg.alpha = parse_config_double(value, key);
    else if (key == "quantile") cfg.quantile = parse_config_double(value, key);
    else if (key == "replication") {
      if (value == "none") cfg.replication = ReplicationMode::None;
      else if (value == "linear") cfg.replication = ReplicationMode::Linear;
      else throw std::invalid_argument("config: unknown replication '" + value + "'");
    } else if (key == "replicate_m") cfg.replicate_m = static_cast<Index>(parse_config_int(value, key));
    else if (key == "inner_reps") cfg.inner_reps = static_cast<int>(parse_config_int(value, key));
    else if (key == "outer_reps") cfg.outer_reps = static_cast<int>(parse_config_int(value, key));
    else if (key == "baseline_reps") cfg.baseline_reps = static_cast<int>(parse_config_int(value, key));
    else if (key == "seed") cfg.seed = parse_config_u64(value, key);
    else if (key == "outlyingness_variant") cfg.outlyingness_variant = parse_config_bool(value, key);
    else if (key == "outlyingness_fraction") cfg.outlyingness_fraction = parse_config_double(value, key);
    else if (key == "direction_count") cfg.direction_count = static_cast<int>(parse_config_int(value, key));
    else if (key == "sigma_zero") cfg.sigma_zero = parse_config_bool(value, key);
    else if (key == "strength_tau") cfg.strength_tau = parse_config_double(value, key);
    else throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string config_echo(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "depth_method = " << to_string(cfg.depth_method) << '\n'
      << "split_mode = " << (cfg.split_mode == SplitMode::Threshold ? "threshold" : "quantile") << '\n'
      << "alpha = " << format_double(cfg.alpha) << '\n'
      << "quantile = " << format_double(cfg.quantile) << '\n'
      << "replication = " << (cfg.replication == ReplicationMode::Linear ? "linear" : "none") << '\n'
      << "replicate_m = " << cfg.replicate_m << '\n'
      << "inner_reps = " << cfg.inner_reps << '\n'
      << "outer_reps = " << cfg.outer_reps << '\n'
      << "baseline_reps = " << cfg.baseline_reps << '\n'
      << "seed = " << cfg.seed << '\n'
      << "outlyingness_variant = " << (cfg.outlyingness_variant ? "true" : "false") << '\n'
      << "outlyingness_fraction = " << format_double(cfg.outlyingness_fraction) << '\n'
      << "direction_count = " << cfg.direction_count << '\n'
      << "sigma_zero = " << (cfg.sigma_zero ? "true" : "false") << '\n'
      << "strength_tau = " << format_double(cfg.strength_tau) << '\n';
  return out.str();
}

GroupSplit split_groups(const DepthVector& depths, const PipelineConfig& cfg) {
  const Index n = depths.n();
  if (n < 2) throw DegenerateAnalysisError("need at least two units to split");
  GroupSplit split;
  if (cfg.split_mode == SplitMode::Threshold) {
    for (Index i = 0; i < n; ++i) {
      if (depths.values[i] >= cfg.alpha) split.F.push_back(i);
      else split.C.push_back(i);
    }
  } else {
    const Index k = static_cast<Index>(std::floor(cfg.quantile * static_cast<double>(n)));
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return depths.values[a] < depths.values[b];
    });
    std::vector<bool> low(static_cast<std::size_t>(n), false);
    for (Index r = 0; r < k && r < n; ++r) low[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = true;
    for (Index i = 0; i < n; ++i) {
      if (low[static_cast<std::size_t>(i)]) split.C.push_back(i);
      else split.F.push_back(i);
    }
  }
  if (split.C.empty()) throw DegenerateAnalysisError("empty group C: no unit falls below the split");
  if (split.F.empty()) throw DegenerateAnalysisError("empty group F: no unit reaches the split");
  return split;
}

GroupSplit outlyingness_split(const DepthVector& depths, const FunctionalSample& functional,
                              const PipelineConfig& cfg) {
  const Index n = functional.n();
  if (n < 2) throw DegenerateAnalysisError("need at least two units to split");
  if (depths.n() != n) throw std::invalid_argument("depth vector does not match the sample");

  Index deepest = 0;
  for (Index i = 1; i < n; ++i)
    if (depths.values[i] > depths.values[deepest]) deepest = i;
  const double max_depth = depths.values[deepest];
  const Vector median_curve = functional.curves.row(deepest).transpose();

  const Index m = functional.m();
  const double needed = cfg.outlyingness_fraction * static_cast<double>(m);
  GroupSplit split;
  for (Index i = 0; i < n; ++i) {
    bool qualifies = false;
    if (depths.values[i] < max_depth) {
      Index above = 0;
      Index below = 0;
      for (Index j = 0; j < m; ++j) {
        const double d = functional.curves(i, j) - median_curve[j];
        if (d > 0.0) ++above;
        else if (d < 0.0) ++below;
      }
      qualifies = static_cast<double>(above) > needed || static_cast<double>(below) > needed;
    }
    if (qualifies) split.F.push_back(i);
    else split.C.push_back(i);
  }
  if (split.F.empty())
    throw DegenerateAnalysisError("empty group F: no unit is one-sidedly outlying");
  if (split.C.empty()) throw DegenerateAnalysisError("empty group C");
  return split;
}

WilcoxonResult run_once(const FunctionalSample& functional, const MultivariateSample& outcomes,
                        const PipelineConfig& cfg, RandomStream& stream) {
  cfg.validate();
  FunctionalSample curves;
  const FunctionalSample* active = &functional;
  if (cfg.replication == ReplicationMode::Linear) {
    std::vector<LinearFit> fits = fit_units(functional);
    if (cfg.sigma_zero)
      for (auto& f : fits) f.sigma = 0.0;
    curves = replicate_sample(functional, fits, cfg.replicate_m, stream);
    active = &curves;
  }
  const DepthVector depths = functional_depth(*active, cfg.depth_method);
  const GroupSplit split = cfg.outlyingness_variant
                               ? outlyingness_split(depths, *active, cfg)
                               : split_groups(depths, cfg);
  const DirectionSet dirs =
      DirectionSet::for_dimension(outcomes.l(), cfg.direction_count, cfg.seed);
  const Vector ranks = depth_ranks(outcomes, dirs);
  return wilcoxon_sum(ranks, split.C);
}

std::pair<double, double> run_baseline_ranks(const Vector& ranks, int n_c, int reps,
                                             RandomStream& stream) {
  const Index n = ranks.size();
  if (n_c < 1 || static_cast<Index>(n_c) >= n)
    throw std::invalid_argument("baseline group size must satisfy 1 <= n_c < N");
  if (reps < 1) throw std::invalid_argument("need at least one baseline repetition");
  Vector w(reps);
  for (int r = 0; r < reps; ++r) {
    const auto subset = sample_index_subset(n, n_c, stream);
    double sum = 0.0;
    for (Index i : subset) sum += ranks[i];
    w[r] = sum;
  }
  return {w.mean(), sample_sd(w)};
}

std::pair<double, double> run_baseline(const MultivariateSample& outcomes, int n_c, int reps,
                                       RandomStream& stream, int direction_count) {
  const DirectionSet dirs =
      DirectionSet::for_dimension(outcomes.l(), direction_count, stream.seed());
  const Vector ranks = depth_ranks(outcomes, dirs);
  return run_baseline_ranks(ranks, n_c, reps, stream);
}

CausalReport run_pipeline(const FunctionalSample& functional, const MultivariateSample& outcomes,
                          const PipelineConfig& cfg, int threads) {
  cfg.validate();
  functional.validate();
  outcomes.validate();
  if (functional.n() != outcomes.n())
    throw DataError("treatment and outcome data disagree on the unit count");
  for (Index i = 0; i < functional.n(); ++i)
    if (functional.units[static_cast<std::size_t>(i)].name !=
        outcomes.units[static_cast<std::size_t>(i)].name)
      throw DataError("treatment and outcome rows are not aligned by unit");

  const Index n = functional.n();
  const DirectionSet dirs =
      DirectionSet::for_dimension(outcomes.l(), cfg.direction_count, cfg.seed);
  const Vector ranks = depth_ranks(outcomes, dirs);

  std::vector<LinearFit> fits;
  if (cfg.replication == ReplicationMode::Linear) {
    fits = fit_units(functional);
    if (cfg.sigma_zero)
      for (auto& f : fits) f.sigma = 0.0;
  }

  CausalReport report;
  report.method = cfg.depth_method;

  // Final split on the original, unreplicated data; all one-shot summaries
  // (baseline size, median difference, permutation p) hang off it.
  const DepthVector original_depths = functional_depth(functional, cfg.depth_method);
  report.split = cfg.outlyingness_variant
                     ? outlyingness_split(original_depths, functional, cfg)
                     : split_groups(original_depths, cfg);

  auto one_rep = [&](int outer, int inner) {
    RandomStream stream(cfg.seed, inner_stream_id(outer, inner));
    const FunctionalSample* active = &functional;
    FunctionalSample curves;
    if (cfg.replication == ReplicationMode::Linear) {
      curves = replicate_sample(functional, fits, cfg.replicate_m, stream);
      active = &curves;
    }
    const DepthVector depths = functional_depth(*active, cfg.depth_method);
    const GroupSplit split = cfg.outlyingness_variant
                                 ? outlyingness_split(depths, *active, cfg)
                                 : split_groups(depths, cfg);
    return wilcoxon_sum(ranks, split.C).w;
  };

  report.outer_means.resize(cfg.outer_reps);
  auto run_outer = [&](int outer) {
    double sum = 0.0;
    for (int inner = 0; inner < cfg.inner_reps; ++inner) sum += one_rep(outer, inner);
    report.outer_means[outer] = sum / static_cast<double>(cfg.inner_reps);
  };

  const int workers = std::max(1, std::min(threads, cfg.outer_reps));
  if (workers == 1) {
    for (int outer = 0; outer < cfg.outer_reps; ++outer) run_outer(outer);
  } else {
    // Outer repetitions are striped across workers; every repetition owns its
    // substream and result slot, so the schedule cannot change the report.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int outer = w; outer < cfg.outer_reps; outer += workers) run_outer(outer);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  report.grand_mean_w = report.outer_means.mean();
  report.sd_of_means = sample_sd(report.outer_means);

  const int n_c = static_cast<int>(report.split.C.size());
  report.null_mean = n_c * (static_cast<double>(n) + 1.0) / 2.0;

  RandomStream baseline_stream(cfg.seed, kBaselineStreamTag);
  const auto baseline = run_baseline_ranks(ranks, n_c, cfg.baseline_reps, baseline_stream);
  report.baseline_mean_w = baseline.first;
  report.baseline_sd = baseline.second;

  RandomStream permutation_stream(cfg.seed, kPermutationStreamTag);
  report.p_value = permutation_pvalue(ranks, report.split.C, cfg.baseline_reps, permutation_stream);

  report.depth_table = {mbd(functional), fm_depth(functional), extremal_depth(functional)};

  const FunctionalSample sample_f = functional.subset(report.split.F);
  const FunctionalSample sample_c = functional.subset(report.split.C);
  report.median_diff = median_difference(sample_f, sample_c, cfg.depth_method);
  report.strength = causal_strength(report.median_diff, cfg.strength_tau);
  return report;
}

}  // namespace depthcause
