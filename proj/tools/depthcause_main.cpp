#include "CLI11.hpp"

#include "depthcause/data_model.hpp"
#include "depthcause/depth_regression.hpp"
#include "depthcause/functional_depth.hpp"
#include "depthcause/pipeline.hpp"
#include "depthcause/version.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dc = depthcause;

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("DEPTHCAUSE_SEED");
  if (!env || !*env) return 42;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("DEPTHCAUSE_SEED must be an unsigned integer");
  return v;
}

dc::DepthMethod method_from_string(const std::string& s) {
  if (s == "mbd") return dc::DepthMethod::MBD;
  if (s == "fm") return dc::DepthMethod::FM;
  if (s == "ed") return dc::DepthMethod::ED;
  throw std::invalid_argument("unknown depth method '" + s + "' (expected mbd, fm or ed)");
}

std::string digest_hex(std::uint64_t d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// The deterministic manifest: everything that pins down the outputs. The
// report files embed it, so identical lines here guarantee identical bytes
// below them. Timestamps live only in manifest.txt.
std::string deterministic_manifest(const dc::PipelineConfig& cfg,
                                   std::uint64_t subsidies_digest,
                                   std::uint64_t outcomes_digest,
                                   const std::optional<std::uint64_t>& config_digest) {
  std::ostringstream out;
  out << "depthcause " << DEPTHCAUSE_VERSION << '\n'
      << "seed = " << cfg.seed << '\n'
      << "subsidies_digest = " << digest_hex(subsidies_digest) << '\n'
      << "outcomes_digest = " << digest_hex(outcomes_digest) << '\n'
      << "config_digest = " << (config_digest ? digest_hex(*config_digest) : "none") << '\n'
      << "w_convention = rank sum over group C" << '\n'
      << dc::config_echo(cfg);
  return out.str();
}

std::string commented(const std::string& text) {
  std::ostringstream out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
  return out.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw dc::DataError("cannot write file: " + path.string());
  return out;
}

int run_depth(const std::string& input, const std::string& method_name, dc::Index replicate_m,
              int reps, std::uint64_t seed) {
  const dc::FunctionalSample sample = dc::read_functional_csv(input);
  const dc::DepthMethod method = method_from_string(method_name);

  dc::Vector depths;
  if (replicate_m > 0) {
    if (reps < 1) throw std::invalid_argument("--reps must be >= 1");
    std::vector<dc::LinearFit> fits = dc::fit_units(sample);
    depths = dc::Vector::Zero(sample.n());
    for (int r = 0; r < reps; ++r) {
      dc::RandomStream stream(seed, dc::kInnerStreamTag | static_cast<std::uint64_t>(r));
      const dc::FunctionalSample replicated =
          dc::replicate_sample(sample, fits, replicate_m, stream);
      depths += dc::functional_depth(replicated, method).values;
    }
    depths /= static_cast<double>(reps);
  } else {
    if (method == dc::DepthMethod::ED && dc::ed_grid_is_sparse(sample))
      std::cerr << "warning: extremal depth on a sparse grid (m < 2n); "
                   "consider --replicate to densify\n";
    depths = dc::functional_depth(sample, method).values;
  }

  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(static_cast<std::size_t>(sample.n()));
  for (dc::Index i = 0; i < sample.n(); ++i)
    rows.emplace_back(sample.units[static_cast<std::size_t>(i)].name, depths[i]);
  std::sort(rows.begin(), rows.end());
  std::cout << "unit,depth\n";
  for (const auto& [unit, depth] : rows)
    std::cout << unit << ',' << dc::format_double(depth) << '\n';
  return 0;
}

int run_replicate(const std::string& input, dc::Index m, std::uint64_t seed, bool sigma_zero) {
  const dc::FunctionalSample sample = dc::read_functional_csv(input);
  std::vector<dc::LinearFit> fits = dc::fit_units(sample);
  if (sigma_zero)
    for (auto& f : fits) f.sigma = 0.0;
  dc::RandomStream stream(seed);
  const dc::FunctionalSample replicated = dc::replicate_sample(sample, fits, m, stream);
  dc::write_functional_csv(replicated, std::cout);
  return 0;
}

int run_baseline_cmd(const std::string& outcomes_path, int n_c, int reps, std::uint64_t seed,
                     int directions) {
  const dc::MultivariateSample outcomes = dc::load_outcomes(outcomes_path);
  dc::RandomStream stream(seed, dc::kBaselineStreamTag);
  const auto [mean_w, sd_w] = dc::run_baseline(outcomes, n_c, reps, stream, directions);
  const double null_mean = n_c * (static_cast<double>(outcomes.n()) + 1.0) / 2.0;
  std::cout << "mean_w,sd_w,null_mean\n"
            << dc::format_double(mean_w) << ',' << dc::format_double(sd_w) << ','
            << dc::format_double(null_mean) << '\n';
  return 0;
}

int run_median_diff(const std::string& factual_path, const std::string& counterfactual_path,
                    const std::string& method_name, double tau) {
  const dc::FunctionalSample factual = dc::read_functional_csv(factual_path);
  const dc::FunctionalSample counterfactual = dc::read_functional_csv(counterfactual_path);
  const dc::MedianDifference md =
      dc::median_difference(factual, counterfactual, method_from_string(method_name));
  const double strength = dc::causal_strength(md, tau);
  std::cout << "# sup_norm = " << dc::format_double(md.sup_norm) << '\n'
            << "# l2_norm = " << dc::format_double(md.l2_norm) << '\n'
            << "# strength = " << dc::format_double(strength) << '\n'
            << "t,diff\n";
  for (dc::Index j = 0; j < md.grid.size(); ++j)
    std::cout << dc::format_double(md.grid[j]) << ',' << dc::format_double(md.diff[j]) << '\n';
  return 0;
}

struct PipelineArgs {
  std::string subsidies;
  std::string outcomes;
  std::string config;
  std::string out_dir = ".";
  int threads = 1;
  std::string method;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  int inner_reps = 0;
  int outer_reps = 0;
  int baseline_reps = 0;
  dc::Index replicate_m = 0;
  int direction_count = 0;
  bool sigma_zero = false;
  bool outlyingness_variant = false;
  bool no_replication = false;
};

int run_pipeline_cmd(const PipelineArgs& args, const CLI::App& cmd) {
  dc::PipelineConfig defaults;
  defaults.seed = default_seed();
  dc::PipelineConfig cfg =
      args.config.empty() ? defaults : dc::parse_config_file(args.config, defaults);

  if (cmd.count("--method")) cfg.depth_method = method_from_string(args.method);
  if (cmd.count("--alpha")) cfg.alpha = args.alpha;
  if (cmd.count("--seed")) cfg.seed = args.seed;
  if (cmd.count("--inner-reps")) cfg.inner_reps = args.inner_reps;
  if (cmd.count("--outer-reps")) cfg.outer_reps = args.outer_reps;
  if (cmd.count("--baseline-reps")) cfg.baseline_reps = args.baseline_reps;
  if (cmd.count("--replicate-m")) cfg.replicate_m = args.replicate_m;
  if (cmd.count("--direction-count")) cfg.direction_count = args.direction_count;
  if (args.sigma_zero) cfg.sigma_zero = true;
  if (args.outlyingness_variant) cfg.outlyingness_variant = true;
  if (args.no_replication) cfg.replication = dc::ReplicationMode::None;
  cfg.validate();
  if (args.threads < 1) throw std::invalid_argument("--threads must be >= 1");

  const dc::FunctionalSample functional = dc::aggregate_h(dc::load_subsidies(args.subsidies));
  const dc::MultivariateSample outcomes =
      dc::align_outcomes(dc::load_outcomes(args.outcomes), functional);

  const dc::CausalReport report = dc::run_pipeline(functional, outcomes, cfg, args.threads);

  const std::uint64_t subsidies_digest = dc::file_digest(args.subsidies);
  const std::uint64_t outcomes_digest = dc::file_digest(args.outcomes);
  std::optional<std::uint64_t> config_digest;
  if (!args.config.empty()) config_digest = dc::file_digest(args.config);
  const std::string manifest =
      deterministic_manifest(cfg, subsidies_digest, outcomes_digest, config_digest);
  const std::string header = commented(manifest);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);

  {
    std::ofstream out = open_output(dir / "report.csv");
    out << header;
    out << "# n_c = " << report.split.C.size() << '\n'
        << "# n_f = " << report.split.F.size() << '\n'
        << "# null_mean = " << dc::format_double(report.null_mean) << '\n'
        << "# p_value = " << dc::format_double(report.p_value) << '\n'
        << "# sup_norm = " << dc::format_double(report.median_diff.sup_norm) << '\n'
        << "# l2_norm = " << dc::format_double(report.median_diff.l2_norm) << '\n'
        << "# strength = " << dc::format_double(report.strength) << '\n';
    out << "split,method,mean_w,sd_w\n";
    out << "outlyingness," << dc::to_string(report.method) << ','
        << dc::format_double(report.grand_mean_w) << ','
        << dc::format_double(report.sd_of_means) << '\n';
    out << "random," << dc::to_string(report.method) << ','
        << dc::format_double(report.baseline_mean_w) << ','
        << dc::format_double(report.baseline_sd) << '\n';
  }
  {
    std::ofstream out = open_output(dir / "depths.csv");
    out << header;
    out << "unit,mbd,fm,ed\n";
    for (dc::Index i = 0; i < functional.n(); ++i) {
      out << functional.units[static_cast<std::size_t>(i)].name;
      for (const auto& d : report.depth_table) out << ',' << dc::format_double(d.values[i]);
      out << '\n';
    }
  }
  {
    std::ofstream out = open_output(dir / "split.csv");
    out << header;
    out << "unit,group\n";
    std::vector<char> group(static_cast<std::size_t>(functional.n()), 'F');
    for (dc::Index i : report.split.C) group[static_cast<std::size_t>(i)] = 'C';
    for (dc::Index i = 0; i < functional.n(); ++i)
      out << functional.units[static_cast<std::size_t>(i)].name << ','
          << group[static_cast<std::size_t>(i)] << '\n';
  }
  {
    std::ofstream out = open_output(dir / "manifest.txt");
    out << manifest;
    out << "threads = " << args.threads << '\n';
    out << "created_utc = " << utc_timestamp() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centrality-oriented causal inference with statistical depth functions"};
  app.set_version_flag("--version", std::string("depthcause ") + DEPTHCAUSE_VERSION);
  app.require_subcommand(1);

  std::string depth_input;
  std::string depth_method = "mbd";
  dc::Index depth_replicate = 0;
  int depth_reps = 100;
  std::uint64_t depth_seed = 0;
  CLI::App* depth_cmd = app.add_subcommand("depth", "Functional depth of every curve");
  depth_cmd->add_option("--input", depth_input, "Curve CSV (unit,t,value)")->required();
  depth_cmd->add_option("--method", depth_method, "mbd, fm or ed");
  depth_cmd->add_option("--replicate", depth_replicate,
                        "Average depths over replicated series of this length");
  depth_cmd->add_option("--reps", depth_reps, "Replication count for --replicate");
  CLI::Option* depth_seed_opt = depth_cmd->add_option("--seed", depth_seed, "Random seed");

  std::string rep_input;
  dc::Index rep_m = 0;
  std::uint64_t rep_seed = 0;
  bool rep_sigma_zero = false;
  CLI::App* rep_cmd = app.add_subcommand("replicate", "Replicate each series onto a dense grid");
  rep_cmd->add_option("--input", rep_input, "Curve CSV (unit,t,value)")->required();
  rep_cmd->add_option("--m", rep_m, "Points per replicated series")->required();
  CLI::Option* rep_seed_opt = rep_cmd->add_option("--seed", rep_seed, "Random seed");
  rep_cmd->add_flag("--sigma-zero", rep_sigma_zero, "Replicate without noise");

  std::string base_outcomes;
  int base_nc = 0;
  int base_reps = 1000;
  std::uint64_t base_seed = 0;
  int base_directions = 10000;
  CLI::App* base_cmd = app.add_subcommand("baseline", "Random-split Wilcoxon baseline");
  base_cmd->add_option("--outcomes", base_outcomes, "Outcome CSV (unit,<names>)")->required();
  base_cmd->add_option("--nc", base_nc, "Group C size")->required();
  base_cmd->add_option("--reps", base_reps, "Random splits to draw");
  CLI::Option* base_seed_opt = base_cmd->add_option("--seed", base_seed, "Random seed");
  base_cmd->add_option("--directions", base_directions, "Monte Carlo directions when l > 2");

  PipelineArgs pargs;
  CLI::App* pipe_cmd = app.add_subcommand("pipeline", "Full causal analysis run");
  pipe_cmd->add_option("--subsidies", pargs.subsidies, "Subsidy CSV")->required();
  pipe_cmd->add_option("--outcomes", pargs.outcomes, "Outcome CSV")->required();
  pipe_cmd->add_option("--config", pargs.config, "key = value run configuration");
  pipe_cmd->add_option("--out", pargs.out_dir, "Output directory");
  pipe_cmd->add_option("--threads", pargs.threads, "Worker threads for outer repetitions");
  pipe_cmd->add_option("--method", pargs.method, "Override depth_method");
  pipe_cmd->add_option("--alpha", pargs.alpha, "Override alpha");
  pipe_cmd->add_option("--seed", pargs.seed, "Override seed");
  pipe_cmd->add_option("--inner-reps", pargs.inner_reps, "Override inner_reps");
  pipe_cmd->add_option("--outer-reps", pargs.outer_reps, "Override outer_reps");
  pipe_cmd->add_option("--baseline-reps", pargs.baseline_reps, "Override baseline_reps");
  pipe_cmd->add_option("--replicate-m", pargs.replicate_m, "Override replicate_m");
  pipe_cmd->add_option("--direction-count", pargs.direction_count, "Override direction_count");
  pipe_cmd->add_flag("--sigma-zero", pargs.sigma_zero, "Replicate without noise");
  pipe_cmd->add_flag("--outlyingness-variant", pargs.outlyingness_variant,
                     "Outlyingness-oriented split");
  pipe_cmd->add_flag("--no-replication", pargs.no_replication, "Skip series replication");

  std::string md_factual;
  std::string md_counterfactual;
  std::string md_method = "mbd";
  double md_tau = 0.0;
  CLI::App* md_cmd =
      app.add_subcommand("median-diff", "Difference of factual and counterfactual medians");
  md_cmd->add_option("--factual", md_factual, "Factual curve CSV")->required();
  md_cmd->add_option("--counterfactual", md_counterfactual, "Counterfactual curve CSV")->required();
  md_cmd->add_option("--method", md_method, "mbd, fm or ed");
  md_cmd->add_option("--tau", md_tau, "Strength threshold");

  try {
    app.parse(argc, argv);
    if (*depth_cmd) {
      const std::uint64_t seed = depth_seed_opt->count() ? depth_seed : default_seed();
      return run_depth(depth_input, depth_method, depth_replicate, depth_reps, seed);
    }
    if (*rep_cmd) {
      const std::uint64_t seed = rep_seed_opt->count() ? rep_seed : default_seed();
      return run_replicate(rep_input, rep_m, seed, rep_sigma_zero);
    }
    if (*base_cmd) {
      const std::uint64_t seed = base_seed_opt->count() ? base_seed : default_seed();
      return run_baseline_cmd(base_outcomes, base_nc, base_reps, seed, base_directions);
    }
    if (*pipe_cmd) return run_pipeline_cmd(pargs, *pipe_cmd);
    if (*md_cmd) return run_median_diff(md_factual, md_counterfactual, md_method, md_tau);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const dc::DegenerateAnalysisError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const dc::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
