#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opinionforge/diagnostics.hpp"
#include "opinionforge/generative.hpp"
#include "opinionforge/inference.hpp"
#include "opinionforge/io.hpp"
#include "opinionforge/oracle.hpp"
#include "opinionforge/version.hpp"

namespace {

using namespace opinionforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonSamplerFlags {
  std::int64_t iterations = 2000;
  std::int64_t burn_in = 500;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;
  int levels = 4;
  std::int64_t lambda_max = 30;
  std::string lambda_mode = "blocked-joint";
  std::int64_t lambda_fixed = 0;
  int bias_grid = 101;
  int epsilon_grid = 201;
  int theta_grid = 201;
  std::vector<double> epsilon_bounds = {-20.0, 20.0};
  std::vector<double> theta_bounds = {-20.0, 20.0};

  void attach(CLI::App* cmd) {
    cmd->add_option("--iterations", iterations, "Gibbs sweeps to run");
    cmd->add_option("--burn-in", burn_in, "Sweeps discarded before recording");
    cmd->add_option("--thin", thin, "Keep every thin-th sweep");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--levels", levels, "Number of rating levels");
    cmd->add_option("--lambda-max", lambda_max, "Largest evidence total");
    cmd->add_option("--lambda-mode", lambda_mode,
                    "fixed | blocked-joint | paper-literal")
        ->check(CLI::IsMember({"fixed", "blocked-joint", "paper-literal"}));
    cmd->add_option("--lambda-fixed", lambda_fixed,
                    "Pin every edge's lambda (fixed mode; 0 = random)");
    cmd->add_option("--bias-grid", bias_grid, "Grid cells for the bias conditional");
    cmd->add_option("--epsilon-grid", epsilon_grid, "Grid cells for epsilon");
    cmd->add_option("--theta-grid", theta_grid, "Grid cells per cutpoint");
    cmd->add_option("--epsilon-bounds", epsilon_bounds, "Epsilon interval: lo hi")
        ->expected(2);
    cmd->add_option("--theta-bounds", theta_bounds, "Cutpoint interval: lo hi")
        ->expected(2);
  }

  SamplerConfig to_config() const {
    SamplerConfig config;
    config.iterations = iterations;
    config.burn_in = burn_in;
    config.thin = thin;
    config.seed = seed;
    config.lambda_max = lambda_max;
    config.lambda_mode = lambda_mode_from_string(lambda_mode);
    config.fixed_lambda = lambda_fixed;
    config.bias_grid = bias_grid;
    config.epsilon_grid = epsilon_grid;
    config.theta_grid = theta_grid;
    config.epsilon_lo = epsilon_bounds.at(0);
    config.epsilon_hi = epsilon_bounds.at(1);
    config.theta_lo = theta_bounds.at(0);
    config.theta_hi = theta_bounds.at(1);
    config.validate();
    return config;
  }
};

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::vector<std::string> default_ids(const std::string& prefix, int count) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) ids.push_back(prefix + std::to_string(k));
  return ids;
}

int run_generate(const std::string& output_dir, int trustors, int trustees,
                 const CommonSamplerFlags& flags, std::int64_t lambda_lo,
                 std::int64_t lambda_hi, double epsilon,
                 std::vector<double> theta) {
  if (theta.empty()) {
    // Symmetric decreasing cutpoints: L=4 gives [2, 0, -2].
    for (int l = 1; l <= flags.levels - 1; ++l) {
      theta.push_back(static_cast<double>(flags.levels - 2 * l));
    }
  }
  LogitParams logit{epsilon, theta, flags.levels};
  logit.validate();
  GroundTruth truth = sample_ground_truth(trustors, trustees, lambda_lo, lambda_hi,
                                          logit, flags.seed);
  truth.validate(flags.lambda_max);
  GeneratedNetwork net = forward_generate_network(truth, flags.seed);

  RatingsData data;
  data.matrix = net.ratings;
  data.trustor_ids = default_ids("u", trustors);
  data.trustee_ids = default_ids("v", trustees);

  TruthBundle bundle;
  bundle.truth = truth;
  bundle.opinions = net.opinions;
  bundle.ratings.reserve(net.ratings.size());
  for (const RatingEntry& e : net.ratings.entries()) bundle.ratings.push_back(e.rating);
  bundle.trustor_ids = data.trustor_ids;
  bundle.trustee_ids = data.trustee_ids;

  write_ratings_csv(data, path_join(output_dir, "ratings.csv"));
  write_truth_json(bundle, path_join(output_dir, "truth.json"));
  write_index_map_json(data, path_join(output_dir, "index_map.json"));
  std::cerr << "generated " << net.ratings.size() << " ratings into " << output_dir
            << "\n";
  return kExitOk;
}

int run_infer(const std::string& input, const std::string& output_dir,
              const CommonSamplerFlags& flags) {
  const auto started = std::chrono::steady_clock::now();
  const SamplerConfig config = flags.to_config();
  const RatingsData data = load_ratings_csv(input, flags.levels);
  if (data.matrix.empty()) {
    throw DataError(input + ": no rating rows");
  }
  const Trace trace = gibbs_run(data.matrix, config);
  const PosteriorSummary summary = summarize_posterior(trace, data.matrix);

  TraceBundle bundle;
  bundle.trace = trace;
  bundle.levels = data.matrix.levels();
  bundle.num_trustors = data.matrix.num_trustors();
  bundle.num_trustees = data.matrix.num_trustees();
  bundle.entries = data.matrix.entries();
  bundle.trustor_ids = data.trustor_ids;
  bundle.trustee_ids = data.trustee_ids;

  const std::string trace_path = path_join(output_dir, "trace.ndjson");
  const std::string opinions_path = path_join(output_dir, "opinions.json");
  const std::string map_path = path_join(output_dir, "index_map.json");
  write_trace_ndjson(bundle, trace_path);
  export_opinions_json(summary, data, opinions_path);
  write_index_map_json(data, map_path);

  RunManifest manifest;
  manifest.input = input;
  manifest.outputs = {trace_path, opinions_path, map_path};
  manifest.config = config;
  manifest.levels = flags.levels;
  manifest.tool_version = kVersion;
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest_json(manifest, path_join(output_dir, "manifest.json"));
  std::cerr << "kept " << trace.samples.size() << " samples over "
            << data.matrix.size() << " edges\n";
  return kExitOk;
}

int run_summarize(const std::string& input, const std::string& output) {
  const TraceBundle bundle = load_trace_ndjson(input);
  const RatingMatrix ratings = ratings_from_trace(bundle);
  const PosteriorSummary summary = summarize_posterior(bundle.trace, ratings);
  RatingsData data;
  data.matrix = ratings;
  data.trustor_ids = bundle.trustor_ids;
  data.trustee_ids = bundle.trustee_ids;
  export_opinions_json(summary, data, output);
  std::cerr << "summarized " << bundle.trace.samples.size() << " samples\n";
  return kExitOk;
}

int run_diagnose(const std::string& input, const std::string& output_dir) {
  const TraceBundle bundle = load_trace_ndjson(input);
  const RatingMatrix ratings = ratings_from_trace(bundle);
  const ChainStats stats = trace_diagnostics(bundle.trace, ratings);
  const MonitoredSeries series = monitored_scalars(bundle.trace, ratings);
  write_chain_stats_json(stats, path_join(output_dir, "chain_stats.json"));
  write_file_atomic(path_join(output_dir, "plot_data.csv"), plot_data_csv(series));
  for (std::size_t k = 0; k < stats.names.size(); ++k) {
    std::fprintf(stderr, "%-24s ess %10.1f   z % .3f\n", stats.names[k].c_str(),
                 stats.ess[k], stats.geweke_z[k]);
  }
  return kExitOk;
}

int run_oracle(const std::string& input, const std::string& output,
               const CommonSamplerFlags& flags, int behavior_grid) {
  const RatingsData data = load_ratings_csv(input, flags.levels);
  if (data.matrix.empty()) {
    throw DataError(input + ": no rating rows");
  }
  OracleConfig config;
  config.lambda_max = flags.lambda_max;
  config.bias_grid = flags.bias_grid;
  config.epsilon_grid = flags.epsilon_grid;
  config.theta_grid = flags.theta_grid;
  config.behavior_grid = behavior_grid;
  config.epsilon_lo = flags.epsilon_bounds.at(0);
  config.epsilon_hi = flags.epsilon_bounds.at(1);
  config.theta_lo = flags.theta_bounds.at(0);
  config.theta_hi = flags.theta_bounds.at(1);
  const ExactPosterior posterior = exact_posterior(data.matrix, config);

  // Emitted directly here: the marginal tables are an oracle-only format.
  auto arr = [](const std::vector<double>& v) {
    std::ostringstream s;
    s << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      s << (i > 0 ? "," : "") << buf;
    }
    s << "]";
    return s.str();
  };
  std::ostringstream out;
  out << "{\"edges\":[";
  for (std::size_t e = 0; e < posterior.edge_marginals.size(); ++e) {
    if (e > 0) out << ",";
    out << "{\"expected_belief_mean\":";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", posterior.edge_expected_belief_mean[e]);
    out << buf << ",\"marginal\":" << arr(posterior.edge_marginals[e])
        << ",\"support\":[";
    for (std::size_t k = 0; k < posterior.edge_supports[e].size(); ++k) {
      const Opinion& op = posterior.edge_supports[e][k];
      if (k > 0) out << ",";
      out << "[" << op.alpha << "," << op.beta << "," << op.gamma << "]";
    }
    out << "]}";
  }
  out << "],\"epsilon_marginal\":" << arr(posterior.epsilon_marginal)
      << ",\"epsilon_mean\":";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", posterior.epsilon_mean);
  out << buf << ",\"theta_marginals\":[";
  for (std::size_t l = 0; l < posterior.theta_marginals.size(); ++l) {
    out << (l > 0 ? "," : "") << arr(posterior.theta_marginals[l]);
  }
  out << "],\"theta_means\":" << arr(posterior.theta_means) << "}\n";
  write_file_atomic(output, out.str());
  std::cerr << "wrote exact marginals for " << posterior.edge_marginals.size()
            << " edges\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion inference for ordinal trust networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonSamplerFlags flags;

  // generate
  auto* generate = app.add_subcommand("generate", "Sample a synthetic rating network");
  std::string gen_output_dir = ".";
  int gen_trustors = 30;
  int gen_trustees = 20;
  std::int64_t gen_lambda_lo = 3;
  std::int64_t gen_lambda_hi = 8;
  double gen_epsilon = 6.0;
  std::vector<double> gen_theta;
  generate->add_option("--output-dir", gen_output_dir, "Directory for outputs");
  generate->add_option("--trustors", gen_trustors, "Number of trustors");
  generate->add_option("--trustees", gen_trustees, "Number of trustees");
  generate->add_option("--lambda-lo", gen_lambda_lo, "Smallest per-edge evidence total");
  generate->add_option("--lambda-hi", gen_lambda_hi, "Largest per-edge evidence total");
  generate->add_option("--epsilon", gen_epsilon, "True slope");
  generate->add_option("--theta", gen_theta, "True cutpoints, decreasing")
      ->expected(-1);
  flags.attach(generate);

  // infer
  auto* infer = app.add_subcommand("infer", "Estimate opinions from a ratings CSV");
  std::string infer_input;
  std::string infer_output_dir = ".";
  infer->add_option("--input", infer_input, "Ratings CSV")->required();
  infer->add_option("--output-dir", infer_output_dir, "Directory for outputs");
  flags.attach(infer);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Summarize a stored trace");
  std::string sum_input;
  std::string sum_output = "opinions.json";
  summarize->add_option("--input", sum_input, "Trace NDJSON")->required();
  summarize->add_option("--output", sum_output, "Opinions JSON path");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Chain health report for a trace");
  std::string diag_input;
  std::string diag_output_dir = ".";
  diagnose->add_option("--input", diag_input, "Trace NDJSON")->required();
  diagnose->add_option("--output-dir", diag_output_dir, "Directory for outputs");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact marginals for a tiny instance");
  std::string oracle_input;
  std::string oracle_output = "oracle.json";
  int oracle_behavior_grid = 6;
  oracle->add_option("--input", oracle_input, "Ratings CSV (tiny)")->required();
  oracle->add_option("--output", oracle_output, "Marginals JSON path");
  oracle->add_option("--behavior-grid", oracle_behavior_grid,
                     "Simplex subdivisions per edge");
  flags.attach(oracle);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return run_generate(gen_output_dir, gen_trustors, gen_trustees, flags,
                          gen_lambda_lo, gen_lambda_hi, gen_epsilon, gen_theta);
    }
    if (infer->parsed()) {
      return run_infer(infer_input, infer_output_dir, flags);
    }
    if (summarize->parsed()) {
      return run_summarize(sum_input, sum_output);
    }
    if (diagnose->parsed()) {
      return run_diagnose(diag_input, diag_output_dir);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_input, oracle_output, flags, oracle_behavior_grid);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
