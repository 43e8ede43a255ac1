#include "opinionforge/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "opinionforge/version.hpp"

namespace opinionforge {

namespace {

using nlohmann::json;

// Doubles are written with 17 significant digits so a re-parse reproduces
// the exact bits.
std::string fmt_double(double v) {
  if (!std::isfinite(v)) {
    throw DataError("cannot serialize a non-finite number");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quote(const std::string& s) { return "\"" + escape_json(s) + "\""; }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string array_of(const std::vector<std::string>& items) {
  return "[" + join(items, ",") + "]";
}

std::string double_array(const std::vector<double>& values) {
  std::vector<std::string> items;
  items.reserve(values.size());
  for (double v : values) items.push_back(fmt_double(v));
  return array_of(items);
}

std::string id_array(const std::vector<std::string>& ids) {
  std::vector<std::string> items;
  items.reserve(ids.size());
  for (const auto& id : ids) items.push_back(quote(id));
  return array_of(items);
}

std::string behaviors_array(const std::vector<std::array<double, 3>>& rows) {
  std::vector<std::string> items;
  items.reserve(rows.size());
  for (const auto& row : rows) {
    items.push_back(double_array({row[0], row[1], row[2]}));
  }
  return array_of(items);
}

std::string config_json(const SamplerConfig& config) {
  std::ostringstream out;
  out << "{\"bias_grid\":" << config.bias_grid
      << ",\"burn_in\":" << config.burn_in
      << ",\"epsilon_bounds\":[" << fmt_double(config.epsilon_lo) << ","
      << fmt_double(config.epsilon_hi) << "]"
      << ",\"epsilon_grid\":" << config.epsilon_grid
      << ",\"fixed_lambda\":" << config.fixed_lambda
      << ",\"iterations\":" << config.iterations
      << ",\"lambda_max\":" << config.lambda_max
      << ",\"lambda_mode\":" << quote(to_string(config.lambda_mode))
      << ",\"seed\":" << config.seed
      << ",\"theta_bounds\":[" << fmt_double(config.theta_lo) << ","
      << fmt_double(config.theta_hi) << "]"
      << ",\"theta_grid\":" << config.theta_grid
      << ",\"thin\":" << config.thin << "}";
  return out.str();
}

SamplerConfig config_from_json(const json& j) {
  SamplerConfig config;
  config.bias_grid = j.at("bias_grid").get<int>();
  config.burn_in = j.at("burn_in").get<std::int64_t>();
  config.epsilon_lo = j.at("epsilon_bounds").at(0).get<double>();
  config.epsilon_hi = j.at("epsilon_bounds").at(1).get<double>();
  config.epsilon_grid = j.at("epsilon_grid").get<int>();
  config.fixed_lambda = j.at("fixed_lambda").get<std::int64_t>();
  config.iterations = j.at("iterations").get<std::int64_t>();
  config.lambda_max = j.at("lambda_max").get<std::int64_t>();
  config.lambda_mode = lambda_mode_from_string(j.at("lambda_mode").get<std::string>());
  config.seed = j.at("seed").get<std::uint64_t>();
  config.theta_lo = j.at("theta_bounds").at(0).get<double>();
  config.theta_hi = j.at("theta_bounds").at(1).get<double>();
  config.theta_grid = j.at("theta_grid").get<int>();
  config.thin = j.at("thin").get<std::int64_t>();
  return config;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw DataError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw DataError("cannot rename " + tmp.string() + " to " + path);
  }
}

// ---------------------------------------------------------------------------
// Ratings CSV.
// ---------------------------------------------------------------------------

RatingsData load_ratings_csv(const std::string& path, int levels) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw DataError(path + ": empty file (expected a header row)");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trustor,trustee,rating") {
    throw DataError(path + ":1: expected header 'trustor,trustee,rating'");
  }

  struct Row {
    int trustor, trustee, rating;
  };
  std::vector<Row> rows;
  RatingsData data;
  std::map<std::string, int> trustor_index;
  std::map<std::string, int> trustee_index;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 3 comma-separated fields");
    }
    const std::string trustor = line.substr(0, c1);
    const std::string trustee = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string rating_str = line.substr(c2 + 1);
    if (trustor.empty() || trustee.empty()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": empty id");
    }
    int rating = 0;
    try {
      std::size_t used = 0;
      rating = std::stoi(rating_str, &used);
      if (used != rating_str.size()) throw std::invalid_argument(rating_str);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": rating '" + rating_str +
                      "' is not an integer");
    }
    if (rating < 1 || rating > levels) {
      throw DataError(path + ":" + std::to_string(line_no) + ": rating " +
                      std::to_string(rating) + " outside {1.." + std::to_string(levels) +
                      "}");
    }
    auto [it_i, new_i] = trustor_index.try_emplace(
        trustor, static_cast<int>(data.trustor_ids.size()));
    if (new_i) data.trustor_ids.push_back(trustor);
    auto [it_j, new_j] = trustee_index.try_emplace(
        trustee, static_cast<int>(data.trustee_ids.size()));
    if (new_j) data.trustee_ids.push_back(trustee);
    rows.push_back(Row{it_i->second, it_j->second, rating});
  }

  data.matrix = RatingMatrix(static_cast<int>(data.trustor_ids.size()),
                             static_cast<int>(data.trustee_ids.size()), levels);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    try {
      data.matrix.add(rows[r].trustor, rows[r].trustee, rows[r].rating);
    } catch (const DataError&) {
      throw DataError(path + ": duplicate edge '" +
                      data.trustor_ids[static_cast<std::size_t>(rows[r].trustor)] + "," +
                      data.trustee_ids[static_cast<std::size_t>(rows[r].trustee)] + "'");
    }
  }
  return data;
}

std::string ratings_to_csv(const RatingsData& data) {
  std::ostringstream out;
  out << "trustor,trustee,rating\n";
  for (const RatingEntry& e : data.matrix.entries()) {
    out << data.trustor_ids.at(static_cast<std::size_t>(e.trustor)) << ','
        << data.trustee_ids.at(static_cast<std::size_t>(e.trustee)) << ',' << e.rating
        << '\n';
  }
  return out.str();
}

void write_ratings_csv(const RatingsData& data, const std::string& path) {
  write_file_atomic(path, ratings_to_csv(data));
}

void write_index_map_json(const RatingsData& data, const std::string& path) {
  std::ostringstream out;
  out << "{\"trustees\":" << id_array(data.trustee_ids)
      << ",\"trustors\":" << id_array(data.trustor_ids) << "}\n";
  write_file_atomic(path, out.str());
}

// ---------------------------------------------------------------------------
// Opinions export.
// ---------------------------------------------------------------------------

void export_opinions_json(const PosteriorSummary& summary, const RatingsData& data,
                          const std::string& path) {
  if (summary.edges.empty()) {
    throw std::invalid_argument("refusing to export an empty summary");
  }
  std::ostringstream out;
  out << "{\"behaviors\":" << behaviors_array(summary.behavior_means) << ",\"edges\":[";
  for (std::size_t e = 0; e < summary.edges.size(); ++e) {
    const EdgeSummary& edge = summary.edges[e];
    if (e > 0) out << ",";
    out << "{\"alpha_mean\":" << fmt_double(edge.alpha_mean)
        << ",\"beta_mean\":" << fmt_double(edge.beta_mean) << ",\"bias_mean\":"
        << fmt_double(summary.bias_means.at(static_cast<std::size_t>(edge.trustor)))
        << ",\"expected_belief_ci90\":[" << fmt_double(edge.ci90_lo) << ","
        << fmt_double(edge.ci90_hi) << "]"
        << ",\"expected_belief_mean\":" << fmt_double(edge.expected_belief_mean)
        << ",\"gamma_mean\":" << fmt_double(edge.gamma_mean) << ",\"opinion\":["
        << edge.rounded.alpha << "," << edge.rounded.beta << "," << edge.rounded.gamma
        << "]"
        << ",\"trustee\":"
        << quote(data.trustee_ids.at(static_cast<std::size_t>(edge.trustee)))
        << ",\"trustor\":"
        << quote(data.trustor_ids.at(static_cast<std::size_t>(edge.trustor))) << "}";
  }
  out << "],\"epsilon_mean\":" << fmt_double(summary.epsilon_mean)
      << ",\"levels\":" << summary.levels
      << ",\"theta_means\":" << double_array(summary.theta_means)
      << ",\"trustee_ids\":" << id_array(data.trustee_ids)
      << ",\"trustor_ids\":" << id_array(data.trustor_ids) << "}\n";
  write_file_atomic(path, out.str());
}

OpinionsExport import_opinions_json(const std::string& path) {
  const json j = parse_file(path);
  OpinionsExport out;
  out.trustor_ids = j.at("trustor_ids").get<std::vector<std::string>>();
  out.trustee_ids = j.at("trustee_ids").get<std::vector<std::string>>();
  out.summary.levels = j.at("levels").get<int>();
  out.summary.epsilon_mean = j.at("epsilon_mean").get<double>();
  out.summary.theta_means = j.at("theta_means").get<std::vector<double>>();
  for (const auto& row : j.at("behaviors")) {
    out.summary.behavior_means.push_back(
        {row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
  }
  out.summary.bias_means.assign(out.trustor_ids.size(), 0.0);
  std::map<std::string, int> trustor_of;
  std::map<std::string, int> trustee_of;
  for (std::size_t i = 0; i < out.trustor_ids.size(); ++i) {
    trustor_of[out.trustor_ids[i]] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < out.trustee_ids.size(); ++i) {
    trustee_of[out.trustee_ids[i]] = static_cast<int>(i);
  }
  for (const auto& e : j.at("edges")) {
    EdgeSummary edge;
    edge.trustor = trustor_of.at(e.at("trustor").get<std::string>());
    edge.trustee = trustee_of.at(e.at("trustee").get<std::string>());
    edge.alpha_mean = e.at("alpha_mean").get<double>();
    edge.beta_mean = e.at("beta_mean").get<double>();
    edge.gamma_mean = e.at("gamma_mean").get<double>();
    edge.expected_belief_mean = e.at("expected_belief_mean").get<double>();
    edge.ci90_lo = e.at("expected_belief_ci90").at(0).get<double>();
    edge.ci90_hi = e.at("expected_belief_ci90").at(1).get<double>();
    edge.rounded = Opinion{e.at("opinion").at(0).get<std::int64_t>(),
                           e.at("opinion").at(1).get<std::int64_t>(),
                           e.at("opinion").at(2).get<std::int64_t>()};
    out.summary.bias_means[static_cast<std::size_t>(edge.trustor)] =
        e.at("bias_mean").get<double>();
    out.summary.edges.push_back(edge);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth.
// ---------------------------------------------------------------------------

void write_truth_json(const TruthBundle& bundle, const std::string& path) {
  const GroundTruth& truth = bundle.truth;
  std::vector<std::array<double, 3>> rows;
  rows.reserve(truth.behaviors.size());
  for (const Behavior& b : truth.behaviors) rows.push_back({b.b, b.d, b.n});
  std::vector<double> biases;
  biases.reserve(truth.biases.size());
  for (const Bias& a : truth.biases) biases.push_back(a.a);

  std::ostringstream out;
  out << "{\"behaviors\":" << behaviors_array(rows) << ",\"biases\":"
      << double_array(biases) << ",\"edges\":[";
  for (std::size_t e = 0; e < truth.lambdas.size(); ++e) {
    const LambdaEntry& le = truth.lambdas[e];
    const Opinion& op = bundle.opinions.at(e);
    if (e > 0) out << ",";
    out << "{\"lambda\":" << le.lambda << ",\"opinion\":[" << op.alpha << "," << op.beta
        << "," << op.gamma << "]"
        << ",\"rating\":" << bundle.ratings.at(e) << ",\"trustee\":"
        << quote(bundle.trustee_ids.at(static_cast<std::size_t>(le.trustee)))
        << ",\"trustor\":"
        << quote(bundle.trustor_ids.at(static_cast<std::size_t>(le.trustor))) << "}";
  }
  out << "],\"epsilon\":" << fmt_double(truth.logit.epsilon)
      << ",\"levels\":" << truth.logit.levels
      << ",\"theta\":" << double_array(truth.logit.theta)
      << ",\"trustee_ids\":" << id_array(bundle.trustee_ids)
      << ",\"trustor_ids\":" << id_array(bundle.trustor_ids) << "}\n";
  write_file_atomic(path, out.str());
}

TruthBundle load_truth_json(const std::string& path) {
  const json j = parse_file(path);
  TruthBundle bundle;
  bundle.trustor_ids = j.at("trustor_ids").get<std::vector<std::string>>();
  bundle.trustee_ids = j.at("trustee_ids").get<std::vector<std::string>>();
  bundle.truth.logit.levels = j.at("levels").get<int>();
  bundle.truth.logit.epsilon = j.at("epsilon").get<double>();
  bundle.truth.logit.theta = j.at("theta").get<std::vector<double>>();
  for (const auto& row : j.at("behaviors")) {
    bundle.truth.behaviors.push_back(Behavior{
        row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
  }
  for (const auto& a : j.at("biases")) {
    bundle.truth.biases.push_back(Bias{a.get<double>()});
  }
  std::map<std::string, int> trustor_of;
  std::map<std::string, int> trustee_of;
  for (std::size_t i = 0; i < bundle.trustor_ids.size(); ++i) {
    trustor_of[bundle.trustor_ids[i]] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < bundle.trustee_ids.size(); ++i) {
    trustee_of[bundle.trustee_ids[i]] = static_cast<int>(i);
  }
  for (const auto& e : j.at("edges")) {
    LambdaEntry le;
    le.trustor = trustor_of.at(e.at("trustor").get<std::string>());
    le.trustee = trustee_of.at(e.at("trustee").get<std::string>());
    le.lambda = e.at("lambda").get<std::int64_t>();
    bundle.truth.lambdas.push_back(le);
    bundle.opinions.push_back(Opinion{e.at("opinion").at(0).get<std::int64_t>(),
                                      e.at("opinion").at(1).get<std::int64_t>(),
                                      e.at("opinion").at(2).get<std::int64_t>()});
    bundle.ratings.push_back(e.at("rating").get<int>());
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Trace NDJSON.
// ---------------------------------------------------------------------------

void write_trace_ndjson(const TraceBundle& bundle, const std::string& path) {
  std::ostringstream out;
  out << "{\"config\":" << config_json(bundle.trace.config)
      << ",\"entries\":[";
  for (std::size_t e = 0; e < bundle.entries.size(); ++e) {
    const RatingEntry& entry = bundle.entries[e];
    if (e > 0) out << ",";
    out << "[" << entry.trustor << "," << entry.trustee << "," << entry.rating << "]";
  }
  out << "],\"levels\":" << bundle.levels
      << ",\"num_trustees\":" << bundle.num_trustees
      << ",\"num_trustors\":" << bundle.num_trustors
      << ",\"record\":\"header\""
      << ",\"trustee_ids\":" << id_array(bundle.trustee_ids)
      << ",\"trustor_ids\":" << id_array(bundle.trustor_ids)
      << ",\"version\":" << quote(kVersion) << "}\n";

  for (const GibbsState& state : bundle.trace.samples) {
    std::vector<std::array<double, 3>> rows;
    rows.reserve(state.behaviors.size());
    for (const Behavior& b : state.behaviors) rows.push_back({b.b, b.d, b.n});
    std::vector<double> biases;
    biases.reserve(state.biases.size());
    for (const Bias& a : state.biases) biases.push_back(a.a);
    out << "{\"behaviors\":" << behaviors_array(rows)
        << ",\"biases\":" << double_array(biases) << ",\"edges\":[";
    for (std::size_t e = 0; e < state.opinions.size(); ++e) {
      const Opinion& op = state.opinions[e];
      if (e > 0) out << ",";
      out << "[" << bundle.entries[e].trustor << "," << bundle.entries[e].trustee << ","
          << op.alpha << "," << op.beta << "," << op.gamma << "]";
    }
    out << "],\"epsilon\":" << fmt_double(state.logit.epsilon)
        << ",\"iteration\":" << state.iteration << ",\"record\":\"sample\""
        << ",\"theta\":" << double_array(state.logit.theta) << "}\n";
  }
  write_file_atomic(path, out.str());
}

TraceBundle load_trace_ndjson(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path + ": empty trace file");
  }
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(path + ":1: " + e.what());
  }
  if (header.value("record", "") != "header") {
    throw DataError(path + ": first record must be the trace header");
  }
  TraceBundle bundle;
  bundle.trace.config = config_from_json(header.at("config"));
  bundle.levels = header.at("levels").get<int>();
  bundle.num_trustors = header.at("num_trustors").get<int>();
  bundle.num_trustees = header.at("num_trustees").get<int>();
  bundle.trustor_ids = header.at("trustor_ids").get<std::vector<std::string>>();
  bundle.trustee_ids = header.at("trustee_ids").get<std::vector<std::string>>();
  for (const auto& e : header.at("entries")) {
    bundle.entries.push_back(RatingEntry{e.at(0).get<int>(), e.at(1).get<int>(),
                                         e.at(2).get<int>()});
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (rec.value("record", "") != "sample") {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected a sample record");
    }
    GibbsState state;
    state.iteration = rec.at("iteration").get<std::int64_t>();
    state.logit.levels = bundle.levels;
    state.logit.epsilon = rec.at("epsilon").get<double>();
    state.logit.theta = rec.at("theta").get<std::vector<double>>();
    for (const auto& row : rec.at("behaviors")) {
      state.behaviors.push_back(Behavior{
          row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
    }
    for (const auto& a : rec.at("biases")) {
      state.biases.push_back(Bias{a.get<double>()});
    }
    for (const auto& e : rec.at("edges")) {
      state.opinions.push_back(Opinion{e.at(2).get<std::int64_t>(),
                                       e.at(3).get<std::int64_t>(),
                                       e.at(4).get<std::int64_t>()});
    }
    bundle.trace.samples.push_back(std::move(state));
  }
  return bundle;
}

RatingMatrix ratings_from_trace(const TraceBundle& bundle) {
  RatingMatrix m(bundle.num_trustors, bundle.num_trustees, bundle.levels);
  for (const RatingEntry& e : bundle.entries) {
    m.add(e.trustor, e.trustee, e.rating);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Manifest and diagnostics reports.
// ---------------------------------------------------------------------------

void write_manifest_json(const RunManifest& manifest, const std::string& path) {
  std::ostringstream out;
  out << "{\"config\":" << config_json(manifest.config)
      << ",\"duration_seconds\":" << fmt_double(manifest.duration_seconds)
      << ",\"input\":" << quote(manifest.input) << ",\"levels\":" << manifest.levels
      << ",\"outputs\":" << id_array(manifest.outputs)
      << ",\"seed\":" << manifest.config.seed
      << ",\"tool_version\":" << quote(manifest.tool_version) << "}\n";
  write_file_atomic(path, out.str());
}

void write_chain_stats_json(const ChainStats& stats, const std::string& path) {
  std::ostringstream out;
  out << "{\"ess\":" << double_array(stats.ess)
      << ",\"geweke_z\":" << double_array(stats.geweke_z)
      << ",\"names\":" << id_array(stats.names) << ",\"samples\":" << stats.samples
      << ",\"thin\":" << stats.thin << "}\n";
  write_file_atomic(path, out.str());
}

}  // namespace opinionforge
