#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opinionforge/diagnostics.hpp"
#include "opinionforge/generative.hpp"
#include "opinionforge/inference.hpp"
#include "opinionforge/types.hpp"

namespace opinionforge {

// A rating matrix plus the original string ids; dense index = position.
struct RatingsData {
  RatingMatrix matrix;
  std::vector<std::string> trustor_ids;
  std::vector<std::string> trustee_ids;
};

// Parses `trustor,trustee,rating` CSV. Ids are arbitrary strings (no commas)
// mapped to dense indices in first-appearance order. Throws DataError with
// the offending line number on parse errors, duplicate edges, or ratings
// outside {1..levels}.
RatingsData load_ratings_csv(const std::string& path, int levels);

std::string ratings_to_csv(const RatingsData& data);
void write_ratings_csv(const RatingsData& data, const std::string& path);

// Writes {"trustors": [...], "trustees": [...]} so downstream consumers can
// translate dense indices back to ids.
void write_index_map_json(const RatingsData& data, const std::string& path);

// Posterior export: one record per edge (means, rounded integer opinion,
// trustor bias mean, expected-belief mean and 90% interval) plus the global
// parameter means. Keys sorted, floats serialized with 17 significant digits.
void export_opinions_json(const PosteriorSummary& summary, const RatingsData& data,
                          const std::string& path);

struct OpinionsExport {
  PosteriorSummary summary;
  std::vector<std::string> trustor_ids;
  std::vector<std::string> trustee_ids;
};

OpinionsExport import_opinions_json(const std::string& path);

// Ground truth + generated latents/ratings, for recovery scoring.
struct TruthBundle {
  GroundTruth truth;
  std::vector<Opinion> opinions;  // aligned with ratings entries
  std::vector<int> ratings;       // aligned with truth.lambdas
  std::vector<std::string> trustor_ids;
  std::vector<std::string> trustee_ids;
};

void write_truth_json(const TruthBundle& bundle, const std::string& path);
TruthBundle load_truth_json(const std::string& path);

// Posterior trace as newline-delimited JSON: a header record carrying the
// config, dimensions and id tables, then one record per retained state.
struct TraceBundle {
  Trace trace;
  int levels = 2;
  int num_trustors = 0;
  int num_trustees = 0;
  std::vector<RatingEntry> entries;  // edge list (ratings echoed)
  std::vector<std::string> trustor_ids;
  std::vector<std::string> trustee_ids;
};

void write_trace_ndjson(const TraceBundle& bundle, const std::string& path);
TraceBundle load_trace_ndjson(const std::string& path);

// Rebuilds the RatingMatrix recorded in a trace header.
RatingMatrix ratings_from_trace(const TraceBundle& bundle);

struct RunManifest {
  std::string input;
  std::vector<std::string> outputs;
  SamplerConfig config;
  int levels = 4;
  std::string tool_version;
  double duration_seconds = 0.0;
};

void write_manifest_json(const RunManifest& manifest, const std::string& path);

void write_chain_stats_json(const ChainStats& stats, const std::string& path);

// All writers go through write-temp-then-rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace opinionforge
