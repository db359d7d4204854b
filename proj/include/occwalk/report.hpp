#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "occwalk/classical.hpp"
#include "occwalk/engine.hpp"

// Run configuration, result records, the content-addressed run cache, and the
// CSV/JSON/SVG emitters behind the command-line front end.  Outputs are byte
// deterministic for a given config and tool version; thread count, output
// directory and requested formats do not enter the cache key.

namespace occwalk::report {

struct RunConfig {
  std::string command = "occupation";  // occupation | classical | riesz-alphas
  ModelSpec model;
  std::string engine = "density";  // brute | density | transform
  std::string mode = "exact";      // classical: exact|enumerate|montecarlo|arcsine
  long steps = 0;
  long window = -1;  // -1: half-width defaults to steps + 2
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000000;
  unsigned threads = 1;
  int count = 32;  // riesz-alphas table size
  std::vector<std::string> formats = {"csv", "json"};
  std::filesystem::path out_dir = "out";

  // deterministic key=value serialization; excludes execution details
  std::string canonical() const;
  std::string hash() const;
  std::string stem() const;
};

struct ResultRecord {
  RunConfig config;
  std::string hash;
  std::string engine;
  long n = 0;
  std::vector<double> probs;
  std::vector<double> cdf;
  std::vector<std::string> exact_probs;  // num/den strings in exact modes
  std::vector<std::string> exact_cdf;
  EngineDiagnostics diag;
  std::string rng;  // generator identifier, Monte Carlo runs only
  std::string version = version_string;
  double wall_ms = 0.0;
  bool from_cache = false;
};

// Compute without touching the filesystem.
ResultRecord compute(const RunConfig& config);

// Cache-aware run: serves a stored record when the config hash is known,
// then (re)writes the requested output files.
ResultRecord run(const RunConfig& config);

// Runs each config, collecting per-config errors instead of failing the
// batch; writes a combined index under out_dir.
struct SweepEntry {
  RunConfig config;
  std::string error;  // empty on success
  ResultRecord record;
};
std::vector<SweepEntry> sweep(const std::vector<RunConfig>& configs);

std::string to_csv(const ResultRecord& r);
std::string to_output_json(const ResultRecord& r);
std::string to_cache_json(const ResultRecord& r);
ResultRecord record_from_json(const std::string& text);

// kind: "density" or "cdf"
std::string render_svg(const ResultRecord& r, const std::string& kind);

// Riesz coefficient table as JSON rows (index, re, im, rho).
std::string riesz_alpha_table_json(int count, cplx alpha_minus_one, int depth);

std::uint64_t fnv1a64(std::string_view s);
mpq_class parse_rational(const std::string& s);

// Parses one config object with the same keys as the CLI flags.
RunConfig config_from_json_text(const std::string& text);
std::vector<RunConfig> sweep_configs_from_json_text(const std::string& text);

}  // namespace occwalk::report
