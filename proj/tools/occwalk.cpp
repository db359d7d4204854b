#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "occwalk/report.hpp"

// Exit codes: 0 success, 2 invalid configuration, 3 engine guard or
// light-cone violation, 4 I/O failure.

namespace {

using namespace occwalk;
namespace rp = occwalk::report;

struct CliOptions {
  std::string model = "hadamard";
  std::string alpha = "0";
  std::string alpha_minus_one = "0";
  int riesz_depth = 6;
  long steps = 0;
  std::string engine = "density";
  long window = -1;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000000;
  unsigned threads = 1;
  std::string out = "out";
  std::vector<std::string> formats;
  std::string mode = "exact";
  int count = 32;
  std::string sweep_file;
  std::string record_file;
  std::string kind = "density";
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.formats,
                  "output formats (csv, json, svg); repeatable");
  cmd->add_option("--threads", o.threads, "worker thread count (0 = all)");
}

rp::RunConfig base_config(const CliOptions& o) {
  rp::RunConfig c;
  c.steps = o.steps;
  c.engine = o.engine;
  c.window = o.window;
  c.seed = o.seed;
  c.trials = o.trials;
  c.threads = o.threads;
  c.count = o.count;
  c.mode = o.mode;
  c.out_dir = o.out;
  if (!o.formats.empty()) c.formats = o.formats;
  return c;
}

ModelSpec model_from_cli(const CliOptions& o) {
  const cplx am1(rp::parse_rational(o.alpha_minus_one).get_d(), 0.0);
  if (o.model == "hadamard") return ModelSpec::hadamard();
  if (o.model == "constant") {
    ModelSpec m = ModelSpec::constant(rp::parse_rational(o.alpha));
    m.alpha_minus_one = am1;
    return m;
  }
  if (o.model == "polynomial-coin" || o.model == "polynomial") {
    ModelSpec m = ModelSpec::polynomial();
    m.alpha_minus_one = am1;
    return m;
  }
  if (o.model == "riesz") return ModelSpec::riesz(am1, o.riesz_depth);
  throw std::invalid_argument("unknown model: " + o.model);
}

void report_run(const rp::ResultRecord& rec) {
  std::printf("%s  n=%ld  engine=%s  sum=%.12f%s\n", rec.hash.c_str(), rec.n,
              rec.engine.c_str(), rec.diag.pre_clamp_sum,
              rec.from_cache ? "  (cached)" : "");
}

int dispatch(CLI::App& app, const CliOptions& o) {
  if (app.got_subcommand("occupation")) {
    rp::RunConfig c = base_config(o);
    c.command = "occupation";
    c.model = model_from_cli(o);
    report_run(rp::run(c));
    return 0;
  }
  if (app.got_subcommand("classical")) {
    rp::RunConfig c = base_config(o);
    c.command = "classical";
    report_run(rp::run(c));
    return 0;
  }
  if (app.got_subcommand("riesz-alphas")) {
    const cplx am1(rp::parse_rational(o.alpha_minus_one).get_d(), 0.0);
    const std::string table =
        rp::riesz_alpha_table_json(o.count, am1, o.riesz_depth);
    std::filesystem::create_directories(o.out);
    const std::filesystem::path path =
        std::filesystem::path(o.out) / "riesz-alphas.json";
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot write " + path.string());
    f << table;
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
  }
  if (app.got_subcommand("sweep")) {
    std::ifstream f(o.sweep_file, std::ios::binary);
    if (!f) throw io_error("cannot read sweep file " + o.sweep_file);
    std::ostringstream ss;
    ss << f.rdbuf();
    std::vector<rp::RunConfig> configs =
        rp::sweep_configs_from_json_text(ss.str());
    CLI::App* sub = app.get_subcommand("sweep");
    for (rp::RunConfig& c : configs) {
      c.out_dir = o.out;
      if (!o.formats.empty()) c.formats = o.formats;
      if (sub->count("--threads") > 0) c.threads = o.threads;
    }
    const std::vector<rp::SweepEntry> entries = rp::sweep(configs);
    int failures = 0;
    for (const rp::SweepEntry& e : entries) {
      if (e.error.empty()) {
        report_run(e.record);
      } else {
        ++failures;
        std::fprintf(stderr, "failed %s: %s\n", e.config.stem().c_str(),
                     e.error.c_str());
      }
    }
    std::printf("sweep: %zu runs, %d failed\n", entries.size(), failures);
    return 0;
  }
  if (app.got_subcommand("plot")) {
    std::ifstream f(o.record_file, std::ios::binary);
    if (!f) throw io_error("cannot read record " + o.record_file);
    std::ostringstream ss;
    ss << f.rdbuf();
    const rp::ResultRecord rec = rp::record_from_json(ss.str());
    const std::string svg = rp::render_svg(rec, o.kind);
    std::filesystem::create_directories(o.out);
    const std::filesystem::path path =
        std::filesystem::path(o.out) /
        (rec.config.stem() + "." + o.kind + ".svg");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    out << svg;
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
  }
  std::cerr << app.help() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CliOptions o;
  CLI::App app{"occupation-time distributions for classical and quantum "
               "walks on the integers"};
  app.set_version_flag("--version", occwalk::version_string);
  app.set_config("--config", "", "config file with the same keys as the flags");
  app.require_subcommand(0, 1);

  CLI::App* occ = app.add_subcommand(
      "occupation", "monitored occupation-time distribution of a quantum walk");
  occ->add_option("--model", o.model,
                  "hadamard | constant | polynomial-coin | riesz");
  occ->add_option("--alpha", o.alpha, "constant-coin parameter, e.g. 3/5");
  occ->add_option("--alpha-minus-one", o.alpha_minus_one,
                  "free coefficient of the fair extension");
  occ->add_option("--riesz-depth", o.riesz_depth,
                  "Riesz product truncation depth");
  occ->add_option("--steps", o.steps, "number of monitored steps")->required();
  occ->add_option("--engine", o.engine, "brute | density | transform");
  occ->add_option("--window", o.window,
                  "window half-width override (default steps + 2)");
  add_common(occ, o);

  CLI::App* cls = app.add_subcommand(
      "classical", "occupation time of the fair coin-tossing walk");
  cls->add_option("--mode", o.mode,
                  "exact | enumerate | montecarlo | arcsine");
  cls->add_option("--steps", o.steps, "number of tosses (grid size for arcsine)");
  cls->add_option("--trials", o.trials, "Monte Carlo trials");
  cls->add_option("--seed", o.seed, "Monte Carlo seed");
  add_common(cls, o);

  CLI::App* ra = app.add_subcommand(
      "riesz-alphas", "Verblunsky coefficient table of the Riesz walk");
  ra->add_option("--count", o.count, "emit indices -count..count");
  ra->add_option("--riesz-depth", o.riesz_depth,
                 "Riesz product truncation depth");
  ra->add_option("--alpha-minus-one", o.alpha_minus_one,
                 "free coefficient of the fair extension");
  ra->add_option("--out", o.out, "output directory");

  CLI::App* sw = app.add_subcommand("sweep", "run a batch of configs");
  sw->add_option("file", o.sweep_file, "JSON file with {\"runs\": [...]}")
      ->required();
  add_common(sw, o);

  CLI::App* pl =
      app.add_subcommand("plot", "render an SVG from a stored record");
  pl->add_option("--record", o.record_file, "record JSON (cache or output)")
      ->required();
  pl->add_option("--kind", o.kind, "density | cdf");
  pl->add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    return dispatch(app, o);
  } catch (const occwalk::engine_guard& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const occwalk::light_cone_violation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const occwalk::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
