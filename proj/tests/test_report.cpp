#include <doctest.h>

#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "occwalk/report.hpp"

using namespace occwalk;
namespace rp = occwalk::report;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("occwalk-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

// minimal well-formedness check: declaration, one root, balanced tags
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  if (text.rfind("<?xml", 0) == 0) {
    i = text.find("?>");
    if (i == std::string::npos) return false;
    i += 2;
  }
  int roots = 0;
  while (i < text.size()) {
    const std::size_t open = text.find('<', i);
    if (open == std::string::npos) break;
    const std::size_t close = text.find('>', open);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(open + 1, close - open - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag[0] == '/') {
      if (stack.empty()) return false;
      if (stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      if (stack.empty()) ++roots;
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (!self_closing) {
      stack.push_back(name);
    } else if (stack.empty()) {
      ++roots;
    }
  }
  return stack.empty() && roots == 1;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("hadamard n=2 brute run writes the expected csv rows") {
  TempDir tmp;
  rp::RunConfig c;
  c.command = "occupation";
  c.model = ModelSpec::hadamard();
  c.engine = "brute";
  c.steps = 2;
  c.out_dir = tmp.path;
  c.formats = {"csv"};
  const rp::ResultRecord rec = rp::run(c);
  CHECK(!rec.from_cache);

  const auto rows = parse_csv(slurp(tmp.path / (c.stem() + ".csv")));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"r", "ratio", "prob", "cdf"});
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(rows[2][2]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::stod(rows[3][2]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("identical configs are served from cache with identical bytes") {
  TempDir tmp;
  rp::RunConfig c;
  c.command = "occupation";
  c.model = ModelSpec::constant(mpq_class(3, 5));
  c.engine = "density";
  c.steps = 6;
  c.out_dir = tmp.path;
  c.formats = {"csv", "json", "svg"};

  const rp::ResultRecord first = rp::run(c);
  std::map<std::string, std::string> bytes;
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    if (entry.is_regular_file()) {
      bytes[entry.path().filename().string()] = slurp(entry.path());
    }
  }
  const rp::ResultRecord second = rp::run(c);
  CHECK(second.from_cache);
  CHECK(second.hash == first.hash);
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    if (entry.is_regular_file()) {
      CHECK(slurp(entry.path()) == bytes[entry.path().filename().string()]);
    }
  }
  CHECK(first.probs == second.probs);
}

TEST_CASE("classical exact mode serializes rational strings") {
  TempDir tmp;
  rp::RunConfig c;
  c.command = "classical";
  c.mode = "exact";
  c.steps = 4;
  c.out_dir = tmp.path;
  c.formats = {"csv", "json"};
  rp::run(c);

  const auto rows = parse_csv(slurp(tmp.path / (c.stem() + ".csv")));
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][2] == "3/8");
  CHECK(rows[2][2] == "0");
  CHECK(rows[3][2] == "1/4");
  CHECK(rows[4][2] == "0");
  CHECK(rows[5][2] == "3/8");
  CHECK(rows[5][3] == "1");
}

TEST_CASE("csv probability columns sum to one") {
  rp::RunConfig c;
  c.command = "occupation";
  c.model = ModelSpec::hadamard();
  c.engine = "transform";
  c.steps = 24;
  const rp::ResultRecord rec = rp::compute(c);
  const auto rows = parse_csv(rp::to_csv(rec));
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][2]);
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("output json follows the schema") {
  rp::RunConfig c;
  c.command = "occupation";
  c.model = ModelSpec::riesz();
  c.engine = "density";
  c.steps = 5;
  const rp::ResultRecord rec = rp::compute(c);
  const std::string text = rp::to_output_json(rec);
  CHECK(text.find("\"config\"") != std::string::npos);
  CHECK(text.find("\"engine\"") != std::string::npos);
  CHECK(text.find("\"probs\"") != std::string::npos);
  CHECK(text.find("\"cdf\"") != std::string::npos);
  CHECK(text.find("\"pre_clamp_sum\"") != std::string::npos);
  CHECK(text.find("\"boundary_mass\"") != std::string::npos);
  CHECK(text.find("\"version\"") != std::string::npos);
  // serialization is deterministic
  CHECK(text == rp::to_output_json(rec));
  // cache round trip preserves the payload
  const rp::ResultRecord back = rp::record_from_json(rp::to_cache_json(rec));
  CHECK(back.probs == rec.probs);
  CHECK(back.cdf == rec.cdf);
  CHECK(back.config.canonical() == rec.config.canonical());
  CHECK(back.hash == rec.hash);
}

TEST_CASE("svg output") {
  rp::RunConfig c;
  c.command = "classical";
  c.mode = "arcsine";
  c.steps = 200;
  const rp::ResultRecord rec = rp::compute(c);

  SUBCASE("well-formed xml with one polyline per series") {
    for (const std::string kind : {"density", "cdf"}) {
      const std::string svg = rp::render_svg(rec, kind);
      CHECK(xml_well_formed(svg));
      CHECK(count_occurrences(svg, "<polyline") == 1);
      CHECK(count_occurrences(svg, "<path") == 0);
      CHECK(svg.find("data-config-hash=\"" + rec.hash + "\"") !=
            std::string::npos);
    }
  }
  SUBCASE("arcsine cdf curve passes through the midpoint pixel") {
    // x = 1/2 maps to px 420, F(1/2) = 1/2 maps to py 250
    const std::string svg = rp::render_svg(rec, "cdf");
    CHECK(svg.find("420.00,250.00") != std::string::npos);
    CHECK(rec.cdf[100] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("empty record is rejected") {
    rp::ResultRecord empty;
    CHECK_THROWS_AS(rp::render_svg(empty, "density"), std::invalid_argument);
    CHECK_THROWS_AS(rp::render_svg(rec, "scatter"), std::invalid_argument);
  }
}

TEST_CASE("sweep collects per-run errors without failing siblings") {
  TempDir tmp;
  std::vector<rp::RunConfig> configs;
  rp::RunConfig a;
  a.command = "occupation";
  a.model = ModelSpec::hadamard();
  a.engine = "brute";
  a.steps = 4;
  a.out_dir = tmp.path;
  configs.push_back(a);
  rp::RunConfig bad = a;
  bad.steps = 25;  // over the brute guard
  configs.push_back(bad);
  rp::RunConfig cl;
  cl.command = "classical";
  cl.mode = "exact";
  cl.steps = 5;
  cl.out_dir = tmp.path;
  configs.push_back(cl);

  const std::vector<rp::SweepEntry> entries = rp::sweep(configs);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].error.empty());
  CHECK(!entries[1].error.empty());
  CHECK(entries[2].error.empty());
  CHECK(fs::exists(tmp.path / "index.json"));
  const std::string index = slurp(tmp.path / "index.json");
  CHECK(index.find("\"error\": null") != std::string::npos);

  CHECK_THROWS_AS(rp::sweep({}), std::invalid_argument);
}

TEST_CASE("sweep config parsing") {
  const std::string text = R"({"runs": [
    {"command": "occupation", "model": "constant", "alpha": "12/13",
     "steps": 120, "engine": "transform", "threads": 2},
    {"command": "classical", "mode": "montecarlo", "steps": 9,
     "trials": 1000, "seed": 7}
  ]})";
  const std::vector<rp::RunConfig> configs =
      rp::sweep_configs_from_json_text(text);
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].model.kind == ModelSpec::Kind::constant);
  CHECK(configs[0].model.alpha == mpq_class(12, 13));
  CHECK(configs[0].steps == 120);
  CHECK(configs[0].engine == "transform");
  CHECK(configs[1].mode == "montecarlo");
  CHECK(configs[1].trials == 1000);
}

TEST_CASE("rational parsing") {
  CHECK(rp::parse_rational("3/5") == mpq_class(3, 5));
  CHECK(rp::parse_rational("-1/2") == mpq_class(-1, 2));
  CHECK(rp::parse_rational("4/8") == mpq_class(1, 2));
  CHECK(rp::parse_rational("7") == 7);
  CHECK_THROWS_AS(rp::parse_rational("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(rp::parse_rational(""), std::invalid_argument);
}

TEST_CASE("config hash ignores execution details") {
  rp::RunConfig a;
  a.command = "occupation";
  a.model = ModelSpec::hadamard();
  a.steps = 12;
  rp::RunConfig b = a;
  b.threads = 8;
  b.out_dir = "elsewhere";
  b.formats = {"svg"};
  CHECK(a.hash() == b.hash());
  rp::RunConfig c = a;
  c.steps = 13;
  CHECK(a.hash() != c.hash());
  rp::RunConfig d = a;
  d.engine = "transform";
  CHECK(a.hash() != d.hash());
}

TEST_CASE("riesz alpha table") {
  const std::string text = rp::riesz_alpha_table_json(6, cplx{}, 6);
  CHECK(text.find("\"index\": -6") != std::string::npos);
  CHECK(text.find("\"index\": 6") != std::string::npos);
  CHECK(text.find("\"rho\"") != std::string::npos);
}

TEST_SUITE_END();
