#include "occwalk/report.hpp"

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "occwalk/riesz.hpp"

namespace occwalk::report {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string slug(std::string_view s) {
  std::string out;
  bool dash = false;
  for (const char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      dash = false;
    } else if (!dash && !out.empty()) {
      out += '-';
      dash = true;
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string model_kind_name(const ModelSpec& m) {
  switch (m.kind) {
    case ModelSpec::Kind::hadamard:
      return "hadamard";
    case ModelSpec::Kind::constant:
      return "constant";
    case ModelSpec::Kind::polynomial_coin:
      return "polynomial-coin";
    case ModelSpec::Kind::riesz:
      return "riesz";
  }
  return "?";
}

ModelSpec model_from_parts(const std::string& kind, const std::string& alpha,
                           const std::string& alpha_minus_one, int depth) {
  cplx am1{};
  if (!alpha_minus_one.empty()) {
    const auto comma = alpha_minus_one.find(',');
    if (comma == std::string::npos) {
      am1 = cplx(parse_rational(alpha_minus_one).get_d(), 0.0);
    } else {
      am1 = cplx(std::stod(alpha_minus_one.substr(0, comma)),
                 std::stod(alpha_minus_one.substr(comma + 1)));
    }
  }
  if (kind == "hadamard") return ModelSpec::hadamard();
  if (kind == "constant") {
    ModelSpec m = ModelSpec::constant(parse_rational(alpha));
    m.alpha_minus_one = am1;
    return m;
  }
  if (kind == "polynomial-coin" || kind == "polynomial_coin" ||
      kind == "polynomial") {
    ModelSpec m = ModelSpec::polynomial();
    m.alpha_minus_one = am1;
    return m;
  }
  if (kind == "riesz") return ModelSpec::riesz(am1, depth);
  throw std::invalid_argument("unknown model: " + kind);
}

void append_kv(std::string& out, std::string_view key, std::string_view val) {
  out += key;
  out += '=';
  out += val;
  out += '\n';
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw io_error("short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  mpq_class q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("cannot parse rational '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string RunConfig::canonical() const {
  std::string out;
  append_kv(out, "command", command);
  if (command == "occupation") {
    const ModelSpec& m = model;
    if (m.kind == ModelSpec::Kind::constant) {
      append_kv(out, "alpha", m.alpha.get_str());
    }
    if (m.kind != ModelSpec::Kind::hadamard) {
      append_kv(out, "alpha_minus_one",
                fmt17(m.alpha_minus_one.real()) + "," +
                    fmt17(m.alpha_minus_one.imag()));
    }
    append_kv(out, "engine", engine);
    append_kv(out, "model", model_kind_name(m));
    if (m.kind == ModelSpec::Kind::riesz) {
      append_kv(out, "riesz_depth", std::to_string(m.riesz_depth));
    }
    append_kv(out, "steps", std::to_string(steps));
    append_kv(out, "window", std::to_string(window));
  } else if (command == "classical") {
    append_kv(out, "mode", mode);
    if (mode == "montecarlo") {
      append_kv(out, "seed", std::to_string(seed));
      append_kv(out, "trials", std::to_string(trials));
    }
    append_kv(out, "steps", std::to_string(steps));
  } else if (command == "riesz-alphas") {
    append_kv(out, "alpha_minus_one",
              fmt17(model.alpha_minus_one.real()) + "," +
                  fmt17(model.alpha_minus_one.imag()));
    append_kv(out, "count", std::to_string(count));
    append_kv(out, "riesz_depth", std::to_string(model.riesz_depth));
  } else {
    throw std::invalid_argument("unknown command: " + command);
  }
  append_kv(out, "version", version_string);
  return out;
}

std::string RunConfig::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

std::string RunConfig::stem() const {
  std::string label;
  if (command == "occupation") {
    label = model.name() + "-n" + std::to_string(steps) + "-" + engine;
  } else if (command == "classical") {
    label = mode + "-n" + std::to_string(steps);
  } else {
    label = "table";
  }
  return slug(command) + "-" + slug(label) + "-" + hash().substr(0, 8);
}

ResultRecord compute(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.config = c;
  rec.hash = c.hash();
  rec.n = c.steps;

  if (c.command == "occupation") {
    if (c.steps < 0) throw std::invalid_argument("steps must be >= 0");
    if (c.engine == "brute" && c.steps > brute_force_max_steps) {
      throw engine_guard("brute engine limited to " +
                         std::to_string(brute_force_max_steps) + " steps");
    }
    const long half = c.window > 0 ? c.window : default_half_width(c.steps);
    const BandedUnitary u = build_for_model(c.model, half);
    const StateVector psi = initial_state(half).on_window(u.window());
    OccupationDistribution d;
    if (c.engine == "brute") {
      d = brute_force(u, psi, c.steps);
    } else if (c.engine == "density") {
      d = density_recursion(u, psi, c.steps);
    } else if (c.engine == "transform") {
      d = transform_recursion(u, psi, c.steps, c.threads);
    } else {
      throw std::invalid_argument("unknown engine: " + c.engine);
    }
    rec.engine = c.engine;
    rec.probs = d.probs;
    rec.cdf = cdf(d);
    rec.diag = d.diag;
  } else if (c.command == "classical") {
    rec.engine = "classical-" + c.mode;
    if (c.mode == "exact" || c.mode == "enumerate") {
      const std::vector<classical::Rational> dist =
          c.mode == "exact"
              ? classical::exact_distribution(c.steps)
              : classical::enumerate_paths(static_cast<int>(c.steps));
      classical::Rational acc = 0;
      for (const classical::Rational& p : dist) {
        acc += p;
        rec.probs.push_back(p.get_d());
        rec.cdf.push_back(acc.get_d());
        rec.exact_probs.push_back(p.get_str());
        rec.exact_cdf.push_back(acc.get_str());
      }
      rec.diag.pre_clamp_sum = acc.get_d();
    } else if (c.mode == "montecarlo") {
      const classical::MonteCarloResult mc = classical::monte_carlo(
          static_cast<int>(c.steps), c.trials, c.seed, c.threads);
      rec.probs = mc.frequencies();
      rec.rng = mc.rng;
      double acc = 0.0;
      for (const double p : rec.probs) {
        acc += p;
        rec.cdf.push_back(std::min(acc, 1.0));
      }
      rec.diag.pre_clamp_sum = acc;
    } else if (c.mode == "arcsine") {
      const long n = c.steps > 0 ? c.steps : 200;
      rec.n = n;
      rec.probs.resize(static_cast<std::size_t>(n) + 1);
      rec.cdf.resize(static_cast<std::size_t>(n) + 1);
      double prev = 0.0;
      for (long r = 0; r <= n; ++r) {
        const double f = classical::arcsine_cdf(static_cast<double>(r) /
                                                static_cast<double>(n));
        rec.probs[static_cast<std::size_t>(r)] = f - prev;
        rec.cdf[static_cast<std::size_t>(r)] = f;
        prev = f;
      }
      rec.diag.pre_clamp_sum = 1.0;
    } else {
      throw std::invalid_argument("unknown classical mode: " + c.mode);
    }
  } else {
    throw std::invalid_argument("unknown command: " + c.command);
  }

  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::string> canonical_map(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  std::istringstream in(c.canonical());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

RunConfig config_from_map(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  auto get = [&kv](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  c.command = get("command", "occupation");
  c.mode = get("mode", "exact");
  c.engine = get("engine", "density");
  c.steps = std::stol(get("steps", "0"));
  c.window = std::stol(get("window", "-1"));
  c.seed = std::stoull(get("seed", "0"));
  c.trials = std::stoull(get("trials", "1000000"));
  c.count = std::stoi(get("count", "32"));
  if (c.command == "occupation" || c.command == "riesz-alphas") {
    c.model = model_from_parts(get("model", "riesz"), get("alpha", "0"),
                               get("alpha_minus_one", "0"),
                               std::stoi(get("riesz_depth", "6")));
  }
  return c;
}

json diagnostics_json(const EngineDiagnostics& d) {
  return json{{"pre_clamp_sum", d.pre_clamp_sum},
              {"boundary_mass", d.boundary_mass},
              {"min_prob", d.min_prob},
              {"max_imag", d.max_imag}};
}

}  // namespace

std::string to_csv(const ResultRecord& r) {
  const bool exact = !r.exact_probs.empty();
  std::string out = "r,ratio,prob,cdf\n";
  const double n = r.n > 0 ? static_cast<double>(r.n) : 1.0;
  for (std::size_t i = 0; i < r.probs.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt17(static_cast<double>(i) / n);
    out += ',';
    out += exact ? r.exact_probs[i] : fmt17(r.probs[i]);
    out += ',';
    out += exact ? r.exact_cdf[i] : fmt17(r.cdf[i]);
    out += '\n';
  }
  return out;
}

std::string to_output_json(const ResultRecord& r) {
  json j;
  j["config"] = canonical_map(r.config);
  j["engine"] = r.engine;
  j["n"] = r.n;
  j["probs"] = r.probs;
  j["cdf"] = r.cdf;
  if (!r.exact_probs.empty()) {
    j["exact_probs"] = r.exact_probs;
    j["exact_cdf"] = r.exact_cdf;
  }
  if (!r.rng.empty()) j["rng"] = r.rng;
  j["diagnostics"] = diagnostics_json(r.diag);
  j["version"] = r.version;
  return j.dump(2) + "\n";
}

std::string to_cache_json(const ResultRecord& r) {
  json j;
  j["config"] = canonical_map(r.config);
  j["hash"] = r.hash;
  j["engine"] = r.engine;
  j["n"] = r.n;
  j["probs"] = r.probs;
  j["cdf"] = r.cdf;
  j["exact_probs"] = r.exact_probs;
  j["exact_cdf"] = r.exact_cdf;
  j["rng"] = r.rng;
  j["diagnostics"] = diagnostics_json(r.diag);
  j["version"] = r.version;
  j["wall_ms"] = r.wall_ms;
  return j.dump(2) + "\n";
}

ResultRecord record_from_json(const std::string& text) {
  const json j = json::parse(text);
  ResultRecord r;
  std::map<std::string, std::string> kv;
  for (const auto& [key, val] : j.at("config").items()) {
    kv[key] = val.get<std::string>();
  }
  r.config = config_from_map(kv);
  r.hash =
      j.contains("hash") ? j.at("hash").get<std::string>() : r.config.hash();
  r.engine = j.at("engine").get<std::string>();
  r.n = j.at("n").get<long>();
  r.probs = j.at("probs").get<std::vector<double>>();
  r.cdf = j.at("cdf").get<std::vector<double>>();
  if (j.contains("exact_probs")) {
    r.exact_probs = j.at("exact_probs").get<std::vector<std::string>>();
    r.exact_cdf = j.at("exact_cdf").get<std::vector<std::string>>();
  }
  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    r.diag.pre_clamp_sum = d.value("pre_clamp_sum", 0.0);
    r.diag.boundary_mass = d.value("boundary_mass", 0.0);
    r.diag.min_prob = d.value("min_prob", 0.0);
    r.diag.max_imag = d.value("max_imag", 0.0);
  }
  r.rng = j.value("rng", std::string());
  r.version = j.value("version", std::string(version_string));
  r.wall_ms = j.value("wall_ms", 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// svg
// ---------------------------------------------------------------------------

namespace {

constexpr double plot_x0 = 70.0, plot_x1 = 770.0;
constexpr double plot_y0 = 460.0, plot_y1 = 40.0;  // svg y grows downward

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string render_svg(const ResultRecord& r, const std::string& kind) {
  if (r.probs.empty()) throw std::invalid_argument("empty record");
  const bool density = kind == "density";
  if (!density && kind != "cdf") {
    throw std::invalid_argument("plot kind must be density or cdf");
  }
  const std::vector<double>& ys = density ? r.probs : r.cdf;
  double ymax = 1.0;
  if (density) {
    ymax = 0.0;
    for (const double y : ys) ymax = std::max(ymax, y);
    ymax = ymax > 0.0 ? ymax * 1.05 : 1.0;
  }
  const double n = r.n > 0 ? static_cast<double>(r.n) : 1.0;
  auto px = [](double x) { return plot_x0 + (plot_x1 - plot_x0) * x; };
  auto py = [ymax](double y) {
    return plot_y0 + (plot_y1 - plot_y0) * (y / ymax);
  };

  std::string points;
  if (density) {
    for (std::size_t i = 0; i < ys.size(); ++i) {
      points += fmt_px(px(static_cast<double>(i) / n)) + "," +
                fmt_px(py(ys[i])) + " ";
    }
  } else {
    // step curve
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double x = px(static_cast<double>(i) / n);
      if (i > 0) points += fmt_px(x) + "," + fmt_px(py(ys[i - 1])) + " ";
      points += fmt_px(x) + "," + fmt_px(py(ys[i])) + " ";
    }
  }
  if (!points.empty()) points.pop_back();

  std::string title =
      r.config.command == "occupation" ? r.config.model.name() : r.engine;
  title += " n=" + std::to_string(r.n) + " engine=" + r.engine + " " + kind;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" "
      "data-config-hash=\"" +
      r.hash + "\">\n";
  svg += "<title>" + title + "</title>\n";
  svg +=
      "<rect x=\"70\" y=\"40\" width=\"700\" height=\"420\" fill=\"none\" "
      "stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double x = px(t / 4.0);
    svg += "<line x1=\"" + fmt_px(x) + "\" y1=\"460\" x2=\"" + fmt_px(x) +
           "\" y2=\"466\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + fmt_px(x) +
           "\" y=\"482\" font-size=\"12\" text-anchor=\"middle\">" +
           fmt_tick(t / 4.0) + "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double yv = ymax * t / 4.0;
    const double y = py(yv);
    svg += "<line x1=\"64\" y1=\"" + fmt_px(y) + "\" x2=\"70\" y2=\"" +
           fmt_px(y) + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"60\" y=\"" + fmt_px(y + 4.0) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt_tick(yv) +
           "</text>\n";
  }
  svg +=
      "<text x=\"420\" y=\"498\" font-size=\"13\" "
      "text-anchor=\"middle\">relative occupation r/n</text>\n";
  svg += "<text x=\"420\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">" +
         title + "</text>\n";
  svg +=
      "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
      "points=\"" +
      points + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

// ---------------------------------------------------------------------------
// cache-aware runs
// ---------------------------------------------------------------------------

ResultRecord run(const RunConfig& c) {
  for (const std::string& f : c.formats) {
    if (f != "csv" && f != "json" && f != "svg") {
      throw std::invalid_argument("unknown format: " + f);
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir / "cache", ec);
  if (ec) throw io_error("cannot create " + (c.out_dir / "cache").string());

  const std::filesystem::path cpath = c.out_dir / "cache" / (c.hash() + ".json");
  ResultRecord rec;
  if (std::filesystem::exists(cpath)) {
    rec = record_from_json(read_file(cpath));
    rec.from_cache = true;
    rec.config.formats = c.formats;
    rec.config.out_dir = c.out_dir;
    rec.config.threads = c.threads;
  } else {
    rec = compute(c);
    const std::filesystem::path tmp = cpath.string() + ".tmp";
    write_file(tmp, to_cache_json(rec));
    std::filesystem::rename(tmp, cpath, ec);
    if (ec) throw io_error("cannot move cache record into place");
  }

  const std::string stem = c.stem();
  for (const std::string& f : c.formats) {
    if (f == "csv") {
      write_file(c.out_dir / (stem + ".csv"), to_csv(rec));
    } else if (f == "json") {
      write_file(c.out_dir / (stem + ".json"), to_output_json(rec));
    } else {
      write_file(c.out_dir / (stem + ".density.svg"),
                 render_svg(rec, "density"));
      write_file(c.out_dir / (stem + ".cdf.svg"), render_svg(rec, "cdf"));
    }
  }
  return rec;
}

std::vector<SweepEntry> sweep(const std::vector<RunConfig>& configs) {
  if (configs.empty()) {
    throw std::invalid_argument("sweep needs at least one run");
  }
  std::vector<SweepEntry> entries;
  json index = json::array();
  for (const RunConfig& c : configs) {
    SweepEntry e;
    e.config = c;
    json row;
    row["stem"] = c.stem();
    row["hash"] = c.hash();
    try {
      e.record = run(c);
      row["n"] = e.record.n;
      row["engine"] = e.record.engine;
      row["error"] = nullptr;
    } catch (const std::exception& ex) {
      e.error = ex.what();
      row["error"] = e.error;
    }
    entries.push_back(std::move(e));
    index.push_back(std::move(row));
  }
  json top;
  top["runs"] = std::move(index);
  top["version"] = version_string;
  write_file(configs.front().out_dir / "index.json", top.dump(2) + "\n");
  return entries;
}

// ---------------------------------------------------------------------------
// config parsing for sweep files
// ---------------------------------------------------------------------------

namespace {

RunConfig config_from_json_obj(const json& j) {
  RunConfig c;
  auto gets = [&j](const char* a, const char* b,
                   const std::string& fallback) -> std::string {
    if (j.contains(a)) {
      return j.at(a).is_string() ? j.at(a).get<std::string>() : j.at(a).dump();
    }
    if (b != nullptr && j.contains(b)) {
      return j.at(b).is_string() ? j.at(b).get<std::string>() : j.at(b).dump();
    }
    return fallback;
  };
  c.command = gets("command", nullptr, "occupation");
  c.engine = gets("engine", nullptr, "density");
  c.mode = gets("mode", nullptr, "exact");
  c.steps = std::stol(gets("steps", nullptr, "0"));
  c.window = std::stol(gets("window", nullptr, "-1"));
  c.seed = std::stoull(gets("seed", nullptr, "0"));
  c.trials = std::stoull(gets("trials", nullptr, "1000000"));
  c.threads = static_cast<unsigned>(std::stoul(gets("threads", nullptr, "1")));
  c.count = std::stoi(gets("count", nullptr, "32"));
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  if (j.contains("format")) {
    c.formats.clear();
    if (j.at("format").is_array()) {
      for (const auto& f : j.at("format")) {
        c.formats.push_back(f.get<std::string>());
      }
    } else {
      c.formats.push_back(j.at("format").get<std::string>());
    }
  }
  if (c.command == "occupation" || c.command == "riesz-alphas") {
    c.model = model_from_parts(
        gets("model", nullptr, "hadamard"), gets("alpha", nullptr, "0"),
        gets("alpha-minus-one", "alpha_minus_one", "0"),
        std::stoi(gets("riesz-depth", "riesz_depth", "6")));
  }
  return c;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  return config_from_json_obj(json::parse(text));
}

std::vector<RunConfig> sweep_configs_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  const json& runs = j.contains("runs") ? j.at("runs") : j;
  if (!runs.is_array()) {
    throw std::invalid_argument("sweep file must hold an array of runs");
  }
  std::vector<RunConfig> configs;
  for (const auto& obj : runs) configs.push_back(config_from_json_obj(obj));
  return configs;
}

std::string riesz_alpha_table_json(int count, cplx alpha_minus_one, int depth) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const VerblunskySequence seq =
      riesz::riesz_walk_alphas(count + 1, alpha_minus_one, depth);
  json rows = json::array();
  for (long jx = -count; jx <= count; ++jx) {
    const cplx a = seq.alpha(jx);
    json row;
    row["index"] = jx;
    row["re"] = a.real();
    row["im"] = a.imag();
    row["rho"] = seq.rho(jx);
    rows.push_back(std::move(row));
  }
  json top;
  top["alphas"] = std::move(rows);
  top["depth"] = depth;
  top["version"] = version_string;
  return top.dump(2) + "\n";
}

}  // namespace occwalk::report
