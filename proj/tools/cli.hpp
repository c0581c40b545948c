#pragma once

// quantcurv command-line driver: config parsing, CSV output, summaries.
//
// Config (JSON):
//   { "seed": 2024, "workers": 2,
//     "experiments": [ { "experiment": "sphere-convergence",
//                        "output_path": "results/sphere.csv",
//                        "parameters": { ... } } ] }
// Unknown keys anywhere are errors. See README.md for the parameter lists.

#include "quantcurv/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <thread>

namespace quantcurv::cli {

using nlohmann::json;
namespace ex = quantcurv::experiments;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

namespace detail {

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  require_object(j, where);
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

inline Complex read_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Either "xixj", "xi" (1-based coordinates) or
/// {"quadratic": 3x3, "linear": [3], "constant": c} for 1/2 X^T Q X + l.X + c.
inline SphereHamiltonian read_hamiltonian(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto coord = [&](char c) {
      if (c < '1' || c > '3') throw ConfigError(where + ": bad coordinate in '" + s + "'");
      return c - '1';
    };
    if (s.size() == 4 && s[0] == 'x' && s[2] == 'x') return SphereHamiltonian::product(coord(s[1]), coord(s[3]));
    if (s.size() == 2 && s[0] == 'x') {
      Vec3 l = Vec3::Zero();
      l[coord(s[1])] = 1.0;
      return {Mat3::Zero(), l, 0.0};
    }
    throw ConfigError(where + ": cannot parse Hamiltonian '" + s + "'");
  }
  allow_keys(j, where, {"quadratic", "linear", "constant"});
  Mat3 q = Mat3::Zero();
  Vec3 l = Vec3::Zero();
  double c = 0.0;
  if (j.contains("quadratic")) {
    const json& a = j["quadratic"];
    if (!a.is_array() || a.size() != 3) throw ConfigError(where + ".quadratic: expected a 3x3 array");
    for (int r = 0; r < 3; ++r) {
      if (!a[r].is_array() || a[r].size() != 3) throw ConfigError(where + ".quadratic: expected a 3x3 array");
      for (int k = 0; k < 3; ++k) {
        if (!a[r][k].is_number()) throw ConfigError(where + ".quadratic: entries must be numbers");
        q(r, k) = a[r][k].get<double>();
      }
    }
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 0.0) throw ConfigError(where + ".quadratic: must be symmetric");
  }
  if (j.contains("linear")) {
    const json& a = j["linear"];
    if (!a.is_array() || a.size() != 3) throw ConfigError(where + ".linear: expected 3 numbers");
    for (int r = 0; r < 3; ++r) {
      if (!a[r].is_number()) throw ConfigError(where + ".linear: entries must be numbers");
      l[r] = a[r].get<double>();
    }
  }
  read(j, "constant", c, where);
  return {q, l, c};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

using Params = std::variant<ex::BargmannParams, ex::SphereParams, ex::SchrodingerParams, ex::TeichmullerParams>;

struct ExperimentConfig {
  std::string experiment;
  std::string output_path;
  Params parameters;
  std::string hash;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<ExperimentConfig> experiments;
};

inline ex::BargmannParams parse_bargmann(const json& j, const std::string& w) {
  using detail::read;
  detail::allow_keys(j, w, {"n_list", "projector_levels", "N", "D", "random_pairs", "tol_projector", "tol_curvature",
                            "tol_scalar", "tol_ratio"});
  ex::BargmannParams p;
  read(j, "n_list", p.n_list, w);
  read(j, "projector_levels", p.projector_levels, w);
  read(j, "N", p.level, w);
  read(j, "D", p.max_degree, w);
  read(j, "random_pairs", p.random_pairs, w);
  read(j, "tol_projector", p.tol_projector, w);
  read(j, "tol_curvature", p.tol_curvature, w);
  read(j, "tol_scalar", p.tol_scalar, w);
  read(j, "tol_ratio", p.tol_ratio, w);
  return p;
}

inline ex::SphereParams parse_sphere(const json& j, const std::string& w) {
  using detail::read;
  detail::allow_keys(j, w, {"N_list", "h1", "h2", "ratio_max", "ratio_from_level", "slope_range", "trace_tol",
                            "trace_noise", "gram_tol", "cross_method", "fd_level", "fd_step", "fd_tol",
                            "fd_ratio_min"});
  ex::SphereParams p;
  read(j, "N_list", p.levels, w);
  if (j.contains("h1")) p.h1 = detail::read_hamiltonian(j["h1"], w + ".h1");
  if (j.contains("h2")) p.h2 = detail::read_hamiltonian(j["h2"], w + ".h2");
  read(j, "ratio_max", p.ratio_max, w);
  read(j, "ratio_from_level", p.ratio_from_level, w);
  if (j.contains("slope_range")) {
    std::vector<double> r;
    read(j, "slope_range", r, w);
    if (r.size() != 2) throw ConfigError(w + ".slope_range: expected [lo, hi]");
    p.slope_lo = r[0];
    p.slope_hi = r[1];
  }
  read(j, "trace_tol", p.trace_tol, w);
  read(j, "trace_noise", p.trace_noise, w);
  read(j, "gram_tol", p.gram_tol, w);
  read(j, "cross_method", p.cross_method, w);
  read(j, "fd_level", p.fd_level, w);
  read(j, "fd_step", p.fd_step, w);
  read(j, "fd_tol", p.fd_tol, w);
  read(j, "fd_ratio_min", p.fd_ratio_min, w);
  return p;
}

inline ex::SchrodingerParams parse_schrodinger(const json& j, const std::string& w) {
  using detail::read;
  detail::allow_keys(j, w, {"N", "dt", "t_end", "pt1_tol", "residual_samples", "method", "cases"});
  ex::SchrodingerParams p;
  read(j, "N", p.level, w);
  read(j, "dt", p.dt, w);
  read(j, "t_end", p.t_end, w);
  read(j, "pt1_tol", p.pt1_tol, w);
  read(j, "residual_samples", p.residual_samples, w);
  if (j.contains("method")) {
    std::string m;
    read(j, "method", m, w);
    if (m == "frame-coefficients")
      p.method = TransportMethod::kFrameCoefficients;
    else if (m == "grid-retraction")
      p.method = TransportMethod::kGridRetraction;
    else
      throw ConfigError(w + ".method: expected frame-coefficients or grid-retraction");
  }
  if (j.contains("cases")) {
    if (!j["cases"].is_array()) throw ConfigError(w + ".cases: expected an array");
    p.cases.clear();
    for (std::size_t i = 0; i < j["cases"].size(); ++i) {
      const json& c = j["cases"][i];
      const std::string cw = w + ".cases[" + std::to_string(i) + "]";
      detail::allow_keys(c, cw, {"name", "hamiltonian", "grid_factor", "tolerance"});
      if (!c.contains("hamiltonian")) throw ConfigError(cw + ": missing 'hamiltonian'");
      ex::TransportCase tc{"case" + std::to_string(i), detail::read_hamiltonian(c["hamiltonian"], cw + ".hamiltonian")};
      read(c, "name", tc.name, cw);
      read(c, "grid_factor", tc.grid_factor, cw);
      read(c, "tolerance", tc.tolerance, cw);
      p.cases.push_back(tc);
    }
  }
  return p;
}

inline ex::TeichmullerParams parse_teichmuller(const json& j, const std::string& w) {
  using detail::read;
  detail::allow_keys(j, w, {"tuples", "tol_pairing", "tol_structure", "tol_wp", "wp_samples"});
  ex::TeichmullerParams p;
  read(j, "tuples", p.tuples, w);
  read(j, "tol_pairing", p.tol_pairing, w);
  read(j, "tol_structure", p.tol_structure, w);
  read(j, "tol_wp", p.tol_wp, w);
  if (j.contains("wp_samples")) {
    if (!j["wp_samples"].is_array()) throw ConfigError(w + ".wp_samples: expected an array");
    for (std::size_t i = 0; i < j["wp_samples"].size(); ++i) {
      const json& s = j["wp_samples"][i];
      const std::string sw = w + ".wp_samples[" + std::to_string(i) + "]";
      detail::allow_keys(s, sw, {"weight", "sigma", "phi1", "phi2"});
      ex::WpSample ws;
      read(s, "weight", ws.weight, sw);
      read(s, "sigma", ws.sigma, sw);
      if (!s.contains("phi1") || !s.contains("phi2")) throw ConfigError(sw + ": phi1 and phi2 are required");
      ws.phi1 = detail::read_complex(s["phi1"], sw + ".phi1");
      ws.phi2 = detail::read_complex(s["phi2"], sw + ".phi2");
      p.wp_samples.push_back(ws);
    }
  }
  return p;
}

/// Parses and validates every experiment; nothing is computed here.
inline RunConfig parse_config(const json& root, std::optional<std::uint64_t> seed_override = {},
                              std::optional<int> workers_override = {}) {
  detail::allow_keys(root, "config", {"seed", "workers", "experiments"});
  RunConfig cfg;
  detail::read(root, "seed", cfg.seed, "config");
  detail::read(root, "workers", cfg.workers, "config");
  if (seed_override) cfg.seed = *seed_override;
  if (workers_override) cfg.workers = *workers_override;
  if (cfg.workers < 1) throw ConfigError("config.workers: must be at least 1");
  if (!root.contains("experiments") || !root["experiments"].is_array() || root["experiments"].empty())
    throw ConfigError("config.experiments: expected a non-empty array");

  std::set<std::string> outputs;
  for (std::size_t i = 0; i < root["experiments"].size(); ++i) {
    const json& e = root["experiments"][i];
    const std::string w = "config.experiments[" + std::to_string(i) + "]";
    detail::allow_keys(e, w, {"experiment", "output_path", "parameters"});
    ExperimentConfig ec;
    detail::read(e, "experiment", ec.experiment, w);
    detail::read(e, "output_path", ec.output_path, w);
    if (ec.output_path.empty()) throw ConfigError(w + ".output_path: required");
    if (!outputs.insert(ec.output_path).second) throw ConfigError(w + ".output_path: duplicate '" + ec.output_path + "'");
    const json params = e.contains("parameters") ? e["parameters"] : json::object();
    const std::string pw = w + ".parameters";
    try {
      if (ec.experiment == "bargmann-curvature") {
        auto p = parse_bargmann(params, pw);
        p.validate();
        ec.parameters = p;
      } else if (ec.experiment == "sphere-convergence") {
        auto p = parse_sphere(params, pw);
        p.validate();
        ec.parameters = p;
      } else if (ec.experiment == "schrodinger-intertwine") {
        auto p = parse_schrodinger(params, pw);
        p.validate();
        ec.parameters = p;
      } else if (ec.experiment == "teichmuller-symbol") {
        auto p = parse_teichmuller(params, pw);
        p.validate();
        ec.parameters = p;
      } else {
        throw ConfigError(w + ".experiment: unknown experiment '" + ec.experiment + "'");
      }
    } catch (const quantcurv::Error& err) {
      throw ConfigError(pw + ": " + err.what());
    }
    const json keyed{{"seed", cfg.seed}, {"experiment", ec.experiment}, {"parameters", params}};
    ec.hash = hex64(fnv1a(keyed.dump()));
    cfg.experiments.push_back(std::move(ec));
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {},
                             std::optional<int> workers_override = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' does not parse: " + e.what());
  }
  return parse_config(root, seed_override, workers_override);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_cell(const ex::Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, long long>)
          return std::to_string(v);
        else
          return csv_escape(v);
      },
      c);
}

inline const char* comparison_name(ex::Comparison c) {
  switch (c) {
    case ex::Comparison::kAtMost: return "<=";
    case ex::Comparison::kAtLeast: return ">=";
    case ex::Comparison::kInRange: return "in";
    case ex::Comparison::kReport: return "report";
  }
  return "?";
}

/// CSV body (header plus rows), without the timestamp line.
inline std::string csv_body(const ex::ExperimentResult& r, const std::string& hash) {
  std::vector<std::string> names;
  for (const auto& row : r.rows)
    for (const auto& [k, v] : row.fields)
      if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);

  std::ostringstream os;
  os << "config_hash,experiment,check";
  for (const auto& n : names) os << ',' << n;
  os << ",value,comparison,tolerance,tolerance_hi,pass\n";
  for (const auto& row : r.rows) {
    os << hash << ',' << r.experiment << ',' << csv_escape(row.check);
    for (const auto& n : names) {
      os << ',';
      auto it = std::find_if(row.fields.begin(), row.fields.end(), [&](const auto& f) { return f.first == n; });
      if (it != row.fields.end()) os << format_cell(it->second);
    }
    const bool ranged = row.comparison == ex::Comparison::kInRange;
    const bool reported = row.comparison == ex::Comparison::kReport;
    os << ',' << format_double(row.value) << ',' << comparison_name(row.comparison) << ','
       << (reported ? "" : format_double(row.tolerance)) << ',' << (ranged ? format_double(row.tolerance_hi) : "")
       << ',' << (row.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

inline std::string timestamp_line() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << "# generated " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << " by quantcurv\n";
  return os.str();
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct Outcome {
  std::optional<ex::ExperimentResult> result;
  std::string error;
};

inline ex::ExperimentResult run_experiment(const ExperimentConfig& e, std::uint64_t seed) {
  // Each experiment gets its own stream derived from the config seed.
  const std::uint64_t stream = seed ^ fnv1a(e.experiment);
  return std::visit(
      [&](const auto& p) -> ex::ExperimentResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ex::BargmannParams>)
          return ex::run_bargmann(p, stream);
        else if constexpr (std::is_same_v<T, ex::SphereParams>)
          return ex::run_sphere(p);
        else if constexpr (std::is_same_v<T, ex::SchrodingerParams>)
          return ex::run_schrodinger(p);
        else
          return ex::run_teichmuller(p, stream);
      },
      e.parameters);
}

inline std::vector<Outcome> run_all(const RunConfig& cfg) {
  std::vector<Outcome> outcomes(cfg.experiments.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cfg.experiments.size(); i = next++) {
      try {
        outcomes[i].result = run_experiment(cfg.experiments[i], cfg.seed);
      } catch (const std::exception& err) {
        outcomes[i].error = err.what();
      }
    }
  };
  const int k = std::min<int>(cfg.workers, static_cast<int>(cfg.experiments.size()));
  std::vector<std::future<void>> pool;
  for (int i = 0; i < k; ++i) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return outcomes;
}

inline int run(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
               std::optional<int> workers, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path, seed, workers);
  } catch (const ConfigError& e) {
    err << "cli: config error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::vector<Outcome> outcomes = run_all(cfg);
  bool all_pass = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const ExperimentConfig& e = cfg.experiments[i];
    const Outcome& o = outcomes[i];
    if (!o.result) {
      err << e.experiment << ": error: " << o.error << '\n';
      out << "FAIL " << e.experiment << '\n';
      all_pass = false;
      continue;
    }
    try {
      write_atomically(e.output_path, timestamp_line() + csv_body(*o.result, e.hash));
    } catch (const std::exception& x) {
      err << "cli: " << x.what() << '\n';
      return kExitUsage;
    }
    for (const auto& row : o.result->rows) {
      if (row.pass) continue;
      err << e.experiment << ": check " << row.check << " failed: value " << format_double(row.value) << ' '
          << comparison_name(row.comparison) << ' ' << format_double(row.tolerance);
      if (row.comparison == ex::Comparison::kInRange) err << ' ' << format_double(row.tolerance_hi);
      err << '\n';
    }
    const bool pass = o.result->passed();
    all_pass = all_pass && pass;
    out << (pass ? "PASS " : "FAIL ") << e.experiment << " -> " << e.output_path << '\n';
  }
  return all_pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// summarize
// ---------------------------------------------------------------------------

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw FormatError("unterminated quote");
  cells.push_back(cur);
  return cells;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
};

inline CsvTable read_csv(std::istream& in, const std::string& name) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw FormatError(name + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw FormatError(name + ": missing header row");
  for (const char* c : {"experiment", "check", "pass"})
    if (t.column(c) < 0) throw FormatError(name + ": missing column '" + c + "'");
  return t;
}

inline int summarize(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  if (paths.empty()) {
    err << "summarize: no CSV files given\n";
    return kExitUsage;
  }
  bool all_pass = true;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      err << "summarize: cannot open '" << path << "'\n";
      return kExitUsage;
    }
    CsvTable t;
    try {
      t = read_csv(in, path);
    } catch (const FormatError& e) {
      err << "summarize: format error: " << e.what() << '\n';
      return kExitUsage;
    }
    const int ce = t.column("experiment"), cc = t.column("check"), cp = t.column("pass");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::string>> failures;
    for (const auto& r : t.rows) {
      if (std::find(order.begin(), order.end(), r[ce]) == order.end()) order.push_back(r[ce]);
      if (r[cp] != "true" && r[cp] != "false") {
        err << "summarize: format error: " << path << ": pass must be true or false\n";
        return kExitUsage;
      }
      if (r[cp] == "false") failures[r[ce]].push_back(r[cc]);
    }
    for (const auto& e : order) {
      const auto it = failures.find(e);
      const bool pass = it == failures.end();
      all_pass = all_pass && pass;
      out << (pass ? "PASS " : "FAIL ") << e;
      if (!pass) {
        out << " failing:";
        for (const auto& c : it->second) out << ' ' << c;
      }
      if (e == "sphere-convergence") {
        const int cn = t.column("N"), cv = t.column("eps_N");
        if (cn < 0 || cv < 0) {
          err << "summarize: format error: " << path << ": sphere-convergence needs columns N and eps_N\n";
          return kExitUsage;
        }
        std::vector<double> ns, eps;
        for (const auto& r : t.rows) {
          if (r[ce] != e || r[cn].empty() || r[cv].empty()) continue;
          try {
            ns.push_back(std::stod(r[cn]));
            eps.push_back(std::stod(r[cv]));
          } catch (const std::exception&) {
            err << "summarize: format error: " << path << ": non-numeric N or eps_N\n";
            return kExitUsage;
          }
        }
        if (ns.size() >= 2) out << " slope " << std::setprecision(6) << log_log_slope(ns, eps);
      }
      out << '\n';
    }
  }
  return all_pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical experiments for the curvature of quantization connections", "quantcurv"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  auto* run_cmd = app.add_subcommand("run", "Run the experiments in a config file and write CSVs");
  run_cmd->add_option("config", config, "JSON config file")->required();
  run_cmd->add_option("--seed", seed, "64-bit seed (overrides the config)");
  run_cmd->add_option("--workers", workers, "Experiments run concurrently (overrides the config)");
  std::vector<std::string> csvs;
  auto* sum_cmd = app.add_subcommand("summarize", "One verdict line per experiment in the given CSVs");
  sum_cmd->add_option("csv", csvs, "CSV files written by run")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "quantcurv: " << e.what() << '\n';
    return kExitUsage;
  }
  if (*run_cmd) return run(config, seed, workers, out, err);
  return summarize(csvs, out, err);
}

}  // namespace quantcurv::cli
