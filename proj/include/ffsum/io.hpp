#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffsum/experiments.hpp"

namespace ffsum {

using json = nlohmann::json;

// "p", "p^ell", or "p^ell:c0,c1,...,cell" (defining coefficients low-to-high)
inline GfPtr parse_field_spec(const std::string& spec) {
  std::string head = spec;
  std::optional<std::vector<int>> defining;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    std::vector<int> coeffs;
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(int(std::strtol(item.c_str(), nullptr, 10)));
    defining = std::move(coeffs);
  }
  int p = 0, ell = 1;
  if (auto caret = head.find('^'); caret != std::string::npos) {
    p = int(std::strtol(head.substr(0, caret).c_str(), nullptr, 10));
    ell = int(std::strtol(head.substr(caret + 1).c_str(), nullptr, 10));
  } else {
    p = int(std::strtol(head.c_str(), nullptr, 10));
  }
  if (p <= 0 || ell <= 0) fail(Errc::ConfigError, "bad field spec: " + spec);
  return Gf::make(p, ell, defining);
}

inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_quote(const std::string& s) {
  bool need = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ",";
    out += csv_quote(t.columns[i]);
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += csv_quote(row[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::string to_jsonl(const Table& t) {
  std::string out;
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (size_t i = 0; i < t.columns.size() && i < row.size(); ++i) obj[t.columns[i]] = row[i];
    out += obj.dump();
    out += "\n";
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ConfigError, "cannot write " + path.string());
  out << content;
}

// ---------------------------------------------------------------------------
// row -> table conversions

inline Table ratio_table(const std::vector<RatioRow>& rows) {
  Table t;
  t.columns = {"theorem", "field", "q", "F", "r", "a", "m", "n", "k", "weights",
               "lhs_abs", "trivial_bound", "theorem_bound", "ratio", "observed_delta",
               "holder_lhs", "holder_rhs", "energy_rhs_k22"};
  for (const auto& r : rows) {
    t.rows.push_back({r.theorem, r.field, std::to_string(r.q), r.F, std::to_string(r.r), r.a,
                      std::to_string(r.m), std::to_string(r.n), std::to_string(r.k), r.weights,
                      fmt_double(r.lhs_abs), fmt_double(r.trivial_bound),
                      fmt_double(r.theorem_bound), fmt_double(r.ratio),
                      fmt_double(r.observed_delta), fmt_double(r.holder_lhs),
                      fmt_double(r.holder_rhs), fmt_double(r.energy_rhs_k22)});
  }
  return t;
}

inline Table discrepancy_table(const std::vector<DiscrepancyRow>& rows) {
  Table t;
  t.columns = {"field", "q", "F", "r", "n", "a", "ap_sum", "main_term", "delta",
               "inside_hypothesis", "threshold_q"};
  for (const auto& r : rows) {
    t.rows.push_back({r.field, std::to_string(r.q), r.F, std::to_string(r.r), std::to_string(r.n),
                      r.a, std::to_string(r.ap_sum), r.main_term.str(), r.delta.str(),
                      r.inside_hypothesis ? "inside" : "outside", fmt_double(r.threshold_q)});
  }
  return t;
}

inline Table bv_table(const BvReport& rep) {
  Table t;
  t.columns = {"field", "q", "R", "n", "F", "max_abs_delta", "argmax_a", "total",
               "observed_delta", "inside_hypothesis"};
  for (const auto& r : rep.rows) {
    t.rows.push_back({rep.field, std::to_string(rep.q), std::to_string(rep.R),
                      std::to_string(rep.n), r.F, r.max_abs_delta.str(), r.argmax_a, "", "", ""});
  }
  t.rows.push_back({rep.field, std::to_string(rep.q), std::to_string(rep.R), std::to_string(rep.n),
                    "TOTAL", "", "", rep.total.str(), fmt_double(rep.observed_delta),
                    rep.inside_hypothesis ? "inside" : "outside"});
  return t;
}

inline Table energy_table(const std::vector<EnergyRecord>& recs, const std::string& field) {
  Table t;
  t.columns = {"field", "q", "r", "F", "k", "n", "E", "method", "seconds"};
  for (const auto& r : recs) {
    t.rows.push_back({field, std::to_string(r.q), std::to_string(r.r), r.F, std::to_string(r.k),
                      std::to_string(r.n), i128_to_string(r.E), r.method, fmt_double(r.seconds)});
  }
  return t;
}

inline Table main_term_table(const std::vector<MainTermReport>& reps) {
  Table t;
  t.columns = {"field", "F", "r", "d", "lhs", "target", "error", "tail", "error_within_tail"};
  for (const auto& r : reps) {
    bool within = r.error.abs() <= r.tail;
    t.rows.push_back({r.field, r.F, std::to_string(r.r), std::to_string(r.d), r.lhs.str(),
                      r.target.str(), r.error.str(), r.tail.str(), within ? "yes" : "no"});
  }
  return t;
}

// JSON-line record for a single sum evaluation (the CLI `sum` command)
inline json sum_record(const std::string& kind, const std::string& field, const std::string& F,
                       const json& params, const ExpHistogram* hist, double abs, double abs_err,
                       double trivial_bound) {
  json rec;
  rec["sum_kind"] = kind;
  rec["field"] = field;
  rec["F"] = F;
  rec["params"] = params;
  if (hist) rec["histogram"] = hist->counts();
  rec["abs"] = abs;
  rec["abs_err"] = abs_err;
  rec["trivial_bound"] = trivial_bound;
  rec["ratio"] = trivial_bound > 0 ? abs / trivial_bound : 0.0;
  return rec;
}

struct RunManifest {
  std::string tool = "ffsum";
  std::string version = "0.1.0";
  std::string command;
  std::string field_spec;
  json config = json::object();
  u64 seed = 0;
  int workers = 1;
  double wall_seconds = 0;
  std::string rng = "mt19937_64";
  std::vector<std::string> outputs;

  json to_json() const {
    json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["field"] = field_spec;
    j["config"] = config;
    j["seed"] = seed;
    j["workers"] = workers;
    j["wall_seconds"] = wall_seconds;
    j["rng"] = rng;
    j["outputs"] = outputs;
    return j;
  }
};

// weight file: JSON array of {poly, re, im} with string-rational parts
inline WeightSeq load_weights(const GfPtr& f, int n, const std::string& path,
                              const Budgets& budgets = Budgets::from_env()) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigError, "cannot read weights file " + path);
  json arr = json::parse(in, nullptr, true, true);
  if (!arr.is_array()) fail(Errc::ConfigError, "weights file must hold a JSON array");
  std::vector<std::pair<u64, GaussianRational>> entries;
  for (const auto& item : arr) {
    Poly x = Poly::parse(f, item.at("poly").get<std::string>());
    if (x.degree() >= n) fail(Errc::ConfigError, "weight polynomial out of range: " + x.str());
    GaussianRational g(Rational::from_string(item.value("re", "0")),
                       Rational::from_string(item.value("im", "0")));
    entries.emplace_back(x.index_below(n), g);
  }
  return WeightSeq::exact(f, n, std::move(entries), budgets);
}

}  // namespace ffsum
