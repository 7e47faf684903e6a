#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netgrow/error.hpp"
#include "netgrow/graph.hpp"
#include "netgrow/limits.hpp"
#include "netgrow/montecarlo.hpp"
#include "netgrow/synthesis.hpp"

namespace netgrow::io {

using json = nlohmann::json;

/// Finite reals as numbers; ±∞ as the strings "inf" / "-inf"; NaN as null.
inline json real_to_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return infinity;
    if (s == "-inf") return -infinity;
  }
  throw error(errc::parse_error, "expected a number, \"inf\" or \"-inf\"");
}

/// %.17g, which round-trips doubles.
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::parse_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a sibling temporary and rename, so a failed run leaves no partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::invalid_parameter, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw error(errc::invalid_parameter, "write failed for " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::parse_error, std::string("malformed JSON: ") + e.what());
  }
}

inline node_t json_index(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw error(errc::parse_error, "node index must be a nonnegative integer");
  }
  return j.get<node_t>();
}

struct Triple {
  node_t i, j;
  double w;
};

inline Triple json_triple(const json& t) {
  if (!t.is_array() || t.size() != 3 || !t[2].is_number()) {
    throw error(errc::parse_error, "each entry must be [i, j, w]");
  }
  return {json_index(t[0]), json_index(t[1]), t[2].get<double>()};
}

inline json edge_list(const WeightedGraph::edge_map& edges) {
  json out = json::array();
  for (const auto& [e, w] : edges) out.push_back({e.u, e.v, w});
  return out;
}

}  // namespace detail

// ---- graphs ---------------------------------------------------------------

/// {"n": int, "edges": [[i, j, w], ...]}, 0-based, duplicates rejected.
inline WeightedGraph parse_graph_json(std::string_view text) {
  const json doc = detail::parse_json(text);
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw error(errc::parse_error, "graph JSON needs \"n\" and \"edges\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 2) {
    throw error(errc::parse_error, "\"n\" must be an integer >= 2");
  }
  if (!doc["edges"].is_array()) throw error(errc::parse_error, "\"edges\" must be an array");
  WeightedGraph g(doc["n"].get<std::size_t>());
  for (const auto& t : doc["edges"]) {
    const auto [i, j, w] = detail::json_triple(t);
    g.add_edge(i, j, w);
  }
  return g;
}

/// Header "n <count>" then one "i j w" per line. Blank lines and '#' comments are ignored.
inline WeightedGraph parse_graph_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<WeightedGraph> g;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw error(errc::parse_error, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto integer = [&](const std::string& s) {
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) fail("expected a nonnegative integer, got '" + s + "'");
      return v;
    };
    if (!g) {
      if (tok.size() != 2 || tok[0] != "n") fail("expected header 'n <count>'");
      const auto n = integer(tok[1]);
      if (n < 2) fail("node count must be at least 2");
      g.emplace(n);
      continue;
    }
    if (tok.size() != 3) fail("expected 'i j w'");
    double w = 0.0;
    auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), w);
    if (ec != std::errc{} || p != tok[2].data() + tok[2].size()) fail("bad weight '" + tok[2] + "'");
    try {
      g->add_edge(integer(tok[0]), integer(tok[1]), w);
    } catch (const error& e) {
      fail(e.what());
    }
  }
  if (!g) throw error(errc::parse_error, "missing header 'n <count>'");
  return *g;
}

/// JSON if the first non-space character is '{', edge-list text otherwise.
inline WeightedGraph parse_graph(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_graph_json(text);
  return parse_graph_text(text);
}

inline WeightedGraph load_graph(const std::filesystem::path& path) { return parse_graph(read_file(path)); }

inline json graph_to_json(const WeightedGraph& g) {
  return {{"n", g.node_count()}, {"edges", detail::edge_list(g.edges())}};
}

inline std::string graph_to_text(const WeightedGraph& g) {
  std::string out = "n " + std::to_string(g.node_count()) + "\n";
  for (const auto& [e, w] : g.edges()) {
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_real(w) + "\n";
  }
  return out;
}

// ---- candidates -----------------------------------------------------------

/// {"links": [[i, j, w], ...]}; pairs are canonicalised, repeats rejected.
inline CandidateSet parse_candidates_json(std::string_view text) {
  const json doc = detail::parse_json(text);
  if (!doc.is_object() || !doc.contains("links") || !doc["links"].is_array()) {
    throw error(errc::parse_error, "candidate JSON needs a \"links\" array");
  }
  std::vector<Link> links;
  for (const auto& t : doc["links"]) {
    const auto [i, j, w] = detail::json_triple(t);
    links.push_back({make_edge(i, j), w});
  }
  return CandidateSet(std::move(links));
}

inline CandidateSet load_candidates(const std::filesystem::path& path) {
  return parse_candidates_json(read_file(path));
}

inline json candidates_to_json(const CandidateSet& c) {
  json links = json::array();
  for (const auto& l : c) links.push_back({l.edge.u, l.edge.v, l.weight});
  return {{"links", links}};
}

// ---- results --------------------------------------------------------------

inline json result_to_json(const SynthesisResult& r) {
  json chosen = json::array();
  for (const auto& l : r.chosen) chosen.push_back({l.edge.u, l.edge.v, l.weight});
  json values = json::array();
  for (double v : r.values) values.push_back(real_to_json(v));
  json out = {{"algorithm", to_string(r.algorithm)},
              {"measure", to_string(r.measure)},
              {"chosen", chosen},
              {"values", values},
              {"step_seconds", r.step_seconds},
              {"total_seconds", r.total_seconds},
              {"tie_breaks", r.tie_breaks}};
  out["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return out;
}

inline json bounds_to_json(const BoundsReport& b) {
  json out = {{"k", b.k}, {"lower", real_to_json(b.lower)}, {"limit_value", real_to_json(b.limit_value)}};
  out["upper"] = b.upper ? real_to_json(*b.upper) : json(nullptr);
  out["upper_is_conditional"] = b.upper_is_conditional;
  out["pi_k"] = b.pi_k ? real_to_json(*b.pi_k) : json(nullptr);
  return out;
}

inline json validation_to_json(const ValidationReport& v) {
  return {{"measure", v.measure},   {"closed_form", real_to_json(v.closed_form)},
          {"estimate", v.estimate}, {"std_error", v.std_error},
          {"z_score", real_to_json(v.z_score)}, {"effect_size", real_to_json(v.effect_size)},
          {"passed", v.passed},     {"seed", v.seed},
          {"dt", v.dt},             {"trials", v.trials},
          {"horizon", v.horizon}};
}

/// "step,edge_i,edge_j,weight,value"; step 0 is the initial network with empty edge fields.
inline std::string trajectory_csv(const SynthesisResult& r) {
  std::string out = "step,edge_i,edge_j,weight,value\n";
  out += "0,,,," + format_real(r.values.front()) + "\n";
  for (std::size_t s = 0; s < r.chosen.size(); ++s) {
    const auto& l = r.chosen[s];
    out += std::to_string(s + 1) + "," + std::to_string(l.edge.u) + "," + std::to_string(l.edge.v) + "," +
           format_real(l.weight) + "," + format_real(r.values[s + 1]) + "\n";
  }
  return out;
}

inline std::string enhancement_csv(const std::vector<EnhancementRow>& rows) {
  std::string out = "k,rho_k,pi_k\n";
  for (const auto& row : rows) {
    out += std::to_string(row.k) + "," + format_real(row.rho_k) + "," + format_real(row.pi_k) + "\n";
  }
  return out;
}

}  // namespace netgrow::io
