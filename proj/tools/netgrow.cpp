// netgrow command-line front end: measure, grow, limits, validate, generate.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <openssl/evp.h>

#include "netgrow/netgrow.hpp"

namespace fs = std::filesystem;
using netgrow::errc;
using netgrow::io::json;

namespace {

enum exit_code : int {
  exit_ok = 0,
  exit_other = 1,
  exit_parse = 2,
  exit_disconnected = 3,
  exit_measure = 4,
  exit_cap = 5,
  exit_nondifferentiable = 6,
};

int exit_for(errc code) {
  switch (code) {
    case errc::parse_error:
    case errc::invalid_graph:
    case errc::duplicate_edge:
    case errc::self_loop_edge: return exit_parse;
    case errc::not_connected: return exit_disconnected;
    case errc::unsupported_measure: return exit_measure;
    case errc::combinatorial_blowup: return exit_cap;
    case errc::non_differentiable: return exit_nondifferentiable;
    default: return exit_other;
  }
}

/// Measure-spec errors are reported as such even though the library raises invalid_parameter.
struct measure_spec_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

netgrow::MeasureSpec parse_measure_flag(const std::string& text) {
  try {
    return netgrow::parse_measure(text);
  } catch (const netgrow::error& e) {
    throw measure_spec_error(e.what());
  }
}

/// Twelve decimals, matching e.g. 0.666666666667; scientific when that would drop significance.
std::string format_value(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const double a = std::abs(x);
  if (a != 0.0 && (a < 1e-4 || a >= 1e15)) {
    std::snprintf(buf, sizeof buf, "%.11e", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.12f", x);
  }
  return buf;
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Inputs are read once so the recorded hash matches the parsed bytes.
struct Input {
  std::string path;
  std::string content;
};

Input read_input(const std::string& path) { return {path, netgrow::io::read_file(path)}; }

struct RunRecord {
  std::vector<std::string> argv;
  std::vector<const Input*> inputs;
  std::string measure;
  std::string algorithm;
  json payload;

  json to_json() const {
    json in = json::array();
    for (const auto* i : inputs) in.push_back({{"path", i->path}, {"sha256", sha256_hex(i->content)}});
    json out = {{"tool", "netgrow"},  {"version", NETGROW_VERSION}, {"timestamp", utc_timestamp()},
                {"command_line", argv}, {"inputs", in},             {"measure", measure}};
    out["algorithm"] = algorithm.empty() ? json(nullptr) : json(algorithm);
    out["result"] = payload;
    return out;
  }
};

/// Writes every output only after all of them have been produced.
struct PendingOutputs {
  std::vector<std::pair<fs::path, std::string>> files;
  void add(const std::string& path, std::string content) {
    if (!path.empty()) files.emplace_back(path, std::move(content));
  }
  void commit() const {
    for (const auto& [path, content] : files) netgrow::io::write_file_atomic(path, content);
  }
};

netgrow::LaplacianState load_state(const Input& in, netgrow::WeightedGraph& graph) {
  graph = netgrow::io::parse_graph(in.content);
  return netgrow::build_laplacian(graph);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral performance measures and k-link growth for noisy consensus networks", "netgrow"};
  app.set_version_flag("--version", std::string(NETGROW_VERSION));
  app.require_subcommand(1);

  std::string graph_file, candidates_file, measure_text = "zeta:q=1", algo_text = "greedy", out_file, csv_file;
  std::size_t k = 1;
  std::optional<std::uint64_t> seed;
  double cap = 2e6;
  bool complete = false;
  netgrow::SimConfig sim;
  std::size_t gen_n = 10, gen_extra = 10, gen_candidates = 0;
  double gen_wmin = 1.0, gen_wmax = 1.0;

  auto* measure_cmd = app.add_subcommand("measure", "Evaluate a measure on a graph");
  measure_cmd->add_option("graph", graph_file, "Graph file (JSON or edge list)")->required();
  measure_cmd->add_option("--measure", measure_text, "Measure spec, e.g. zeta:q=1")->required();

  auto* grow_cmd = app.add_subcommand("grow", "Add k candidate links minimising a measure");
  grow_cmd->add_option("graph", graph_file, "Graph file")->required();
  grow_cmd->add_option("candidates", candidates_file, "Candidate links JSON")->required();
  grow_cmd->add_option("--measure", measure_text, "Measure spec")->required();
  grow_cmd->add_option("-k", k, "Number of links to add")->required();
  grow_cmd->add_option("--algo", algo_text, "brute | greedy | linear")
      ->check(CLI::IsMember({"brute", "greedy", "linear"}));
  grow_cmd->add_option("--cap", cap, "Maximum number of subsets for brute force");
  grow_cmd->add_option("--seed", seed, "Seed recorded with the run");
  grow_cmd->add_option("--out", out_file, "Run record JSON");
  grow_cmd->add_option("--csv", csv_file, "Trajectory CSV");

  auto* limits_cmd = app.add_subcommand("limits", "Fundamental-limit bounds and the enhancement table");
  limits_cmd->add_option("graph", graph_file, "Graph file")->required();
  limits_cmd->add_option("--measure", measure_text, "Measure spec")->required();
  limits_cmd->add_option("-k", k, "Largest k in the table")->required();
  limits_cmd->add_flag("--complete", complete, "Also report the complete-candidate upper bound");
  limits_cmd->add_option("--out", out_file, "Run record JSON");
  limits_cmd->add_option("--csv", csv_file, "CSV with columns k,rho_k,pi_k");

  auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of zeta:q=1 or tau against simulation");
  validate_cmd->add_option("graph", graph_file, "Graph file")->required();
  validate_cmd->add_option("--measure", measure_text, "zeta:q=1 (stationary) or tau:t=<t>");
  validate_cmd->add_option("--dt", sim.dt, "Step size (default 0.005/lambda_n)");
  validate_cmd->add_option("--trials", sim.trials, "Ensemble size (>= 100)");
  validate_cmd->add_option("--t-final", sim.t_final, "Horizon (default 20/lambda_2)");
  validate_cmd->add_option("--seed", seed, "Random seed (default 42)");
  validate_cmd->add_option("--out", out_file, "Run record JSON");

  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded random connected graph");
  generate_cmd->add_option("-n", gen_n, "Node count")->check(CLI::Range(2, 100000));
  generate_cmd->add_option("--extra", gen_extra, "Edges beyond a spanning tree");
  generate_cmd->add_option("--wmin", gen_wmin, "Smallest weight");
  generate_cmd->add_option("--wmax", gen_wmax, "Largest weight");
  generate_cmd->add_option("--candidates", gen_candidates, "Also draw this many candidate links");
  generate_cmd->add_option("--seed", seed, "Random seed (default 42)");
  generate_cmd->add_option("--out", out_file, "Graph JSON path")->required();
  generate_cmd->add_option("--links-out", csv_file, "Candidate links JSON path (with --candidates)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_parse;
  }

  RunRecord record;
  record.argv.assign(argv, argv + argc);
  PendingOutputs outputs;

  try {
    if (*generate_cmd) {
      if (!(gen_wmin > 0.0) || gen_wmax < gen_wmin) throw netgrow::error(errc::invalid_parameter, "need 0 < wmin <= wmax");
      netgrow::rng_t rng(seed.value_or(42));
      const auto g = netgrow::random_connected_graph(gen_n, gen_extra, rng, {gen_wmin, gen_wmax});
      outputs.add(out_file, netgrow::io::graph_to_json(g).dump(2) + "\n");
      if (gen_candidates > 0) {
        if (csv_file.empty()) throw netgrow::error(errc::invalid_parameter, "--candidates needs --links-out <path>");
        std::vector<netgrow::Link> links;
        for (const auto& e : netgrow::random_pairs(g, gen_candidates, true, rng)) {
          links.push_back({e, netgrow::detail::draw_weight(rng, {gen_wmin, gen_wmax})});
        }
        outputs.add(csv_file, netgrow::io::candidates_to_json(netgrow::CandidateSet(links)).dump(2) + "\n");
      }
      outputs.commit();
      return exit_ok;
    }

    const auto m = parse_measure_flag(measure_text);
    record.measure = netgrow::to_string(m);
    const Input graph_in = read_input(graph_file);
    record.inputs.push_back(&graph_in);
    netgrow::WeightedGraph graph;
    const auto state = load_state(graph_in, graph);

    if (*measure_cmd) {
      std::cout << format_value(netgrow::evaluate(m, state).value) << "\n";
      return exit_ok;
    }

    if (*grow_cmd) {
      const Input cand_in = read_input(candidates_file);
      record.inputs.push_back(&cand_in);
      const auto candidates = netgrow::io::parse_candidates_json(cand_in.content);
      const auto algo = algo_text == "brute"    ? netgrow::Algorithm::brute_force
                        : algo_text == "linear" ? netgrow::Algorithm::linearized
                                                : netgrow::Algorithm::greedy;
      netgrow::SynthesisOptions opt;
      opt.brute_force_cap = cap;
      auto result = netgrow::grow(algo, state, candidates, k, m, opt);
      result.seed = seed;
      record.algorithm = netgrow::to_string(algo);
      record.payload = netgrow::io::result_to_json(result);
      outputs.add(out_file, record.to_json().dump(2) + "\n");
      outputs.add(csv_file, netgrow::io::trajectory_csv(result));
      outputs.commit();
      for (std::size_t j = 0; j < result.chosen.size(); ++j) {
        const auto& l = result.chosen[j];
        std::cout << j + 1 << " " << netgrow::to_string(l.edge) << " w=" << l.weight << " -> "
                  << format_value(result.values[j + 1]) << "\n";
      }
      std::cout << "value " << format_value(result.values.front()) << " -> " << format_value(result.final_value())
                << "\n";
      return exit_ok;
    }

    if (*limits_cmd) {
      const double rho0 = netgrow::evaluate(m, state).value;
      const bool pi_defined = netgrow::enhancement_defined(m, rho0);
      json rows = json::array();
      std::string csv = "k,rho_k,pi_k\n";
      for (std::size_t kk = 0; kk <= k; ++kk) {
        const auto b = netgrow::bounds_report(state, m, kk, complete);
        rows.push_back(netgrow::io::bounds_to_json(b));
        csv += std::to_string(kk) + "," + netgrow::io::format_real(b.lower) + "," +
               (b.pi_k ? netgrow::io::format_real(*b.pi_k) : std::string()) + "\n";
        std::cout << "k=" << kk << " rho_k=" << format_value(b.lower);
        if (b.upper) std::cout << " upper=" << format_value(*b.upper);
        if (b.pi_k) std::cout << " pi_k=" << format_value(*b.pi_k);
        std::cout << "\n";
      }
      record.payload = {{"bounds", rows},
                        {"spanning_tree_limit", netgrow::io::real_to_json(netgrow::spanning_tree_limit(state, m))},
                        {"pi_defined", pi_defined}};
      outputs.add(out_file, record.to_json().dump(2) + "\n");
      outputs.add(csv_file, csv);
      outputs.commit();
      return exit_ok;
    }

    if (*validate_cmd) {
      sim.seed = seed.value_or(42);
      const auto report = netgrow::validate_measure(state, m, sim);
      record.payload = netgrow::io::validation_to_json(report);
      outputs.add(out_file, record.to_json().dump(2) + "\n");
      outputs.commit();
      std::cout << record.payload.dump(2) << "\n";
      return exit_ok;
    }
  } catch (const measure_spec_error& e) {
    std::cerr << "netgrow: " << e.what() << "\n";
    return exit_measure;
  } catch (const netgrow::error& e) {
    std::cerr << "netgrow: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "netgrow: " << e.what() << "\n";
    return exit_other;
  }
  return exit_other;
}
