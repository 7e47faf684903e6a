#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace netgrow;

namespace {

struct Run {
  int code;
  std::string out;
};

const fs::path tmp_dir = NETGROW_TEST_TMP;

Run run(const std::string& args) {
  const std::string cmd = std::string(NETGROW_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write(const std::string& name, const std::string& content) {
  fs::create_directories(tmp_dir);
  const auto path = tmp_dir / name;
  std::ofstream(path) << content;
  return path.string();
}

std::string path_in_tmp(const std::string& name) {
  fs::create_directories(tmp_dir);
  const auto p = tmp_dir / name;
  fs::remove(p);
  return p.string();
}

const std::string k3_json = R"({"n": 3, "edges": [[0, 1, 1], [0, 2, 1], [1, 2, 1]]})";
const std::string k4_text = "n 4\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n";
const std::string ring_json = R"({"n": 6, "edges": [[0,1,1],[1,2,1],[2,3,1],[3,4,1],[4,5,1],[0,5,1]]})";
const std::string chords_json = R"({"links": [[0, 3, 1], [1, 4, 1], [2, 5, 1], [0, 2, 0.5]]})";

}  // namespace

TEST(Cli, MeasureExamples) {
  const auto k3 = write("k3.json", k3_json);
  EXPECT_EQ(run(k3 + " --measure zeta:q=1").code, 2);  // missing subcommand is a usage error
  auto r = run("measure " + k3 + " --measure zeta:q=1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.666666666667\n");
  EXPECT_EQ(run("measure " + k3 + " --measure hankel").out, "0.166666666667\n");
  const auto two = write("two.txt", "n 2\n0 1 1\n");
  EXPECT_EQ(run("measure " + two + " --measure volume").out, "-1.386294361120\n");
}

TEST(Cli, MeasureExitCodes) {
  const auto k3 = write("k3.json", k3_json);
  EXPECT_EQ(run("measure " + k3 + " --measure zeta:q=0.5").code, 4);
  EXPECT_EQ(run("measure " + k3 + " --measure bogus").code, 4);
  EXPECT_EQ(run("measure " + write("bad.json", "{\"n\": 3, \"edges\": [[0,1]]}") + " --measure hankel").code, 2);
  EXPECT_EQ(run("measure " + write("dup.txt", "n 3\n0 1 1\n1 0 1\n") + " --measure hankel").code, 2);
  EXPECT_EQ(run("measure " + (tmp_dir / "missing.json").string() + " --measure hankel").code, 2);
  EXPECT_EQ(run("measure " + write("split.txt", "n 4\n0 1 1\n2 3 1\n") + " --measure hankel").code, 3);
}

TEST(Cli, GrowWritesRecordAndCsv) {
  const auto g = write("ring.json", ring_json), c = write("chords.json", chords_json);
  const auto out = path_in_tmp("grow.json"), csv = path_in_tmp("grow.csv");
  const auto r = run("grow " + g + " " + c + " --measure zeta:q=1 -k 2 --algo greedy --seed 9 --out " + out + " --csv " + csv);
  ASSERT_EQ(r.code, 0);
  const auto rec = io::json::parse(io::read_file(out));
  EXPECT_EQ(rec["algorithm"], "greedy");
  EXPECT_EQ(rec["measure"], "zeta:q=1");
  EXPECT_EQ(rec["result"]["seed"], 9);
  EXPECT_EQ(rec["inputs"].size(), 2u);
  EXPECT_EQ(rec["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(rec["version"], NETGROW_VERSION);
  const auto text = io::read_file(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,edge_i,edge_j,weight,value");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);

  // Replaying yields the same result payload apart from timings.
  const auto out2 = path_in_tmp("grow2.json");
  ASSERT_EQ(run("grow " + g + " " + c + " --measure zeta:q=1 -k 2 --algo greedy --seed 9 --out " + out2).code, 0);
  auto a = rec["result"], b = io::json::parse(io::read_file(out2))["result"];
  for (auto* j : {&a, &b}) {
    j->erase("step_seconds");
    j->erase("total_seconds");
  }
  EXPECT_EQ(a, b);
}

TEST(Cli, GreedyAndBruteAgreeAtOneLink) {
  const auto g = write("ring.json", ring_json), c = write("chords.json", chords_json);
  const auto a = path_in_tmp("a.json"), b = path_in_tmp("b.json");
  ASSERT_EQ(run("grow " + g + " " + c + " --measure hankel -k 1 --algo greedy --out " + a).code, 0);
  ASSERT_EQ(run("grow " + g + " " + c + " --measure hankel -k 1 --algo brute --out " + b).code, 0);
  EXPECT_EQ(io::json::parse(io::read_file(a))["result"]["chosen"], io::json::parse(io::read_file(b))["result"]["chosen"]);
}

TEST(Cli, GrowVolumeTrajectoryMatchesLogSums) {
  const auto g = write("ring.json", ring_json), c = write("chords.json", chords_json);
  const auto out = path_in_tmp("vol.json");
  ASSERT_EQ(run("grow " + g + " " + c + " --measure volume -k 3 --algo greedy --out " + out).code, 0);
  const auto rec = io::json::parse(io::read_file(out))["result"];
  auto graph = io::parse_graph(ring_json);
  auto state = build_laplacian(graph);
  double value = evaluate(MeasureSpec::uncertainty_volume(), state).value;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& link = rec["chosen"][j];
    const Edge e{link[0].get<node_t>(), link[1].get<node_t>()};
    const double w = link[2].get<double>();
    value -= std::log(1.0 + effective_resistance(state, 1, e) * w);
    state = build_laplacian(augmented_graph(graph, std::vector<Link>{{e, w}}));
    graph = augmented_graph(graph, std::vector<Link>{{e, w}});
    EXPECT_NEAR(rec["values"][j + 1].get<double>(), value, 1e-12);
  }
}

TEST(Cli, GrowExitCodesLeaveNoFiles) {
  const auto g = write("ring.json", ring_json), c = write("chords.json", chords_json);
  const auto out = path_in_tmp("never.json"), csv = path_in_tmp("never.csv");
  const std::string files = " --out " + out + " --csv " + csv;
  EXPECT_EQ(run("grow " + g + " " + c + " --measure hankel -k 2 --algo linear" + files).code, 6);
  EXPECT_EQ(run("grow " + g + " " + c + " --measure zeta:q=1 -k 2 --algo brute --cap 3" + files).code, 5);
  EXPECT_EQ(run("grow " + g + " " + c + " --measure zeta:q=1 -k 9" + files).code, 1);
  EXPECT_EQ(run("grow " + g + " " + c + " --measure nope -k 1" + files).code, 4);
  EXPECT_EQ(run("grow " + g + " " + c + " --measure zeta:q=1 -k 1 --algo fastest" + files).code, 2);
  EXPECT_EQ(run("grow " + g + " " + write("badc.json", "{\"links\": 3}") + " --measure zeta:q=1 -k 1" + files).code, 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(csv));
  EXPECT_FALSE(fs::exists(out + ".partial"));
}

TEST(Cli, LimitsTable) {
  const auto k4 = write("k4.txt", k4_text);
  const auto csv = path_in_tmp("pi.csv"), out = path_in_tmp("limits.json");
  const auto r = run("limits " + k4 + " --measure zeta:q=1 -k 3 --complete --csv " + csv + " --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto text = io::read_file(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,rho_k,pi_k");
  EXPECT_NE(text.find("\n1,0.5,"), std::string::npos);
  const auto rec = io::json::parse(io::read_file(out));
  double prev = -1.0;
  for (const auto& row : rec["result"]["bounds"]) {
    EXPECT_GE(row["pi_k"].get<double>(), prev);
    prev = row["pi_k"].get<double>();
  }
  EXPECT_NEAR(rec["result"]["bounds"][1]["lower"].get<double>(), 0.5, 1e-12);
  // π_k is left empty where undefined.
  ASSERT_EQ(run("limits " + k4 + " --measure volume -k 2 --csv " + csv).code, 0);
  EXPECT_NE(io::read_file(csv).find("\n1,-inf,\n"), std::string::npos);
}

TEST(Cli, ValidateIsSeedDeterministic) {
  const auto k3 = write("k3.json", k3_json);
  const auto a = run("validate " + k3 + " --seed 42 --trials 2000");
  const auto b = run("validate " + k3 + " --seed 42 --trials 2000");
  ASSERT_EQ(a.code, 0);
  const auto ja = io::json::parse(a.out), jb = io::json::parse(b.out);
  EXPECT_EQ(ja["z_score"], jb["z_score"]);
  EXPECT_EQ(ja["seed"], 42);
  EXPECT_EQ(run("validate " + k3 + " --dt 1").code, 1);
  EXPECT_EQ(run("validate " + k3 + " --measure hankel").code, 4);
}

TEST(Cli, GenerateIsSeeded) {
  const auto a = path_in_tmp("gen_a.json"), b = path_in_tmp("gen_b.json"), c = path_in_tmp("gen_c.json");
  ASSERT_EQ(run("generate -n 12 --extra 6 --wmin 0.5 --wmax 2 --seed 3 --out " + a + " --candidates 5 --links-out " + c).code, 0);
  ASSERT_EQ(run("generate -n 12 --extra 6 --wmin 0.5 --wmax 2 --seed 3 --out " + b).code, 0);
  EXPECT_EQ(io::read_file(a), io::read_file(b));
  EXPECT_EQ(io::load_graph(a).edge_count(), 17u);
  EXPECT_EQ(io::load_candidates(c).size(), 5u);
}
