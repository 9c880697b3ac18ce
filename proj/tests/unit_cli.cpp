#include "cdyn/network.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = CDYN_DATA_DIR;

struct Run {
  int code;
  std::string out;
};

// Runs the command line tool with the given arguments; stderr is discarded.
Run cli(const std::string& args) {
  std::string cmd = std::string(CDYN_CLI) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& rel) { return (kData / rel).string(); }

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("cdyn-cli-" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("pg size").code == 2);
  CHECK(cli("pg size --net /nonexistent.net").code == 2);
  std::string toggle = "--net " + data("networks/toggle.net");
  std::string sweep = "sweep " + toggle + " --spec " + data("specs/toggle_fp10.json") + " -o /tmp/cdyn-cli-never";
  CHECK(cli(sweep + " --range 10:5").code == 2);
  CHECK(cli(sweep + " --range 0:10").code == 2);
  CHECK(cli(sweep + " --range nonsense").code == 2);
  CHECK_FALSE(fs::exists("/tmp/cdyn-cli-never"));
  CHECK(cli("ts discretize --csv " + data("networks/toggle.net") + " --eps 0.7").code == 2);
  CHECK(cli("dyn mg " + toggle + " --param 9").code != 0);
  auto v = cli("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find("cdyn 0.3.0") != std::string::npos);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("cli parameter graph and dynamics") {
  std::string toggle = "--net " + data("networks/toggle.net");
  auto size = cli("--porcelain pg size " + toggle);
  REQUIRE(size.code == 0);
  auto j = json::parse(size.out);
  CHECK(j["size"] == 9);
  CHECK(j["factors"].size() == 2);

  auto mg = cli("--porcelain dyn mg " + toggle + " --param 1");
  REQUIRE(mg.code == 0);
  CHECK(json::parse(mg.out.substr(0, mg.out.find('\n')))["annotation"] == "FP(1,0)");
  auto dot = cli("dyn stg " + toggle + " --param 1 --dot");
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph", 0) == 0);

  auto p = cli("--porcelain pg param " + toggle + " --param 4");
  CHECK(p.code == 0);
  CHECK(p.out.find("X1") != std::string::npos);
}

TEST_CASE("cli match exit codes") {
  std::string net = "--net " + data("networks/three_node.net") + " --param 98 --pattern ";
  CHECK(cli("match " + net + data("patterns/xy_left.jsonl")).code == 0);
  CHECK(cli("match " + net + data("patterns/xy_right.jsonl")).code == 1);
  CHECK(cli("match " + net + data("patterns/xy_left.jsonl") + " --cycle").code == 0);
  CHECK(cli("match " + net + data("patterns/xy_left.jsonl") + " --cycle --path").code == 2);
}

TEST_CASE("cli sweep, merge and mpg") {
  TempDir tmp;
  std::string net = "--net " + data("networks/three_node.net");
  std::string dir = (tmp.path / "run").string();
  auto s = cli("sweep " + net + " --spec " + data("specs/three_node_left.json") + " --range 0:216 --workers 3 -o " + dir);
  REQUIRE(s.code == 0);
  auto m = cli("merge -o " + dir);
  REQUIRE(m.code == 0);
  CHECK(fs::exists(fs::path(dir) / "merged.jsonl"));
  std::ifstream in(fs::path(dir) / "merged.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) {
    auto r = json::parse(line);
    CHECK(r["phenotype"] == "XY_left");
    ++lines;
  }
  CHECK(lines == 32);
  auto mpg = cli("--porcelain mpg " + net + " --exclude Z " + dir);
  CHECK(mpg.code == 0);
  CHECK(mpg.out.find("XY_left") != std::string::npos);
  CHECK(cli("mpg " + net + " --exclude Z --results " + dir).code == 0);
  // the relaxed flag must agree with the mode the results were swept in
  CHECK(cli("coexist " + net + " --exclude Z --relaxed --results " + dir).code == 0);
  CHECK(cli("coexist " + net + " --exclude Z " + dir).code == 1);
  auto run = fs::directory_iterator(dir);
  bool provenance = false;
  for (const auto& e : run)
    if (e.path().filename().string().rfind("run-", 0) == 0) {
      auto j = json::parse(cdyn::read_text_file(e.path()));
      provenance = j["subcommand"] == "sweep" && j.contains("net_file_hash") && j.contains("spec_file_hash");
    }
  CHECK(provenance);
  // merging a directory with a gap is refused
  std::string gap = (tmp.path / "gap").string();
  cli("sweep " + net + " --spec " + data("specs/three_node_left.json") + " --range 0:100 -o " + gap);
  cli("sweep " + net + " --spec " + data("specs/three_node_left.json") + " --range 110:216 -o " + gap);
  CHECK(cli("merge -o " + gap).code == 1);
}

TEST_CASE("cli time series and simulation") {
  TempDir tmp;
  fs::path csv = tmp.path / "ts.csv";
  {
    std::ofstream out(csv);
    out << "time,A,B\n";
    for (int s = 0; s <= 200; ++s) out << s * 0.1 << "," << std::sin(s * 0.1) << "," << std::cos(s * 0.1) << "\n";
  }
  fs::path pat = tmp.path / "p.jsonl";
  auto d = cli("ts discretize --csv " + csv.string() + " --eps 0.05 -o " + pat.string());
  REQUIRE(d.code == 0);
  auto text = cdyn::read_text_file(pat);
  CHECK(text.find("\"gene\":\"A\"") != std::string::npos);

  fs::path traj = tmp.path / "traj.csv";
  fs::path wit = tmp.path / "w.json";
  auto sim = cli("sim --net " + data("networks/three_node.net") + " --param 98 --seed 3 --t-end 20 -o " + traj.string() +
                 " --witness " + wit.string());
  REQUIRE(sim.code == 0);
  auto header = cdyn::read_text_file(traj).substr(0, 9);
  CHECK(header == "time,X,Y,");
  CHECK(json::parse(cdyn::read_text_file(wit))["edges"].size() == 4);
}
