#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" HETNET_CLI "\" " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hetnet_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, AnalyticPoint) {
  const auto r = run("analytic --preset table1 --rth 100Mbps");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("series,axis,axis_value,r_th,engine,success", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("analytic"), std::string::npos);
}

TEST(Cli, SimulateIsReproducible) {
  const std::string args = "simulate --preset table1 --rth 100Mbps --drops 2000 --seed 5";
  const auto a = run(args, "HETNET_THREADS=1");
  const auto b = run(args, "HETNET_THREADS=3");
  const auto c = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto other = run("simulate --preset table1 --rth 100Mbps --drops 2000 --seed 6");
  EXPECT_NE(a.out, other.out);
}

TEST(Cli, JsonOutput) {
  const auto r = run("analytic --preset fig1 --rth 1Gbps --format json");
  ASSERT_EQ(r.status, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.contains("scenario_hash"));
  EXPECT_TRUE(doc["rows"][0]["success"].is_number());
}

TEST(Cli, TraceAndOutFile) {
  const auto out = scratch("sim.csv");
  const auto trace = scratch("sim.jsonl");
  const auto r = run("simulate --preset table1 --drops 50 --out " + out.string() + " --trace " + trace.string());
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(slurp(out).find("mc"), std::string::npos);
  std::istringstream lines(slurp(trace));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_NO_THROW((void)nlohmann::json::parse(line));
    ++count;
  }
  EXPECT_EQ(count, 50);
}

TEST(Cli, CompareFromFile) {
  const auto ini = scratch("small.ini");
  {
    std::ofstream f(ini);
    f << "[sweep]\naxis = r_th\nvalues = 100Mbps, 1Gbps\nengines = both\n[montecarlo]\ndrops = 2000\n";
  }
  const auto csv = scratch("small.csv");
  ASSERT_EQ(run("sweep --config " + ini.string() + " --out " + csv.string()).status, 0);
  const auto r = run("compare --input " + csv.string());
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("# max_gap"), std::string::npos);
  EXPECT_NE(r.out.find("# fraction_inside_ci"), std::string::npos);
}

TEST(Cli, Optimize) {
  const auto r = run("optimize --preset fig3");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("r_th,ase,scenario_hash\n", 0), 0u);
}

TEST(Cli, ErrorExitCodes) {
  EXPECT_EQ(run("analytic").status, 2);
  EXPECT_EQ(run("analytic --preset fig7").status, 2);
  EXPECT_EQ(run("analytic --preset table1 --config x.ini").status, 2);
  EXPECT_EQ(run("bogus").status, 2);
  EXPECT_EQ(run("analytic --preset table1 --rth 5parsecs").status, 2);
  EXPECT_EQ(run("optimize --preset table1 --lo 1Gbps --hi 1Mbps").status, 2);
  EXPECT_EQ(run("analytic --config /nonexistent.ini").status, 2);
  const auto ini = scratch("bad.ini");
  {
    std::ofstream f(ini);
    f << "[cache]\npico_cache = 95\n";
  }
  EXPECT_EQ(run("analytic --config " + ini.string()).status, 2);
  const auto sweep_only = scratch("analytic_sweep.ini");
  {
    std::ofstream f(sweep_only);
    f << "[sweep]\naxis = r_th\nvalues = 1e8\n";
  }
  EXPECT_EQ(run("compare --input /nonexistent.csv").status, 2);
  const auto csv = scratch("analytic_only.csv");
  ASSERT_EQ(run("sweep --config " + sweep_only.string() + " --out " + csv.string()).status, 0);
  EXPECT_EQ(run("compare --input " + csv.string()).status, 2);
  EXPECT_EQ(run("--help").status, 0);
}
