#include <gtest/gtest.h>

#include <sys/wait.h>

#include <csignal>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(VFM_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(VFM_TEST_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("vfm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string at(const char* name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, SampleUnitSquare) {
  const auto r = run("sample -g " + data("unit_square.seg") + " -l 0.5 -s 4 -o " + at("f.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(slurp(at("f.csv")));
  std::string line;
  int cells = 0, sub = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,i,j,axis,value");
  while (std::getline(in, line)) {
    if (line.rfind("cell,", 0) == 0) {
      ++cells;
      EXPECT_EQ(line.substr(line.rfind(',') + 1), "1") << line;
    } else {
      ++sub;
    }
  }
  EXPECT_EQ(cells, 4);
  EXPECT_GT(sub, 0);
}

TEST_F(Cli, RotatedSampleMatchesGolden) {
  const auto r = run("sample -g " + data("unit_square.seg") + " -l 0.5 -s 4 --rotation 30 -o " + at("f.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(at("f.csv")), slurp(std::string(VFM_TEST_GOLDEN) + "/unit_square_rot30.csv"));
  ASSERT_EQ(run("sample -g " + data("unit_square.seg") + " -l 0.5 -s 4 -o " + at("g.csv")).code, 0);
  EXPECT_NE(slurp(at("f.csv")), slurp(at("g.csv")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("sample -g " + data("empty.seg") + " -o " + at("x.csv")).code, 2);
  EXPECT_EQ(run("sample -g " + data("no_such.seg") + " -o " + at("x.csv")).code, 2);
  EXPECT_EQ(run("sample -g " + data("unit_square.seg") + " -s 3 -o " + at("x.csv")).code, 2);
  EXPECT_EQ(run("sample -g " + data("unit_square.seg") + " -l -1 -o " + at("x.csv")).code, 2);
  EXPECT_EQ(run("mesh -g " + data("unit_square.seg") + " --policy coin -o " + at("m.obj")).code, 2);
  EXPECT_EQ(run("wedge --alpha 0").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, MeshWritesFiles) {
  const auto r = run("mesh -g " + data("annulus.seg") + " -l 0.25 --antialias -o " + at("m.vtk") + " --report " +
                     at("r.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("components"), std::string::npos);
  EXPECT_EQ(slurp(at("m.vtk")).rfind("# vtk DataFile", 0), 0u);
  EXPECT_FALSE(nlohmann::json::parse(slurp(at("r.json"))).is_null());
}

TEST_F(Cli, PersistIsDeterministic) {
  for (const char* tag : {"a", "b"}) {
    const std::string d = at(tag);
    fs::create_directories(d);
    const auto r = run("persist -g " + data("multi_hole.seg") + " -l 0.25 --diagram " + d + "/d.csv --svg " + d +
                       "/d.svg --betti " + d + "/b.csv");
    ASSERT_EQ(r.code, 0) << r.out;
  }
  for (const char* f : {"d.csv", "d.svg", "b.csv"}) {
    EXPECT_FALSE(slurp(dir / "a" / f).empty()) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  std::ofstream(at("cfg.ini")) << "[sample]\ncell-size=0.25\nsamples=4\n";
  ASSERT_EQ(run("--config " + at("cfg.ini") + " sample -g " + data("unit_square.seg") + " -o " + at("a.csv")).code, 0);
  ASSERT_EQ(run("sample -g " + data("unit_square.seg") + " -l 0.25 -s 4 -o " + at("b.csv")).code, 0);
  EXPECT_EQ(slurp(at("a.csv")), slurp(at("b.csv")));
  ASSERT_EQ(
      run("--config " + at("cfg.ini") + " sample -g " + data("unit_square.seg") + " -l 0.5 -o " + at("c.csv")).code, 0);
  ASSERT_EQ(run("sample -g " + data("unit_square.seg") + " -l 0.5 -s 4 -o " + at("d.csv")).code, 0);
  EXPECT_EQ(slurp(at("c.csv")), slurp(at("d.csv")));
}

TEST_F(Cli, TheoryCommands) {
  const auto ce = run("counterexample --levels 3 -s 8 --vf-samples 8 -o " + at("ce.json"));
  ASSERT_EQ(ce.code, 0) << ce.out;
  EXPECT_FALSE(nlohmann::json::parse(slurp(at("ce.json"))).is_null());
  const auto sw = run("sweep --L-count 3 --theta-count 2 --offset-count 2 -s 8 --csv " + at("s.csv") + " --summary " +
                      at("s.json"));
  ASSERT_EQ(sw.code, 0) << sw.out;
  EXPECT_EQ(nlohmann::json::parse(slurp(at("s.json")))["modes"].size(), 2u);
  EXPECT_EQ(slurp(at("s.csv")).rfind("L_over_ell,", 0), 0u);
}

namespace {

// Kills the background server however the test exits.
struct Background {
  int pid = 0;
  ~Background() {
    if (pid > 0) kill(pid, SIGTERM);
  }
};

}  // namespace

TEST_F(Cli, ServeAnswersQueries) {
  const std::string cmd = std::string(VFM_CLI) + " serve -g " + data("annulus.seg") + " -l 0.25 -p 0 > " + at("log") +
                          " 2>&1 & echo $!";
  FILE* p = popen(cmd.c_str(), "r");
  Background server;
  ASSERT_EQ(fscanf(p, "%d", &server.pid), 1);
  pclose(p);

  int port = 0;
  for (int i = 0; i < 100 && port == 0; ++i) {
    const std::string log = slurp(at("log"));
    if (const auto colon = log.rfind(':'); log.find('\n') != std::string::npos && colon != std::string::npos)
      port = std::atoi(log.c_str() + colon + 1);
    if (port == 0) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  ASSERT_GT(port, 0) << slurp(at("log"));

  httplib::Client cli("127.0.0.1", port);
  auto meta = cli.Get("/meta");
  ASSERT_TRUE(meta) << httplib::to_string(meta.error());
  EXPECT_EQ(meta->status, 200);
  EXPECT_FALSE(nlohmann::json::parse(meta->body).is_null());
  auto diagram = cli.Get("/diagram");
  ASSERT_TRUE(diagram) << httplib::to_string(diagram.error());
  EXPECT_FALSE(nlohmann::json::parse(diagram->body).is_null());
  auto betti = cli.Get("/betti?vf=0.5");
  ASSERT_TRUE(betti) << httplib::to_string(betti.error());
  EXPECT_EQ(betti->status, 200);
  const auto bj = nlohmann::json::parse(betti->body);
  EXPECT_EQ(bj["b0"], 1);
  EXPECT_EQ(bj["b1"], 1);
  auto mesh = cli.Get("/mesh?vf=0.5&antialias=true");
  ASSERT_TRUE(mesh) << httplib::to_string(mesh.error());
  EXPECT_EQ(mesh->status, 200);
  const auto mj = nlohmann::json::parse(mesh->body);
  EXPECT_TRUE(mj.contains("mesh"));
  EXPECT_TRUE(mj.contains("report"));
  auto bad = cli.Get("/betti?vf=abc");
  ASSERT_TRUE(bad) << httplib::to_string(bad.error());
  EXPECT_EQ(bad->status, 400);
  EXPECT_TRUE(nlohmann::json::parse(bad->body).contains("error"));
}
