#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "exchlab/cli/scenario.hpp"
#include "exchlab/errors.hpp"

using namespace exchlab;
using namespace exchlab::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("exchlab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, DefaultsCoverEveryCommand) {
  for (const auto& c : commands()) {
    const auto d = default_config(c);
    EXPECT_EQ(d["command"], c);
    EXPECT_TRUE(d["params"].is_object());
    EXPECT_EQ(resolve_config(c, d), d);
  }
  EXPECT_THROW((void)default_config("nope"), ConfigInvalid);
}

TEST(Config, UnknownKeyIsRejected) {
  json user = {{"params", {{"n", 12}, {"bogus", 3}}}};
  try {
    (void)resolve_config("fringe", user);
    FAIL() << "expected ConfigInvalid";
  } catch (const ConfigInvalid& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW((void)resolve_config("fringe", json{{"params", {{"n", "ten"}}}}), ConfigInvalid);
  EXPECT_THROW((void)resolve_config("fringe", json{{"extra", 1}}), ConfigInvalid);
}

TEST(Config, OverridesMerge) {
  const auto cfg = resolve_config("thermal", json{{"params", {{"n", 6}}}, {"seed", 9}});
  EXPECT_EQ(cfg["params"]["n"], 6);
  EXPECT_EQ(cfg["seed"], 9);
  EXPECT_EQ(cfg["params"]["levels"], default_config("thermal")["params"]["levels"]);
}

TEST(Run, WritesArtifactsAndManifest) {
  const auto dir = scratch("run");
  RunOptions o;
  o.out = dir;
  const auto cfg = resolve_config("fringe", json{{"params", {{"points", 16}}}});
  const auto s = run("fringe", cfg, o);
  EXPECT_TRUE(fs::exists(dir / "fringe.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "fringe");
  EXPECT_EQ(manifest["config"], cfg);
  EXPECT_TRUE(manifest["versions"].contains("exchlab"));
  for (const auto& p : s.outputs) EXPECT_TRUE(fs::exists(p));
  fs::remove_all(dir);
}

TEST(Run, ManifestConfigReproducesOutputs) {
  const auto a = scratch("a");
  const auto b = scratch("b");
  RunOptions o;
  o.out = a;
  auto cfg = resolve_config("dephase", json{{"params", {{"trials", 5}}}, {"seed", 42}});
  (void)run("dephase", cfg, o);
  const auto manifest = json::parse(slurp(a / "manifest.json"));
  o.out = b;
  o.threads = 2;
  (void)run("dephase", manifest["config"], o);
  EXPECT_EQ(slurp(a / "dephase_trials.csv"), slurp(b / "dephase_trials.csv"));
  EXPECT_EQ(slurp(a / "dephase.csv"), slurp(b / "dephase.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, SeedOverrideChangesTrials) {
  const auto a = scratch("sa");
  const auto b = scratch("sb");
  auto cfg = resolve_config("dephase", json{{"params", {{"trials", 3}, {"channels", {"fast_gradient"}}}}});
  RunOptions o;
  o.out = a;
  o.seed = 1;
  (void)run("dephase", cfg, o);
  o.out = b;
  o.seed = 2;
  (void)run("dephase", cfg, o);
  EXPECT_NE(slurp(a / "dephase_trials.csv"), slurp(b / "dephase_trials.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Entry, ExitCodes) {
  const auto dir = scratch("entry");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"params": {"nonsense": 1}})";
  }
  const std::string cfg = (dir / "bad.json").string();
  const std::string out = (dir / "out").string();
  {
    const char* argv[] = {"exchlab", "thermal", "--config", cfg.c_str(), "--out", out.c_str()};
    EXPECT_EQ(main_entry(6, const_cast<char**>(argv)), 2);
  }
  {
    const char* argv[] = {"exchlab", "not-a-command"};
    EXPECT_EQ(main_entry(2, const_cast<char**>(argv)), 2);
  }
  {
    const char* argv[] = {"exchlab", "thermal", "--out", out.c_str()};
    EXPECT_EQ(main_entry(4, const_cast<char**>(argv)), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "thermal.csv"));
  }
  fs::remove_all(dir);
}

TEST(Entry, AtomicWriteReplaces) {
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "x.txt", "one");
  write_atomic(dir / "x.txt", "two");
  EXPECT_EQ(slurp(dir / "x.txt"), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}
