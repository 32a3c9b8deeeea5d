#include "layoutforge/scene_io.hpp"
#include "layoutforge/synthetic.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace {

using namespace layoutforge;
namespace fs = std::filesystem;

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(LAYOUTFORGE_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& f : fs::recursive_directory_iterator(root)) {
    if (f.is_regular_file()) out[fs::relative(f.path(), root).string()] = slurp(f.path());
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir = new fixtures::TempDir("cli");
    const fs::path d = dir->path();
    ASSERT_EQ(run("synth --out " + (d / "corpus").string() + " --per-kind 15 --seed 3 --requests " +
                      (d / "requests").string(),
                  d / "synth.log"),
              0);
    ASSERT_EQ(run("extract --corpus " + (d / "corpus").string() + " --store " +
                      (d / "store").string(),
                  d / "extract.json"),
              0);
  }
  static void TearDownTestSuite() { delete dir; }
  static fs::path path(const std::string& name) { return dir->path() / name; }
  static fixtures::TempDir* dir;
};

fixtures::TempDir* CliTest::dir = nullptr;

TEST_F(CliTest, ExtractReport) {
  const Json report = Json::parse(slurp(path("extract.json")));
  EXPECT_GE(report.at("relations").get<int>(), 1);
  EXPECT_GT(report.at("removalRate").get<double>(), 0.0);
  EXPECT_EQ(report.at("scenes"), 60);
}

TEST_F(CliTest, ExtractErrors) {
  EXPECT_EQ(run("extract --corpus " + path("missing").string() + " --store " +
                    path("s2").string(),
                path("e.log")),
            2);
  fs::create_directories(path("empty"));
  EXPECT_EQ(run("extract --corpus " + path("empty").string() + " --store " + path("s3").string(),
                path("empty.json")),
            0);
  EXPECT_EQ(Json::parse(slurp(path("empty.json"))).at("relations"), 0);
}

TEST_F(CliTest, RerunGivesIdenticalStore) {
  ASSERT_EQ(run("extract --corpus " + path("corpus").string() + " --store " +
                    path("store_again").string(),
                path("again.json")),
            0);
  const auto a = tree(path("store"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, tree(path("store_again")));
}

TEST_F(CliTest, LayoutDeterminismAndDiversity) {
  const std::string common = "layout --scene " + path("requests/bedroom.json").string() +
                             " --store " + path("store").string();
  ASSERT_EQ(run(common + " --seed 42 --out " + path("a.json").string(), path("a.log")), 0);
  ASSERT_EQ(run(common + " --seed 42 --out " + path("b.json").string(), path("b.log")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  std::set<std::string> distinct;
  for (int seed = 1; seed <= 10; ++seed) {
    const fs::path out = path("seed" + std::to_string(seed) + ".json");
    ASSERT_EQ(run(common + " --seed " + std::to_string(seed) + " --out " + out.string(),
                  path("s.log")),
              0);
    distinct.insert(slurp(out));
  }
  EXPECT_GE(distinct.size(), 9u);
  EXPECT_EQ(run("layout --scene " + path("requests/bedroom.json").string() + " --store " +
                    path("nowhere").string() + " --out " + path("x.json").string(),
                path("x.log")),
            2);
}

TEST_F(CliTest, CrowdedRoomStillSucceeds) {
  ASSERT_EQ(run("layout --scene " + path("requests/crowded.json").string() + " --store " +
                    path("store").string() + " --seed 1 --out " + path("c.json").string() +
                    " --report " + path("c_report.json").string(),
                path("c.log")),
            0);
  const Json report = Json::parse(slurp(path("c_report.json")));
  EXPECT_FALSE(report.at("discards").empty());
}

TEST_F(CliTest, SvgHasOneRectPerPlacedObject) {
  ASSERT_EQ(run("layout --scene " + path("requests/living_dining.json").string() + " --store " +
                    path("store").string() + " --seed 5 --out " + path("l.json").string() +
                    " --svg " + path("l.svg").string(),
                path("l.log")),
            0);
  const std::string svg = slurp(path("l.svg"));
  const Scene placed = scene_from_json(Json::parse(slurp(path("l.json"))));
  std::size_t n_placed = 0;
  for (const auto& o : placed.objects) n_placed += o.transform.has_value();
  const std::regex rect("<rect ");
  const auto rects = std::distance(std::sregex_iterator(svg.begin(), svg.end(), rect),
                                   std::sregex_iterator());
  EXPECT_EQ(static_cast<std::size_t>(rects), n_placed);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("group-"), std::string::npos);
  // Well-formed enough: every opened tag closes or self-closes.
  const std::regex open_tag("<([a-z]+)[ >]");
  std::map<std::string, int> balance;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), open_tag); it != std::sregex_iterator(); ++it) {
    ++balance[(*it)[1]];
  }
  const std::regex close_tag("</([a-z]+)>|/>");
  std::size_t closes = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), close_tag); it != std::sregex_iterator(); ++it) {
    ++closes;
  }
  std::size_t opens = 0;
  for (const auto& [tag, n] : balance) opens += static_cast<std::size_t>(n);
  EXPECT_EQ(opens, closes);
}

}  // namespace
