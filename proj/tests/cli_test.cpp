#include "gpso/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace gpso {
namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gpso");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "gpso_cli_test";
    void SetUp() override {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    void TearDown() override { std::filesystem::remove_all(dir); }
    std::string file(const std::string& name, const std::string& text) {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }
};

TEST_F(CliTest, ScoreThreePointDesign) {
    const CliRun r = cli({"score", "--design", file("d.csv", "x1\n-1\n0\n1\n")});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("G=3\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("G_eff=100\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("argmax=(-1)"), std::string::npos) << r.out;
}

TEST_F(CliTest, CompareIdenticalFiles) {
    const std::string a = file("a.csv", "x1,x2\n-1,-1\n1,-1\n-1,1\n1,1\n0,0\n1,0\n0,1\n");
    const std::string b = file("b.csv", "x1,x2\n-1,-1\n1,-1\n-1,1\n1,1\n0,0\n1,0\n0,1\n");
    const CliRun r = cli({"compare", "--a", a, "--b", b});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("releff=100\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, CompareMismatchedK) {
    const CliRun r = cli({"compare", "--a", file("a.csv", "x1\n-1\n0\n1\n"), "--b",
                          file("b.csv", "x1,x2\n0,0\n1,1\n-1,1\n0,1\n1,0\n-1,-1\n")});
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("b.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, SearchWritesCatalogThatRescoresIdentically) {
    const std::string out = (dir / "run").string();
    const CliRun r = cli({"search", "--k", "1", "--n", "3", "--runs", "10", "--seed", "7", "--out", out});
    ASSERT_EQ(r.status, 0) << r.err;
    std::ifstream is(std::filesystem::path(out) / "catalog.json");
    const nlohmann::json j = nlohmann::json::parse(is);
    const int best = j["best_index"];
    const double best_eff = j["results"][best]["best_g_eff"];
    EXPECT_GE(best_eff, 99.999);
    EXPECT_EQ(j["results"][0]["seed"], 7);

    const DesignMatrix design = read_design_csv((std::filesystem::path(out) / "best_design.csv").string());
    const double rescored = g_score(design, make_grid(ModelSpec(1))).value;
    EXPECT_EQ(rescored, j["results"][best]["best_g"].get<double>());

    const CliRun check = cli({"grid-check", "--design", (std::filesystem::path(out) / "best_design.csv").string(),
                              "--json"});
    ASSERT_EQ(check.status, 0) << check.err;
    const nlohmann::json report = nlohmann::json::parse(check.out);
    EXPECT_EQ(report["fine_levels"], 21);
    EXPECT_FALSE(report["suspect"].get<bool>());
}

TEST_F(CliTest, GridCheckText) {
    const CliRun r = cli({"grid-check", "--design", file("d.csv", "x1\n-1\n0\n1\n"), "--fine-grid", "41"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("41^1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("discrepancy %"), std::string::npos);
}

TEST_F(CliTest, Scenarios) {
    const CliRun r = cli({"scenarios"});
    EXPECT_EQ(r.status, 0);
    std::istringstream is(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    EXPECT_EQ(lines, 30);
    EXPECT_NE(r.out.find("4,15,15,210,48.89,71.09"), std::string::npos) << r.out;
}

TEST_F(CliTest, Errors) {
    EXPECT_NE(cli({}).status, 0);
    EXPECT_NE(cli({"score", "--design", "x.csv", "--bogus"}).status, 0);
    const CliRun missing = cli({"score", "--design", (dir / "missing.csv").string()});
    EXPECT_EQ(missing.status, 1);
    EXPECT_NE(missing.err.find("missing.csv"), std::string::npos);
    const CliRun malformed = cli({"score", "--design", file("bad.csv", "x1,x2\n0,0\n0\n")});
    EXPECT_EQ(malformed.status, 1);
    EXPECT_NE(malformed.err.find("row 2"), std::string::npos) << malformed.err;
    const CliRun wrong_k = cli({"score", "--k", "2", "--design", file("k1.csv", "x1\n0\n")});
    EXPECT_EQ(wrong_k.status, 1);
    EXPECT_NE(wrong_k.err.find("expected K=2"), std::string::npos);
}

}  // namespace
}  // namespace gpso
