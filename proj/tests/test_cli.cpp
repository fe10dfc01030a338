#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gapguide/cli.hpp"
#include "gapguide/io.hpp"

using namespace gapguide;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(GAPGUIDE_SOURCE_DIR) / "configs";

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("gapguide_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "gapguide");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return cli::main(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    fs::path write(const std::string& name, const std::string& text) {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, UnknownCommandIsConfigError) {
    EXPECT_EQ(run({"frobnicate", "--config", (kConfigs / "check.json").string()}), 2);
    EXPECT_NE(err_.str().find("unknown command"), std::string::npos);
}

TEST_F(Cli, MissingConfigOptionIsConfigError) {
    EXPECT_EQ(run({"check"}), 2);
    EXPECT_EQ(run({"check", "--config", (dir_ / "absent.json").string()}), 2);
}

TEST_F(Cli, MalformedConfigIsConfigError) {
    EXPECT_EQ(run({"check", "--config", write("bad.json", "{ not json").string()}), 2);
    EXPECT_EQ(run({"check", "--config", write("v.json", R"({"version": 99})").string()}), 2);
    EXPECT_EQ(run({"check", "--config", write("nocheck.json", R"({"version": 1, "cross_section": {"kind": "disk", "radius": 1.0}})").string()}), 2);
    EXPECT_EQ(run({"check", "--config", (kConfigs / "check.json").string(), "--seed", "-4"}), 2);
}

TEST_F(Cli, CheckPrintsVerdictAndWritesProvenance) {
    ASSERT_EQ(run({"check", "--config", (kConfigs / "check.json").string(), "--out", dir_.string(), "--seed", "5"}), 0);
    const std::string first = out_.str().substr(0, out_.str().find('\n'));
    EXPECT_EQ(first, "condition satisfied, margin 6.636");
    const auto j = io::read_json(dir_ / "check.json");
    EXPECT_EQ(j.at("provenance").at("seed").get<int>(), 5);
    EXPECT_EQ(j.at("provenance").at("config_hash").get<std::string>().size(), 16u);
    EXPECT_EQ(j.at("verdict").get<std::string>(), first);
}

TEST_F(Cli, HashIgnoresOutputAndThreadsButNotSeed) {
    const std::string cfg = (kConfigs / "check.json").string();
    const auto hash_of = [&](std::vector<std::string> extra) {
        std::vector<std::string> args{"check", "--config", cfg, "--out", dir_.string()};
        args.insert(args.end(), extra.begin(), extra.end());
        EXPECT_EQ(run(args), 0);
        return io::read_json(dir_ / "check.json").at("provenance").at("config_hash").get<std::string>();
    };
    const std::string base = hash_of({});
    EXPECT_EQ(base, hash_of({"--threads", "1"}));
    EXPECT_NE(base, hash_of({"--seed", "2"}));
}

TEST_F(Cli, ViolatedConditionStillSucceeds) {
    const fs::path cfg = write("weak.json", R"({"version": 1, "cross_section": {"kind": "disk", "radius": 1.0},
        "check": {"l": 0.1, "eps": 2.0, "gap": [1.0, 4.0], "nu": 14.682}})");
    ASSERT_EQ(run({"check", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 0);
    EXPECT_EQ(out_.str().rfind("condition not satisfied", 0), 0u);
}

TEST_F(Cli, NumericalFailureExitCode) {
    const fs::path cfg = write("stall.json", R"({"version": 1,
        "medium": {"dim": 2, "lattice": [[1, 0], [0, 1]], "background": 13,
                   "inclusions": [{"shape": "box", "center": [0.5, 0.5], "half": [0.375, 0.375], "eps": 1}],
                   "defect": {"axis": 0, "cross_section": {"kind": "interval", "a": -1, "b": 1}, "l": 1, "eps": 13}},
        "defect": {"resolution": 8, "transverse_periods": 4, "gap": [2.7, 4.7], "nu": 2.4674, "k1": [0.5],
                   "method": "folded", "tol": 1e-30, "count": 4, "mu_points": 3}})");
    EXPECT_EQ(run({"defect", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 3);
    EXPECT_NE(err_.str().find("numerical failure"), std::string::npos);
}

TEST_F(Cli, ReportOnEmptyDirectory) {
    const fs::path cfg = write("r.json", R"({"version": 1})");
    ASSERT_EQ(run({"report", "--config", cfg.string(), "--out", dir_.string()}), 0);
    EXPECT_NE(slurp(dir_ / "summary.md").find("No artifacts found"), std::string::npos);
    ASSERT_EQ(run({"report", "--config", cfg.string(), "--out", (dir_ / "absent").string()}), 0);
    EXPECT_NE(out_.str().find("no artifacts"), std::string::npos);
}

TEST_F(Cli, ReportIsIdempotent) {
    const std::string cfg = (kConfigs / "check.json").string();
    ASSERT_EQ(run({"check", "--config", cfg, "--out", dir_.string()}), 0);
    ASSERT_EQ(run({"report", "--config", cfg, "--out", dir_.string()}), 0);
    const std::string a = slurp(dir_ / "summary.md");
    ASSERT_EQ(run({"report", "--config", cfg, "--out", dir_.string()}), 0);
    EXPECT_EQ(a, slurp(dir_ / "summary.md"));
    EXPECT_NE(a.find("Existence condition"), std::string::npos);
    EXPECT_NE(a.find("nu.json"), std::string::npos);  // listed as missing
    EXPECT_TRUE(fs::exists(dir_ / "plot_bands.py"));
}

TEST_F(Cli, CheckLineFormat) {
    EXPECT_EQ(cli::check_line(true, 6.6361), "condition satisfied, margin 6.636");
    EXPECT_EQ(cli::check_line(false, -0.5), "condition not satisfied, margin -0.500");
}
