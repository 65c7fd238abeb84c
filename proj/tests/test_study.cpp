#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "wgbiot/error.hpp"
#include "wgbiot/study.hpp"

using namespace wgbiot;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("wgbiot_test_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(WGBIOT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, ParsesKeys) {
    std::istringstream in(
        "# comment\n"
        "scenario = heterogeneous\n"
        "k0 = 1e-6\n"
        "k = 2\n"
        "r_policy = FixedPlus2\n"
        "levels = 2, 3 4\n"
        "dt = 0.05\n"
        "final_time = 1\n"
        "cut_style = stairl\n"
        "seed = 9\n");
    const RunConfig c = parse_config(in);
    EXPECT_EQ(c.scenario, "heterogeneous");
    EXPECT_EQ(c.k0, 1e-6);
    EXPECT_EQ(c.k, 2);
    EXPECT_EQ(c.r_policy, RPolicy::FixedPlus2);
    EXPECT_EQ(c.levels, (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(c.steps(), 20);
    EXPECT_EQ(c.cut_style, CutStyle::StairL);
    EXPECT_EQ(c.seed, 9u);
}

TEST(Config, DefaultProtocol) {
    const RunConfig c;
    EXPECT_EQ(c.steps(), 5);
    EXPECT_EQ(c.dt, 1e-3);
}

TEST(Config, Errors) {
    std::istringstream unknown("levls = 1, 2\n");
    EXPECT_THROW(parse_config(unknown), ConfigError);
    std::istringstream bad_value("k = two\n");
    EXPECT_THROW(parse_config(bad_value), ConfigError);
    std::istringstream no_eq("k 2\n");
    EXPECT_THROW(parse_config(no_eq), ConfigError);
    RunConfig c;
    c.levels = {4, 3};
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.k = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.scenario = "nope";
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(read_config_file("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, InvalidScenarioFailsBeforeAssembly) {
    RunConfig c;
    c.scenario = "nope";
    c.levels = {9};  // would be slow and large if assembly started
    std::ostringstream log;
    EXPECT_THROW(run_convergence(c, &log), ConfigError);
    EXPECT_TRUE(log.str().empty());
}

TEST(Convergence, WritesCsvAndTableDeterministically) {
    RunConfig c;
    c.levels = {1, 2};
    c.r_policy = RPolicy::FixedPlus2;
    const fs::path a = scratch("conv_a"), b = scratch("conv_b");
    c.out_dir = a.string();
    const auto ra = run_convergence(c);
    c.out_dir = b.string();
    run_convergence(c);
    ASSERT_EQ(ra.records.size(), 2u);
    EXPECT_FALSE(ra.records[0].orders[0].has_value());
    EXPECT_TRUE(ra.records[1].orders[0].has_value());
    EXPECT_EQ(slurp(a / "convergence.csv"), slurp(b / "convergence.csv"));
    EXPECT_EQ(slurp(a / "convergence.txt"), ra.table);
    std::istringstream csv(slurp(a / "convergence.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 3);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Steady, DumpAndDirichletSide) {
    RunConfig c;
    c.scenario = "heterogeneous";
    c.k = 1;
    c.r_policy = RPolicy::FixedPlus2;
    c.levels = {2};
    c.dt = 0.1;
    c.final_time = 0.5;
    c.samples = 11;
    const fs::path dir = scratch("steady");
    c.out_dir = dir.string();
    const auto r = run_steady(c);
    ASSERT_EQ(r.samples.size(), 121u);
    EXPECT_NEAR(r.final_time, 0.5, 1e-12);
    std::istringstream dump(slurp(dir / "steady_fields.txt"));
    std::string line;
    int lines = 0;
    while (std::getline(dump, line)) ++lines;
    EXPECT_EQ(lines, 121);
    // The interior polynomial only approximates the Dirichlet value on the boundary.
    double pmax = 0.0, pedge = 0.0;
    for (const auto& s : r.samples) {
        pmax = std::max(pmax, std::abs(s.p));
        if (s.x == 1.0) pedge = std::max(pedge, std::abs(s.p));
    }
    EXPECT_GT(pmax, 0.0);
    EXPECT_LT(pedge, 0.1 * pmax) << pedge << " " << pmax;
    fs::remove_all(dir);
}

TEST(Steady, RequiresHeterogeneousScenario) {
    RunConfig c;
    c.levels = {1};
    EXPECT_THROW(run_steady(c), ConfigError);
}

TEST(Sampling, GridSizeAndValidation) {
    const Mesh m = build_nonconvex_grid(1);
    const auto map = build_dof_map(m, 1);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(map.n_u), p = Eigen::VectorXd::Zero(map.n_p);
    EXPECT_EQ(sample_fields(m, map, u, p, 5).size(), 25u);
    EXPECT_THROW(sample_fields(m, map, u, p, 1), ArgumentError);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    EXPECT_EQ(run_cli("convergence --levels 1,2 --k 1 --r-policy FixedPlus2 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "convergence.csv"));
    EXPECT_EQ(run_cli("convergence --scenario nope --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("convergence --bogus-flag"), 2);
    EXPECT_EQ(run_cli("steady --k 5 --out " + dir.string()), 2);
    fs::remove_all(dir);
}
