#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hetq/io.hpp"
#include "oracles.hpp"
#include "svg.hpp"

using namespace hetq;
using namespace hetq::cli;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(HETQ_CONFIG_DIR) + "/" + name + ".json"; }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hetq_test_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig config_for(const std::string& model, const std::string& tag) {
    RunConfig c;
    c.model = config_path(model);
    c.out_dir = scratch(tag);
    return c;
}

int run(const std::string& cmd, const RunConfig& c, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(cmd, c, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST(Io, FormatNumber) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_EQ(format_number(0.2383369607062818, 4), "0.2383");
}

TEST(Io, TrajectoryCsvColumnOrder) {
    Trajectory t;
    t.times = {0.0};
    t.probs = {{0.1, 0.2, 0.3, 0.4}};
    t.mean = {mean_of(t.probs[0])};
    t.l1_defect = {0.0};
    std::ostringstream out;
    write_trajectory_csv(out, t);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,p00,p01,p10,p11,mean");
    // p01 is vector index 2, p10 is index 1
    EXPECT_NE(text.find("0,0.1,0.3,0.2,0.4,"), std::string::npos) << text;
}

TEST(Io, MatrixRoundTripsAtFullPrecision) {
    Matrix m(1, 2);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = -2.0;
    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream in(out.str());
    double a = 0, b = 0;
    in >> a >> b;
    EXPECT_EQ(a, 1.0 / 3.0);
    EXPECT_EQ(b, -2.0);
}

TEST(Svg, RendersSeries) {
    const std::string svg = render_line_chart("title", "t", "y", {{"s", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("<path"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Resolve, PrecedenceAndEnv) {
    RunConfig c;
    c.model = config_path("example1");
    auto r = resolve(c);
    EXPECT_DOUBLE_EQ(r.solve.horizon, 50.0);
    c.horizon = 7.0;
    EXPECT_DOUBLE_EQ(resolve(c).solve.horizon, 7.0);
    ::setenv(kOutDirEnv, "/tmp/hetq_env_dir", 1);
    EXPECT_EQ(resolve(c).out_dir, fs::path("/tmp/hetq_env_dir"));
    ::unsetenv(kOutDirEnv);
    EXPECT_EQ(resolve(c).out_dir, fs::path("hetq_out"));
    c.paths = 10;
    EXPECT_THROW((void)resolve(c), ConfigError);
}

TEST(Commands, BoundExample1) {
    auto c = config_for("example1", "bound1");
    std::string out;
    ASSERT_EQ(run("bound", c, &out), kExitOk) << out;
    EXPECT_NE(out.find("[reported 0.3]"), std::string::npos) << out;
    const std::string cert = slurp(c.out_dir / "certificate.txt");
    EXPECT_NE(cert.find("frozen_beta_reported = 0.3"), std::string::npos) << cert;
    EXPECT_NE(cert.find("[alpha_table]"), std::string::npos);
}

TEST(Commands, BoundOverloadedIsNotCertified) {
    std::string out;
    EXPECT_EQ(run("bound", config_for("overloaded", "overloaded"), &out), kExitCheckFailed);
    EXPECT_NE(out.find("ergodicity not certified"), std::string::npos);
}

TEST(Commands, ConfigErrors) {
    std::string err;
    EXPECT_EQ(run("bound", config_for("invalid_mu", "invalid"), nullptr, &err), kExitConfigError);
    EXPECT_NE(err.find("config error"), std::string::npos);
    EXPECT_EQ(run("bound", config_for("does_not_exist", "missing")), kExitConfigError);
    auto c = config_for("example1", "badeps");
    c.epsilon = 1.5;
    EXPECT_EQ(run("bound", c), kExitConfigError);
    EXPECT_EQ(run("nope", c), kExitConfigError);
}

TEST(Commands, BoundWithUserWeightsAndMeasurement) {
    auto c = config_for("table_rates", "table");
    c.epsilon = 0.3;
    c.delta1 = 1.6;
    c.measure = true;
    c.horizon = 30;
    std::string out;
    ASSERT_EQ(run("bound", c, &out), kExitOk) << out;
    EXPECT_NE(out.find("measured prefactor N"), std::string::npos) << out;
}

TEST(Commands, SolveIdleModel) {
    auto c = config_for("idle", "idle");
    std::string out;
    ASSERT_EQ(run("solve", c, &out), kExitOk) << out;
    for (const char* f : {"trajectory_x0.csv", "trajectory_xfar.csv", "limit_cycle.csv", "report.txt", "p00.svg",
                          "p01.svg", "p10.svg", "p11.svg", "mean.svg", "mean_cycle.svg"}) {
        EXPECT_TRUE(fs::exists(c.out_dir / f)) << f;
    }
    // nothing ever arrives, so the empty-start trajectory stays at (0,0)
    const std::string csv = slurp(c.out_dir / "trajectory_x0.csv");
    EXPECT_NE(csv.find("\n20,1,0,0,0"), std::string::npos);
}

TEST(Commands, SolveShortHorizonIsNumericalFailure) {
    auto c = config_for("example1", "short");
    c.horizon = 2;
    c.n = 16;
    std::string out;
    EXPECT_EQ(run("solve", c, &out), kExitNumericalFailure);
    EXPECT_NE(out.find("t_mix = not reached"), std::string::npos);
}

TEST(Commands, SolveFarStateOutsideTruncation) {
    auto c = config_for("example1", "far");
    c.n = 16;
    c.far_state = 16;
    EXPECT_EQ(run("solve", c), kExitConfigError);
}

TEST(Commands, SimulateWritesEstimates) {
    auto c = config_for("example1", "sim");
    c.paths = 500;
    c.times = {2.0, 1.0};
    std::string out;
    ASSERT_EQ(run("simulate", c, &out), kExitOk);
    const std::string csv = slurp(c.out_dir / "mc_estimates.csv");
    EXPECT_EQ(csv.rfind("t,state,estimate,stderr\n", 0), 0u);
}

TEST(Commands, DumpMatrices) {
    auto c = config_for("example3", "dump");
    c.at = 0.25;
    std::string out;
    ASSERT_EQ(run("dump", c, &out), kExitOk);
    EXPECT_EQ(out.substr(0, out.find('\n')), "-16 6 5 0 0 0 0 0");
    c.matrix = "transformed";
    EXPECT_EQ(run("dump", c), kExitOk);
    c.matrix = "C";
    EXPECT_EQ(run("dump", c), kExitConfigError);
}

TEST(Binary, ExitCodes) {
    const std::string bin = HETQ_BINARY;
    const std::string out = " --out " + scratch("binary").string() + " > /dev/null 2>&1";
    auto code = [](const std::string& cmd) {
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    EXPECT_EQ(code(bin + " bound --model " + config_path("example3") + out), 0);
    EXPECT_EQ(code(bin + " bound --model " + config_path("overloaded") + out), 2);
    EXPECT_EQ(code(bin + " bound --model " + config_path("invalid_mu") + out), 1);
    EXPECT_EQ(code(bin + " bound" + out), 1);
}

TEST(Commands, SolveIsDeterministicAndMergesExample1) {
    auto a = config_for("example1", "det_a");
    auto b = config_for("example1", "det_b");
    a.n = b.n = 16;
    std::string out;
    ASSERT_EQ(run("solve", a, &out), kExitOk) << out;
    ASSERT_EQ(run("solve", b), kExitOk);
    for (const char* f : {"trajectory_x0.csv", "trajectory_xfar.csv", "limit_cycle.csv"}) {
        EXPECT_EQ(slurp(a.out_dir / f), slurp(b.out_dir / f)) << f;
    }
    const auto pos = out.find("t_mix = ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(out.substr(pos + 8)), 50.0);
}

TEST(Commands, CompareExample1Passes) {
    auto c = config_for("example1", "compare");
    std::string out;
    EXPECT_EQ(run("compare", c, &out), kExitOk) << out;
    EXPECT_NE(out.find("compare: PASS"), std::string::npos);
    EXPECT_EQ(run("compare", config_for("invalid_mu", "compare_bad")), kExitConfigError);
}
