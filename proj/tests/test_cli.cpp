#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include <ricciflat/cli_support.hpp>

using namespace ricciflat;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RICCIFLAT_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe            = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("ricciflat_test_" + name); }

} // namespace

TEST(CliParse, Numbers) {
    EXPECT_EQ(cli::parse_double(" 1.5 ", "x"), 1.5);
    EXPECT_THROW(cli::parse_double("1.5x", "x"), cli::UsageError);
    EXPECT_THROW(cli::parse_double("", "x"), cli::UsageError);
    EXPECT_EQ(cli::parse_int("3", "n"), 3);
    EXPECT_THROW(cli::parse_int("3.5", "n"), cli::UsageError);
    EXPECT_EQ(cli::parse_doubles("1, 2,3", 3, "v"), (std::vector<double>{1, 2, 3}));
    EXPECT_THROW(cli::parse_doubles("1,2", 3, "v"), cli::UsageError);
    EXPECT_EQ(cli::parse_signs("1,-1,1"), (std::vector<int>{1, -1, 1}));
    EXPECT_THROW(cli::parse_signs("1,0"), cli::UsageError);
}

TEST(CliParse, Assembled) {
    const auto a = cli::parse_assembled("scherk,n=3,eps=+-+,e0=0.3,m1=1,n1=0.5");
    EXPECT_EQ(a.surface, "scherk");
    EXPECT_EQ(a.config.n, 3);
    EXPECT_EQ(a.config.eps_blocks, (std::vector<int>{1, -1, 1}));
    EXPECT_EQ(a.config.e0, 0.3);
    EXPECT_EQ(cli::parse_assembled("catenoid,n=2").config.eps_blocks, (std::vector<int>{1, 1}));
    EXPECT_THROW(cli::parse_assembled("scherk,n=2,eps=+"), cli::UsageError);
    EXPECT_THROW(cli::parse_assembled("scherk,q=1"), cli::UsageError);
}

TEST(CliParse, SurfaceParamsAndConfig) {
    const auto p = cli::parse_surface_params({"profile=cubic", "slope=3"});
    EXPECT_EQ(p.at("profile"), 2.0);
    EXPECT_EQ(p.at("slope"), 3.0);
    EXPECT_THROW(cli::parse_surface_params({"profile=square"}), cli::UsageError);
    const auto path = temp_path("cfg.txt");
    std::ofstream(path) << "# comment\nsurface = scherk\n\nsamples=10 # trailing\n";
    const auto cfg = cli::read_config(path.string());
    EXPECT_EQ(cfg.at("surface"), "scherk");
    EXPECT_EQ(cfg.at("samples"), "10");
    EXPECT_THROW(cli::read_config("/nonexistent/cfg"), cli::IoError);
}

TEST(CliRun, VerifyScherkInstanton) {
    const auto r = run("verify --surface scherk --n 1 --eps-blocks 1 --e0 0 --m1 0 --n1 0 --samples 20");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["signature"], 4);
}

TEST(CliRun, VerifyControlFails) {
    const auto r = run("verify --surface nonminimal_x2 --n 1 --eps-blocks 1 --samples 20");
    ASSERT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["ricci"]["max_normalized"].get<double>(), 1e-7);
    EXPECT_GT(j["per_check"]["P5"]["max_normalized_residual"].get<double>(), 1e-9);
}

TEST(CliRun, UsageErrors) {
    auto r = run("verify --surface nosuch");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(run("verify --surface scherk --bogus").code, 2);
    EXPECT_EQ(run("verify --surface scherk --n 2 --eps-blocks 1").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("solve --boundary scherk --ambient 1,1,0 --out /dev/null").code, 2);
    EXPECT_EQ(run("curvature --metric torus --point 0,0").code, 2);
}

TEST(CliRun, IoErrors) {
    EXPECT_EQ(run("verify --grid /nonexistent/file.minsurf").code, 3);
    EXPECT_EQ(run("verify --surface scherk --samples 3 --json /nonexistent/dir/r.json").code, 3);
    EXPECT_EQ(run("verify --config /nonexistent/cfg").code, 3);
}

TEST(CliRun, ConfigFileFillsMissingFlags) {
    const auto path = temp_path("verify.cfg");
    std::ofstream(path) << "surface=catenoid\nn=2\neps_blocks=1,-1\nsamples=7\nseed=3\n";
    const auto r = run("verify --config " + path.string() + " --samples 5");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["surface"], "catenoid");
    EXPECT_EQ(j["points_requested"], 5);
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["config"]["n"], 2);
}

TEST(CliRun, JsonFileMatchesStdout) {
    const auto path = temp_path("report.json");
    const auto r    = run("verify --surface helicoid --samples 5 --json " + path.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path);
    const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(file, r.out);
}

TEST(CliRun, SolveAndVerifyGrid) {
    const auto path = temp_path("lin.minsurf");
    auto r          = run("solve --boundary linear:1,2,3 --grid 9,9 --out " + path.string());
    ASSERT_EQ(r.code, 0);
    // one JSON line per iterate, at most two Newton steps
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    EXPECT_LE(lines, 3);
    EXPECT_EQ(nlohmann::json::parse(r.out.substr(0, r.out.find('\n')))["iteration"], 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("minsurf v1 9 9", 0), 0u);

    const auto v = run("verify --grid " + path.string() + " --samples 5");
    EXPECT_EQ(v.code, 0);
}

TEST(CliRun, SolveNoConvergenceStillWrites) {
    const auto path = temp_path("nc.minsurf");
    fs::remove(path);
    EXPECT_EQ(run("solve --boundary scherk --grid 33,33 --max-iter 1 --out " + path.string()).code, 1);
    std::ifstream in(path);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    EXPECT_EQ(last.rfind("# converged=false", 0), 0u);
}

TEST(CliRun, SolveFromFileBoundary) {
    const auto src = temp_path("src.minsurf"), dst = temp_path("dst.minsurf");
    ASSERT_EQ(run("solve --boundary scherk --grid 17,17 --out " + src.string()).code, 0);
    EXPECT_EQ(run("solve --boundary file:" + src.string() + " --grid 17,17 --out " + dst.string()).code, 0);
}

TEST(CliRun, Curvature) {
    auto r = run("curvature --metric sphere:2 --point 1.0,0.5");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out)["scalar"].get<double>(), 0.5, 1e-12);
    r = run("curvature --metric flat --point 0,0");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["max_abs_ricci"].get<double>(), 0.0);
    r = run("curvature --metric assembled:scherk,n=1 --point 0.3,0.2");
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(nlohmann::json::parse(r.out)["max_abs_ricci"].get<double>(), 1e-7);
}
