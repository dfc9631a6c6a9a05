#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#ifndef QNR_CLI_PATH
#error "QNR_CLI_PATH must name the qnr_cli binary"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result sh(const std::string& cmd) {
    const std::string full = cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::string kCli = QNR_CLI_PATH;

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("qnr_cli_test_" + std::to_string(::getpid()))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

}  // namespace

TEST(Cli, Oracle) {
    const auto r = sh(kCli + " oracle --prime 17");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "3 5 6 7 10 11 12 14\n");
    const auto j = nlohmann::json::parse(sh(kCli + " oracle --prime 41 --format json").out);
    EXPECT_EQ(j["qnrs"].size(), 20u);
}

TEST(Cli, Angle) {
    const auto r = sh(kCli + " angle --prime 41");
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 2.2142975, 1e-7);
    EXPECT_EQ(sh(kCli + " angle --prime 13").code, 2);
}

TEST(Cli, PipelineScoresPerfectly) {
    const auto r = sh(kCli + " gen --prime 17 --reduced17 | " + kCli + " sim --shots 1000 --seed 7 | " + kCli +
                      " score --prime 17");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["success_rate"], 1.0);
    EXPECT_EQ(j["shots"], 1000);
}

TEST(Cli, Deterministic) {
    const std::string cmd = kCli + " gen --prime 41 | " + kCli + " sim --shots 500 --seed 3 --noise depolarizing:0.01";
    const auto a = sh(cmd);
    const auto b = sh(cmd);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, sh(kCli + " gen --prime 41 | " + kCli + " sim --shots 500 --seed 4 --noise depolarizing:0.01").out);
}

TEST(Cli, LowerEmitParseRoundTrip) {
    TempDir dir;
    ASSERT_EQ(sh(kCli + " gen --reduced17 --out " + (dir / "c.json")).code, 0);
    ASSERT_EQ(sh(kCli + " lower --nn --in " + (dir / "c.json") + " --out " + (dir / "l.json")).code, 0);
    const auto qasm = sh(kCli + " emit-qasm --in " + (dir / "l.json"));
    ASSERT_EQ(qasm.code, 0);
    EXPECT_EQ(qasm.out.rfind("OPENQASM 2.0;", 0), 0u);
    std::ofstream(dir / "p.qasm") << qasm.out;
    const auto again = sh(kCli + " parse-qasm --in " + (dir / "p.qasm") + " | " + kCli + " emit-qasm");
    EXPECT_EQ(again.out, qasm.out);
    const auto probs = nlohmann::json::parse(sh(kCli + " sim --in " + (dir / "l.json")).out);
    EXPECT_EQ(probs["probabilities"].size(), 8u);
    // Unlowered input is a domain error.
    EXPECT_EQ(sh(kCli + " emit-qasm --in " + (dir / "c.json")).code, 2);
}

TEST(Cli, Baseline) {
    const auto j = nlohmann::json::parse(sh(kCli + " baseline --prime 17 --trials 100000 --seed 5").out);
    EXPECT_EQ(j["exact_success"], "3/4");
    EXPECT_NEAR(j["success_rate"].get<double>(), 0.75, 0.01);
    const auto a = nlohmann::json::parse(sh(kCli + " baseline --prime 17 --trials 1000 --advice 3").out);
    EXPECT_EQ(a["success_rate"], 1.0);
    EXPECT_EQ(a["counts"].size(), 8u);
    EXPECT_EQ(sh(kCli + " baseline --prime 17 --trials 10 --advice 2").code, 2);
}

TEST(Cli, PlotData) {
    TempDir dir;
    std::ofstream(dir / "a.json") << R"({"prime":17,"shots":10,"counts":{"0011":10},"device":"dev-a","timestamp":"x"})";
    std::ofstream(dir / "b.json") << R"({"prime":17,"shots":10,"counts":{"0001":10},"device":"dev-b","timestamp":"x"})";
    const auto r = sh(kCli + " plotdata --results " + dir.str());
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "device,score,p_value_plot,logit(p_value_plot)\ndev-a,1,1e-06,-13.8155\ndev-b,0,,\n");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(sh(kCli).code, 1);
    EXPECT_EQ(sh(kCli + " frobnicate").code, 1);
    EXPECT_EQ(sh(kCli + " oracle").code, 1);
    EXPECT_EQ(sh(kCli + " oracle --prime 17 --format yaml").code, 1);
    EXPECT_EQ(sh(kCli + " gen --prime 17 --format csv").code, 1);
    EXPECT_EQ(sh(kCli + " gen --prime 13").code, 2);
    EXPECT_EQ(sh(kCli + " gen --prime 41 --fermat").code, 2);
    EXPECT_EQ(sh("echo '{not json' | " + kCli + " lower").code, 2);
    EXPECT_EQ(sh(kCli + " lower --in /nonexistent/c.json").code, 3);
    EXPECT_EQ(sh(kCli + " oracle --prime 17 --out /nonexistent/dir/x").code, 3);
    EXPECT_EQ(sh(kCli + " plotdata --results /nonexistent").code, 3);
    EXPECT_EQ(sh(kCli + " --help").code, 0);
    EXPECT_EQ(sh("QNR_SEARCH_LIMIT=5 " + kCli + " gen --reduced17").code, 2);
}

TEST(Cli, GlobalFlagsBeforeOrAfterSubcommand) {
    EXPECT_EQ(sh(kCli + " --format json oracle --prime 17").out, sh(kCli + " oracle --prime 17 --format json").out);
}
