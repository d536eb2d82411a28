// Drives the leadlag binary end to end. LEADLAG_CLI is set by CMake.
#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / ("leadlag_cli_test_" + std::to_string(::getpid()));

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code;
    std::string err;
};

Outcome cli(const std::string& args) {
    const auto err = kRoot / "stderr.txt";
    const std::string cmd = std::string(LEADLAG_CLI) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::string run_args(const fs::path& corpus, const fs::path& out, const std::string& extra = "") {
    return "run --config " + (corpus / "config.txt").string() + " --admissions " + (corpus / "admissions.csv").string() +
           " --indicators " + (corpus / "indicators").string() + " --mapping " + (corpus / "mapping.csv").string() +
           " --population " + (corpus / "population.csv").string() + " --out " + out.string() + " " + extra;
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        fs::remove_all(kRoot);
        fs::create_directories(kRoot);
        const auto r = cli("synth --out " + (kRoot / "corpus").string() + " --trusts 6 --indicators 2 --days 260 --seed 4");
        ASSERT_EQ(r.code, 0) << r.err;
    }
    static void TearDownTestSuite() { fs::remove_all(kRoot); }
    const fs::path corpus = kRoot / "corpus";
};

} // namespace

TEST_F(Cli, RerunsAreByteIdentical) {
    const auto a = kRoot / "out_a", b = kRoot / "out_b";
    ASSERT_EQ(cli(run_args(corpus, a)).code, 0);
    ASSERT_EQ(cli(run_args(corpus, b, "--serial")).code, 0);
    for (const char* f : {"granger.csv", "ccf.csv", "dtw.csv", "summary.json"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
    EXPECT_EQ(summary["indicators"].size(), 2u);
}

TEST_F(Cli, JsonFormatAndMethodSubset) {
    const auto out = kRoot / "out_json";
    ASSERT_EQ(cli(run_args(corpus, out, "--format json --methods ccf")).code, 0);
    const auto rows = nlohmann::json::parse(slurp(out / "ccf.json"));
    EXPECT_EQ(rows.size(), 6u * 2u * 3u);
    EXPECT_TRUE(nlohmann::json::parse(slurp(out / "granger.json")).empty());
}

TEST_F(Cli, PathExport) {
    const auto out = kRoot / "out_paths";
    ASSERT_EQ(cli(run_args(corpus, out, "--methods dtw --export-paths")).code, 0);
    const auto text = slurp(out / "dtw_paths.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "trust_id,indicator,wave,query_date,ref_date,lead_days");
    EXPECT_GT(std::count(text.begin(), text.end(), '\n'), 100);
}

TEST_F(Cli, InputErrorExitCode) {
    const auto bad = kRoot / "bad_admissions.csv";
    std::ofstream(bad) << "trust_id,date,admissions\nT1,2022-13-01,5\n";
    const auto r = cli("run --config " + (corpus / "config.txt").string() + " --admissions " + bad.string() +
                       " --indicators " + (corpus / "indicators").string() + " --mapping " +
                       (corpus / "mapping.csv").string() + " --out " + (kRoot / "out_bad").string());
    EXPECT_EQ(r.code, 4);
    EXPECT_EQ(r.err, "error[input]: " + bad.string() + ":2: invalid date '2022-13-01'\n");
}

TEST_F(Cli, ConfigErrorExitCode) {
    const auto cfg = kRoot / "bad_config.txt";
    std::ofstream(cfg) << "wave = a,2022-01-01,2022-02-01\nhorizon = 3\n";
    const auto r = cli("run --config " + cfg.string() + " --admissions " + (corpus / "admissions.csv").string() +
                       " --indicators " + (corpus / "indicators").string() + " --mapping " +
                       (corpus / "mapping.csv").string() + " --out " + (kRoot / "out_cfg").string());
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.err, "error[config]: config line 2: unknown key 'horizon'\n");
}

TEST_F(Cli, MissingArgumentRejected) {
    EXPECT_NE(cli("run --config " + (corpus / "config.txt").string()).code, 0);
}
