#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string binary_path() {
    const char* bin = std::getenv("SEPMIX_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SEPMIX_BIN must point at the CLI binary");
    return bin;
}

std::string tmp_path(const std::string& name) {
    const char* tmp = std::getenv("SEPMIX_TMP");
    REQUIRE_MESSAGE(tmp != nullptr, "SEPMIX_TMP must point at a writable directory");
    return std::string(tmp) + "/cli_" + name;
}

int run_cli(const std::string& args, const std::string& stdout_to = "/dev/null") {
    std::string cmd = binary_path() + " " + args + " > " + stdout_to + " 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("missing file: " + path).c_str());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

json summary_for(const std::string& csv_path) {
    std::string jpath = csv_path.substr(0, csv_path.size() - 4) + ".json";
    return json::parse(slurp(jpath));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help succeeds and bad invocations exit with the usage code") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("scaling --help") == 0);
    CHECK(run_cli("") == 2);                       // a subcommand is required
    CHECK(run_cli("simulate --bogus 3") == 2);     // unknown flag
    CHECK(run_cli("frobnicate") == 2);             // unknown subcommand
}

TEST_CASE("a malformed law is a usage error and writes nothing") {
    std::string out = tmp_path("badlaw.csv");
    fs::remove(out);
    CHECK(run_cli("exact --law 'uniform(0.9,0.6)' --out " + out) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("exact --law 'gauss(0.5)' --out " + out) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulate output is a deterministic function of flags and seed") {
    std::string a = tmp_path("sim_a.csv"), b = tmp_path("sim_b.csv"), c = tmp_path("sim_c.csv");
    std::string common = "simulate --law 'uniform(0.6,0.9)' --n 8 --rho 0.25 --replicas 5 "
                         "--horizon 2 --out ";
    REQUIRE(run_cli(common + a + " --seed 3") == 0);
    REQUIRE(run_cli(common + b + " --seed 3") == 0);
    REQUIRE(run_cli(common + c + " --seed 4") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));

    std::vector<std::string> rows = lines_of(slurp(a));
    REQUIRE(rows.size() == 6);  // header + one row per replica
    CHECK(rows[0] == "replica,seed,time,leftmost,configuration");

    json j = summary_for(a);
    CHECK(j["subcommand"] == "simulate");
    CHECK(j["n"] == 8);
    CHECK(j["k"] == 2);
    CHECK(j["csv"] == a);
}

TEST_CASE("exact subcommand reports the named quantities") {
    std::string out = tmp_path("exact.csv");
    REQUIRE(run_cli("exact --law 'constant(0.75)' --n 6 --rho 0.5 --eps 0.25 --seed 5 --out " +
                    out) == 0);
    std::vector<std::string> rows = lines_of(slurp(out));
    CHECK(rows[0] == "quantity,value");
    bool has_mixing = false;
    for (const std::string& r : rows) has_mixing |= r.rfind("mixing_time,", 0) == 0;
    CHECK(has_mixing);

    json j = summary_for(out);
    CHECK(j["mixing_time"].get<double>() > 0.0);
    CHECK(j["left_quarter_bound"].get<double>() >= j["left_quarter_prob"].get<double>());
}

TEST_CASE("boundary subcommand writes the profile schema") {
    std::string out = tmp_path("boundary.csv");
    REQUIRE(run_cli("boundary --n 3 --tilt 0.1 --replicas 100 --seed 7 --out " + out) == 0);
    std::vector<std::string> rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 4);  // header + one row per site
    CHECK(rows[0] == "m,c,site,density,stderr");
    CHECK(rows[1].rfind("3,0.1,1,", 0) == 0);
    CHECK(rows[3].rfind("3,0.1,3,", 0) == 0);

    json j = summary_for(out);
    CHECK(j["m"] == 3);
    CHECK(j["exact_profile"].size() == 3);
    CHECK(j["annihilation_rate"].get<double>() > 0.0);
}

TEST_CASE("scaling subcommand writes the record schema plus a slope line") {
    std::string out = tmp_path("scaling.csv");
    REQUIRE(run_cli("scaling --law 'uniform(0.6,0.9)' --grid 4,6,8,10 --rho 0.5 --eps 0.25 "
                    "--replicas 8 --envs 2 --estimator coalescence --seed 9 --out " +
                    out) == 0);
    std::vector<std::string> rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 10);  // header + 4*2 records + slope line
    CHECK(rows[0] == "regime,estimator,N,k,eps,replicas,estimate,stderr,seed");
    for (size_t i = 1; i + 1 < rows.size(); ++i)
        CHECK(rows[i].rfind("non-nestling,coalescence-quantile,", 0) == 0);
    CHECK(rows.back().rfind("non-nestling,slope,", 0) == 0);

    json j = summary_for(out);
    CHECK(j["medians"].size() == 4);
    CHECK(j["slope"].is_number());

    CHECK(run_cli("scaling --grid 4,6 --out " + tmp_path("scaling_short.csv")) == 2);
    CHECK(run_cli("scaling --estimator nonsense --grid 4,6,8,10 --replicas 4 --out " +
                  tmp_path("scaling_bad.csv")) == 2);
}

TEST_CASE("validate runs its named checks and succeeds") {
    std::string out = tmp_path("validate.csv");
    std::string log = tmp_path("validate.log");
    REQUIRE(run_cli("validate --law 'uniform(0.6,0.9)' --seed 11 --out " + out, log) == 0);

    std::string printed = slurp(log);
    for (const char* name : {"detailed-balance", "boundary-profile", "annihilation-rate",
                             "monotone-coupling", "censoring-dominance"}) {
        std::string expected = std::string("check ") + name + ": PASS";
        CHECK_MESSAGE(printed.find(expected) != std::string::npos, expected.c_str());
    }
    std::vector<std::string> rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 6);  // header + five checks
    CHECK(rows[0] == "check,pass,detail");

    json j = summary_for(out);
    CHECK(j["all_pass"] == true);
    CHECK(j["checks"].size() == 5);
}

TEST_CASE("config files feed options with command-line flags taking precedence") {
    std::string cfg = tmp_path("options.ini");
    {
        std::ofstream f(cfg);
        f << "n=5\nseed=9\nreplicas=3\n";
    }
    std::string out = tmp_path("config.csv");
    REQUIRE(run_cli("simulate --config " + cfg +
                    " --law 'constant(0.8)' --rho 0.3 --horizon 1 --seed 11 --out " + out) == 0);
    json j = summary_for(out);
    CHECK(j["n"] == 5);          // from the config file
    CHECK(j["replicas"] == 3);   // from the config file
    CHECK(j["seed"] == 11);      // flag wins over the file
}

}  // TEST_SUITE
