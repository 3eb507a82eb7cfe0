#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "parisian/runconfig.hpp"

using namespace parisian;

namespace {

const char* kGoodConfig = R"(# smoke contract: three windows
[market]
r = 0.05
D = 0.04
sigma = 0.2
[contract]
K = 100
S_bar = 95
J_bar = 0.05
T = 0.2
embedded_style = european
[state]
S = 100
t = 0
J = 0
[engine]
window_samples = 32
[mc]
n_paths = 4000
n_steps_per_year = 2000
seed = 31
)";

RunConfig parse_str(const std::string& text) {
    std::istringstream is(text);
    return RunConfig::parse(is, "test");
}

std::string cli_path() {
    const char* p = std::getenv("PARISIAN_CLI");
    return p ? p : "";
}

int run_cli(const std::string& args, std::string* out = nullptr) {
    const std::string cmd = cli_path() + " " + args + " > /tmp/parisian_cli_out.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream f("/tmp/parisian_cli_out.txt");
        std::stringstream ss;
        ss << f.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("valid config") {
        RunConfig rc = parse_str(kGoodConfig);
        CHECK(rc.market.sigma == 0.2);
        CHECK(rc.contract.embedded_style == EmbeddedStyle::European);
        CHECK(rc.engine.window.samples_per_window == 32);
        CHECK(rc.mc.seed == 31);
    }
    SUBCASE("missing sigma is named") {
        std::string broken = kGoodConfig;
        broken.replace(broken.find("sigma = 0.2"), 11, "# sigma gone");
        CHECK_THROWS_WITH_AS(parse_str(broken),
                             doctest::Contains("market.sigma"), ConfigError);
    }
    SUBCASE("unknown keys carry line attribution") {
        std::string broken = kGoodConfig;
        broken += "[engine]\nbogus_key = 1\n";
        CHECK_THROWS_WITH_AS(parse_str(broken), doctest::Contains("bogus_key"), ConfigError);
    }
    SUBCASE("empty range is rejected") {
        std::string broken = kGoodConfig;
        broken += "[state]\nS_range = ,\n";
        CHECK_THROWS_AS(parse_str(broken), ConfigError);
    }
    SUBCASE("key outside a section is rejected") {
        CHECK_THROWS_WITH_AS(parse_str("r = 0.05\n"), doctest::Contains("outside"),
                             ConfigError);
    }
}

TEST_CASE("cli end-to-end") {
    if (cli_path().empty()) {
        MESSAGE("PARISIAN_CLI not set; skipping end-to-end cases");
        return;
    }
    write_file("/tmp/parisian_smoke.cfg", kGoodConfig);

    SUBCASE("price happy path emits a csv row") {
        std::string out;
        const int rc = run_cli(
            "price --config /tmp/parisian_smoke.cfg --out /tmp/parisian_price.csv", &out);
        CHECK(rc == 0);
        const std::string csv = slurp("/tmp/parisian_price.csv");
        CHECK(csv.rfind("S,t,J,price,delta,region,windows_used,err_estimate\n", 0) == 0);
        CHECK(csv.find("\n100,") != std::string::npos);
    }
    SUBCASE("degenerate contract exits nonzero and names the limit") {
        std::string cfg = kGoodConfig;
        cfg.replace(cfg.find("J_bar = 0.05"), 12, "J_bar = 0.30");
        write_file("/tmp/parisian_degen.cfg", cfg);
        std::string out;
        const int rc = run_cli("price --config /tmp/parisian_degen.cfg", &out);
        CHECK(rc == 1);
        CHECK(out.find("degenerate") != std::string::npos);
        CHECK(out.find("worthless") != std::string::npos);
        const int rc2 =
            run_cli("price --config /tmp/parisian_degen.cfg --allow-degenerate", &out);
        CHECK(rc2 == 0);
    }
    SUBCASE("missing config field exits with validation code") {
        std::string cfg = kGoodConfig;
        cfg.replace(cfg.find("sigma = 0.2"), 11, "# sigma gone");
        write_file("/tmp/parisian_bad.cfg", cfg);
        std::string out;
        const int rc = run_cli("price --config /tmp/parisian_bad.cfg", &out);
        CHECK(rc == 1);
        CHECK(out.find("sigma") != std::string::npos);
    }
    SUBCASE("surface over a range spanning the barrier") {
        std::string cfg = kGoodConfig;
        cfg += "[state]\nt = 0.1\nS_range = 90, 93, 95, 97, 100\nJ_range = 0, 0.025, 0.05\n";
        write_file("/tmp/parisian_surf.cfg", cfg);
        std::string out;
        const int rc = run_cli(
            "surface --config /tmp/parisian_surf.cfg --out /tmp/parisian_surf.csv", &out);
        CHECK(rc == 0);
        const std::string csv = slurp("/tmp/parisian_surf.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);  // header + 5 spots x 3 clocks
    }
    SUBCASE("fixed seed gives byte-identical csv output") {
        std::string out;
        const int r1 = run_cli(
            "price --config /tmp/parisian_smoke.cfg --seed 7 --out /tmp/parisian_d1.csv",
            &out);
        const int r2 = run_cli(
            "price --config /tmp/parisian_smoke.cfg --seed 7 --out /tmp/parisian_d2.csv",
            &out);
        CHECK(r1 == 0);
        CHECK(r2 == 0);
        CHECK(slurp("/tmp/parisian_d1.csv") == slurp("/tmp/parisian_d2.csv"));
    }
    SUBCASE("verify reports a tolerance breach with exit code 3") {
        // short three-window contract: the pde comparison breaches the 1% default, which
        // is the documented behavior for short horizons under the published convention
        std::string cfg = kGoodConfig;
        cfg += "[pde]\nn_tau = 100\n";
        write_file("/tmp/parisian_verify.cfg", cfg);
        std::string out;
        const int rc = run_cli("verify --config /tmp/parisian_verify.cfg --skip-mc", &out);
        CHECK(rc == 3);
        CHECK(out.find("pde oracle") != std::string::npos);
        CHECK(out.find("FAIL") != std::string::npos);
    }
    SUBCASE("dump-windows emits the per-term diagnostics") {
        std::string out;
        const int rc = run_cli("dump-windows --config /tmp/parisian_smoke.cfg", &out);
        CHECK(rc == 0);
        CHECK(out.find("window,tau,W,term1,term2,term3,term4,term5") != std::string::npos);
    }
}
