#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() {
    const char* p = std::getenv("SKEWLAB_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args) {
    int rc = std::system((cli() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("orbit rows match the hand-checked trajectory") {
    std::string out = "/tmp/skewlab_cli_orbit.csv";
    REQUIRE(run("orbit --c 0.25 --x 0 --y 0 --n 2 --out " + out) == 0);
    std::string text = slurp(out);
    CHECK(text.find("0,0,0\n1,0,0.5\n2,0,0\n") != std::string::npos);
    CHECK(text.find("\"command\":\"orbit\"") != std::string::npos);
}

TEST_CASE("witness subcommand verifies the reference plan") {
    std::string out = "/tmp/skewlab_cli_witness.json";
    REQUIRE(run("witness --ax 0.25 --ay 0.5 --ahw 0.125 --bx 0.25 --by 0.5 --bhw 0.125 "
                "--c 0.25 --format json --out " +
                out) == 0);
    std::string text = slurp(out);
    CHECK(text.find("\"N\": 4") != std::string::npos);
    CHECK(text.find("\"threshold\": 10") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical output") {
    std::string a = "/tmp/skewlab_cli_det_a.csv";
    std::string b = "/tmp/skewlab_cli_det_b.csv";
    std::string args =
        "correlation --c 0.3 --n-max 6 --samples 20000 --seed 12648430 --workers 3 --out ";
    REQUIRE(run(args + a) == 0);
    REQUIRE(run(args + b) == 0);
    std::string ta = slurp(a), tb = slurp(b);
    CHECK(!ta.empty());
    CHECK(ta == tb);
}

TEST_CASE("fit subcommand consumes a stored series") {
    std::string series = "/tmp/skewlab_cli_series.csv";
    REQUIRE(run("correlation --c 0.3 --n-max 10 --samples 200000 --seed 7 --out " + series) ==
            0);
    std::string out = "/tmp/skewlab_cli_fit.csv";
    REQUIRE(run("fit --input " + series + " --out " + out) == 0);
    std::string text = slurp(out);
    CHECK(text.find("lambda,amplitude,r_squared,points,accepted") != std::string::npos);
}

TEST_CASE("exit codes distinguish config from numerical failures") {
    CHECK(run("orbit --x 0.5 --y 0 --n 3") == 2);        // singular start
    CHECK(run("orbit --y 0 --n 3") != 0);                // missing required --x
    CHECK(run("correlation --samples 10 --seed 1 --n-max 500") == 2);  // precision
    CHECK(run("stripwidth --rect 0.3,0.4,0.1,0.2 --n-lo 5 --n-hi 100") == 2);
    CHECK(run("nosuchcommand") != 0);
}

TEST_CASE("output directory env var prefixes relative paths") {
    int rc = std::system(("SKEWLAB_OUT_DIR=/tmp " + cli() +
                          " orbit --x 0.25 --y 0 --n 1 --out skewlab_cli_envdir.csv "
                          "> /dev/null 2>&1")
                             .c_str());
    REQUIRE(WEXITSTATUS(rc) == 0);
    CHECK(!slurp("/tmp/skewlab_cli_envdir.csv").empty());
}

TEST_CASE("remaining subcommands run and emit their headers") {
    struct Job {
        const char* args;
        const char* expect;
    };
    for (const Job& j : {
             Job{"preimage --x 0.5 --y 0 --word 0110 --c 0.25 --out /tmp/skewlab_cli_s1",
                 "word,x,y"},
             Job{"preimage --x 0.5 --y 0 --depth 3 --c 0.25 --out /tmp/skewlab_cli_s2",
                 "111,"},
             Job{"curve --word 10 --y0 0 --samples 16 --c 0.25 --out /tmp/skewlab_cli_s3",
                 "x,y_lift,y_mod1"},
             Job{"length --word 01 --xlo 0.1 --xhi 0.2 --y 0.5 --c 0.25 --out "
                 "/tmp/skewlab_cli_s4",
                 "measured_length"},
             Job{"invariance --rects 5 --samples 2000 --seed 3 --out /tmp/skewlab_cli_s5",
                 "within_3sigma"},
             Job{"visit --rect-a 0.2,0.3,0.2,0.3 --rect-b 0.6,0.7,0.6,0.7 --blocks 2 "
                 "--samples 5000 --seed 4 --out /tmp/skewlab_cli_s6",
                 "block,not_yet"},
         }) {
        CAPTURE(j.args);
        REQUIRE(run(j.args) == 0);
        std::string path = std::string(j.args);
        path = path.substr(path.find("--out ") + 6);
        CHECK(slurp(path).find(j.expect) != std::string::npos);
    }
}

TEST_CASE("config file supplies defaults") {
    {
        std::ofstream cfg("/tmp/skewlab_cli_cfg.ini");
        cfg << "c=0.25\n";
    }
    std::string out = "/tmp/skewlab_cli_cfgout.csv";
    REQUIRE(run("orbit --x 0 --y 0 --n 1 --config /tmp/skewlab_cli_cfg.ini --out " + out) == 0);
    CHECK(slurp(out).find("1,0,0.5") != std::string::npos);  // c = 0.25 applied
}
