#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using Catch::Approx;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(SU2HK_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("kernel at the identity uses the cut-locus form") {
    auto r = run("kernel --t 1 --r 0 --z 0");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["command"] == "kernel");
    CHECK(j["result"]["representation"] == "cutlocus");
    CHECK(j["result"]["value"].get<double>() == Approx(1.676079176957747).epsilon(1e-12));
    CHECK(j["config"]["t_cross"].get<double>() == 0.35);
}

TEST_CASE("forced representations agree") {
    auto a = json::parse(run("kernel --t 0.5 --r 0.5 --z 0.5 --rep spectral").out);
    auto b = json::parse(run("kernel --t 0.5 --r 0.5 --z 0.5 --rep integral").out);
    CHECK(a["result"]["representation"] == "spectral");
    CHECK(b["result"]["representation"] == "integral");
    CHECK(a["result"]["value"].get<double>() == Approx(b["result"]["value"].get<double>()).epsilon(1e-10));
}

TEST_CASE("csv format") {
    auto r = run("kernel --t 0.5 --r 0.5 --z 0.5 --format csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,r,z,value,abs_err,representation\n", 0) == 0);
}

TEST_CASE("domain errors exit 2") {
    CHECK(run("kernel --t -1 --r 0 --z 0").code == 2);
    CHECK(run("kernel --t 1 --r 3 --z 0").code == 2);
    CHECK(run("distance --r 0").code == 2);
    CHECK(run("nosuch").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("distance examples") {
    auto j = json::parse(run("distance --r 0.7 --z 0").out);
    CHECK(j["result"]["d"].get<double>() == Approx(0.7).epsilon(1e-10));
    j = json::parse(run("distance --r 0 --z 3.141592653589793").out);
    CHECK(j["result"]["d"].get<double>() == Approx(M_PI).epsilon(1e-9));
    CHECK(j["result"]["on_cut_locus"] == true);
}

TEST_CASE("constants output is deterministic") {
    REQUIRE(run("constants --t 0.5 1 --out cli_c1.csv").code == 0);
    REQUIRE(run("constants --t 0.5 1 --out cli_c2.csv").code == 0);
    auto a = slurp("cli_c1.csv");
    CHECK(a == slurp("cli_c2.csv"));
    CHECK(a.rfind("t,A,C,Phi,A_over_4exp,C_over_4exp\n", 0) == 0);
    std::remove("cli_c1.csv");
    std::remove("cli_c2.csv");
}

TEST_CASE("small sample run is fast and writes its files") {
    auto t0 = std::chrono::steady_clock::now();
    auto r = run("sample --n 100 --t 0.5 --samples_csv cli_s.csv --hist_json cli_h.json");
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(r.code == 0);
    CHECK(sec < 5);
    auto h = json::parse(slurp("cli_h.json"));
    CHECK(h["total"] == 100);
    CHECK(slurp("cli_s.csv").rfind("path_id,r,theta,z\n", 0) == 0);
    std::remove("cli_s.csv");
    std::remove("cli_h.json");
}

TEST_CASE("config files") {
    {
        std::ofstream os("cli_good.ini");
        os << "eps=1e-14\nt_cross=0.4\n";
    }
    auto j = json::parse(run("--config cli_good.ini kernel --t 1 --r 0.3 --z 0.2").out);
    CHECK(j["config"]["eps"].get<double>() == 1e-14);
    CHECK(j["config"]["t_cross"].get<double>() == 0.4);
    {
        std::ofstream os("cli_bad.ini");
        os << "no_such_key=3\n";
    }
    CHECK(run("--config cli_bad.ini kernel --t 1 --r 0.3 --z 0.2").code == 2);
    std::remove("cli_good.ini");
    std::remove("cli_bad.ini");
    auto ref = run("config-reference");
    CHECK(ref.code == 0);
    CHECK(ref.out.find("t_cross") != std::string::npos);
}

TEST_CASE("verify suites") {
    auto r = run("verify --suite laplace");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["command"] == "verify");
    r = run("verify --suite liyau --alpha 3 --t 1");
    CHECK(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["n_violations"] == 0);
    REQUIRE(j["reports"].size() == 2);
    for (auto& rep : j["reports"]) {
        CHECK(rep["n_violations"] == 0);
        CHECK(rep["n_points"] == 1600);
    }
}
