#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(VINE_NAV_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const char* name) { return std::string(VINE_NAV_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_tmp(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("simulate writes trace and svg artifacts") {
    std::string design = "/tmp/cli_straight.json";
    write_tmp(design, R"({"version":1,"segments":[{"length_m":3.0,"turn_deg":0.0}]})");
    RunResult r = run_cli("simulate --map " + data("wall_slide.json") + " --design " + design +
                          " --start-angle-deg 70 --out-trace /tmp/cli_trace.json"
                          " --out-svg /tmp/cli_sim.svg");
    CHECK(r.code == 0);
    CHECK(r.out.find("termination: length-reached") != std::string::npos);
    std::string trace = slurp("/tmp/cli_trace.json");
    CHECK(trace.find("\"events\"") != std::string::npos);
    CHECK(trace.find("contact-start") != std::string::npos);
    std::string svg = slurp("/tmp/cli_sim.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(svg.find("class=\"obstacle\"") != std::string::npos);
    CHECK(svg.find("class=\"slide\"") != std::string::npos);  // tip path on the wall
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("simulate exit codes: parse failure and usage errors") {
    write_tmp("/tmp/cli_bad_map.json",
              R"({"version":1,"bounds":{"min":[0,0],"max":[4,4]},
                  "obstacles":[[[1,1],[2,1]]],
                  "start":{"x":0.2,"y":0.2,"angle_deg":0.0},
                  "goal":{"x":3,"y":3},"success_radius_m":0.05})");
    write_tmp("/tmp/cli_ok_design.json",
              R"({"version":1,"segments":[{"length_m":1.0,"turn_deg":0.0}]})");
    RunResult r = run_cli("simulate --map /tmp/cli_bad_map.json --design /tmp/cli_ok_design.json");
    CHECK(r.code == 2);
    CHECK(r.out.find("obstacles[0]") != std::string::npos);  // field path in the message
    // missing file also maps to the parse/input exit code
    r = run_cli("simulate --map /tmp/definitely_missing.json --design /tmp/cli_ok_design.json");
    CHECK(r.code == 2);
    // usage error: nonzero and distinct from the domain exit codes
    r = run_cli("simulate --map");
    CHECK(r.code != 0);
    CHECK((r.code < 2 || r.code > 5));
}

TEST_CASE("simulate reports deployment failure with exit 3") {
    // dead-perpendicular aim at the slab: degenerate head-on contact
    write_tmp("/tmp/cli_perp_design.json",
              R"({"version":1,"segments":[{"length_m":3.0,"turn_deg":0.0}]})");
    RunResult r = run_cli("simulate --map " + data("wall_slide.json") +
                          " --design /tmp/cli_perp_design.json --start-angle-deg 90");
    CHECK(r.code == 3);
    CHECK(r.out.find("degenerate-contact") != std::string::npos);
}

TEST_CASE("evaluate emits the pinned CSV header and is byte-identical") {
    std::string out1 = "/tmp/cli_eval1.csv", out2 = "/tmp/cli_eval2.csv";
    std::string base = "evaluate --map " + data("maze.json") + " --design " +
                       data("maze_avoid_design.json") +
                       " --sigma-theta-deg 4 --sigma-l-m 0.011 --trials 400 --seed 12";
    RunResult r1 = run_cli(base + " --threads 1 --out-csv " + out1);
    CHECK(r1.code == 0);
    RunResult r2 = run_cli(base + " --threads 3 --out-csv " + out2);
    CHECK(r2.code == 0);
    std::string csv1 = slurp(out1), csv2 = slurp(out2);
    CHECK(csv1 == csv2);
    CHECK(csv1.find("sigma_theta_deg,sigma_l_m,map_noise_m,trials,successes,probability,"
                    "wilson_lo,wilson_hi,seed\n") == 0);
    // header plus exactly one data row
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 2);
    CHECK(csv1.find("\n4,0.011,0,400,") != std::string::npos);
}

TEST_CASE("sweep start_angle emits one row per grid point") {
    write_tmp("/tmp/cli_sweep_design.json",
              R"({"version":1,"segments":[{"length_m":3.0,"turn_deg":0.0}]})");
    RunResult r = run_cli("sweep --map " + data("wall_slide.json") +
                          " --design /tmp/cli_sweep_design.json --param start_angle"
                          " --range 50 130 --steps 5 --out-csv /tmp/cli_sweep.csv"
                          " --out-svg /tmp/cli_sweep.svg");
    CHECK(r.code == 0);
    std::string csv = slurp("/tmp/cli_sweep.csv");
    CHECK(csv.find("start_angle_deg,reached,min_distance_m,final_x,final_y,termination\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    // 90 degrees is the degenerate head-on row
    CHECK(csv.find("\n90,") != std::string::npos);
    CHECK(csv.find("degenerate-contact") != std::string::npos);
    std::string svg = slurp("/tmp/cli_sweep.svg");
    CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("plan writes a loadable design and a report") {
    RunResult r = run_cli("plan --map " + data("maze.json") +
                          " --sigma-theta-deg 2 --sigma-l-m 0.011 --eval-trials 300 --seed 1"
                          " --out-design /tmp/cli_plan_design.json"
                          " --out-report /tmp/cli_plan_report.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("estimate:") != std::string::npos);
    std::string design = slurp("/tmp/cli_plan_design.json");
    CHECK(design.find("\"segments\"") != std::string::npos);
    std::string report = slurp("/tmp/cli_plan_report.json");
    CHECK(report.find("\"route\"") != std::string::npos);
    CHECK(report.find("\"stages\"") != std::string::npos);
    CHECK(report.find("\"estimate\"") != std::string::npos);
    // the emitted design parses and simulates on the same map
    RunResult sim = run_cli("simulate --map " + data("maze.json") +
                            " --design /tmp/cli_plan_design.json");
    CHECK(sim.code == 0);
    CHECK(sim.out.find("length-reached") != std::string::npos);
}

TEST_CASE("plan reports unreachable goals with exit 4") {
    // wall spans the full map height, sealing the goal chamber off
    write_tmp("/tmp/cli_unreachable.json",
              R"({"version":1,"bounds":{"min":[0,0],"max":[4,4]},
        "obstacles":[[[1.0,0.0],[1.4,0.0],[1.4,4.0],[1.0,4.0]]],
        "start":{"x":0.5,"y":2.0,"angle_deg":"free"},
        "goal":{"x":3.5,"y":2.0},"success_radius_m":0.05})");
    RunResult r = run_cli("plan --map /tmp/cli_unreachable.json --eval-trials 100");
    CHECK(r.code == 4);
    CHECK(r.out.find("unreachable") != std::string::npos);
}
