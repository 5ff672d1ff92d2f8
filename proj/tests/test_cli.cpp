#include "latprof/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "latprof/experiments.hpp"
#include "latprof/parallel.hpp"
#include "latprof/svg.hpp"

using namespace latprof;

namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string write_z2_basis() {
    const std::string path = "/tmp/latprof_z2.txt";
    std::ofstream f(path);
    f << "2\n1 0\n0 1\n";
    return path;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("gamma subcommand on Z^2") {
    const auto path = write_z2_basis();
    const auto r = cli({"gamma", "--basis-file", path, "--r-window", "3"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["gamma_window"] == 4.0);
    CHECK(j["tau"] == 4);
    CHECK(j["certified"] == false);
    CHECK(j["gamma_certified_upper"] == "uncertified");
    CHECK(j["convention"] == "oriented");

    // A wider window certifies gamma(Z^2) = 4 through the packing envelope.
    const auto r16 = cli({"gamma", "--basis-file", path, "--r-window", "16"});
    REQUIRE(r16.status == 0);
    const auto j16 = Json::parse(r16.out);
    CHECK(j16["certified"] == true);
    CHECK(j16["gamma_certified_upper"] == 4.0);

    const auto ru = cli({"gamma", "--basis-file", path, "--r-window", "3", "--unoriented"});
    CHECK(Json::parse(ru.out)["gamma_window"] == 2.0);
}

TEST_CASE("profile subcommand emits CSV and SVG") {
    const auto path = write_z2_basis();
    const std::string svg_path = "/tmp/latprof_z2_profile.svg";
    std::remove(svg_path.c_str());
    const auto r =
        cli({"profile", "--basis-file", path, "--r-window", "3", "--svg", svg_path});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("q,norm,V_normalized,M,G\n", 0) == 0);
    CHECK(file_exists(svg_path));
}

TEST_CASE("constants subcommand") {
    const auto r = cli({"constants", "--theta", "2", "--eta", "1"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["k_value"] == 12.0);

    const auto rm = cli({"constants", "--minimize"});
    const auto jm = Json::parse(rm.out);
    CHECK(jm["minimizer"]["k_star"].get<double>() <= 9.0);
    CHECK(jm["minimizer"]["theta"].get<double>() > 1.0);
    CHECK(jm["minimizer"]["theta"].get<double>() < 2.0);
}

TEST_CASE("pivot-sim subcommand") {
    const auto r = cli({"pivot-sim", "--process", "staircase", "--s", "1", "--theta", "2",
                        "--eta", "1", "--trials", "10"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["exceed_count"] == 0);
    CHECK(j["p_hat"] == 0.0);
    CHECK(j["vacuous_bound"] == true);
}

TEST_CASE("sample subcommand emits parseable bases") {
    const auto r = cli({"sample", "--n", "4", "--p", "10007", "--seed", "9", "--trials", "1"});
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    const auto basis = read_basis_text(in);
    CHECK(basis.n == 4);
    CHECK(basis.det_abs == 10007);
}

TEST_CASE("experiment subcommand writes artifacts that match the library") {
    const std::string prefix = "/tmp/latprof_cli_run";
    const auto r = cli({"experiment", "gamma-tail", "--n", "5", "--p", "10007", "--seed", "3",
                        "--trials", "50", "--r-window", "2", "--out", prefix});
    REQUIRE(r.status == 0);
    REQUIRE(file_exists(prefix + "_summary.json"));
    REQUIRE(file_exists(prefix + "_gamma_tail.csv"));
    REQUIRE(file_exists(prefix + "_tau_tail.csv"));

    const auto j = Json::parse(r.out);
    ExperimentConfig cfg;
    cfg.sampler = SamplerConfig{5, 10007ULL, 3ULL};
    cfg.trials = 50;
    cfg.r_window = 2.0;
    cfg.output_path = prefix;
    const auto rep = gamma_tail_experiment(cfg, resolve_threads());
    CHECK(j.dump() == rep.to_json().dump());
}

TEST_CASE("validation errors exit with status 1") {
    const auto r = cli({"gamma", "--basis-file", "/nonexistent/basis.txt"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error:", 0) == 0);
    const auto unknown = cli({"gamma", "--wat", "1"});
    CHECK(unknown.status == 1);
    const auto nocmd = cli({});
    CHECK(nocmd.status == 1);
    const auto badkind = cli({"experiment", "bogus"});
    CHECK(badkind.status == 1);
}

TEST_CASE("tail SVG has one point group per threshold and rejects empty tables") {
    std::vector<svg::TailPoint> one{{4.0, 0.25, 0.2, 0.3, 0.75}};
    const auto s = svg::render_tail_svg(one, "t");
    std::size_t groups = 0, pos = 0;
    while ((pos = s.find("tail-point", pos)) != std::string::npos) {
        ++groups;
        pos += 1;
    }
    CHECK(groups == 1);
    CHECK_THROWS_AS(svg::render_tail_svg({}, "t"), ConfigError);
    CHECK_THROWS_AS(svg::render_curve_svg({}, "t"), ConfigError);
}
