#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "resokit/errors.hpp"
#include "resokit/io/pipelines.hpp"
#include "resokit/io/trace_io.hpp"

using namespace resokit;
using namespace resokit::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    auto p = fs::temp_directory_path() / "resokit_unit";
    fs::create_directories(p);
    return p;
}

std::string write_scenario(synth::Kind kind, std::uint64_t seed, double sigma, const std::string& name) {
    synth::Scenario s;
    s.kind = kind;
    s.seed = seed;
    s.sigma = sigma;
    const auto path = (scratch() / name).string();
    write_file(path, simulate_csv(s));
    return path;
}

}  // namespace

TEST_CASE("fit-s21 pipeline matches the embedded truth") {
    const auto path = write_scenario(synth::Kind::trace, 7, 0.01, "trace.csv");
    const auto r = run_fit_s21(path, {});
    const auto& truth = r.results["truth"];
    CHECK(std::abs(truth["q_int"]["rel_error"].get<double>()) < 0.05);
    CHECK(std::abs(truth["q_c_mag"]["rel_error"].get<double>()) < 0.05);
    CHECK(std::abs(truth["f_r"]["rel_error"].get<double>()) < 1e-8);
    CHECK(r.plot.rows.size() == 2 * 801);
}

TEST_CASE("loss-budget pipeline on the shipped package config") {
    const auto cfg = Config::load(std::string(RESOKIT_SOURCE_DIR) + "/configs/package_loss.cfg");
    const auto r = run_loss_budget(cfg);
    CHECK(r.results["package"]["total"].get<double>() == doctest::Approx(1.28e-8).epsilon(0.01));
    CHECK(r.results["residual"][0]["inv_q_res"].get<double>() == doctest::Approx(1.52e-7).epsilon(0.01));
}

TEST_CASE("kerr pipeline on the shipped config") {
    const auto cfg = Config::load(std::string(RESOKIT_SOURCE_DIR) + "/configs/kerr_fo23.cfg");
    const auto r = run_kerr(cfg);
    CHECK(r.results["array"]["n_jj"].get<double>() == doctest::Approx(1e4).epsilon(1e-3));
    CHECK(r.results["array"]["j_c_a_per_cm2"].get<double>() == doctest::Approx(1.2e5).epsilon(0.01));
}

TEST_CASE("sheet-inductance pipeline from a table") {
    const auto path = (scratch() / "sheet.csv").string();
    write_file(path, "n_sq,l_k_h\n30,1.2e-08\n60,2.2e-08\n120,4.2e-08\n");
    const auto r = run_sheet_inductance_table(path);
    CHECK(r.results["sheet_fit"]["l_sq"]["value"].get<double>() == doctest::Approx(1e-9 / 3).epsilon(1e-9));
}

TEST_CASE("power-sweep pipeline extracts Kerr and loss") {
    std::vector<std::string> paths;
    for (int i = 0; i < 6; ++i) {
        synth::Scenario s;
        s.seed = i;
        s.sigma = 0.002;
        s.trace.power_in = 1e-19 * std::pow(10.0, i * 0.6);
        const auto path = (scratch() / ("p" + std::to_string(i) + ".csv")).string();
        write_file(path, simulate_csv(s));
        paths.push_back(path);
    }
    const auto r = run_power_sweep(paths, {});
    CHECK(r.results["traces"].size() == 6);
    CHECK(r.results.contains("kerr"));
    CHECK(r.results.contains("tls"));
}

TEST_CASE("qp-burst and tc-fit pipelines") {
    const auto burst = write_scenario(synth::Kind::burst, 3, 1e-4, "burst.csv");
    const auto cfg = Config::parse(
        "[resonator]\nf_r = 4.6 GHz\nq_int = 0.52e6\nq_c_mag = 400\nphi = 0 rad\n"
        "[qp]\nalpha = 0.96\nx0 = 8e-7\n"
        "[tc]\nf_r0 = 4.6 GHz\nalpha = 0.96\n");
    const auto q = run_qp_burst(burst, cfg);
    CHECK(q.results["burst"]["tau_ss"]["value"].get<double>() == doctest::Approx(1.2e-3).epsilon(0.05));
    const auto temp = write_scenario(synth::Kind::temp_sweep, 4, 1e3, "temp.csv");
    const auto t = run_tc_fit(temp, cfg);
    CHECK(t.results["t_c"]["value"].get<double>() == doctest::Approx(2.15).epsilon(0.02));
}

TEST_CASE("bundle validates referenced files before running") {
    const auto cfg = Config::parse("[pipeline]\nsteps = fit-s21\n[trace.a]\npath = /nonexistent/x.csv\n", "/tmp/b.cfg");
    CHECK_THROWS_WITH_AS(run_bundle(cfg), doctest::Contains("does not exist"), InputError);
    const auto bad = Config::parse("[pipeline]\nsteps = dance\n");
    CHECK_THROWS_AS(run_bundle(bad), InputError);
}

TEST_CASE("scenario config overrides defaults") {
    const auto cfg = Config::parse("[scenario]\nseed = 9\nq_int = 2e6\npoints = 101\n");
    const auto s = scenario_from_config(cfg, synth::Kind::trace);
    CHECK(s.seed == 9);
    CHECK(s.trace.params.q_int == 2e6);
    CHECK(s.trace.points == 101);
    CHECK(simulate_csv(s) == simulate_csv(s));
}

TEST_CASE("relative paths resolve against the config directory") {
    const auto cfg = Config::parse("", "/data/run/cfg.ini");
    CHECK(resolve_path(cfg, "x.csv") == "/data/run/x.csv");
    CHECK(resolve_path(cfg, "/abs/x.csv") == "/abs/x.csv");
}
