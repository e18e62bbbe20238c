#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "resokit/errors.hpp"
#include "resokit/io/config.hpp"
#include "resokit/io/pipelines.hpp"
#include "resokit/io/report.hpp"
#include "resokit/io/trace_io.hpp"

using namespace resokit;
using namespace resokit::io;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string plot;
    bool no_timestamp = false;
};

void add_common(CLI::App* sub, Common& c, bool config_required = false) {
    auto* opt = sub->add_option("--config", c.config, "Config file (default: $RESOKIT_CONFIG)");
    if (config_required) opt->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "Report path (default: stdout)");
    sub->add_option("--plot", c.plot, "Tidy CSV plot data path");
    sub->add_flag("--no-timestamp", c.no_timestamp, "Omit generated_at from the report");
}

Config load_config(const Common& c, bool required) {
    std::string path = c.config;
    if (path.empty()) {
        if (auto env = default_config_path()) path = *env;
    }
    if (path.empty()) {
        if (required) throw InputError("a config file is required: pass --config or set RESOKIT_CONFIG");
        return Config::parse("", "<empty>");
    }
    return Config::load(path);
}

void emit(const Common& c, const std::string& command, const Config& cfg, const PipelineResult& r) {
    Provenance prov;
    prov.command = command;
    if (!cfg.data().empty()) prov.config_hash = cfg.hash();
    prov.inputs = r.inputs;
    prov.seed = r.seed;
    const auto text = dump_report(make_report(prov, r.results, r.warnings, !c.no_timestamp));
    if (c.out.empty()) std::cout << text;
    else write_file(c.out, text);
    if (!c.plot.empty()) write_file(c.plot, r.plot.to_csv());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resokit: lumped-element superconducting resonator analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    std::function<void()> action;

    // fit-s21
    Common c_fit;
    std::string fit_in, fit_delay;
    std::optional<double> fit_fixed_delay, fit_atten;
    std::optional<int> fit_mc;
    std::optional<std::uint64_t> fit_seed;
    auto fit_opts = [&](CLI::App* sub) {
        sub->add_option("--delay", fit_delay, "Cable delay handling")->check(CLI::IsMember({"auto", "off", "fixed"}));
        sub->add_option("--fixed-delay", fit_fixed_delay, "Cable delay in seconds when --delay fixed");
        sub->add_option("--attenuation-db", fit_atten, "Line attenuation between source and chip");
        sub->add_option("--mc", fit_mc, "Monte Carlo draws for bootstrap uncertainties")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", fit_seed, "Seed for Monte Carlo draws");
    };
    auto settings_for = [&](const Config& cfg) {
        auto s = fit_settings_from_config(cfg);
        if (fit_delay == "auto") s.fit.delay_mode = circle::DelayMode::automatic;
        if (fit_delay == "off") s.fit.delay_mode = circle::DelayMode::off;
        if (fit_delay == "fixed") s.fit.delay_mode = circle::DelayMode::fixed;
        if (fit_fixed_delay) s.fit.fixed_delay = *fit_fixed_delay;
        if (fit_atten) s.attenuation_db = *fit_atten;
        if (fit_mc) s.mc_draws = *fit_mc;
        if (fit_seed) s.seed = *fit_seed;
        return s;
    };
    auto* fit = app.add_subcommand("fit-s21", "Fit a resonance trace");
    fit->add_option("--in", fit_in, "Trace CSV")->required()->check(CLI::ExistingFile);
    fit_opts(fit);
    add_common(fit, c_fit);
    fit->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_fit, false);
            emit(c_fit, "fit-s21", cfg, run_fit_s21(fit_in, settings_for(cfg)));
        };
    });

    // power-sweep
    Common c_ps;
    std::vector<std::string> ps_in;
    auto* ps = app.add_subcommand("power-sweep", "Fit traces at several powers; Kerr and TLS fits");
    ps->add_option("--in", ps_in, "Trace CSVs with power metadata")->required()->check(CLI::ExistingFile);
    fit_opts(ps);
    add_common(ps, c_ps);
    ps->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_ps, false);
            emit(c_ps, "power-sweep", cfg, run_power_sweep(ps_in, settings_for(cfg)));
        };
    });

    // sheet-inductance
    Common c_sh;
    std::string sh_table;
    auto* sh = app.add_subcommand("sheet-inductance", "Kinetic and sheet inductance from device resonances");
    sh->add_option("--table", sh_table, "CSV with n_sq,l_k_h[,sigma_h]")->check(CLI::ExistingFile);
    add_common(sh, c_sh);
    sh->callback([&] {
        action = [&] {
            if (!sh_table.empty()) {
                const auto cfg = load_config(c_sh, false);
                emit(c_sh, "sheet-inductance", cfg, run_sheet_inductance_table(sh_table));
            } else {
                const auto cfg = load_config(c_sh, true);
                emit(c_sh, "sheet-inductance", cfg, run_sheet_inductance(cfg));
            }
        };
    });

    // config-only subcommands
    Common c_k, c_lb;
    auto* kerr = app.add_subcommand("kerr", "Junction-array inference from the Kerr coefficient");
    add_common(kerr, c_k);
    kerr->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_k, true);
            emit(c_k, "kerr", cfg, run_kerr(cfg));
        };
    });
    auto* lb = app.add_subcommand("loss-budget", "Participation-ratio loss budget");
    add_common(lb, c_lb);
    lb->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_lb, true);
            emit(c_lb, "loss-budget", cfg, run_loss_budget(cfg));
        };
    });

    // qp-burst
    Common c_qp;
    std::string qp_in;
    auto* qpc = app.add_subcommand("qp-burst", "Quasiparticle burst relaxation fit");
    qpc->add_option("--in", qp_in, "Time-trace CSV (t_s,re,im)")->required()->check(CLI::ExistingFile);
    add_common(qpc, c_qp);
    qpc->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_qp, true);
            emit(c_qp, "qp-burst", cfg, run_qp_burst(qp_in, cfg));
        };
    });

    // tc-fit
    Common c_tc;
    std::string tc_in;
    auto* tc = app.add_subcommand("tc-fit", "Critical temperature from frequency shift versus temperature");
    tc->add_option("--in", tc_in, "CSV with t_k,df_hz")->required()->check(CLI::ExistingFile);
    add_common(tc, c_tc);
    tc->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_tc, true);
            emit(c_tc, "tc-fit", cfg, run_tc_fit(tc_in, cfg));
        };
    });

    // simulate
    std::string sim_kind, sim_out, sim_config;
    std::optional<std::uint64_t> sim_seed;
    std::optional<double> sim_sigma;
    auto* sim = app.add_subcommand("simulate", "Generate synthetic data with embedded truth");
    sim->add_option("kind", sim_kind, "trace | power-sweep | burst | temp-sweep")
        ->required()
        ->check(CLI::IsMember({"trace", "power-sweep", "burst", "temp-sweep"}));
    sim->add_option("--seed", sim_seed, "Generator seed");
    sim->add_option("--sigma", sim_sigma, "Noise level (S21 units or Hz)");
    sim->add_option("--config", sim_config, "Config with a [scenario] section");
    sim->add_option("--out", sim_out, "Output CSV (default: stdout)");
    sim->callback([&] {
        action = [&] {
            Common c;
            c.config = sim_config;
            const auto cfg = load_config(c, false);
            auto sc = scenario_from_config(cfg, synth::parse_kind(sim_kind));
            if (sim_seed) sc.seed = *sim_seed;
            if (sim_sigma) sc.sigma = *sim_sigma;
            const auto text = simulate_csv(sc);
            if (sim_out.empty()) std::cout << text;
            else write_file(sim_out, text);
        };
    });

    // report
    Common c_rep;
    auto* rep = app.add_subcommand("report", "Run the pipelines listed in a config and bundle the results");
    add_common(rep, c_rep);
    rep->callback([&] {
        action = [&] {
            const auto cfg = load_config(c_rep, true);
            emit(c_rep, "report", cfg, run_bundle(cfg));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const FitError& e) {
        std::cerr << "fit failed: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
