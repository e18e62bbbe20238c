#include "resokit/io/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/inductance.hpp"
#include "resokit/io/trace_io.hpp"
#include "resokit/jja_kerr.hpp"
#include "resokit/loss_budget.hpp"
#include "resokit/mattis_bardeen.hpp"
#include "resokit/parallel.hpp"
#include "resokit/qp_dynamics.hpp"
#include "resokit/s21.hpp"

namespace resokit::io {

using D = Dimension;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

bool get_bool(const Config& cfg, const std::string& section, const std::string& key, bool fallback) {
    const auto t = cfg.get_text_opt(section, key);
    if (!t) return fallback;
    if (*t == "true" || *t == "yes" || *t == "1") return true;
    if (*t == "false" || *t == "no" || *t == "0") return false;
    throw InputError(cfg.origin + ": [" + section + "] " + key + ": expected true or false, got '" + *t + "'");
}

// Applies the line attenuation to a tagged source power.
void calibrate_power(ComplexTrace& tr, double attenuation_db) {
    if (tr.power_in && attenuation_db != 0.0) *tr.power_in *= std::pow(10.0, -attenuation_db / 10.0);
}

json truth_comparison(const ComplexTrace& tr, const circle::TraceFit& fit) {
    json out = json::object();
    auto add = [&](const char* name, double estimate) {
        auto it = tr.metadata.find(std::string("truth.") + name);
        if (it == tr.metadata.end()) return;
        const double truth = std::strtod(it->second.c_str(), nullptr);
        out[name] = {{"truth", truth}, {"estimate", estimate},
                     {"rel_error", truth != 0.0 ? (estimate - truth) / truth : estimate}};
    };
    add("f_r", fit.params.f_r);
    add("q_int", fit.params.q_int);
    add("q_c_mag", fit.params.q_c_mag);
    add("phi", fit.params.phi);
    return out;
}

}  // namespace

std::string PlotData::to_csv() const {
    std::string out = "series";
    for (const auto& c : columns) out += "," + c;
    out += "\n";
    for (const auto& [series, values] : rows) {
        out += series;
        for (double v : values) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string resolve_path(const Config& cfg, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.is_absolute() || cfg.origin.empty() || cfg.origin.front() == '<') return path;
    return (fs::path(cfg.origin).parent_path() / p).string();
}

FitSettings fit_settings_from_config(const Config& cfg) {
    FitSettings s;
    if (auto mode = cfg.get_text_opt("fit", "delay")) {
        if (*mode == "auto") s.fit.delay_mode = circle::DelayMode::automatic;
        else if (*mode == "off") s.fit.delay_mode = circle::DelayMode::off;
        else if (*mode == "fixed") s.fit.delay_mode = circle::DelayMode::fixed;
        else throw InputError(cfg.origin + ": [fit] delay must be auto, off or fixed");
    }
    s.fit.fixed_delay = cfg.get_or("fit", "fixed_delay", D::time, 0.0);
    s.mc_draws = static_cast<int>(cfg.get_or("fit", "mc_draws", D::dimensionless, 0.0));
    s.seed = static_cast<std::uint64_t>(cfg.get_or("fit", "seed", D::dimensionless, 0.0));
    s.attenuation_db = cfg.get_or("fit", "attenuation", D::ratio_db, 0.0);
    return s;
}

json estimate_json(double value, double sigma) { return {{"value", value}, {"sigma", sigma}}; }

json trace_fit_json(const circle::TraceFit& fit) {
    json j;
    json est = json::object();
    for (const auto& e : fit.report.estimates) est[e.name] = estimate_json(e.value, e.sigma);
    j["estimates"] = est;
    j["uncertainty_method"] = fit.uncertainty_method;
    j["circle"] = {{"center_re", fit.circle.center.real()},
                   {"center_im", fit.circle.center.imag()},
                   {"radius", fit.circle.radius}};
    j["delay_fitted"] = fit.delay_fitted;
    j["residual_norm"] = fit.report.residual_norm;
    j["iterations"] = fit.report.iterations;
    j["converged"] = fit.report.converged;
    if (fit.report.photon_number) j["photon_number"] = *fit.report.photon_number;
    j["warnings"] = fit.report.warnings;
    return j;
}

PipelineResult run_fit_s21(const std::string& path, const FitSettings& settings) {
    PipelineResult out;
    out.inputs.push_back(path);
    auto tr = ingest_trace(path);
    calibrate_power(tr, settings.attenuation_db);
    const auto fit = circle::fit_trace(tr, settings.fit);
    out.results = trace_fit_json(fit);
    if (settings.mc_draws > 0) {
        const auto mc = circle::monte_carlo_uncertainty(fit, tr, settings.mc_draws, settings.seed, settings.fit);
        out.results["monte_carlo"] = {{"uncertainty_method", "parametric-bootstrap"},
                                      {"draws", mc.draws},
                                      {"sigma_f_r", mc.f_r},
                                      {"sigma_q_int", mc.q_int},
                                      {"sigma_q_c_mag", mc.q_c_mag},
                                      {"sigma_phi", mc.phi}};
        out.seed = settings.seed;
    }
    const auto truth = truth_comparison(tr, fit);
    if (!truth.empty()) out.results["truth"] = truth;
    out.warnings = fit.report.warnings;
    const auto model = circle::model_values(fit, tr.freqs());
    out.plot.columns = {"freq_hz", "re", "im"};
    for (std::size_t i = 0; i < tr.size(); ++i) {
        out.plot.add("data", {tr.freqs()[i], tr.values()[i].real(), tr.values()[i].imag()});
        out.plot.add("model", {tr.freqs()[i], model[i].real(), model[i].imag()});
    }
    return out;
}

PipelineResult run_power_sweep(const std::vector<std::string>& paths, const FitSettings& settings) {
    if (paths.empty()) throw InputError("power-sweep needs at least one trace");
    PipelineResult out;
    out.inputs = paths;
    std::vector<ComplexTrace> traces;
    for (const auto& p : paths) {
        traces.push_back(ingest_trace(p));
        calibrate_power(traces.back(), settings.attenuation_db);
        if (!traces.back().power_in) throw InputError(p + ": missing power_in_w or power_dbm metadata");
    }
    std::vector<std::optional<circle::TraceFit>> fits(traces.size());
    std::vector<std::string> errors(traces.size());
    parallel_for(traces.size(), [&](std::size_t i) {
        try {
            fits[i] = circle::fit_trace(traces[i], settings.fit);
        } catch (const FitError& e) {
            errors[i] = e.what();
        }
    });
    json per = json::array();
    std::vector<jja::PowerPoint> kerr_pts;
    std::vector<loss::TlsPoint> tls_pts;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        json j = {{"path", paths[i]}, {"power_in_w", *traces[i].power_in}};
        if (!fits[i]) {
            j["error"] = errors[i];
            out.warnings.push_back(paths[i] + ": " + errors[i]);
        } else {
            j["fit"] = trace_fit_json(*fits[i]);
            const double n = fits[i]->report.photon_number.value_or(0.0);
            kerr_pts.push_back({n, fits[i]->params.f_r, fits[i]->report.sigma("f_r")});
            tls_pts.push_back({n, 1.0 / fits[i]->params.q_int, 0.0});
        }
        per.push_back(j);
    }
    out.results["traces"] = per;
    std::sort(kerr_pts.begin(), kerr_pts.end(), [](auto& a, auto& b) { return a.n_photons < b.n_photons; });
    std::sort(tls_pts.begin(), tls_pts.end(), [](auto& a, auto& b) { return a.n_photons < b.n_photons; });
    out.plot.columns = {"n_photons", "value"};
    for (const auto& p : kerr_pts) out.plot.add("f_r", {p.n_photons, p.f_r});
    for (const auto& p : tls_pts) out.plot.add("inv_q_int", {p.n_photons, p.inv_q});
    try {
        const auto k = jja::kerr_from_power_sweep(kerr_pts);
        out.results["kerr"] = {{"k", estimate_json(k.k, k.sigma_k)}, {"f0", estimate_json(k.f0, k.sigma_f0)}};
        for (const auto& p : kerr_pts) out.plot.add("f_r_model", {p.n_photons, k.f0 + k.k * p.n_photons});
    } catch (const InputError& e) {
        out.warnings.push_back(std::string("kerr fit skipped: ") + e.what());
    }
    try {
        const auto t = loss::tls_fit(tls_pts);
        out.results["tls"] = {{"q0", estimate_json(t.q0, t.sigma_q0)},
                              {"tls_loss", estimate_json(t.tls_loss, t.sigma_tls_loss)},
                              {"n_c", estimate_json(t.n_c, t.sigma_n_c)},
                              {"beta", estimate_json(t.beta, t.sigma_beta)},
                              {"q_single_photon", t.q_single_photon},
                              {"tls_resolved", t.tls_resolved},
                              {"converged", t.converged},
                              {"warnings", t.warnings}};
        for (const auto& p : tls_pts) out.plot.add("inv_q_tls", {p.n_photons, t.inv_q(p.n_photons)});
    } catch (const InputError& e) {
        out.warnings.push_back(std::string("tls fit skipped: ") + e.what());
    }
    return out;
}

namespace {

PipelineResult sheet_fit_result(const std::vector<inductance::SheetPoint>& pts, json devices) {
    PipelineResult out;
    const auto fit = inductance::sheet_inductance_fit(pts);
    out.results["devices"] = std::move(devices);
    out.results["sheet_fit"] = {{"l_sq", estimate_json(fit.l_sq, std::sqrt(fit.var_l_sq))},
                                {"intercept", estimate_json(fit.intercept, std::sqrt(fit.var_intercept))},
                                {"covariance", fit.cov},
                                {"weighted", fit.weighted}};
    out.plot.columns = {"n_sq", "l_k_h"};
    for (const auto& p : pts) out.plot.add("data", {p.n_sq, p.l_k});
    for (const auto& p : pts) out.plot.add("fit", {p.n_sq, fit.l_sq * p.n_sq + fit.intercept});
    return out;
}

}  // namespace

PipelineResult run_sheet_inductance(const Config& cfg) {
    std::vector<inductance::SheetPoint> pts;
    json devices = json::array();
    for (const auto& sec : cfg.sections("device")) {
        const double f_r = cfg.get(sec, "f_r", D::frequency);
        const double l_g = cfg.get(sec, "l_g", D::inductance);
        const double c_s = cfg.get(sec, "c_s", D::capacitance);
        const double l = cfg.get(sec, "l_strip", D::length);
        const double w = cfg.get(sec, "w_strip", D::length);
        const double alpha = inductance::alpha_from_fr(f_r, l_g, c_s);
        const double l_k = inductance::lk_from_alpha(alpha, l_g);
        double sigma = 0.0;
        if (auto sf = cfg.get_opt(sec, "sigma_f_r", D::frequency)) sigma = inductance::lk_sigma_from_fr(f_r, *sf, c_s);
        pts.push_back({l / w, l_k, sigma});
        devices.push_back({{"name", sec}, {"alpha", alpha}, {"l_k", l_k}, {"n_sq", l / w}, {"sigma_l_k", sigma}});
    }
    if (pts.empty()) throw InputError(cfg.origin + ": no [device.*] sections");
    auto out = sheet_fit_result(pts, devices);
    if (cfg.has_section("impedance")) {
        const double w = cfg.get("impedance", "w_strip", D::length);
        const double c0 = cfg.get_opt("impedance", "c0", D::capacitance_per_length)
                              .value_or(inductance::C0Table::default_table().at(w));
        const double l_sq = out.results["sheet_fit"]["l_sq"]["value"].get<double>();
        out.results["impedance"] = {{"w_strip", w}, {"c0", c0}, {"z0", inductance::characteristic_impedance(l_sq, w, c0)}};
    }
    return out;
}

PipelineResult run_sheet_inductance_table(const std::string& path) {
    const auto t = read_table(path);
    std::vector<inductance::SheetPoint> pts;
    const auto n = t.column_values("n_sq");
    const auto l = t.column_values("l_k_h");
    const auto s = t.has_column("sigma_h") ? t.column_values("sigma_h") : std::vector<double>(n.size(), 0.0);
    for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({n[i], l[i], s[i]});
    auto out = sheet_fit_result(pts, json::array());
    out.inputs.push_back(path);
    return out;
}

PipelineResult run_kerr(const Config& cfg) {
    PipelineResult out;
    const std::string sec = "kerr";
    double k_measured = 0.0;
    if (auto sweep = cfg.get_text_opt(sec, "sweep")) {
        const auto path = resolve_path(cfg, *sweep);
        out.inputs.push_back(path);
        const auto t = read_table(path);
        const auto n = t.column_values("n_photons");
        const auto f = t.column_values("f_r_hz");
        const auto s = t.has_column("sigma_hz") ? t.column_values("sigma_hz") : std::vector<double>(n.size(), 0.0);
        std::vector<jja::PowerPoint> pts;
        for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({n[i], f[i], s[i]});
        const auto k = jja::kerr_from_power_sweep(pts);
        out.results["kerr_fit"] = {{"k", estimate_json(k.k, k.sigma_k)}, {"f0", estimate_json(k.f0, k.sigma_f0)}};
        k_measured = k.k;
    } else {
        k_measured = cfg.get(sec, "k_measured", D::kerr);
    }
    const double c_s = cfg.get(sec, "c_s", D::capacitance);
    DeviceGeometry g{cfg.get(sec, "l_strip", D::length), cfg.get(sec, "w_strip", D::length),
                     cfg.get(sec, "thickness", D::length)};
    const double l_k_strip = cfg.get(sec, "l_k_strip", D::inductance);
    double p = 1.0;
    if (auto pp = cfg.get_opt(sec, "p_strip", D::dimensionless)) p = *pp;
    else if (auto leads = cfg.get_opt(sec, "l_leads", D::inductance)) p = jja::strip_participation(l_k_strip, *leads);
    const double e_c = constants::e * constants::e / (2.0 * c_s);
    const auto m = jja::infer_array(k_measured, p, e_c, l_k_strip, g);
    out.results["e_c_over_h"] = e_c / constants::h;
    out.results["p_strip"] = p;
    out.results["array"] = {{"k_measured", m.k_measured}, {"k_strip", m.k_strip}, {"n_jj", m.n_jj},
                            {"a_eff", m.a_eff},           {"l_j", m.l_j},         {"i_c", m.i_c},
                            {"j_c", m.j_c},               {"j_c_a_per_cm2", m.j_c * 1e-4}};
    const double k_abs = std::abs(k_measured);
    if (k_abs < 0.2 || k_abs > 20.0) out.warnings.push_back("|K| outside the 0.2-20 Hz/photon range of grAl strips");
    return out;
}

PipelineResult run_loss_budget(const Config& cfg) {
    PipelineResult out;
    loss::LossLedger led;
    if (cfg.has_section("ledger")) {
        const std::string s = "ledger";
        led.gamma_bulk = cfg.get_or(s, "gamma_bulk", D::dimensionless, 0.0);
        led.p_bulk = cfg.get_or(s, "p_bulk", D::dimensionless, 0.0);
        led.gamma_surf = cfg.get_or(s, "gamma_surf", D::dimensionless, 0.0);
        led.p_ma = cfg.get_or(s, "p_ma", D::dimensionless, 0.0);
        led.p_ms = cfg.get_or(s, "p_ms", D::dimensionless, 0.0);
        led.p_sa = cfg.get_or(s, "p_sa", D::dimensionless, 0.0);
        led.q_ind_inv = cfg.get_or(s, "q_ind_inv", D::dimensionless, 0.0);
        led.q_contact_inv = cfg.get_or(s, "q_contact_inv", D::dimensionless, 0.0);
        const auto l = loss::total_internal_loss(led);
        out.results["internal"] = {{"bulk", l.bulk},         {"surface", l.surface}, {"inductor", l.inductor},
                                   {"contact", l.contact},   {"total", l.total},
                                   {"q_int", l.total > 0.0 ? json(l.q_int()) : json(nullptr)}};
    }
    std::optional<double> pkg_total;
    if (cfg.has_section("package")) {
        const std::string s = "package";
        auto& p = led.package;
        p.gamma_ma = cfg.get_or(s, "gamma_ma", D::dimensionless, 0.0);
        p.p_ma = cfg.get_or(s, "p_ma", D::dimensionless, 0.0);
        if (auto gc = cfg.get_opt(s, "gamma_cond", D::dimensionless)) {
            p.gamma_cond = *gc;
        } else if (cfg.has(s, "r_s")) {
            const double r_s = cfg.get(s, "r_s", D::resistance);
            const double lambda = cfg.get(s, "lambda", D::length);
            const double f = cfg.get(s, "f", D::frequency);
            const auto conv = cfg.get_text_opt(s, "cond_convention").value_or("omega");
            if (conv == "omega") p.gamma_cond = loss::conductor_loss_factor(r_s, lambda, f);
            else if (conv == "table") p.gamma_cond = loss::conductor_loss_factor_table(r_s, lambda, f);
            else throw InputError(cfg.origin + ": [package] cond_convention must be omega or table");
            out.results["conductor_factor"] = {{"convention", conv}, {"gamma_cond", p.gamma_cond}};
        }
        p.p_cond = cfg.get_or(s, "p_cond", D::dimensionless, 0.0);
        p.y_seam = cfg.get_or(s, "y_seam", D::admittance_per_length, 0.0);
        p.g_seam_inv = cfg.get_or(s, "g_seam_inv", D::resistivity, 0.0);
        led.validate();
        const auto l = loss::package_loss(p);
        pkg_total = l.total;
        out.results["package"] = {{"ma", l.ma},
                                  {"conductor", l.conductor},
                                  {"seam", l.seam},
                                  {"total", l.total},
                                  {"q_pkg", l.total > 0.0 ? json(l.q_pkg()) : json(nullptr)}};
    }
    json res = json::array();
    for (const auto& sec : cfg.sections("residual")) {
        const double q_int = cfg.get(sec, "q_int", D::dimensionless);
        const double q_bulk = cfg.get(sec, "q_bulk", D::dimensionless);
        const auto r = loss::residual_loss(q_int, q_bulk);
        json j = {{"name", sec}, {"q_int", q_int}, {"q_bulk", q_bulk}, {"inv_q_res", r.inv_q_res},
                  {"negative", r.negative}};
        if (pkg_total) j["package_fraction"] = *pkg_total * q_int;
        if (r.negative) out.warnings.push_back(sec + ": negative residual loss (Q_int above Q_bulk)");
        if (pkg_total && *pkg_total * 10.0 > 1.0 / q_int)
            out.warnings.push_back(sec + ": package loss is not negligible against 1/Q_int");
        res.push_back(j);
    }
    if (!res.empty()) out.results["residual"] = res;
    if (out.results.empty()) throw InputError(cfg.origin + ": no [ledger], [package] or [residual.*] sections");
    return out;
}

PipelineResult run_qp_burst(const std::string& path, const Config& cfg) {
    PipelineResult out;
    out.inputs.push_back(path);
    auto tr = ingest_trace(path);
    HangerParams hp{cfg.get("resonator", "f_r", D::frequency), cfg.get("resonator", "q_int", D::dimensionless),
                    cfg.get("resonator", "q_c_mag", D::dimensionless),
                    cfg.get_or("resonator", "phi", D::angle, 0.0)};
    const double amp = cfg.get_or("resonator", "env_amplitude", D::dimensionless, 1.0);
    const double phase = cfg.get_or("resonator", "env_phase", D::angle, 0.0);
    if (amp != 1.0 || phase != 0.0) {
        std::vector<cdouble> v = tr.values();
        for (auto& z : v) z /= amp * std::polar(1.0, phase);
        auto meta = tr.metadata;
        auto probe = tr.probe_frequency;
        tr = ComplexTrace::time_series(tr.timestamps(), std::move(v), probe);
        tr.metadata = meta;
    }
    if (auto pf = cfg.get_opt("qp", "probe_frequency", D::frequency)) tr.probe_frequency = *pf;
    const double alpha = cfg.get("qp", "alpha", D::dimensionless);
    const auto series = qp::trace_to_xqp(tr, hp, alpha);
    if (!series.dropped.empty())
        out.warnings.push_back(std::to_string(series.dropped.size()) + " samples at the singular point dropped");

    qp::BurstFitOptions bo;
    bo.mask = cfg.get_or("qp", "mask", D::time, bo.mask);
    bo.window_start = cfg.get_opt("qp", "window_start", D::time);
    bo.window_end = cfg.get_opt("qp", "window_end", D::time);
    auto m = qp::fit_burst(series, bo);
    m.alpha = alpha;
    if (auto x0 = cfg.get_opt("qp", "x0", D::dimensionless)) {
        m.x0 = *x0;
    } else {
        const double q_res = cfg.get("qp", "q_res", D::dimensionless);
        double delta = 0.0;
        if (auto d = cfg.get_opt("qp", "delta", D::energy)) delta = *d;
        else delta = constants::bcs_gap_ratio * constants::k_B * cfg.get("qp", "t_c", D::temperature);
        m.delta = delta;
        m.x0 = qp::steady_state_xqp(alpha, q_res, hp.f_r, delta);
    }
    const auto r = qp::rates_from_fit(m);
    out.results["burst"] = {{"tau_ss", estimate_json(m.tau_ss, m.sigma_tau_ss)},
                            {"x_i", estimate_json(m.x_i, m.sigma_x_i)},
                            {"r_prime", estimate_json(m.r_prime, m.sigma_r_prime)},
                            {"t_peak", m.t_peak},
                            {"points_used", m.points_used},
                            {"converged", m.converged},
                            {"r_prime_at_bound", m.r_prime_at_bound}};
    out.results["x0"] = m.x0;
    out.results["rates"] = {{"r", r.r},
                            {"s", r.s},
                            {"g", r.g},
                            {"consistency_residual", r.consistency},
                            {"negative_s", r.negative_s},
                            {"negative_g", r.negative_g},
                            {"caveat", r.caveat}};
    for (const auto& w : m.warnings) out.warnings.push_back(w);
    if (r.negative_s) out.warnings.push_back("negative trapping rate: outside model validity");
    if (r.negative_g) out.warnings.push_back("negative generation rate: outside model validity");
    out.results["metadata"] = {{"if_bandwidth_note", "samples treated as instantaneous; no IF-bandwidth deconvolution"}};
    out.plot.columns = {"t_s", "dx"};
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        out.plot.add("data", {series.t[i], series.dx[i]});
        const double tt = series.t[i] - m.t_peak;
        if (tt >= 0.0) out.plot.add("model", {series.t[i], qp::burst_dx(tt, m.tau_ss, m.x_i, m.r_prime)});
    }
    return out;
}

PipelineResult run_tc_fit(const std::string& path, const Config& cfg) {
    PipelineResult out;
    out.inputs.push_back(path);
    const auto t = read_table(path);
    const auto temps = t.column_values("t_k");
    const auto df = t.column_values("df_hz");
    std::vector<mb::TcPoint> pts;
    for (std::size_t i = 0; i < temps.size(); ++i) pts.push_back({temps[i], df[i]});
    const double f_r0 = cfg.get("tc", "f_r0", D::frequency);
    const double alpha = cfg.get("tc", "alpha", D::dimensionless);
    mb::TcFitOptions o;
    o.fit_offset = get_bool(cfg, "tc", "fit_offset", false);
    o.t_c_guess = cfg.get_opt("tc", "t_c_guess", D::temperature);
    const auto fit = mb::fit_tc(pts, f_r0, alpha, o);
    out.results["t_c"] = estimate_json(fit.t_c, fit.sigma_t_c);
    if (o.fit_offset) out.results["offset_hz"] = estimate_json(fit.offset, fit.sigma_offset);
    out.results["iterations"] = fit.iterations;
    out.results["converged"] = fit.converged;
    out.results["alpha"] = alpha;
    out.warnings = fit.warnings;
    const auto model = mb::freq_shift_vs_temperature(temps, f_r0, alpha, fit.t_c);
    out.plot.columns = {"t_k", "df_hz"};
    for (const auto& p : pts) out.plot.add("data", {p.t, p.df});
    for (const auto& p : model) out.plot.add("model", {p.t, p.df + fit.offset});
    return out;
}

PipelineResult run_bundle(const Config& cfg) {
    PipelineResult out;
    const auto steps = split_list(cfg.get_text("pipeline", "steps"));
    if (steps.empty()) throw InputError(cfg.origin + ": [pipeline] steps is empty");
    // Every referenced file must exist before any pipeline runs.
    auto require = [&](const std::string& p) {
        if (!std::filesystem::exists(p)) throw InputError(cfg.origin + ": referenced file does not exist: " + p);
        return p;
    };
    const auto settings = fit_settings_from_config(cfg);
    auto merge = [&](const std::string& name, PipelineResult r) {
        out.results[name] = std::move(r.results);
        for (auto& w : r.warnings) out.warnings.push_back(name + ": " + w);
        for (auto& i : r.inputs) out.inputs.push_back(i);
        if (r.seed) out.seed = r.seed;
    };
    std::vector<std::string> trace_names, trace_paths;
    for (const auto& sec : cfg.sections("trace")) {
        trace_names.push_back(sec);
        trace_paths.push_back(require(resolve_path(cfg, cfg.get_text(sec, "path"))));
    }
    for (const auto& step : steps) {
        if (step == "fit-s21") {
            if (trace_paths.empty()) throw InputError(cfg.origin + ": fit-s21 step needs [trace.*] sections");
            // Devices are independent; results are stored by index and assembled in order.
            std::vector<std::optional<PipelineResult>> res(trace_paths.size());
            std::vector<std::string> errs(trace_paths.size());
            parallel_for(trace_paths.size(), [&](std::size_t i) {
                try {
                    res[i] = run_fit_s21(trace_paths[i], settings);
                } catch (const FitError& e) {
                    errs[i] = e.what();
                }
            });
            json all = json::object();
            for (std::size_t i = 0; i < res.size(); ++i) {
                out.inputs.push_back(trace_paths[i]);
                if (!res[i]) {
                    all[trace_names[i]] = {{"error", errs[i]}};
                    out.warnings.push_back(trace_names[i] + ": " + errs[i]);
                    continue;
                }
                all[trace_names[i]] = std::move(res[i]->results);
                for (auto& w : res[i]->warnings) out.warnings.push_back(trace_names[i] + ": " + w);
            }
            out.results["fit-s21"] = all;
        } else if (step == "power-sweep") {
            std::vector<std::string> paths;
            for (const auto& p : split_list(cfg.get_text("power-sweep", "traces")))
                paths.push_back(require(resolve_path(cfg, p)));
            merge(step, run_power_sweep(paths, settings));
        } else if (step == "sheet-inductance") {
            merge(step, run_sheet_inductance(cfg));
        } else if (step == "kerr") {
            if (auto sw = cfg.get_text_opt("kerr", "sweep")) require(resolve_path(cfg, *sw));
            merge(step, run_kerr(cfg));
        } else if (step == "loss-budget") {
            merge(step, run_loss_budget(cfg));
        } else if (step == "qp-burst") {
            merge(step, run_qp_burst(require(resolve_path(cfg, cfg.get_text("qp", "trace"))), cfg));
        } else if (step == "tc-fit") {
            merge(step, run_tc_fit(require(resolve_path(cfg, cfg.get_text("tc", "data"))), cfg));
        } else {
            throw InputError(cfg.origin + ": unknown pipeline step '" + step + "'");
        }
    }
    return out;
}

synth::Scenario scenario_from_config(const Config& cfg, synth::Kind kind) {
    synth::Scenario s;
    s.kind = kind;
    const std::string sec = "scenario";
    s.seed = static_cast<std::uint64_t>(cfg.get_or(sec, "seed", D::dimensionless, 0.0));
    s.sigma = cfg.get_or(sec, "sigma", kind == synth::Kind::trace || kind == synth::Kind::burst ? D::dimensionless
                                                                                                  : D::frequency,
                         0.0);
    auto hanger = [&](HangerParams& p) {
        p.f_r = cfg.get_or(sec, "f_r", D::frequency, p.f_r);
        p.q_int = cfg.get_or(sec, "q_int", D::dimensionless, p.q_int);
        p.q_c_mag = cfg.get_or(sec, "q_c_mag", D::dimensionless, p.q_c_mag);
        p.phi = cfg.get_or(sec, "phi", D::angle, p.phi);
    };
    switch (kind) {
        case synth::Kind::trace: {
            auto& t = s.trace;
            hanger(t.params);
            t.points = static_cast<std::size_t>(cfg.get_or(sec, "points", D::dimensionless, double(t.points)));
            t.span_linewidths = cfg.get_or(sec, "span_linewidths", D::dimensionless, t.span_linewidths);
            t.amplitude = cfg.get_or(sec, "amplitude", D::dimensionless, t.amplitude);
            t.phase = cfg.get_or(sec, "phase", D::angle, t.phase);
            t.delay = cfg.get_or(sec, "delay", D::time, t.delay);
            t.power_in = cfg.get_opt(sec, "power_in", D::power);
            break;
        }
        case synth::Kind::power_sweep: {
            auto& p = s.sweep;
            p.f0 = cfg.get_or(sec, "f0", D::frequency, p.f0);
            p.kerr = cfg.get_or(sec, "kerr", D::kerr, p.kerr);
            if (cfg.has(sec, "photon_numbers")) p.photon_numbers = cfg.get_list(sec, "photon_numbers", D::dimensionless);
            break;
        }
        case synth::Kind::burst: {
            auto& b = s.burst;
            hanger(b.params);
            b.alpha = cfg.get_or(sec, "alpha", D::dimensionless, b.alpha);
            b.tau_ss = cfg.get_or(sec, "tau_ss", D::time, b.tau_ss);
            b.x_i = cfg.get_or(sec, "x_i", D::dimensionless, b.x_i);
            b.r_prime = cfg.get_or(sec, "r_prime", D::dimensionless, b.r_prime);
            b.x0 = cfg.get_or(sec, "x0", D::dimensionless, b.x0);
            b.dt = cfg.get_or(sec, "dt", D::time, b.dt);
            b.duration = cfg.get_or(sec, "duration", D::time, b.duration);
            b.t_burst = cfg.get_or(sec, "t_burst", D::time, b.t_burst);
            b.probe_frequency = cfg.get_opt(sec, "probe_frequency", D::frequency);
            break;
        }
        case synth::Kind::temp_sweep: {
            auto& t = s.temp;
            if (cfg.has(sec, "temps")) t.temps = cfg.get_list(sec, "temps", D::temperature);
            t.f_r0 = cfg.get_or(sec, "f_r0", D::frequency, t.f_r0);
            t.alpha = cfg.get_or(sec, "alpha", D::dimensionless, t.alpha);
            t.t_c = cfg.get_or(sec, "t_c", D::temperature, t.t_c);
            break;
        }
    }
    return s;
}

std::string simulate_csv(const synth::Scenario& s) {
    switch (s.kind) {
        case synth::Kind::trace: return format_trace(synth::gen_trace(s));
        case synth::Kind::burst: return format_trace(synth::gen_burst(s));
        case synth::Kind::power_sweep: {
            Table t;
            t.metadata = synth::truth_metadata(s);
            t.columns = {"n_photons", "f_r_hz", "sigma_hz"};
            for (const auto& p : synth::gen_power_sweep(s)) t.rows.push_back({p.n_photons, p.f_r, p.sigma});
            return format_table(t);
        }
        case synth::Kind::temp_sweep: {
            Table t;
            t.metadata = synth::truth_metadata(s);
            t.columns = {"t_k", "df_hz"};
            for (const auto& p : synth::gen_temp_sweep(s)) t.rows.push_back({p.t, p.df});
            return format_table(t);
        }
    }
    return {};
}

}  // namespace resokit::io
