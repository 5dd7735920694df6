// Batch front end: ingestion, fitting, model selection, monitoring,
// confidence-distribution combination, copula work, and plot-data emission.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hjortic/argauss.hpp"
#include "hjortic/confid.hpp"
#include "hjortic/copula.hpp"
#include "hjortic/json_io.hpp"
#include "hjortic/modelsel.hpp"
#include "hjortic/monitor.hpp"
#include "hjortic/series.hpp"
#include "hjortic/tvar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hjortic;

namespace {

int max_threads() {
    if (const char* env = std::getenv("HJORTIC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct CommonOpts {
    std::string input;
    std::string response = "z";
    std::vector<std::string> covariates;  // name:lag
    int ar_order = 0;
    bool trend = false;
    std::string out = ".";
    std::uint64_t seed = 1;
};

std::pair<std::string, int> parse_name_lag(const std::string& tok) {
    const auto pos = tok.rfind(':');
    if (pos == std::string::npos) return {tok, 0};
    return {tok.substr(0, pos), std::stoi(tok.substr(pos + 1))};
}

ArxSpec spec_from_opts(const CommonOpts& o) {
    ArxSpec s;
    s.response = o.response;
    s.ar_order = o.ar_order;
    s.include_linear_trend = o.trend;
    for (const auto& c : o.covariates) {
        const auto [nm, lg] = parse_name_lag(c);
        s.regressors.push_back({nm, lg});
    }
    return s;
}

/// Model mini-language for --wide/--candidate: "ar2,trend,kola:1,capelin:1".
ArxSpec parse_spec_string(const std::string& text, const std::string& response) {
    ArxSpec s;
    s.response = response;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok.rfind("ar", 0) == 0 && tok.size() > 2 && std::isdigit(tok[2])) {
            s.ar_order = std::stoi(tok.substr(2));
        } else if (tok == "trend") {
            s.include_linear_trend = true;
        } else if (tok == "nointercept") {
            s.include_intercept = false;
        } else {
            const auto [nm, lg] = parse_name_lag(tok);
            s.regressors.push_back({nm, lg});
        }
    }
    return s;
}

/// Focus mini-language: pred:H | slope:Y1,Y2 | thresh:LEVEL,H1,H2,...
/// LEVEL may be "mean" (overall response mean); entries > 1000 are calendar
/// years converted to horizons past the end of the data.
FocusSpec parse_focus(const std::string& text, const Frame& frame,
                      const std::string& response) {
    FocusSpec f;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad focus: " + text);
    const std::string kind = text.substr(0, colon);
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (kind == "pred") {
        f.kind = FocusKind::prediction;
        f.horizon = std::stoi(parts.at(0));
    } else if (kind == "slope") {
        f.kind = FocusKind::slope_contrast;
        f.year_a = std::stoi(parts.at(0));
        f.year_b = std::stoi(parts.at(1));
    } else if (kind == "thresh") {
        f.kind = FocusKind::threshold_probability;
        if (parts.at(0) == "mean") {
            const Series& s = frame.get(response);
            std::vector<double> obs;
            for (int i = 0; i < s.size(); ++i)
                if (!s.missing[i]) obs.push_back(s.values[i]);
            f.threshold = mean(obs);
        } else {
            f.threshold = std::stod(parts.at(0));
        }
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const int v = std::stoi(parts[i]);
            f.horizons.push_back(v > 1000 ? v - frame.end_year() : v);
        }
    } else {
        throw std::invalid_argument("unknown focus kind: " + kind);
    }
    f.validate();
    return f;
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_series_csv(const Series& s, const fs::path& path,
                      const std::string& value_header = "value") {
    std::ofstream out(path);
    out << "year," << value_header << '\n';
    for (int y = s.start_year; y <= s.end_year(); ++y) {
        out << y << ',';
        if (s.observed_at(y)) out << detail::format_sig12(s.at(y));
        else out << "NA";
        out << '\n';
    }
}

json config_echo(const CommonOpts& o, const json& extra = json::object()) {
    json j;
    j["input"] = o.input;
    j["response"] = o.response;
    j["covariates"] = o.covariates;
    j["ar_order"] = o.ar_order;
    j["trend"] = o.trend;
    j["seed"] = o.seed;
    j["out"] = o.out;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

Frame load_input(const CommonOpts& o, const std::vector<std::string>& extra_columns = {}) {
    if (o.input.empty()) throw std::invalid_argument("--input is required");
    // read the header to pick up every column except the year column
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open " + o.input);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> cols;
    std::stringstream ss(header);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty() && tok.back() == '\r') tok.pop_back();
        if (tok != "year") cols.push_back(tok);
    }
    for (const auto& c : extra_columns)
        if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    return load_csv(o.input, "year", cols);
}

// ---------------------------------------------------------------------------
// subcommand bodies

int run_fit(const CommonOpts& o) {
    const Frame frame = load_input(o);
    const ArxFit f = fit(spec_from_opts(o), frame);
    json j;
    j["config_echo"] = config_echo(o);
    j["fit"] = to_json(f);
    j["aic"] = sig12(aic(f));
    j["bic"] = sig12(bic(f));
    write_json(j, fs::path(o.out) / "fit_summary.json");
    write_series_csv(residuals(f, frame), fs::path(o.out) / "fit_residuals.csv", "residual");
    return 0;
}

int run_forecast(const CommonOpts& o, int horizon, const std::string& future_csv) {
    const Frame frame = load_input(o);
    const ArxFit f = fit(spec_from_opts(o), frame);
    std::optional<Frame> future;
    if (!future_csv.empty()) {
        CommonOpts fo = o;
        fo.input = future_csv;
        future = load_input(fo);
    }
    const auto fc = forecast(f, frame, horizon, future ? &*future : nullptr);
    json j;
    j["config_echo"] = config_echo(o, {{"horizon", horizon}});
    j["steps"] = json::array();
    std::ofstream csv(fs::path(o.out) / "forecast.csv");
    csv << "year,mean,sd\n";
    for (int h = 1; h <= horizon; ++h) {
        j["steps"].push_back({{"year", frame.end_year() + h},
                              {"mean", sig12(fc[h - 1].mean)},
                              {"sd", sig12(fc[h - 1].sd)}});
        csv << frame.end_year() + h << ',' << detail::format_sig12(fc[h - 1].mean) << ','
            << detail::format_sig12(fc[h - 1].sd) << '\n';
    }
    write_json(j, fs::path(o.out) / "forecast_summary.json");
    return 0;
}

int run_select(const CommonOpts& o, int max_ar, int race_start, const std::string& baseline) {
    const Frame frame = load_input(o);
    json table = json::array();
    for (int k = 0; k <= max_ar; ++k) {
        CommonOpts ok = o;
        ok.ar_order = k;
        try {
            const ArxFit f = fit(spec_from_opts(ok), frame);
            table.push_back({{"ar_order", k},
                             {"dim", f.spec.n_params()},
                             {"aic", sig12(aic(f))},
                             {"bic", sig12(bic(f))}});
        } catch (const std::exception& e) {
            table.push_back({{"ar_order", k}, {"error", e.what()}});
        }
    }
    json j;
    j["config_echo"] = config_echo(o, {{"max_ar", max_ar}, {"baseline", baseline}});
    j["table"] = table;

    if (race_start > 0) {
        const ArxSpec base = parse_spec_string(baseline, o.response);
        std::vector<ArxSpec> cands;
        for (int k = 0; k <= max_ar; ++k) {
            CommonOpts ok = o;
            ok.ar_order = k;
            cands.push_back(spec_from_opts(ok));
        }
        const auto race = sequential_scores(cands, frame, base, race_start);
        std::ofstream csv(fs::path(o.out) / "select_race.csv");
        csv << "year";
        for (const auto& l : race.labels) csv << ',' << l;
        csv << '\n';
        for (std::size_t i = 0; i < race.diffs.size(); ++i) {
            csv << race.start_year + static_cast<int>(i);
            for (double d : race.diffs[i]) {
                csv << ',';
                if (std::isfinite(d)) csv << detail::format_sig12(d);
                else csv << "NA";
            }
            csv << '\n';
        }
    }
    write_json(j, fs::path(o.out) / "select_summary.json");
    return 0;
}

int run_fic(const CommonOpts& o, const std::string& wide_str,
            const std::vector<std::string>& cand_strs, const std::string& focus_str) {
    const Frame frame = load_input(o);
    const ArxSpec wide = parse_spec_string(wide_str, o.response);
    std::vector<ArxSpec> cands;
    for (const auto& c : cand_strs) cands.push_back(parse_spec_string(c, o.response));
    if (cands.empty()) cands.push_back(wide);
    const FocusSpec focus = parse_focus(focus_str, frame, o.response);
    const FicReport rep = fic(cands, wide, frame, focus);
    json j;
    j["config_echo"] = config_echo(o, {{"wide", wide_str},
                                       {"candidates", cand_strs},
                                       {"focus", focus_str}});
    j["report"] = to_json(rep);
    write_json(j, fs::path(o.out) / "fic_summary.json");
    std::ofstream csv(fs::path(o.out) / "fic_plot.csv");
    csv << "fic_score,focus_estimate,model\n";
    for (const auto& e : rep.entries)
        csv << detail::format_sig12(e.fic_score) << ','
            << detail::format_sig12(e.focus_estimate) << ',' << e.label << '\n';
    return 0;
}

int run_monitor(const CommonOpts& o, int start_year, int naive_window) {
    const Frame frame = load_input(o);
    const ArxSpec spec = spec_from_opts(o);
    const Series m = prediction_monitor(spec, frame, start_year);
    const auto [model_mae, naive_mae] =
        mean_abs_error_compare(spec, frame, start_year, naive_window);
    json j;
    j["config_echo"] =
        config_echo(o, {{"start_year", start_year}, {"naive_window", naive_window}});
    j["model_mae"] = sig12(model_mae);
    j["naive_mae"] = sig12(naive_mae);
    write_json(j, fs::path(o.out) / "monitor_summary.json");
    write_series_csv(m, fs::path(o.out) / "monitor_mt.csv", "m_t");
    return 0;
}

int run_bridge(const CommonOpts& o) {
    const Frame frame = load_input(o);
    const BridgePath path = bridge(spec_from_opts(o), frame);
    const BreakScan scan = break_scan(path);
    json j;
    j["config_echo"] = config_echo(o);
    j["band_95"] = path.band_95;
    j["a_hat"] = sig12(path.a_hat);
    j["kappa_hat"] = sig12(path.kappa_hat);
    j["max_abs"] = sig12(scan.max_abs);
    j["year_at_max"] = scan.year_at_max;
    j["exceeded"] = scan.exceeded;
    write_json(j, fs::path(o.out) / "bridge_summary.json");
    std::ofstream csv(fs::path(o.out) / "bridge_path.csv");
    csv << "year,B\n";
    for (std::size_t i = 0; i < path.years.size(); ++i)
        csv << path.years[i] << ',' << detail::format_sig12(path.values[i]) << '\n';
    return 0;
}

int run_adf(const CommonOpts& o, int max_lag) {
    const Frame frame = load_input(o);
    const AdfResult r = adf_test(frame.get(o.response), max_lag);
    json j;
    j["config_echo"] = config_echo(o, {{"max_lag", max_lag}});
    j["statistic"] = sig12(r.statistic);
    j["lag_order"] = r.lag_order;
    j["p_interval"] = r.p_interval;
    j["reject_unit_root_at_1pct"] = r.reject_unit_root_at_1pct;
    write_json(j, fs::path(o.out) / "adf_summary.json");
    return 0;
}

int run_rollsd(const CommonOpts& o, double bandwidth) {
    const Frame frame = load_input(o);
    const Series s = rolling_sd(frame.get(o.response), bandwidth);
    json j;
    j["config_echo"] = config_echo(o, {{"bandwidth", bandwidth}});
    write_json(j, fs::path(o.out) / "rollsd_summary.json");
    write_series_csv(s, fs::path(o.out) / "rollsd.csv", "sd");
    return 0;
}

int run_reconstruct(const CommonOpts& o) {
    const Frame frame = load_input(o);
    const ArxFit f = fit(spec_from_opts(o), frame);
    const Reconstruction rec = reconstruct_missing(frame.get(o.response), f);
    json j;
    j["config_echo"] = config_echo(o);
    j["fit"] = to_json(f);
    write_json(j, fs::path(o.out) / "reconstruct_summary.json");
    std::ofstream csv(fs::path(o.out) / "reconstructed.csv");
    csv << "year,value,cond_sd\n";
    const Series& orig = frame.get(o.response);
    for (int i = 0; i < rec.filled.size(); ++i) {
        csv << rec.filled.start_year + i << ','
            << detail::format_sig12(rec.filled.values[i]) << ','
            << detail::format_sig12(orig.missing[i] ? rec.cond_sd[i] : 0.0) << '\n';
    }
    return 0;
}

int run_combine(const CommonOpts& o, const std::vector<std::string>& cd_files) {
    std::vector<ConfidenceDistribution> cds;
    for (const auto& path : cd_files) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        json j;
        in >> j;
        cds.push_back(cd_from_json(j.contains("cd") ? j["cd"] : j));
    }
    const ConfidenceDistribution comb = combine(cds);
    const auto [lo95, hi95] = interval(comb, 0.95);
    json j;
    j["config_echo"] = config_echo(o, {{"cd_files", cd_files}});
    j["cd"] = to_json(comb);
    j["interval_95"] = {sig12(lo95), sig12(hi95)};
    write_json(j, fs::path(o.out) / "combine_summary.json");
    // grid CSV for plotting: theta, C, cc
    std::ofstream csv(fs::path(o.out) / "combine_curve.csv");
    csv << "theta,C,cc\n";
    const double a = comb.quantile(0.0005), b = comb.quantile(0.9995);
    for (int i = 0; i <= 400; ++i) {
        const double t = a + (b - a) * i / 400.0;
        const double c = comb.cdf(t);
        csv << detail::format_sig12(t) << ',' << detail::format_sig12(c) << ','
            << detail::format_sig12(std::abs(1 - 2 * c)) << '\n';
    }
    return 0;
}

int run_copula(const CommonOpts& o, const std::string& action, const std::string& pairs_csv,
               const CopulaModel& model, int n_fish, int n_reps) {
    json j;
    j["config_echo"] = config_echo(
        o, {{"action", action}, {"n_fish", n_fish}, {"n_reps", n_reps}});
    if (action == "fit") {
        std::ifstream in(pairs_csv);
        if (!in) throw std::runtime_error("cannot open " + pairs_csv);
        std::string line;
        std::getline(in, line);  // header: liver_kg,fish_kg
        FishPairs pairs;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = detail::split_csv_line(line);
            pairs.liver_kg.push_back(std::stod(cells.at(0)));
            pairs.fish_kg.push_back(std::stod(cells.at(1)));
        }
        const CopulaModel m = fit_copula(pairs);
        j["model"] = to_json(m);
        j["hsi_bulk"] = sig12(hsi_bulk(pairs));
        j["hsi_ind"] = sig12(hsi_ind(pairs));
        write_json(j, fs::path(o.out) / "copula_fit.json");
        return 0;
    }
    if (action == "simulate") {
        // replicates get independent seeds, so threading is schedule-free
        std::vector<IndexPair> reps(n_reps);
        const int nt = std::min(max_threads(), n_reps);
        std::vector<std::thread> pool;
        for (int w = 0; w < nt; ++w) {
            pool.emplace_back([&, w] {
                for (int r = w; r < n_reps; r += nt) {
                    Rng rng(o.seed + static_cast<std::uint64_t>(r));
                    reps[r] = draw_indices(model, n_fish, rng);
                }
            });
        }
        for (auto& t : pool) t.join();
        std::ofstream csv(fs::path(o.out) / "copula_sim.csv");
        csv << "rep,hsi_ind,hsi_bulk\n";
        std::vector<double> vi(n_reps), vb(n_reps);
        for (int r = 0; r < n_reps; ++r) {
            vi[r] = reps[r].hsi_ind;
            vb[r] = reps[r].hsi_bulk;
            csv << r << ',' << detail::format_sig12(vi[r]) << ','
                << detail::format_sig12(vb[r]) << '\n';
        }
        j["model"] = to_json(model);
        j["mean_hsi_ind"] = sig12(mean(vi));
        j["mean_hsi_bulk"] = sig12(mean(vb));
        j["index_correlation"] = sig12(pearson(vi, vb));
        write_json(j, fs::path(o.out) / "copula_sim.json");
        return 0;
    }
    if (action == "translate") {
        const auto [intercept, slope] = translation(model, n_fish, n_reps, o.seed);
        j["model"] = to_json(model);
        j["intercept"] = sig12(intercept);
        j["slope"] = sig12(slope);
        write_json(j, fs::path(o.out) / "copula_translate.json");
        return 0;
    }
    throw std::invalid_argument("copula action must be fit|simulate|translate");
}

int run_tvar(const CommonOpts& o, int order, double bandwidth) {
    const Frame frame = load_input(o);
    const TvarLocalFit f = fit_tvar_local(frame.get(o.response), order, bandwidth);
    json j;
    j["config_echo"] = config_echo(o, {{"order", order}, {"bandwidth", bandwidth}});
    write_json(j, fs::path(o.out) / "tvar_summary.json");
    std::ofstream csv(fs::path(o.out) / "tvar_curves.csv");
    csv << "year";
    for (int p = 1; p <= order; ++p) csv << ",alpha_" << p;
    csv << ",sigma";
    for (int p = 1; p <= order; ++p) csv << ",se_alpha_" << p;
    csv << ",se_sigma\n";
    for (std::size_t i = 0; i < f.years.size(); ++i) {
        csv << f.years[i];
        for (double a : f.alpha[i]) csv << ',' << detail::format_sig12(a);
        csv << ',' << detail::format_sig12(f.sigma[i]);
        for (double se : f.alpha_se[i]) csv << ',' << detail::format_sig12(se);
        csv << ',' << detail::format_sig12(f.sigma_se[i]) << '\n';
    }
    return 0;
}

/// Winter average: mean of the monthly means from October of the previous
/// year through March of the current year.
int run_kola_winter(const CommonOpts& o, const std::string& month_column,
                    const std::string& value_column) {
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open " + o.input);
    std::string line;
    std::getline(in, line);
    const auto header = detail::split_csv_line(line);
    int yc = -1, mc = -1, vc = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "year") yc = static_cast<int>(i);
        if (header[i] == month_column) mc = static_cast<int>(i);
        if (header[i] == value_column) vc = static_cast<int>(i);
    }
    if (yc < 0 || mc < 0 || vc < 0)
        throw std::runtime_error("kola-winter: need year, month and value columns");
    std::map<std::pair<int, int>, double> monthly;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        monthly[{std::stoi(cells.at(yc)), std::stoi(cells.at(mc))}] =
            std::stod(cells.at(vc));
    }
    std::map<int, double> winter;
    for (const auto& [ym, v] : monthly) {
        const int y = ym.first;
        bool complete = true;
        double sum = 0.0;
        // October(y-1) .. December(y-1), January(y) .. March(y)
        for (int m = 10; m <= 12 && complete; ++m) {
            auto it = monthly.find({y - 1, m});
            if (it == monthly.end()) complete = false;
            else sum += it->second;
        }
        for (int m = 1; m <= 3 && complete; ++m) {
            auto it = monthly.find({y, m});
            if (it == monthly.end()) complete = false;
            else sum += it->second;
        }
        if (complete) winter[y] = sum / 6.0;
        (void)v;
    }
    if (winter.empty()) throw std::runtime_error("kola-winter: no complete winters");
    std::ofstream csv(fs::path(o.out) / "kola_winter.csv");
    csv << "year," << value_column << "_winter\n";
    for (const auto& [y, v] : winter)
        csv << y << ',' << detail::format_sig12(v) << '\n';
    json j;
    j["config_echo"] = config_echo(o);
    j["years"] = winter.size();
    write_json(j, fs::path(o.out) / "kola_winter_summary.json");
    return 0;
}

int run_synth(const CommonOpts& o, int n, double beta0, double trend_slope, double sigma,
              std::vector<double> rho, int start_year, int gap_from, int gap_to) {
    ArxFit gen;
    gen.spec.response = o.response;
    gen.spec.include_linear_trend = trend_slope != 0.0;
    gen.spec.ar_order = static_cast<int>(rho.size());
    gen.beta = {beta0};
    if (gen.spec.include_linear_trend) gen.beta.push_back(trend_slope);
    gen.rho = std::move(rho);
    gen.sigma = sigma;
    Frame base;
    base.add(Series(o.response, start_year, {0.0}));
    Series s = simulate(gen, base, n, o.seed);
    s.name = o.response;
    for (int y = gap_from; y <= gap_to; ++y) {
        if (s.has_year(y)) {
            s.values[y - s.start_year] = std::numeric_limits<double>::quiet_NaN();
            s.missing[y - s.start_year] = 1;
        }
    }
    Frame f;
    f.add(std::move(s));
    write_csv(f, (fs::path(o.out) / "synth.csv").string());
    json j;
    j["config_echo"] = config_echo(
        o, {{"n", n}, {"beta0", beta0}, {"trend_slope", trend_slope}, {"sigma", sigma}});
    write_json(j, fs::path(o.out) / "synth_summary.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hjortic: focused model selection and monitoring for annual time series"};
    app.require_subcommand(1);

    CommonOpts o;
    int horizon = 1, max_ar = 5, race_start = 0, start_year = 0, naive_window = 3;
    int max_lag = 4, order = 2, n = 154, n_fish = 1000, n_reps = 5000;
    int gap_from = 1, gap_to = 0, synth_start = 1859;
    double bandwidth = 10.0, tvar_bw = 0.15, beta0 = 0.0, trend_slope = 0.0, sigma = 1.0;
    std::string wide_str, focus_str = "pred:1", baseline = "ar2", future_csv, model_str = "ar2";
    std::string pairs_csv, copula_action, month_col = "month", value_col = "temp";
    std::vector<std::string> cand_strs, cd_files;
    std::string rho_str;
    CopulaModel model;

    auto add_common = [&](CLI::App* sub, bool needs_input = true) {
        if (needs_input) sub->add_option("--input", o.input, "input CSV (year column + series)");
        sub->add_option("--response", o.response, "response series name");
        sub->add_option("--covariate", o.covariates, "covariate as name:lag (repeatable)");
        sub->add_option("--ar-order", o.ar_order, "AR order of the noise");
        sub->add_flag("--trend,!--no-trend", o.trend, "include a linear trend");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--out", o.out, "output directory");
    };

    auto* c_fit = app.add_subcommand("fit", "fit a model by conditional ML");
    add_common(c_fit);

    auto* c_fc = app.add_subcommand("forecast", "plug-in forecasts");
    add_common(c_fc);
    c_fc->add_option("--horizon", horizon, "forecast horizon");
    c_fc->add_option("--future", future_csv, "future covariate CSV");

    auto* c_sel = app.add_subcommand("select", "AIC/BIC table and score races");
    add_common(c_sel);
    c_sel->add_option("--max-ar", max_ar, "largest AR order");
    c_sel->add_option("--race-start", race_start, "first year of the sequential race");
    c_sel->add_option("--baseline", baseline, "baseline model for the race");

    auto* c_fic = app.add_subcommand("fic", "focused information criterion");
    add_common(c_fic);
    c_fic->add_option("--wide", wide_str, "wide model, e.g. ar2,trend,kola:1")->required();
    c_fic->add_option("--candidate", cand_strs, "candidate model (repeatable)");
    c_fic->add_option("--focus", focus_str, "pred:H | slope:Y1,Y2 | thresh:LEVEL,H...");

    auto* c_mon = app.add_subcommand("monitor", "one-step prediction monitoring");
    add_common(c_mon);
    c_mon->add_option("--start-year", start_year, "first monitored year")->required();
    c_mon->add_option("--naive-window", naive_window, "trailing-average window");

    auto* c_br = app.add_subcommand("bridge", "likelihood monitoring bridge");
    add_common(c_br);

    auto* c_adf = app.add_subcommand("adf", "augmented Dickey-Fuller test");
    add_common(c_adf);
    c_adf->add_option("--max-lag", max_lag, "largest augmentation lag");

    auto* c_rs = app.add_subcommand("rollsd", "rolling kernel-weighted sd");
    add_common(c_rs);
    c_rs->add_option("--bandwidth", bandwidth, "kernel sd in years");

    auto* c_rec = app.add_subcommand("reconstruct", "conditional-Gaussian gap filling");
    add_common(c_rec);

    auto* c_cmb = app.add_subcommand("combine", "combine confidence distributions");
    add_common(c_cmb, false);
    c_cmb->add_option("files", cd_files, "CD JSON files")->required()->expected(2, 1000);

    auto* c_cop = app.add_subcommand("copula", "bivariate gamma-copula work");
    add_common(c_cop, false);
    c_cop->add_option("action", copula_action, "fit | simulate | translate")->required();
    c_cop->add_option("--pairs", pairs_csv, "pair CSV (liver_kg,fish_kg)");
    c_cop->add_option("--a1", model.a1, "gamma shape, liver margin");
    c_cop->add_option("--b1", model.b1, "gamma rate, liver margin");
    c_cop->add_option("--a2", model.a2, "gamma shape, weight margin");
    c_cop->add_option("--b2", model.b2, "gamma rate, weight margin");
    c_cop->add_option("--rho", model.rho, "normal-scores correlation");
    c_cop->add_option("--n-fish", n_fish, "fish per replicate");
    c_cop->add_option("--n-reps", n_reps, "replicates");

    auto* c_tv = app.add_subcommand("tvar", "local time-varying AR estimation");
    add_common(c_tv);
    c_tv->add_option("--order", order, "AR order");
    c_tv->add_option("--bandwidth", tvar_bw, "bandwidth as fraction of span");

    auto* c_kw = app.add_subcommand("kola-winter", "monthly to winter-average aggregation");
    add_common(c_kw);
    c_kw->add_option("--month-column", month_col, "month column name");
    c_kw->add_option("--value-column", value_col, "value column name");

    auto* c_sy = app.add_subcommand("synth", "synthetic AR data generator");
    add_common(c_sy, false);
    c_sy->add_option("--model", model_str, "ar0..ar5 (sets the AR order)");
    c_sy->add_option("--n", n, "number of years");
    c_sy->add_option("--beta0", beta0, "intercept");
    c_sy->add_option("--trend-slope", trend_slope, "linear trend per year");
    c_sy->add_option("--sigma", sigma, "innovation sd");
    c_sy->add_option("--rho", rho_str, "comma-separated AR coefficients");
    c_sy->add_option("--start-year", synth_start, "first year");
    c_sy->add_option("--gap-from", gap_from, "first masked year");
    c_sy->add_option("--gap-to", gap_to, "last masked year");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fs::create_directories(o.out);
        if (c_fit->parsed()) return run_fit(o);
        if (c_fc->parsed()) return run_forecast(o, horizon, future_csv);
        if (c_sel->parsed()) return run_select(o, max_ar, race_start, baseline);
        if (c_fic->parsed()) return run_fic(o, wide_str, cand_strs, focus_str);
        if (c_mon->parsed()) return run_monitor(o, start_year, naive_window);
        if (c_br->parsed()) return run_bridge(o);
        if (c_adf->parsed()) return run_adf(o, max_lag);
        if (c_rs->parsed()) return run_rollsd(o, bandwidth);
        if (c_rec->parsed()) return run_reconstruct(o);
        if (c_cmb->parsed()) return run_combine(o, cd_files);
        if (c_cop->parsed())
            return run_copula(o, copula_action, pairs_csv, model, n_fish, n_reps);
        if (c_tv->parsed()) return run_tvar(o, order, tvar_bw);
        if (c_kw->parsed()) return run_kola_winter(o, month_col, value_col);
        if (c_sy->parsed()) {
            std::vector<double> rho;
            if (!rho_str.empty()) {
                std::stringstream ss(rho_str);
                std::string tok;
                while (std::getline(ss, tok, ',')) rho.push_back(std::stod(tok));
            } else if (model_str.rfind("ar", 0) == 0) {
                const int k = std::stoi(model_str.substr(2));
                // default stationary coefficients, tapering with the order
                for (int i = 1; i <= k; ++i) rho.push_back(0.5 * std::pow(-0.5, i - 1));
            }
            return run_synth(o, n, beta0, trend_slope, sigma, std::move(rho), synth_start,
                             gap_from, gap_to);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
