#include "gps/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gps/errors.hpp"
#include "gps/ratios.hpp"
#include "gps/windows.hpp"

namespace gps::runner {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    bool version_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw domain_error("config: line " + std::to_string(lineno) + " is not key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (!version_seen) {
            if (key != "config_version" || val != "1") {
                throw domain_error("config: first entry must be 'config_version = 1'");
            }
            version_seen = true;
            continue;
        }
        if (key == "X") cfg.X = std::stoull(val);
        else if (key == "lambdas") cfg.lambdas = parse_list(val);
        else if (key == "Ks") cfg.Ks = parse_list(val);
        else if (key == "pair") cfg.pair_name = val;
        else if (key == "k_max") cfg.k_max_override = std::stol(val);
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "spectral_tolerance") cfg.spectral_tolerance = std::stod(val);
        else if (key == "cache_path") cfg.cache_path = val;
        else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "normalization") cfg.normalization = val;
        else if (key == "method") cfg.method = val;
        else if (key == "force_bifurcation") cfg.force_bifurcation = (val == "true" || val == "1");
        else if (key == "build_cache_if_missing") cfg.build_cache_if_missing = (val == "true" || val == "1");
        else if (key == "line_T") cfg.line_T = std::stod(val);
        else if (key == "P_max") cfg.P_max = std::stoull(val);
        else if (key == "export_spectra") cfg.export_spectra = (val == "true" || val == "1");
        else if (key == "export_ideals") cfg.export_ideals = (val == "true" || val == "1");
        else throw domain_error("config: unknown key '" + key + "'");
    }
    if (!version_seen) throw domain_error("config: missing 'config_version = 1'");
    validate(cfg);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.X < 1000) throw domain_error("config: X must be >= 1000");
    if (cfg.lambdas.empty() == cfg.Ks.empty()) {
        throw domain_error("config: exactly one of 'lambdas' or 'Ks' must be given");
    }
    if (cfg.pair_name != "indicator" && cfg.pair_name != "smooth") {
        throw domain_error("config: pair must be indicator|smooth");
    }
    if (cfg.normalization != "asymptotic" && cfg.normalization != "empirical") {
        throw domain_error("config: normalization must be asymptotic|empirical");
    }
    if (cfg.method != "auto" && cfg.method != "direct" && cfg.method != "spectral") {
        throw domain_error("config: method must be auto|direct|spectral");
    }
    if (cfg.spectral_tolerance < 0) throw domain_error("config: tolerances must be positive");
}

std::string resolve_cache_path(const ExperimentConfig& cfg) {
    if (!cfg.cache_path.empty()) return cfg.cache_path;
    const char* env = std::getenv("GPSECTORS_CACHE_DIR");
    std::string dir = env ? env : cfg.output_dir;
    return dir + "/split_" + std::to_string(cfg.X) + ".gpsc";
}

namespace {

std::vector<primes::SplitPrime> load_or_build_table(const ExperimentConfig& cfg) {
    std::string path = resolve_cache_path(cfg);
    if (std::filesystem::exists(path)) {
        return primes::cache_load(path, cfg.X);
    }
    if (!cfg.build_cache_if_missing) {
        throw resource_error("cache missing at " + path + " and build_cache_if_missing=false");
    }
    primes::SieveOptions sopt;
    sopt.workers = cfg.workers;
    auto table = primes::split_table(cfg.X, sopt);
    std::filesystem::create_directories(std::filesystem::path(path).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(path).parent_path().string());
    primes::cache_store(path, cfg.X, table);
    return table;
}

struct Workspace {
    windows::WindowPair pair;
    spectral::TermList terms;
    predictions::ConstantsBundle bundle;
};

Workspace make_workspace(const ExperimentConfig& cfg) {
    Workspace w{windows::pair_by_name(cfg.pair_name), {}, {}};
    auto table = load_or_build_table(cfg);
    auto raw = primes::enumerate_weighted_terms(cfg.X, w.pair.phi.support_cap(), table);
    w.terms = spectral::make_term_list(raw, w.pair.phi, cfg.X);
    predictions::LineOptions lopt;
    lopt.T = cfg.line_T;
    lopt.P_max = cfg.P_max;
    lopt.workers = cfg.workers;
    w.bundle = predictions::assemble_constants(w.pair, lopt);
    return w;
}

PointResult eval_point(const ExperimentConfig& cfg, const Workspace& w, double lambda_req) {
    double Kreal = std::pow(double(cfg.X), lambda_req);
    double K = std::max(2.0, std::round(Kreal));
    double lambda = std::log(K) / std::log(double(cfg.X));

    PointResult r{};
    r.K = K;
    r.lambda = lambda;

    bool spectral_method = cfg.method == "spectral";
    if (spectral_method) {
        long kmax = cfg.k_max_override > 0 ? cfg.k_max_override
                                           : spectral::default_k_max(w.pair.f, K);
        spectral::HeckeOptions hopt;
        hopt.workers = cfg.workers;
        auto S = spectral::hecke_sums(w.terms, kmax, hopt);
        auto est = spectral::variance_spectral(S, w.pair.f, K, cfg.spectral_tolerance);
        r.var = est.value;
        r.var_tail = est.tail_bound;
        r.var_method = "spectral";
    } else {
        auto est = spectral::variance_direct(w.terms, w.pair.f, K, cfg.workers);
        r.var = est.value;
        r.var_tail = 0.0;
        r.var_method = "direct";
    }

    if (cfg.export_spectra) {
        std::filesystem::create_directories(cfg.output_dir);
        char suffix[48];
        std::snprintf(suffix, sizeof suffix, "%.0f", K);
        long kmax = cfg.k_max_override > 0 ? cfg.k_max_override
                                           : std::min<long>(8192, spectral::default_k_max(w.pair.f, K));
        spectral::HeckeOptions hopt;
        hopt.workers = cfg.workers;
        auto Sx = spectral::hecke_sums(w.terms, kmax, hopt);
        spectral::export_hecke_csv(cfg.output_dir + "/hecke_K" + suffix + ".csv", Sx);
        std::vector<double> grid;
        for (int i = 0; i < 512; ++i) grid.push_back(std::numbers::pi / 2.0 * i / 512.0);
        auto psi = spectral::psi_eval(w.terms, w.pair, K, grid);
        spectral::export_psi_csv(cfg.output_dir + "/psi_K" + suffix + ".csv", grid, psi);
    }

    auto mv = spectral::mean_value_terms(w.terms, w.pair, K);
    r.mean_emp = mv.exact;
    r.mean_asym = mv.asymptotic;
    double lx = std::log(double(cfg.X));
    r.ratio_emp = r.var / (r.mean_emp * lx);
    r.ratio_asym = r.var / (r.mean_asym * lx);
    r.pred_rmt = double(cfg.X) / K * predictions::predict_rmt(w.pair, double(cfg.X), K) /
                 (r.mean_asym * lx);
    r.bifurcation_flag = std::abs(lambda - 0.5) < 0.02 || std::abs(lambda - 1.0) < 0.02;
    if (r.bifurcation_flag && !cfg.force_bifurcation) {
        std::fprintf(stderr,
                     "[gpsectors] lambda=%.4f is within 0.02 of a bifurcation point; "
                     "refined prediction evaluated anyway (flagged)\n",
                     lambda);
    }
    r.pred_refined = predictions::predict_refined(w.bundle, double(cfg.X), lambda,
                                                  /*force=*/true) /
                     (r.mean_asym * lx);
    return r;
}

}  // namespace

void cmd_sieve(const ExperimentConfig& cfg) {
    std::string path = resolve_cache_path(cfg);
    primes::SieveOptions sopt;
    sopt.workers = cfg.workers;
    auto table = primes::split_table(cfg.X, sopt);
    primes::cache_store(path, cfg.X, table);
    if (cfg.export_ideals) {
        std::filesystem::create_directories(cfg.output_dir);
        primes::export_ideals_csv(cfg.output_dir + "/ideals.csv",
                                  primes::enumerate_prime_ideals(cfg.X, table));
    }
    std::fprintf(stderr, "[gpsectors] sieve: %zu split primes <= %llu cached at %s\n",
                 table.size(), (unsigned long long)cfg.X, path.c_str());
}

predictions::ConstantsBundle cmd_constants(const ExperimentConfig& cfg) {
    auto pair = windows::pair_by_name(cfg.pair_name);
    predictions::LineOptions lopt;
    lopt.T = cfg.line_T;
    lopt.P_max = cfg.P_max;
    lopt.workers = cfg.workers;
    auto bundle = predictions::assemble_constants(pair, lopt);
    std::filesystem::create_directories(cfg.output_dir);
    predictions::export_constants_json(cfg.output_dir + "/constants_" + cfg.pair_name + ".json",
                                       bundle, cfg.pair_name);
    predictions::export_constants_csv(cfg.output_dir + "/constants_" + cfg.pair_name + ".csv",
                                      bundle, cfg.pair_name);
    return bundle;
}

PointResult cmd_point(const ExperimentConfig& cfg, double lambda) {
    Workspace w = make_workspace(cfg);
    return eval_point(cfg, w, lambda);
}

namespace {

nlohmann::json config_snapshot(const ExperimentConfig& cfg) {
    return {{"X", cfg.X},
            {"lambdas", cfg.lambdas},
            {"Ks", cfg.Ks},
            {"pair", cfg.pair_name},
            {"k_max", cfg.k_max_override},
            {"workers", cfg.workers},
            {"spectral_tolerance", cfg.spectral_tolerance},
            {"cache_path", resolve_cache_path(cfg)},
            {"output_dir", cfg.output_dir},
            {"normalization", cfg.normalization},
            {"method", cfg.method},
            {"force_bifurcation", cfg.force_bifurcation},
            {"line_T", cfg.line_T},
            {"P_max", cfg.P_max},
            {"export_spectra", cfg.export_spectra},
            {"export_ideals", cfg.export_ideals}};
}

}  // namespace

RunRecord cmd_scan(const ExperimentConfig& cfg) {
    Workspace w = make_workspace(cfg);
    std::vector<double> lambdas = cfg.lambdas;
    for (double K : cfg.Ks) lambdas.push_back(std::log(K) / std::log(double(cfg.X)));
    std::sort(lambdas.begin(), lambdas.end());

    RunRecord rec;
    rec.X = cfg.X;
    rec.pair_name = cfg.pair_name;
    rec.term_count = w.terms.size();
    rec.config_json = config_snapshot(cfg).dump();
    for (double lam : lambdas) rec.points.push_back(eval_point(cfg, w, lam));
    std::sort(rec.points.begin(), rec.points.end(),
              [](const PointResult& a, const PointResult& b) { return a.lambda < b.lambda; });

    std::filesystem::create_directories(cfg.output_dir);
    write_scan_csv(cfg.output_dir + "/scan.csv", rec);
    write_run_json(cfg.output_dir + "/run.json", rec);
    std::vector<double> grid;
    for (double l = 0.05; l <= 1.45; l += 0.01) grid.push_back(l);
    auto rmt = predictions::ratio_curve(w.bundle, w.pair, cfg.X, grid, predictions::Model::rmt,
                                        predictions::Normalization::asymptotic_mean);
    auto refined = predictions::ratio_curve(w.bundle, w.pair, cfg.X, grid,
                                            predictions::Model::refined,
                                            predictions::Normalization::asymptotic_mean);
    write_scan_svg(cfg.output_dir + "/scan.svg", rec, rmt, refined);
    return rec;
}

bool cmd_verify(const ExperimentConfig& cfg) {
    ratios::VerifyOptions vopt;
    vopt.derivative_P_max = cfg.P_max;
    auto results = ratios::run_verification(vopt);
    std::filesystem::create_directories(cfg.output_dir);
    ratios::export_verification_json(cfg.output_dir + "/verification.json", results);
    bool all = true;
    for (const auto& r : results) {
        std::fprintf(stderr, "[verify] %-24s %-60s dev=%.3g tol=%.3g %s\n", r.name.c_str(),
                     r.params.c_str(), r.deviation, r.tolerance, r.pass ? "PASS" : "FAIL");
        all = all && r.pass;
    }
    return all;
}

void write_scan_csv(const std::string& path, const RunRecord& rec) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("write_scan_csv: cannot open " + path);
    std::fprintf(fp, "lambda,K,var,var_tail,mean,ratio_emp,ratio_asym,pred_rmt,pred_refined\n");
    for (const auto& p : rec.points) {
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.lambda,
                     p.K, p.var, p.var_tail, p.mean_emp, p.ratio_emp, p.ratio_asym, p.pred_rmt,
                     p.pred_refined);
    }
    std::fclose(fp);
}

void write_run_json(const std::string& path, const RunRecord& rec) {
    nlohmann::json j;
    j["X"] = rec.X;
    j["pair"] = rec.pair_name;
    j["term_count"] = rec.term_count;
    if (!rec.config_json.empty()) j["config"] = nlohmann::json::parse(rec.config_json);
    j["points"] = nlohmann::json::array();
    for (const auto& p : rec.points) {
        j["points"].push_back({{"lambda", p.lambda},
                               {"K", p.K},
                               {"var", p.var},
                               {"var_tail", p.var_tail},
                               {"var_method", p.var_method},
                               {"mean_emp", p.mean_emp},
                               {"mean_asym", p.mean_asym},
                               {"ratio_emp", p.ratio_emp},
                               {"ratio_asym", p.ratio_asym},
                               {"pred_rmt", p.pred_rmt},
                               {"pred_refined", p.pred_refined},
                               {"bifurcation_flag", p.bifurcation_flag}});
    }
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("write_run_json: cannot open " + path);
    std::string s = j.dump(2);
    std::fwrite(s.data(), 1, s.size(), fp);
    std::fclose(fp);
}

namespace {

struct SvgMapper {
    double x0, x1, y0, y1;  // data ranges
    double px(double x) const { return 60.0 + (x - x0) / (x1 - x0) * 700.0; }
    double py(double y) const { return 420.0 - (y - y0) / (y1 - y0) * 380.0; }
};

void svg_polyline(std::FILE* fp, const SvgMapper& m,
                  const std::vector<predictions::CurvePoint>& pts, const char* color) {
    std::fprintf(fp, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                 color);
    for (const auto& p : pts) {
        if (p.ratio < m.y0 || p.ratio > m.y1) continue;
        std::fprintf(fp, "%.2f,%.2f ", m.px(p.lambda), m.py(p.ratio));
    }
    std::fprintf(fp, "\"/>\n");
}

}  // namespace

void write_scan_svg(const std::string& path, const RunRecord& rec,
                    const predictions::PredictionCurve& rmt,
                    const predictions::PredictionCurve& refined) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("write_scan_svg: cannot open " + path);
    SvgMapper m{0.0, 1.5, 0.0, 1.3};
    std::fprintf(fp,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"470\">\n"
                 "<rect x=\"60\" y=\"40\" width=\"700\" height=\"380\" fill=\"white\" "
                 "stroke=\"black\"/>\n");
    for (double gx = 0.0; gx <= 1.5001; gx += 0.25) {
        std::fprintf(fp,
                     "<line x1=\"%.1f\" y1=\"420\" x2=\"%.1f\" y2=\"424\" stroke=\"black\"/>"
                     "<text x=\"%.1f\" y=\"438\" font-size=\"11\" text-anchor=\"middle\">%.2f"
                     "</text>\n",
                     m.px(gx), m.px(gx), m.px(gx), gx);
    }
    for (double gy = 0.0; gy <= 1.3001; gy += 0.25) {
        std::fprintf(fp,
                     "<line x1=\"56\" y1=\"%.1f\" x2=\"60\" y2=\"%.1f\" stroke=\"black\"/>"
                     "<text x=\"52\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.2f"
                     "</text>\n",
                     m.py(gy), m.py(gy), m.py(gy) + 4.0, gy);
    }
    std::fprintf(fp,
                 "<text x=\"410\" y=\"460\" font-size=\"12\" text-anchor=\"middle\">lambda = "
                 "log K / log X</text>\n"
                 "<text x=\"400\" y=\"25\" font-size=\"13\" text-anchor=\"middle\">X = %llu, "
                 "pair = %s: Var/(mean log X)</text>\n",
                 (unsigned long long)rec.X, rec.pair_name.c_str());
    svg_polyline(fp, m, rmt.points, "blue");
    svg_polyline(fp, m, refined.points, "red");
    for (const auto& p : rec.points) {
        if (p.ratio_asym < m.y0 || p.ratio_asym > m.y1) continue;
        std::fprintf(fp, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"black\"/>\n",
                     m.px(p.lambda), m.py(p.ratio_asym));
    }
    std::fprintf(fp,
                 "<text x=\"650\" y=\"60\" font-size=\"11\" fill=\"blue\">RMT</text>\n"
                 "<text x=\"650\" y=\"75\" font-size=\"11\" fill=\"red\">refined</text>\n"
                 "</svg>\n");
    std::fclose(fp);
}

void cmd_plotdata(const std::string& scan_csv, const std::string& out_csv,
                  const std::string& out_svg) {
    std::ifstream in(scan_csv);
    if (!in) throw domain_error("plotdata: cannot open " + scan_csv);
    std::string header;
    std::getline(in, header);
    RunRecord rec;
    rec.X = 0;
    rec.pair_name = "scan";
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        PointResult p{};
        std::stringstream ss(line);
        std::string tok;
        double* fields[9] = {&p.lambda, &p.K, &p.var, &p.var_tail, &p.mean_emp, &p.ratio_emp,
                             &p.ratio_asym, &p.pred_rmt, &p.pred_refined};
        for (int i = 0; i < 9 && std::getline(ss, tok, ','); ++i) *fields[i] = std::stod(tok);
        rec.points.push_back(p);
    }
    std::FILE* fp = std::fopen(out_csv.c_str(), "wb");
    if (!fp) throw error("plotdata: cannot open " + out_csv);
    std::fprintf(fp, "lambda,ratio_emp,ratio_asym,pred_rmt,pred_refined\n");
    for (const auto& p : rec.points) {
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.lambda, p.ratio_emp, p.ratio_asym,
                     p.pred_rmt, p.pred_refined);
    }
    std::fclose(fp);
    if (!out_svg.empty()) {
        predictions::PredictionCurve rmt{predictions::Model::rmt, rec.X,
                                         predictions::Normalization::asymptotic_mean, {}};
        predictions::PredictionCurve refined{predictions::Model::refined, rec.X,
                                             predictions::Normalization::asymptotic_mean, {}};
        for (const auto& p : rec.points) {
            rmt.points.push_back({p.lambda, p.K, p.pred_rmt});
            refined.points.push_back({p.lambda, p.K, p.pred_refined});
        }
        write_scan_svg(out_svg, rec, rmt, refined);
    }
}

}  // namespace gps::runner
