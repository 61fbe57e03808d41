#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gps/predictions.hpp"
#include "gps/spectral.hpp"

namespace gps::runner {

struct ExperimentConfig {
    uint64_t X = 0;
    std::vector<double> lambdas;  // exactly one of lambdas / Ks may be set
    std::vector<double> Ks;
    std::string pair_name = "indicator";
    long k_max_override = 0;  // 0 = module policy
    int workers = 0;
    double spectral_tolerance = 0.0;
    std::string cache_path;  // empty = default under the cache dir
    std::string output_dir = ".";
    std::string normalization = "asymptotic";  // asymptotic | empirical
    std::string method = "auto";               // auto | direct | spectral
    bool force_bifurcation = false;
    bool build_cache_if_missing = true;
    double line_T = 0.0;
    uint64_t P_max = 100000;
    bool export_spectra = false;  // per-point S_k magnitudes + psi grid CSVs
    bool export_ideals = false;   // ideals.csv next to the cache (sieve cmd)
};

// Plain-text "key = value" config with a versioned schema line.
ExperimentConfig parse_config_file(const std::string& path);
void validate(const ExperimentConfig& cfg);

std::string resolve_cache_path(const ExperimentConfig& cfg);

struct PointResult {
    double lambda;  // achieved: log K / log X after integer rounding
    double K;
    double var, var_tail;
    std::string var_method;
    double mean_emp, mean_asym;
    double ratio_emp, ratio_asym;
    double pred_rmt, pred_refined;
    bool bifurcation_flag;
};

struct RunRecord {
    uint64_t X;
    std::string pair_name;
    std::vector<PointResult> points;  // lambda ascending
    uint64_t term_count;
    std::string config_json;  // snapshot of the driving config
};

// Commands. All emit deterministic files; wall-clock goes to stderr only.
void cmd_sieve(const ExperimentConfig& cfg);
predictions::ConstantsBundle cmd_constants(const ExperimentConfig& cfg);
PointResult cmd_point(const ExperimentConfig& cfg, double lambda);
RunRecord cmd_scan(const ExperimentConfig& cfg);
bool cmd_verify(const ExperimentConfig& cfg);  // true iff all checks pass
void cmd_plotdata(const std::string& scan_csv, const std::string& out_csv,
                  const std::string& out_svg);

void write_scan_csv(const std::string& path, const RunRecord& rec);
void write_run_json(const std::string& path, const RunRecord& rec);

// Minimal self-contained SVG: empirical scatter plus both prediction curves.
void write_scan_svg(const std::string& path, const RunRecord& rec,
                    const predictions::PredictionCurve& rmt,
                    const predictions::PredictionCurve& refined);

}  // namespace gps::runner
