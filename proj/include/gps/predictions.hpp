#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gps/windows.hpp"

namespace gps::predictions {

struct ConstantValue {
    double value = 0.0;
    double err_bound = 0.0;
    std::string provenance;  // "closed form" | "quadrature" | "prime sum"
};

// Every derived constant the predictions need, with provenance. The line
// integrals are evaluated on Re(beta) = 0 with the pole-cancelled kernels.
struct ConstantsBundle {
    double c_f = 0, C_f = 0;        // int f /(4 pi^2), int f^2 /(4 pi^2)
    double C_phi = 0;               // 4 pi^2 int Phi^2   (variance-side constant)
    double C_phi_prime = 0;         // 4 pi^2 int log x Phi^2
    double phi_half = 0;            // Phi~(1/2)
    double int_f = 0, int_phi = 0;  // plain masses (mean-side normalization)
    double delta_phi = 0;           // C'_phi - pi^2 phi_half^2
    ConstantValue c_phi_zeta, c_phi_L, a_phi_prime;
    double kappa = 0;
    double K_phi = 0;            // assembled from the conjecture's expression
    double K_phi_from_kappa = 0; // kappa + 3 pi^2 phi_half^2 - C'_phi
    std::vector<std::string> notes;  // zeroed imaginary residues etc.
};

struct LineOptions {
    double T = 0.0;          // 0 = per-pair default (indicator 800, smooth 60)
    double taper_frac = 0.6; // cosine^2 roll-off starts at taper_frac * T
    uint64_t P_max = 100000; // prime cutoff for the A'_Phi kernel
    int workers = 0;
};

// Moment-level constants (no line integrals).
ConstantsBundle constants_direct(const windows::WindowPair& pair);

// C_Phi and C'_Phi two ways: direct moments vs the Mellin-line contour form.
struct ContourCheck {
    double c_phi_direct, c_phi_contour;
    double c_phi_prime_direct, c_phi_prime_contour;
};
ContourCheck c_phi_contour_check(const windows::WindowPair& pair);

// Line-integral constants. err_bound = GK panel estimate + last-octave drift.
ConstantValue c_phi_zeta(const windows::WindowPair& pair, const LineOptions& opt = {});
ConstantValue c_phi_L(const windows::WindowPair& pair, const LineOptions& opt = {});
ConstantValue a_phi_prime(const windows::WindowPair& pair, const LineOptions& opt = {});

// Independent evaluations through the autocorrelation prime sums:
//   C_{Phi,zeta} = 8 pi^2 sum_n Lambda(n)/n rho_phi(2 log n) - 2 pi^2 Phi~(1/2)^2
//   C_{Phi,L}    = 8 pi^2 sum_n chi(n) Lambda(n)/n rho_phi(2 log n)
//   A'_Phi       = 8 pi^2 sum_{p=3(4)} (-log p) V_p(rho_phi)
// (the first two collapse to -8pi^2(1 + zeta'/zeta(2)) and -8pi^2 L'/L(2) for
// the indicator pair). Used as oracles for the quadrature path.
double c_phi_zeta_series(const windows::WindowPair& pair);
double c_phi_L_series(const windows::WindowPair& pair);
double a_phi_prime_series(const windows::WindowPair& pair, uint64_t P_max = 20000);

// Full bundle; re-asserts the internal identities to 1e-9.
ConstantsBundle assemble_constants(const windows::WindowPair& pair, const LineOptions& opt = {});

// Predictions. predict_rmt returns int f^2 int Phi^2 min(log X, 2 log K); the
// full variance scale carries an extra X/K (see ratio_curve).
double predict_rmt(const windows::WindowPair& pair, double X, double K);
double predict_theorem(const windows::WindowPair& pair, double X, double lambda);
double predict_refined(const ConstantsBundle& c, double X, double lambda, bool force = false);

enum class Model { rmt, refined, theorem };
enum class Normalization { asymptotic_mean, empirical_mean };

struct CurvePoint {
    double lambda, K, ratio;
};
struct PredictionCurve {
    Model model;
    uint64_t X;
    Normalization normalization;
    std::vector<CurvePoint> points;  // lambda ascending
};

// Ratio curves Var_model / (<psi> log X). For the empirical normalization the
// caller supplies the measured means, aligned with lambda_grid.
PredictionCurve ratio_curve(const ConstantsBundle& c, const windows::WindowPair& pair,
                            uint64_t X, const std::vector<double>& lambda_grid, Model model,
                            Normalization norm,
                            const std::vector<double>* empirical_means = nullptr);

void export_constants_json(const std::string& path, const ConstantsBundle& c,
                           const std::string& pair_name);
void export_constants_csv(const std::string& path, const ConstantsBundle& c,
                          const std::string& pair_name);
void export_curve_csv(const std::string& path, const PredictionCurve& curve);

}  // namespace gps::predictions
