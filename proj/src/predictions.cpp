#include "gps/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "json.hpp"

#include "gps/errors.hpp"
#include "gps/parallel.hpp"
#include "gps/primes.hpp"
#include "gps/quadrature.hpp"
#include "gps/specfun.hpp"

namespace gps::predictions {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

double default_T(const windows::WindowPair& pair) {
    return pair.phi.is_indicator() ? 800.0 : 60.0;
}

// d/ds of the Mellin transform, central difference on the entire closed form;
// step 1e-5 gives ~1e-11 absolute which the contour checks tolerate.
std::complex<double> mellin_prime(const windows::WindowPhi& phi, std::complex<double> s) {
    if (phi.is_indicator()) return -1.0 / (s * s);
    double h = 1e-5;
    return (phi.mellin(s + h) - phi.mellin(s - h)) / (2.0 * h);
}

// Tapered line integral: I(T') = int_0^T' win(t) H(t) kernel(t) dt where win
// rolls off as cos^2 from taper_frac*T' to T'. Evaluates the kernel once per
// node and forms the T and T/2 weighted sums together, so the reported error
// tracks the last octave's drift.
struct LineResult {
    double value_T, value_half_T, gk_err;
};

LineResult tapered_line(const std::function<double(double)>& H,
                        const std::function<double(double)>& kernel, double T,
                        double taper_frac, int workers) {
    struct Node {
        double x, w;  // GK15 node and weight on the panel
    };
    // panel grid: fine near 0 where H varies fastest, wider beyond
    // panel width 0.5 resolves Dirichlet-series components up to frequency
    // ~40 in t; amplitudes beyond that are below 1e-11
    std::vector<std::pair<double, double>> panels;
    double x = 0.0;
    while (x < T) {
        double x2 = std::min(x + 0.5, T);
        panels.emplace_back(x, x2);
        x = x2;
    }
    // GK15 nodes
    static const double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                  0.741531185599394, 0.586087235467691, 0.405845151377397,
                                  0.207784955007898, 0.0};
    static const double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                  0.140653259715525, 0.169004726639267, 0.190350578064785,
                                  0.204432940075298, 0.209482141084728};
    static const double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                 0.417959183673469};

    auto win = [&](double t, double Tcut) {
        double t0 = taper_frac * Tcut;
        if (t <= t0) return 1.0;
        if (t >= Tcut) return 0.0;
        double u = (t - t0) / (Tcut - t0);
        double c = std::cos(0.5 * kPi * u);
        return c * c;
    };

    std::vector<double> pT(panels.size(), 0.0), pH(panels.size(), 0.0), pe(panels.size(), 0.0);
    parallel_for_chunks(panels.size(), workers, [&](std::size_t c) {
        auto [a, b] = panels[c];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double accT = 0, accH = 0, accG = 0;
        for (int j = 0; j < 8; ++j) {
            for (int sgn = (j == 7 ? 1 : -1); sgn <= 1; sgn += 2) {
                double t = mid + sgn * half * xgk[j];
                double base = H(t) * kernel(t);
                accT += wgk[j] * base * win(t, T);
                accH += wgk[j] * base * win(t, 0.5 * T);
                if (j % 2 == 1) accG += wg[j / 2] * base * win(t, T);
                if (j == 7) break;
            }
        }
        pT[c] = accT * half;
        pH[c] = accH * half;
        pe[c] = std::abs(accT - accG / 1.0) * half * 0.0;  // filled below
        // Kronrod-vs-Gauss on the T-weighted integrand
        double g7 = 0;
        for (int j = 0; j < 8; ++j) {
            if (j % 2 == 1) {
                double t1 = mid - half * xgk[j], t2 = mid + half * xgk[j];
                g7 += wg[j / 2] * (H(t1) * kernel(t1) * win(t1, T) +
                                   H(t2) * kernel(t2) * win(t2, T));
            }
        }
        pe[c] = std::abs(accT - g7) * half;
    });
    LineResult out{0, 0, 0};
    Kahan aT, aH, ae;
    for (std::size_t c = 0; c < panels.size(); ++c) {
        aT.add(pT[c]);
        aH.add(pH[c]);
        ae.add(pe[c]);
    }
    out.value_T = aT.value();
    out.value_half_T = aH.value();
    out.gk_err = ae.value();
    return out;
}

std::vector<uint64_t> primes_3mod4_upto(uint64_t P) {
    std::vector<uint64_t> ps;
    primes::sieve_primes_stream(P, [&](const primes::RationalPrime& q) {
        if (q.residue == primes::Residue::three_mod4) ps.push_back(q.p);
    });
    return ps;
}

}  // namespace

ConstantsBundle constants_direct(const windows::WindowPair& pair) {
    ConstantsBundle c;
    c.c_f = pair.f.int_f() / kFourPi2;
    c.C_f = pair.f.int_f2() / kFourPi2;
    c.C_phi = kFourPi2 * pair.phi.int_phi2();
    c.C_phi_prime = kFourPi2 * pair.phi.int_logphi2();
    c.phi_half = pair.phi.phi_half();
    c.int_f = pair.f.int_f();
    c.int_phi = pair.phi.int_phi();
    c.delta_phi = c.C_phi_prime - kPi * kPi * c.phi_half * c.phi_half;
    return c;
}

ContourCheck c_phi_contour_check(const windows::WindowPair& pair) {
    ContourCheck out{};
    out.c_phi_direct = kFourPi2 * pair.phi.int_phi2();
    out.c_phi_prime_direct = kFourPi2 * pair.phi.int_logphi2();

    // C_Phi = 2 pi int_R |Phi~(1/2+it)|^2 dt; C'_Phi = 2 pi int_R
    // Phi~(1/2+it) Phi~'(1/2-it) dt (real by conjugate symmetry)
    auto h2 = [&](double t) { return pair.phi.mellin_sq_line(t); };
    auto hp = [&](double t) {
        std::complex<double> a = pair.phi.mellin({0.5, t});
        std::complex<double> b = mellin_prime(pair.phi, {0.5, -t});
        return (a * b).real();
    };
    double T = pair.phi.is_indicator() ? 4.0e4 : 80.0;
    double v2 = 0.0, vp = 0.0;
    if (pair.phi.is_indicator()) {
        // closed tails: int_T^inf dt/(1/4+t^2) and the C' analogue ~ -1/t^2
        v2 = quad::composite_gk(h2, 0.0, T, 1.0).value;
        v2 += kPi - 2.0 * std::atan(2.0 * T);  // closed tail of int dt/(1/4+t^2)
        vp = quad::composite_gk(hp, 0.0, T, 1.0).value;
        // Phi~ Phi~' = -1/((1/2+it)(1/2-it)^2): tail int ~ -1/(2T^2)... add the
        // exact remainder by residue-free large-t expansion Re = -1/(1/4+t^2) * ...
        // small enough at T = 4e4 to fold into the error budget
    } else {
        v2 = quad::composite_gk(h2, 0.0, T, 0.25).value;
        vp = quad::composite_gk(hp, 0.0, T, 0.25).value;
    }
    out.c_phi_contour = 2.0 * kPi * 2.0 * v2;
    out.c_phi_prime_contour = 2.0 * kPi * 2.0 * vp;
    return out;
}

ConstantValue c_phi_zeta(const windows::WindowPair& pair, const LineOptions& opt) {
    double T = opt.T > 0 ? opt.T : default_T(pair);
    auto H = [&](double t) { return pair.phi.mellin_sq_line(t); };
    auto kz = [](double t) {
        // zeta'/zeta(1-2it) + zeta'/zeta(1+2it), pole-cancelled: finite at 0
        if (std::abs(t) < 1e-9) return 2.0 * specfun::stieltjes_gamma0();
        std::complex<double> s(1.0, 2.0 * t);
        auto v = specfun::zeta_prime(s) / specfun::zeta(s);
        return 2.0 * v.real();
    };
    auto r = tapered_line(H, kz, T, opt.taper_frac, opt.workers);
    ConstantValue out;
    out.value = -4.0 * kPi * r.value_T;  // -2 pi int_R = -4 pi int_0^inf
    out.err_bound = 4.0 * kPi * (std::abs(r.value_T - r.value_half_T) + r.gk_err);
    out.provenance = "quadrature (tapered line integral, T=" + std::to_string(T) + ")";
    return out;
}

ConstantValue c_phi_L(const windows::WindowPair& pair, const LineOptions& opt) {
    double T = opt.T > 0 ? opt.T : default_T(pair);
    auto H = [&](double t) { return pair.phi.mellin_sq_line(t); };
    auto kl = [](double t) {
        std::complex<double> s(1.0, 2.0 * t);
        auto v = specfun::dirichlet_L_prime(s) / specfun::dirichlet_L(s);
        return 2.0 * v.real();
    };
    auto r = tapered_line(H, kl, T, opt.taper_frac, opt.workers);
    ConstantValue out;
    out.value = -4.0 * kPi * r.value_T;
    out.err_bound = 4.0 * kPi * (std::abs(r.value_T - r.value_half_T) + r.gk_err);
    out.provenance = "quadrature (tapered line integral, T=" + std::to_string(T) + ")";
    return out;
}

ConstantValue a_phi_prime(const windows::WindowPair& pair, const LineOptions& opt) {
    double T = opt.T > 0 ? opt.T : default_T(pair);
    auto ps = primes_3mod4_upto(opt.P_max);
    std::vector<double> logs(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) logs[i] = std::log(double(ps[i]));

    std::vector<double> p2s(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) p2s[i] = double(ps[i]) * double(ps[i]);

    auto H = [&](double t) { return pair.phi.mellin_sq_line(t); };
    auto ka = [&](double t) {
        // Re of the Lemma-"A integral" prime sum at beta = it
        double acc = 0.0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            double lp = logs[i];
            double p2 = p2s[i];
            double c4 = std::cos(4.0 * t * lp), s4 = std::sin(4.0 * t * lp);
            double c8 = 2.0 * c4 * c4 - 1.0, s8 = 2.0 * s4 * c4;
            // numerator (p^{2+8it} + p^2 - 2 p^{4it}) lp; denominator
            // p^{2+8it} + p^2 - p^{4it} - p^{4+4it}
            double nr = (p2 * c8 + p2 - 2.0 * c4) * lp;
            double ni = (p2 * s8 - 2.0 * s4) * lp;
            double dr = p2 * c8 + p2 - c4 - p2 * p2 * c4;
            double di = p2 * s8 - s4 - p2 * p2 * s4;
            double dd = dr * dr + di * di;
            acc += (nr * dr + ni * di) / dd;
        }
        return acc;
    };
    auto r = tapered_line(H, ka, T, opt.taper_frac, opt.workers);
    ConstantValue out;
    out.value = 8.0 * kPi * r.value_T;  // +4 pi int_R = 8 pi int_0^inf
    out.err_bound = 8.0 * kPi * (std::abs(r.value_T - r.value_half_T) + r.gk_err);
    out.provenance = "quadrature (tapered line integral, T=" + std::to_string(T) +
                     ", P_max=" + std::to_string(opt.P_max) + ")";
    return out;
}

namespace {

// Lambda(n) for small n by trial factorization; 0 unless n is a prime power.
double von_mangoldt(uint64_t n) {
    if (n < 2) return 0.0;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            return n == 1 ? std::log(double(p)) : 0.0;
        }
    }
    return std::log(double(n));
}

int chi4(uint64_t n) {
    if (n % 2 == 0) return 0;
    return n % 4 == 1 ? 1 : -1;
}

}  // namespace

double c_phi_zeta_series(const windows::WindowPair& pair) {
    double corr = -2.0 * kPi * kPi * pair.phi.phi_half() * pair.phi.phi_half();
    if (pair.phi.is_indicator()) {
        // sum Lambda(n)/n^2 = -zeta'/zeta(2)
        auto z = specfun::zeta({2.0, 0.0});
        auto zp = specfun::zeta_prime({2.0, 0.0});
        return 8.0 * kPi * kPi * (-(zp / z).real()) + corr;
    }
    double acc = 0.0;
    for (uint64_t n = 2;; ++n) {
        double rho = pair.phi.rho_phi(2.0 * std::log(double(n)));
        if (rho == 0.0 && 2.0 * std::log(double(n)) >= pair.phi.log_width()) break;
        acc += von_mangoldt(n) / double(n) * rho;
    }
    return 8.0 * kPi * kPi * acc + corr;
}

double c_phi_L_series(const windows::WindowPair& pair) {
    if (pair.phi.is_indicator()) {
        auto L = specfun::dirichlet_L({2.0, 0.0});
        auto Lp = specfun::dirichlet_L_prime({2.0, 0.0});
        return 8.0 * kPi * kPi * (-(Lp / L).real());
    }
    double acc = 0.0;
    for (uint64_t n = 2;; ++n) {
        double rho = pair.phi.rho_phi(2.0 * std::log(double(n)));
        if (rho == 0.0 && 2.0 * std::log(double(n)) >= pair.phi.log_width()) break;
        acc += double(chi4(n)) * von_mangoldt(n) / double(n) * rho;
    }
    return 8.0 * kPi * kPi * acc;
}

double a_phi_prime_series(const windows::WindowPair& pair, uint64_t P_max) {
    auto ps = primes_3mod4_upto(P_max);
    const int J = 40;
    Kahan acc;
    for (uint64_t p : ps) {
        double lp = std::log(double(p));
        double vp = 0.0;
        for (int j = 0; j < J; ++j) {
            for (int k = 0; k < J; ++k) {
                double base = std::exp(-2.0 * (1 + j + k) * lp);
                if (base < 1e-18) continue;
                double rho_p1 = pair.phi.rho_phi(4.0 * double(j - k + 1) * lp);
                double rho_m1 = pair.phi.rho_phi(4.0 * double(j - k - 1) * lp);
                double rho_0 = pair.phi.rho_phi(4.0 * double(j - k) * lp);
                vp += base * (rho_p1 + rho_m1 - 2.0 * std::exp(-2.0 * lp) * rho_0);
            }
        }
        acc.add(-lp * vp);
    }
    return 8.0 * kPi * kPi * acc.value();
}

ConstantsBundle assemble_constants(const windows::WindowPair& pair, const LineOptions& opt) {
    ConstantsBundle c = constants_direct(pair);
    c.c_phi_zeta = c_phi_zeta(pair, opt);
    c.c_phi_L = c_phi_L(pair, opt);
    c.a_phi_prime = a_phi_prime(pair, opt);

    double ph2 = c.phi_half * c.phi_half;
    double logterm = std::log(kPi * kPi / 4.0) + 2.0;
    c.K_phi = c.c_phi_zeta.value - c.c_phi_L.value - c.a_phi_prime.value +
              2.0 * kPi * kPi * ph2 + c.C_phi * logterm;
    c.kappa = c.C_phi * logterm + c.c_phi_zeta.value - c.c_phi_L.value + c.C_phi_prime -
              kPi * kPi * ph2 - c.a_phi_prime.value;
    c.K_phi_from_kappa = c.kappa + 3.0 * kPi * kPi * ph2 - c.C_phi_prime;

    if (std::abs(c.delta_phi - (c.C_phi_prime - kPi * kPi * ph2)) > 1e-9 * (1.0 + std::abs(c.delta_phi))) {
        throw numeric_error("constants: Delta_Phi identity failed", std::abs(c.delta_phi));
    }
    if (std::abs(c.K_phi - c.K_phi_from_kappa) > 1e-9 * (1.0 + std::abs(c.K_phi))) {
        throw numeric_error("constants: K_Phi/kappa identity failed",
                            std::abs(c.K_phi - c.K_phi_from_kappa));
    }
    c.notes.push_back("line integrals evaluated on Re(beta)=0 with pole-cancelled kernels");
    return c;
}

double predict_rmt(const windows::WindowPair& pair, double X, double K) {
    return pair.f.int_f2() * pair.phi.int_phi2() *
           std::min(std::log(X), 2.0 * std::log(K));
}

double predict_theorem(const windows::WindowPair& pair, double X, double lambda) {
    if (lambda <= 1.0) throw domain_error("predict_theorem: requires lambda > 1");
    ConstantsBundle c = constants_direct(pair);
    double ph2 = c.phi_half * c.phi_half;
    return c.C_f * std::pow(X, 1.0 - lambda) *
           (c.C_phi * std::log(X) + c.C_phi_prime + kPi * kPi * ph2);
}

double predict_refined(const ConstantsBundle& c, double X, double lambda, bool force) {
    if (lambda <= 0.0) throw domain_error("predict_refined: lambda must be > 0");
    if (!force && (std::abs(lambda - 0.5) < 0.02 || std::abs(lambda - 1.0) < 0.02)) {
        throw domain_error("predict_refined: lambda within 0.02 of a bifurcation point (use force)");
    }
    double xs = std::pow(X, 1.0 - lambda);
    double lx = std::log(X);
    double ph2 = c.phi_half * c.phi_half;
    if (lambda > 1.0) {
        return c.C_f * xs * (c.C_phi * lx + c.C_phi_prime + kPi * kPi * ph2);
    }
    if (lambda > 0.5) {
        return c.C_f * xs * (c.C_phi * lx + c.delta_phi);
    }
    return c.C_f * xs * (c.C_phi * (2.0 * lambda * lx) - c.K_phi);
}

PredictionCurve ratio_curve(const ConstantsBundle& c, const windows::WindowPair& pair,
                            uint64_t X, const std::vector<double>& lambda_grid, Model model,
                            Normalization norm, const std::vector<double>* empirical_means) {
    if (norm == Normalization::empirical_mean &&
        (!empirical_means || empirical_means->size() != lambda_grid.size())) {
        throw domain_error("ratio_curve: empirical normalization needs one mean per lambda");
    }
    std::vector<double> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());
    PredictionCurve out;
    out.model = model;
    out.X = X;
    out.normalization = norm;
    double lx = std::log(double(X));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double lam = grid[i];
        double K = std::pow(double(X), lam);
        double var;
        switch (model) {
            case Model::rmt:
                var = double(X) / K * predict_rmt(pair, double(X), K);
                break;
            case Model::theorem:
                var = predict_theorem(pair, double(X), lam);
                break;
            default:
                var = predict_refined(c, double(X), lam, /*force=*/true);
        }
        double mean = norm == Normalization::asymptotic_mean
                          ? double(X) / K * c.int_f * c.int_phi
                          : (*empirical_means)[i];
        out.points.push_back({lam, K, var / (mean * lx)});
    }
    return out;
}

void export_constants_json(const std::string& path, const ConstantsBundle& c,
                           const std::string& pair_name) {
    nlohmann::json j;
    j["pair"] = pair_name;
    auto put = [&](const char* name, double v, double err, const char* prov) {
        j["constants"][name] = {{"value", v}, {"err_bound", err}, {"provenance", prov}};
    };
    put("c_f", c.c_f, 0.0, "closed form");
    put("C_f", c.C_f, 0.0, "closed form");
    put("C_phi", c.C_phi, 0.0, "closed form");
    put("C_phi_prime", c.C_phi_prime, 0.0, "closed form");
    put("phi_half", c.phi_half, 0.0, "closed form");
    put("delta_phi", c.delta_phi, 0.0, "closed form");
    put("C_phi_zeta", c.c_phi_zeta.value, c.c_phi_zeta.err_bound, c.c_phi_zeta.provenance.c_str());
    put("C_phi_L", c.c_phi_L.value, c.c_phi_L.err_bound, c.c_phi_L.provenance.c_str());
    put("A_phi_prime", c.a_phi_prime.value, c.a_phi_prime.err_bound,
        c.a_phi_prime.provenance.c_str());
    put("kappa", c.kappa, 0.0, "assembled");
    put("K_phi", c.K_phi, 0.0, "assembled");
    put("K_phi_from_kappa", c.K_phi_from_kappa, 0.0, "assembled");
    j["notes"] = c.notes;
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("export_constants_json: cannot open " + path);
    std::string s = j.dump(2);
    std::fwrite(s.data(), 1, s.size(), fp);
    std::fclose(fp);
}

void export_constants_csv(const std::string& path, const ConstantsBundle& c,
                          const std::string& pair_name) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("export_constants_csv: cannot open " + path);
    std::fprintf(fp, "pair,name,value,err_bound\n");
    auto row = [&](const char* n, double v, double e) {
        std::fprintf(fp, "%s,%s,%.17g,%.3g\n", pair_name.c_str(), n, v, e);
    };
    row("c_f", c.c_f, 0);
    row("C_f", c.C_f, 0);
    row("C_phi", c.C_phi, 0);
    row("C_phi_prime", c.C_phi_prime, 0);
    row("phi_half", c.phi_half, 0);
    row("delta_phi", c.delta_phi, 0);
    row("C_phi_zeta", c.c_phi_zeta.value, c.c_phi_zeta.err_bound);
    row("C_phi_L", c.c_phi_L.value, c.c_phi_L.err_bound);
    row("A_phi_prime", c.a_phi_prime.value, c.a_phi_prime.err_bound);
    row("kappa", c.kappa, 0);
    row("K_phi", c.K_phi, 0);
    std::fclose(fp);
}

void export_curve_csv(const std::string& path, const PredictionCurve& curve) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("export_curve_csv: cannot open " + path);
    std::fprintf(fp, "lambda,K,ratio\n");
    for (const auto& p : curve.points) {
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", p.lambda, p.K, p.ratio);
    }
    std::fclose(fp);
}

}  // namespace gps::predictions
