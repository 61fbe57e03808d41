#include "gps/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "gps/errors.hpp"
#include "gps/kernels.hpp"
#include "gps/nufft.hpp"
#include "gps/parallel.hpp"

namespace gps::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
}  // namespace

TermList make_term_list(const std::vector<primes::WeightedTerm>& terms,
                        const windows::WindowPhi& phi, uint64_t X) {
    TermList out;
    out.X = X;
    out.angle.reserve(terms.size());
    out.weight.reserve(terms.size());
    Kahan acc;
    for (const auto& t : terms) {
        double w = t.weight * phi.evaluate(double(t.norm) / double(X));
        if (w <= 0.0) continue;
        out.angle.push_back(t.angle);
        out.weight.push_back(w);
        acc.add(w);
    }
    out.weight_sum = acc.value();
    return out;
}

TermList make_term_list_raw(std::vector<double> angles, std::vector<double> weights,
                            uint64_t X) {
    if (angles.size() != weights.size()) {
        throw domain_error("make_term_list_raw: angle/weight size mismatch");
    }
    TermList out;
    out.X = X;
    out.angle = std::move(angles);
    out.weight = std::move(weights);
    Kahan acc;
    for (double w : out.weight) acc.add(w);
    out.weight_sum = acc.value();
    return out;
}

HeckeSumVector hecke_sums(const TermList& terms, long k_max, const HeckeOptions& opt) {
    if (terms.size() == 0) throw domain_error("hecke_sums: empty term stream");
    if (k_max < 1) throw domain_error("hecke_sums: k_max must be >= 1");

    HeckeSumVector out;
    out.X = terms.X;
    out.k_max = k_max;
    out.term_count = terms.size();
    out.values.assign(std::size_t(k_max) + 1, {0.0, 0.0});

    // phases 4 theta in [0, 2 pi)
    std::vector<double> phase(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) phase[i] = 4.0 * terms.angle[i];

    double ops = double(terms.size()) * double(k_max);
    SumMethod method = opt.method;
    if (method == SumMethod::automatic) {
        method = ops > opt.fft_threshold_ops ? SumMethod::binned_fft : SumMethod::exact;
    }

    if (method == SumMethod::binned_fft) {
        auto res = nufft::type1(phase.data(), terms.weight.data(), terms.size(), k_max);
        out.values = std::move(res.modes);
        out.method_used = SumMethod::binned_fft;
        out.method_error_bound = res.rel_error_bound * terms.weight_sum;
        // S_0 is exact either way; pin it to the compensated weight sum
        out.values[0] = {terms.weight_sum, 0.0};
        return out;
    }

    out.method_used = SumMethod::exact;
    auto kernel = kernels::hecke_power_sums();
    // parallel over k-ranges: each k is owned by exactly one chunk, so the
    // per-k block-order summation is identical for any worker count
    long total_k = k_max + 1;
    long chunk_k = std::max<long>(512, total_k / 64);
    std::size_t n_chunks = std::size_t((total_k + chunk_k - 1) / chunk_k);
    parallel_for_chunks(n_chunks, opt.workers, [&](std::size_t c) {
        long k0 = long(c) * chunk_k;
        long k1 = std::min<long>(total_k, k0 + chunk_k);
        kernel(phase.data(), terms.weight.data(), terms.size(), k0, k1,
               out.values.data() + k0);
    });
    out.values[0] = {terms.weight_sum, 0.0};
    return out;
}

MeanValue mean_value(const HeckeSumVector& S, const windows::WindowPair& pair, double K) {
    double s0 = S.values.empty() ? 0.0 : S.values[0].real();
    return {pair.f.fourier(0.0) * s0 / K,
            double(S.X) / K * pair.f.int_f() * pair.phi.int_phi()};
}

MeanValue mean_value_terms(const TermList& terms, const windows::WindowPair& pair, double K) {
    return {pair.f.fourier(0.0) * terms.weight_sum / K,
            double(terms.X) / K * pair.f.int_f() * pair.phi.int_phi()};
}

long default_k_max(const windows::WindowF& f, double K) {
    if (f.is_indicator()) {
        return std::max<long>(100000, std::llround(1000.0 * K));
    }
    long floor_k = std::llround(double(f.order() + 2) * K) + 8;
    return std::max<long>(std::llround(8.0 * K), floor_k);
}

VarianceEstimate variance_spectral(const HeckeSumVector& S, const windows::WindowF& f,
                                   double K, double requested_tolerance) {
    if (S.values.size() < 2) throw domain_error("variance_spectral: need k_max >= 1");
    long M = S.k_max;
    double s0 = S.values[0].real();

    Kahan acc;
    for (long k = 1; k <= M; ++k) {
        double fy = f.fourier(double(k) / K);
        acc.add(fy * fy * std::norm(S.values[std::size_t(k)]));
    }
    VarianceEstimate est;
    est.method = VarMethod::spectral;
    est.k_max = M;
    est.X = S.X;
    est.K = K;
    est.lambda = std::log(K) / std::log(double(S.X));
    est.value = 2.0 / (K * K) * acc.value();

    // worst-case tail with |S_k| <= S_0
    double tail;
    if (f.is_indicator()) {
        tail = 2.0 * s0 * s0 / (kPi * kPi * double(M)) * (1.0 + 1.0 / double(M));
    } else {
        double y0 = double(M) / K;
        double env = f.fourier_envelope(y0);
        tail = 2.0 * s0 * s0 / K * env * env * y0 / double(4 * f.order() + 1) * 1.2;
    }
    if (S.method_used == SumMethod::binned_fft) {
        // |S_k| error -> 2 |S_k| dS in each square; bound with |S_k| <= S_0
        tail += 2.0 / (K * K) * double(M) * 2.0 * s0 * S.method_error_bound;
    }
    est.tail_bound = tail;
    if (requested_tolerance > 0.0 && tail > requested_tolerance) est.tail_warning = true;
    return est;
}

// ---------------------------------------------------------------------------
// direct window-overlap variance
// ---------------------------------------------------------------------------

namespace {

struct SortedAtoms {
    std::vector<double> a;  // strictly ascending angles, equal angles merged
    std::vector<double> v;  // merged weights
};

SortedAtoms sort_and_merge(const TermList& terms) {
    std::vector<std::size_t> idx(terms.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t u, std::size_t w) {
        return terms.angle[u] < terms.angle[w];
    });
    SortedAtoms s;
    s.a.reserve(idx.size());
    s.v.reserve(idx.size());
    for (std::size_t i : idx) {
        double ang = terms.angle[i], wt = terms.weight[i];
        if (!s.a.empty() && s.a.back() == ang) {
            s.v.back() += wt;
        } else {
            s.a.push_back(ang);
            s.v.push_back(wt);
        }
    }
    return s;
}

}  // namespace

VarianceEstimate variance_direct(const TermList& terms, const windows::WindowF& f, double K,
                                 int workers, DirectMode mode) {
    if (terms.size() == 0) throw domain_error("variance_direct: empty term stream");
    double R = f.support_radius();
    double reach = 2.0 * R * kHalfPi / K;  // max circular distance with overlap
    if (reach > kPi / 4.0) {
        throw domain_error("variance_direct: K too small (window overlap range > pi/4)");
    }
    if (mode == DirectMode::automatic) {
        mode = f.is_indicator() ? DirectMode::fast : DirectMode::reference;
    }
    if (mode == DirectMode::fast && !f.is_indicator()) {
        throw domain_error("variance_direct: fast mode requires the indicator window");
    }

    SortedAtoms s = sort_and_merge(terms);
    std::size_t n = s.a.size();
    // wrap-around copies so forward windows can cross pi/2
    std::vector<double> a2(s.a), v2(s.v);
    a2.reserve(2 * n);
    v2.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.a[i] >= reach) break;
        a2.push_back(s.a[i] + kHalfPi);
        v2.push_back(s.v[i]);
    }

    double scale = K / kHalfPi;       // angle -> window units
    double unit = kHalfPi / K;        // overlap integral prefactor (pi/2K)
    double ordered_total = 0.0;

    if (mode == DirectMode::fast) {
        // indicator: rho(t) = 2R - t, so the inner sum is affine in the
        // window sums of v and v*theta; long double prefix sums keep the
        // forward differences exact enough at 1e9 scale
        std::vector<long double> pw(a2.size() + 1, 0.0L), pt(a2.size() + 1, 0.0L);
        for (std::size_t i = 0; i < a2.size(); ++i) {
            pw[i + 1] = pw[i] + (long double)v2[i];
            pt[i + 1] = pt[i] + (long double)v2[i] * (long double)a2[i];
        }
        ChunkGrid grid(n, 1 << 16);
        std::vector<double> partial(grid.n_chunks, 0.0);
        std::vector<double> partial_eq(grid.n_chunks, 0.0);
        parallel_for_chunks(grid.n_chunks, workers, [&](std::size_t c) {
            Kahan acc, eq;
            for (std::size_t i = grid.begin(c); i < grid.end(c); ++i) {
                double lim = s.a[i] + reach;
                std::size_t hi = std::size_t(
                    std::upper_bound(a2.begin() + long(i), a2.end(), lim) - a2.begin());
                // guard against ties at the limit: window is d < reach
                while (hi > i && a2[hi - 1] - s.a[i] >= reach) --hi;
                long double W = pw[hi] - pw[i];
                long double T = pt[hi] - pt[i];
                // sum_j v_j (pi/2K)(2R - (a_j - a_i) K/(pi/2))
                long double inner =
                    (long double)unit * (2.0L * R * W) - (T - (long double)s.a[i] * W);
                acc.add(s.v[i] * double(inner));
                eq.add(s.v[i] * s.v[i]);
            }
            partial[c] = acc.value();
            partial_eq[c] = eq.value();
        });
        Kahan tot, eqsum;
        for (std::size_t c = 0; c < grid.n_chunks; ++c) {
            tot.add(partial[c]);
            eqsum.add(partial_eq[c]);
        }
        // every unordered off-diagonal pair was seen once (from its smaller
        // angle); diagonal atoms once. ordered total = 2 fwd - diagonal.
        ordered_total = 2.0 * tot.value() - eqsum.value() * unit * 2.0 * R;
    } else {
        ChunkGrid grid(n, 4096);
        std::vector<double> partial(grid.n_chunks, 0.0);
        std::vector<double> partial_eq(grid.n_chunks, 0.0);
        parallel_for_chunks(grid.n_chunks, workers, [&](std::size_t c) {
            Kahan acc, eq;
            for (std::size_t i = grid.begin(c); i < grid.end(c); ++i) {
                for (std::size_t j = i; j < a2.size(); ++j) {
                    double d = a2[j] - s.a[i];
                    if (d >= reach) break;
                    double ov = unit * f.autocorr(d * scale);
                    acc.add(s.v[i] * v2[j] * ov);
                    if (j == i) eq.add(s.v[i] * v2[j] * ov);
                }
            }
            partial[c] = acc.value();
            partial_eq[c] = eq.value();
        });
        Kahan tot, eqsum;
        for (std::size_t c = 0; c < grid.n_chunks; ++c) {
            tot.add(partial[c]);
            eqsum.add(partial_eq[c]);
        }
        ordered_total = 2.0 * tot.value() - eqsum.value();
    }

    double mean = f.fourier(0.0) * terms.weight_sum / K;
    VarianceEstimate est;
    est.method = VarMethod::direct;
    est.X = terms.X;
    est.K = K;
    est.lambda = std::log(K) / std::log(double(terms.X));
    est.value = (2.0 / kPi) * ordered_total - mean * mean;
    return est;
}

std::vector<double> psi_eval(const TermList& terms, const windows::WindowPair& pair, double K,
                             const std::vector<double>& theta_grid) {
    SortedAtoms s = sort_and_merge(terms);
    double R = pair.f.support_radius();
    double reach = R * kHalfPi / K;
    double scale = K / kHalfPi;
    std::vector<double> out(theta_grid.size(), 0.0);
    for (std::size_t g = 0; g < theta_grid.size(); ++g) {
        double th = primes::reduce_angle_quarter(theta_grid[g]);
        Kahan acc;
        // examine the base interval and both wrapped neighbours
        for (double shift : {-kHalfPi, 0.0, kHalfPi}) {
            double lo = th + shift - reach, hi = th + shift + reach;
            auto it0 = std::lower_bound(s.a.begin(), s.a.end(), lo);
            auto it1 = std::upper_bound(s.a.begin(), s.a.end(), hi);
            for (auto it = it0; it != it1; ++it) {
                std::size_t i = std::size_t(it - s.a.begin());
                acc.add(s.v[i] * pair.f.evaluate((s.a[i] - th - shift) * scale));
            }
        }
        out[g] = acc.value();
    }
    return out;
}

void export_hecke_csv(const std::string& path, const HeckeSumVector& S) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("export_hecke_csv: cannot open " + path);
    std::fprintf(fp, "k,abs_S_k,re_S_k,im_S_k\n");
    for (long k = 0; k <= S.k_max; ++k) {
        const auto& v = S.values[std::size_t(k)];
        std::fprintf(fp, "%ld,%.17g,%.17g,%.17g\n", k, std::abs(v), v.real(), v.imag());
    }
    std::fclose(fp);
}

void export_psi_csv(const std::string& path, const std::vector<double>& grid,
                    const std::vector<double>& psi) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("export_psi_csv: cannot open " + path);
    std::fprintf(fp, "theta,psi\n");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::fprintf(fp, "%.17g,%.17g\n", grid[i], psi[i]);
    }
    std::fclose(fp);
}

}  // namespace gps::spectral
