#include "gps/specfun.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include "gps/errors.hpp"
#include "gps/primes.hpp"

namespace gps::specfun {

namespace {

// B_2, B_4, ..., B_20
constexpr double kBernoulli[10] = {
    1.0 / 6,       -1.0 / 30,      1.0 / 42,  -1.0 / 30,      5.0 / 66,
    -691.0 / 2730, 7.0 / 6,        -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
constexpr int kEMOrder = 10;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

int choose_N(cdouble s) {
    double t = std::abs(s.imag());
    int n = static_cast<int>(0.7 * t) + 48;
    return n;
}

// n^{-s} = exp(-s log n)
inline cdouble npow(double logn, cdouble s) {
    double mag = std::exp(-s.real() * logn);
    double ph = -s.imag() * logn;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

// log(n + a) tables for the three offsets the toolkit uses on hot paths;
// built once, read concurrently afterwards
constexpr int kLogTableSize = 8192;
const double* log_table(double a) {
    static std::vector<double> t1, t14, t34;
    static std::once_flag once;
    std::call_once(once, [] {
        t1.resize(kLogTableSize);
        t14.resize(kLogTableSize);
        t34.resize(kLogTableSize);
        for (int n = 0; n < kLogTableSize; ++n) {
            t1[n] = std::log(double(n) + 1.0);
            t14[n] = std::log(double(n) + 0.25);
            t34[n] = std::log(double(n) + 0.75);
        }
    });
    if (a == 1.0) return t1.data();
    if (a == 0.25) return t14.data();
    if (a == 0.75) return t34.data();
    return nullptr;
}

struct EMResult {
    cdouble value, derivative;
    double err;
};

// Euler-Maclaurin pieces for the Hurwitz zeta WITHOUT the (N+a)^{1-s}/(s-1)
// pole term (added by the callers, combined analytically where it cancels).
EMResult em_hurwitz_core(cdouble s, double a, int N) {
    if (s.real() <= 0.0) throw domain_error("zeta: Re(s) must be positive");
    cdouble sum = 0.0, dsum = 0.0;
    const double* table = N <= kLogTableSize ? log_table(a) : nullptr;
    if (table && s.real() == 1.0) {
        // hot path for the Re(s) = 1 kernels: |n+a|^{-1} needs no exp
        double t = s.imag();
        double sr = 0, si = 0, dr = 0, di = 0;
        for (int n = 0; n < N; ++n) {
            double logn = table[n];
            double mag = 1.0 / (double(n) + a);
            double c = std::cos(t * logn), sn = std::sin(t * logn);
            double vr = mag * c, vi = -mag * sn;
            sr += vr;
            si += vi;
            dr -= logn * vr;
            di -= logn * vi;
        }
        sum = {sr, si};
        dsum = {dr, di};
    } else {
        for (int n = 0; n < N; ++n) {
            double logn = table ? table[n] : std::log(double(n) + a);
            cdouble v = npow(logn, s);
            sum += v;
            dsum += -logn * v;
        }
    }
    double logN = std::log(double(N) + a);
    cdouble Ns = npow(logN, s);  // (N+a)^{-s}
    sum += 0.5 * Ns;
    dsum += -0.5 * logN * Ns;

    // Bernoulli tail: sum_k B_{2k}/(2k)! * (s)_{2k-1} * (N+a)^{-s-2k+1}
    cdouble poch = s;     // s (s+1) ... (s+2k-2)
    cdouble dpoch = 1.0;  // d/ds of poch
    double NA = double(N) + a;
    cdouble scale = Ns * NA;  // (N+a)^{-s+1}
    double last = 0.0;
    for (int k = 1; k <= kEMOrder; ++k) {
        scale /= NA * NA;  // (N+a)^{-s-2k+1}
        double c = kBernoulli[k - 1] / factorial(2 * k);
        cdouble term = c * poch * scale;
        sum += term;
        dsum += c * scale * (dpoch - logN * poch);
        last = std::abs(term);
        if (k < kEMOrder) {
            cdouble f1 = s + double(2 * k - 1), f2 = s + double(2 * k);
            dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
            poch = poch * f1 * f2;
        }
    }
    return {sum, dsum, 4.0 * last + 1e-15 * std::abs(sum)};
}

// Full Hurwitz zeta including the pole term; Re(s) > 0, s != 1.
EMResult em_hurwitz(cdouble s, double a) {
    if (s == cdouble(1.0, 0.0)) throw domain_error("zeta: pole at s = 1");
    int N = choose_N(s);
    EMResult r = em_hurwitz_core(s, a, N);
    double logN = std::log(double(N) + a);
    cdouble N1s = npow(logN, s) * (double(N) + a);  // (N+a)^{1-s}
    cdouble sm1 = s - 1.0;
    r.value += N1s / sm1;
    r.derivative += -logN * N1s / sm1 - N1s / (sm1 * sm1);
    return r;
}

// [(N+a1)^{1-s} - (N+a3)^{1-s}] / (s-1) and its s-derivative, stable at s=1.
// With u = s-1, la = log(N+a1), lb = log(N+a3):
//   D(u)  = [e^{-u la} - e^{-u lb}] / u
//   D'(u) = d/du D (equals d/ds)
void pole_difference(cdouble s, double la, double lb, cdouble* val, cdouble* der) {
    cdouble u = s - 1.0;
    if (std::abs(u) < 1e-4) {
        double a = la, b = lb;
        *val = (b - a) + u * (a * a - b * b) / 2.0 + u * u * (b * b * b - a * a * a) / 6.0;
        *der = (a * a - b * b) / 2.0 + u * (b * b * b - a * a * a) / 3.0 -
               u * u * (b * b * b * b - a * a * a * a) / 8.0;
    } else {
        cdouble ea = std::exp(-u * la), eb = std::exp(-u * lb);
        *val = (ea - eb) / u;
        *der = ((-la * ea + lb * eb) * u - (ea - eb)) / (u * u);
    }
}

// L(s, chi_1) and derivative via the Hurwitz difference; entire function.
EMResult em_dirichlet_L(cdouble s) {
    int N = choose_N(s);
    EMResult r1 = em_hurwitz_core(s, 0.25, N);
    EMResult r3 = em_hurwitz_core(s, 0.75, N);
    cdouble pv, pd;
    pole_difference(s, std::log(double(N) + 0.25), std::log(double(N) + 0.75), &pv, &pd);
    cdouble diff = r1.value - r3.value + pv;
    cdouble ddiff = r1.derivative - r3.derivative + pd;
    cdouble four = std::exp(-s * std::log(4.0));
    EMResult out;
    out.value = four * diff;
    out.derivative = four * (ddiff - std::log(4.0) * diff);
    out.err = (r1.err + r3.err) * std::abs(four);
    return out;
}

}  // namespace

LineSample zeta_sample(cdouble s) {
    auto r = em_hurwitz(s, 1.0);
    return {s, r.value, r.err};
}

LineSample zeta_prime_sample(cdouble s) {
    auto r = em_hurwitz(s, 1.0);
    return {s, r.derivative, r.err * (std::log(std::abs(s) + 2.0) + 2.0)};
}

cdouble zeta(cdouble s) { return zeta_sample(s).value; }
cdouble zeta_prime(cdouble s) { return zeta_prime_sample(s).value; }

LineSample hurwitz_zeta_sample(cdouble s, double a) {
    auto r = em_hurwitz(s, a);
    return {s, r.value, r.err};
}

LineSample hurwitz_zeta_prime_sample(cdouble s, double a) {
    auto r = em_hurwitz(s, a);
    return {s, r.derivative, r.err * (std::log(std::abs(s) + 2.0) + 2.0)};
}

LineSample dirichlet_L_sample(cdouble s) {
    auto r = em_dirichlet_L(s);
    return {s, r.value, r.err};
}

LineSample dirichlet_L_prime_sample(cdouble s) {
    auto r = em_dirichlet_L(s);
    return {s, r.derivative, r.err * (std::log(std::abs(s) + 4.0) + 2.0)};
}

cdouble dirichlet_L(cdouble s) { return dirichlet_L_sample(s).value; }
cdouble dirichlet_L_prime(cdouble s) { return dirichlet_L_prime_sample(s).value; }

double gamma_ratio(double a, long k) {
    double base = 0.5 + 2.0 * double(k);
    return std::exp(std::lgamma(base - a) - std::lgamma(base + a));
}

double stieltjes_gamma0() {
    const int N = 64;
    double h = 0.0;
    for (int n = N; n >= 1; --n) h += 1.0 / n;
    double x = 1.0 / double(N);
    // gamma = H_N - log N - 1/(2N) + 1/(12 N^2) - 1/(120 N^4) + 1/(252 N^6) - ...
    return h - std::log(double(N)) - 0.5 * x + x * x / 12.0 - x * x * x * x / 120.0 +
           x * x * x * x * x * x / 252.0;
}

cdouble a_prime_term(uint64_t p, cdouble beta) {
    double lp = std::log(double(p));
    auto ppow = [&](cdouble e) { return std::exp(e * lp); };
    cdouble num = (ppow(2.0 + 8.0 * beta) + ppow(2.0) - 2.0 * ppow(4.0 * beta)) * lp;
    cdouble den = ppow(2.0 + 8.0 * beta) + ppow(2.0) - ppow(4.0 * beta) - ppow(4.0 + 4.0 * beta);
    return num / den;
}

APrimeSum a_prime_sum(cdouble beta, const std::vector<uint64_t>& primes_3mod4, uint64_t P_max) {
    double b8 = 8.0 * std::abs(beta.real());
    if (b8 >= 1.0) throw domain_error("a_prime_sum: |Re beta| must be < 1/8");
    if (P_max < 100) throw domain_error("a_prime_sum: P_max must be >= 100");
    cdouble acc = 0.0;
    for (uint64_t p : primes_3mod4) {
        if (p > P_max) break;
        acc += a_prime_term(p, beta);
    }
    double tail = 4.0 * std::pow(double(P_max), -1.0 + b8) / (1.0 - b8);
    return {acc, tail};
}

APrimeSum a_prime_sum(cdouble beta, uint64_t P_max) {
    std::vector<uint64_t> ps;
    primes::sieve_primes_stream(P_max, [&](const primes::RationalPrime& q) {
        if (q.residue == primes::Residue::three_mod4) ps.push_back(q.p);
    });
    return a_prime_sum(beta, ps, P_max);
}

PClass classify_prime(uint64_t p) {
    if (p == 2) return PClass::two;
    return (p % 4 == 1) ? PClass::one_mod4 : PClass::three_mod4;
}

namespace {

void check_shifts(cdouble a, cdouble b, cdouble g, cdouble d) {
    for (cdouble z : {a, b, g, d}) {
        if (std::abs(z.real()) >= 0.125) {
            throw domain_error("local factor: |Re shift| must be < 1/8");
        }
    }
}

}  // namespace

cdouble local_factor_Y(uint64_t p, cdouble al, cdouble be, cdouble ga, cdouble de) {
    check_shifts(al, be, ga, de);
    double lp = std::log(double(p));
    auto e = [&](cdouble z) { return std::exp(-(0.5 + z) * lp); };
    cdouble x = e(al), y = e(be), g = e(ga), d = e(de);
    switch (classify_prime(p)) {
        case PClass::three_mod4:
            return 1.0 - d * d - g * g + x * x + y * y;
        case PClass::one_mod4:
            return 1.0 + x * x + y * y + g * g + d * d + 2.0 * x * y - 2.0 * x * g -
                   2.0 * x * d - 2.0 * y * g - 2.0 * y * d + 2.0 * g * d;
        case PClass::two:
            return 1.0 + g * d + x * y + x * x + y * y - x * g - x * d - y * g - y * d;
    }
    return 0.0;
}

cdouble local_factor_Y_exact(uint64_t p, cdouble al, cdouble be, cdouble ga, cdouble de) {
    check_shifts(al, be, ga, de);
    double lp = std::log(double(p));
    double chi = (p == 2) ? 0.0 : (p % 4 == 1 ? 1.0 : -1.0);
    auto zp = [&](cdouble shift_sum) {  // zeta_p(1 + shift_sum)
        return 1.0 / (1.0 - std::exp(-(1.0 + shift_sum) * lp));
    };
    auto Lp = [&](cdouble shift_sum) {  // L_p(1 + shift_sum)
        return 1.0 / (1.0 - chi * std::exp(-(1.0 + shift_sum) * lp));
    };
    cdouble zeta_part = zp(2.0 * al) * zp(2.0 * be) * zp(ga + de) * zp(al + be) /
                        (zp(al + ga) * zp(be + ga) * zp(be + de) * zp(al + de));
    cdouble L_part = Lp(2.0 * ga) * Lp(2.0 * de) * Lp(ga + de) * Lp(al + be) /
                     (Lp(al + ga) * Lp(be + ga) * Lp(be + de) * Lp(al + de));
    return zeta_part * L_part;
}

cdouble local_factor_G(uint64_t p, cdouble al, cdouble be, cdouble ga, cdouble de,
                       int /*series_cut*/) {
    check_shifts(al, be, ga, de);
    double lp = std::log(double(p));
    auto e = [&](cdouble z) { return std::exp(-(0.5 + z) * lp); };
    cdouble x = e(al), y = e(be), g = e(ga), d = e(de);
    switch (classify_prime(p)) {
        case PClass::three_mod4:
            return (1.0 - g * g) * (1.0 - d * d) / ((1.0 - x * x) * (1.0 - y * y));
        case PClass::two: {
            cdouble sp = 1.0 / ((1.0 - x) * (1.0 - y));
            cdouble sm = 1.0 / ((1.0 + x) * (1.0 + y));
            cdouble even = 0.5 * (sp + sm), odd = 0.5 * (sp - sm);
            return (1.0 + g * d) * even - (g + d) * odd;
        }
        case PClass::one_mod4: {
            // closed forms from the even/odd min(m,n)+1 generating series
            auto ppow = [&](cdouble z) { return std::exp(z * lp); };
            cdouble P = ppow(1.0 + al + be);  // p^{1+alpha+beta}
            cdouble A2 = ppow(1.0 + 2.0 * al), B2 = ppow(1.0 + 2.0 * be);
            cdouble den = (A2 - 1.0) * (P - 1.0) * (B2 - 1.0);
            cdouble Se = P * P * (1.0 + P) / den;
            cdouble So = -2.0 * ppow(2.5 + 2.0 * al + 2.0 * be) * (ppow(al) + ppow(be)) / den;
            cdouble Sn = 2.0 * P * (1.0 + P) / ((P - 1.0) * (P - 1.0));
            cdouble Sd = 4.0 * Se - 4.0 * P * P / ((P - 1.0) * (P - 1.0));
            return Se * (1.0 + g * g) * (1.0 + d * d) + So * (g + d) * (1.0 + g * d) +
                   (Sn + Sd) * (g * d);
        }
    }
    return 0.0;
}

double delta_table(PClass cls, int m, int n, int h, int l) {
    int mn = std::min(m, n);
    switch (cls) {
        case PClass::one_mod4: {
            bool even = (m + n) % 2 == 0;
            bool h02 = (h == 0 || h == 2), l02 = (l == 0 || l == 2);
            if (h02 && l02) return even ? double(mn + 1) : 0.0;
            if ((h == 1) != (l == 1)) return even ? 0.0 : -2.0 * double(mn + 1);
            if (h == 1 && l == 1) {
                if (m == n) return 4.0 * double(n) + 2.0;
                return even ? 4.0 * double(mn + 1) : 0.0;
            }
            return 0.0;
        }
        case PClass::three_mod4: {
            if (m % 2 != 0 || n % 2 != 0) return 0.0;
            if ((h == 0 && l == 0) || (h == 2 && l == 2)) return 1.0;
            if ((h == 0 && l == 2) || (h == 2 && l == 0)) return -1.0;
            return 0.0;
        }
        case PClass::two: {
            bool even = (m + n) % 2 == 0;
            if ((h == 0 && l == 0) || (h == 1 && l == 1)) return even ? 1.0 : 0.0;
            if ((h == 0 && l == 1) || (h == 1 && l == 0)) return even ? 0.0 : -1.0;
            return 0.0;
        }
    }
    return 0.0;
}

cdouble local_factor_G_series(uint64_t p, cdouble al, cdouble be, cdouble ga, cdouble de,
                              int series_cut) {
    check_shifts(al, be, ga, de);
    if (series_cut < 4) throw domain_error("local_factor_G_series: cut too small");
    PClass cls = classify_prime(p);
    double lp = std::log(double(p));
    auto e = [&](cdouble z) { return std::exp(-(0.5 + z) * lp); };
    cdouble x = e(al), y = e(be), g = e(ga), d = e(de);
    int hmax = (cls == PClass::two) ? 1 : 2;
    cdouble acc = 0.0;
    for (int h = 0; h <= hmax; ++h) {
        for (int l = 0; l <= hmax; ++l) {
            cdouble hl = std::pow(g, h) * std::pow(d, l);
            cdouble yn = 1.0;
            for (int n = 0; n <= series_cut; ++n) {
                cdouble xm = 1.0;
                for (int m = 0; m <= series_cut; ++m) {
                    double dv = delta_table(cls, m, n, h, l);
                    if (dv != 0.0) acc += dv * hl * yn * xm;
                    xm *= y;  // m-index runs with the beta shift
                }
                yn *= x;  // n-index runs with the alpha shift
            }
        }
    }
    return acc;
}

}  // namespace gps::specfun
