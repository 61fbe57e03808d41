#include "gps/windows.hpp"

#include <cmath>
#include <numbers>

#include "gps/errors.hpp"
#include "gps/quadrature.hpp"

namespace gps::windows {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// cos^{2m}(pi x) = sum_{j=0}^m a_j cos(2 pi j x)
std::vector<double> cospow_coeffs(int m) {
    std::vector<double> a(m + 1);
    double scale = std::pow(4.0, -m);
    a[0] = binom(2 * m, m) * scale;
    for (int j = 1; j <= m; ++j) a[j] = 2.0 * binom(2 * m, m + j) * scale;
    return a;
}

double sinc(double x) {  // sin(pi x)/(pi x)
    double z = kPi * x;
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

// int_{t-1/2}^{1/2} cos(2 pi n u + c) du for t in [0, 1]
double seg_cos_integral(int n, double c, double t) {
    if (n == 0) return (1.0 - t) * std::cos(c);
    double tn = 2.0 * kPi * double(n);
    return (std::sin(kPi * n + c) - std::sin(tn * t - kPi * n + c)) / tn;
}

// autocorrelation of the cosine-power window on [-1/2, 1/2], |t| <= 1
double cospow_autocorr(const std::vector<double>& a, double t) {
    t = std::abs(t);
    if (t >= 1.0) return 0.0;
    int m = static_cast<int>(a.size()) - 1;
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        for (int l = 0; l <= m; ++l) {
            double c = a[j] * a[l] * 0.5;
            acc += c * seg_cos_integral(j + l, -2.0 * kPi * l * t, t);
            acc += c * seg_cos_integral(j - l, 2.0 * kPi * l * t, t);
        }
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// WindowF
// ---------------------------------------------------------------------------

WindowF WindowF::indicator() {
    WindowF w;
    w.kind_ = Kind::indicator;
    w.int_f_ = 1.0;
    w.int_f2_ = 1.0;
    return w;
}

WindowF WindowF::cospow(int m) {
    if (m < 1 || m > 16) throw domain_error("WindowF::cospow: order out of range");
    WindowF w;
    w.kind_ = Kind::cospow;
    w.m_ = m;
    w.a_ = cospow_coeffs(m);
    w.int_f_ = w.a_[0];                                       // mean of the cosine series
    w.int_f2_ = binom(4 * m, 2 * m) * std::pow(4.0, -2 * m);  // int cos^{4m}
    return w;
}

WindowF WindowF::scaled_indicator(double radius) {
    if (!(radius > 0.0 && radius < 64.0)) {
        throw domain_error("WindowF::scaled_indicator: radius out of range");
    }
    WindowF w;
    w.kind_ = Kind::indicator;
    w.radius_ = radius;
    w.int_f_ = 2.0 * radius;
    w.int_f2_ = 2.0 * radius;
    return w;
}

double WindowF::evaluate(double x) const {
    if (std::abs(x) > radius_) return 0.0;
    if (kind_ == Kind::indicator) return 1.0;
    double c = std::cos(kPi * x);
    return std::pow(c * c, m_);
}

double WindowF::fourier(double y) const {
    if (kind_ == Kind::indicator) return 2.0 * radius_ * sinc(2.0 * radius_ * y);
    double acc = a_[0] * sinc(y);
    for (int j = 1; j <= m_; ++j) acc += 0.5 * a_[j] * (sinc(y - j) + sinc(y + j));
    return acc;
}

double WindowF::autocorr(double t) const {
    t = std::abs(t);
    if (t >= 2.0 * radius_) return 0.0;
    if (kind_ == Kind::indicator) return 2.0 * radius_ - t;
    return cospow_autocorr(a_, t);
}

double WindowF::fourier_envelope(double y) const {
    y = std::abs(y);
    if (kind_ == Kind::indicator) return 1.0 / (kPi * y);
    // |f^(y)| = (2m)!/4^m |sin(pi y)| / (pi y prod |j^2-y^2|)
    double num = 1.0;
    for (int j = 1; j <= 2 * m_; ++j) num *= double(j);
    num *= std::pow(4.0, -m_);
    double den = kPi * y;
    for (int j = 1; j <= m_; ++j) den *= std::abs(y * y - double(j) * j);
    return num / den;
}

// ---------------------------------------------------------------------------
// WindowPhi
// ---------------------------------------------------------------------------

WindowPhi WindowPhi::indicator() {
    WindowPhi w;
    w.kind_ = Kind::indicator;
    w.int_phi_ = 1.0;
    w.int_phi2_ = 1.0;
    w.int_logphi2_ = -1.0;
    w.phi_half_ = 2.0;
    return w;
}

WindowPhi WindowPhi::logcos(int r, double Y) {
    if (r < 1 || r > 16) throw domain_error("WindowPhi::logcos: order out of range");
    if (!(Y > 0.1 && Y < 40.0)) throw domain_error("WindowPhi::logcos: log-width out of range");
    WindowPhi w;
    w.kind_ = Kind::logcos;
    w.r_ = r;
    w.Y_ = Y;
    w.a_ = cospow_coeffs(r);
    double sigma = binom(4 * r, 2 * r) * std::pow(4.0, -2 * r);  // int cos^{4r}
    w.int_phi2_ = Y * sigma;
    w.int_logphi2_ = -0.5 * Y * Y * sigma;
    w.phi_half_ = Y * w.a_[0];
    w.int_phi_ = std::real(w.mellin(1.0));
    return w;
}

double WindowPhi::evaluate(double x) const {
    if (kind_ == Kind::indicator) return (x > 0.0 && x <= 1.0) ? 1.0 : 0.0;
    if (!(x >= std::exp(-Y_) && x <= 1.0)) return 0.0;
    double v = std::log(x) / Y_ + 0.5;  // in [0, 1/2] -> cos window argument
    double c = std::cos(kPi * v);
    return std::pow(c * c, r_) / std::sqrt(x);
}

std::complex<double> WindowPhi::mellin(std::complex<double> s) const {
    if (kind_ == Kind::indicator) return 1.0 / s;
    // Phi~(s) = Y B(q) (a_0 + q^2 sum_{j>=1} a_j (-1)^j/(q^2 + 4 pi^2 j^2)),
    // q = (s - 1/2) Y,  B(q) = (1 - e^{-q})/q. Stable at q = 0.
    std::complex<double> q = (s - 0.5) * Y_;
    std::complex<double> B;
    if (std::abs(q) < 1e-4) {
        B = 1.0 - q / 2.0 + q * q / 6.0 - q * q * q / 24.0;
    } else {
        B = (1.0 - std::exp(-q)) / q;
    }
    std::complex<double> acc = 0.0;
    double sign = -1.0;
    for (std::size_t j = 1; j < a_.size(); ++j) {
        acc += sign * a_[j] / (q * q + 4.0 * kPi * kPi * double(j) * double(j));
        sign = -sign;
    }
    return Y_ * B * (a_[0] + q * q * acc);
}

double WindowPhi::mellin_sq_line(double t) const {
    if (kind_ == Kind::indicator) return 1.0 / (0.25 + t * t);
    std::complex<double> v = mellin(std::complex<double>(0.5, t));
    return std::norm(v);
}

double WindowPhi::rho_phi(double tau) const {
    tau = std::abs(tau);
    if (kind_ == Kind::indicator) return std::exp(-0.5 * tau);
    if (tau >= Y_) return 0.0;
    return Y_ * cospow_autocorr(a_, tau / Y_);
}

// ---------------------------------------------------------------------------
// pairs, F_K, Parseval
// ---------------------------------------------------------------------------

WindowPair builtin_indicator_pair() {
    return {WindowF::indicator(), WindowPhi::indicator(), "indicator"};
}

WindowPair builtin_smooth_pair(int m, int r, double Y) {
    return {WindowF::cospow(m), WindowPhi::logcos(r, Y), "smooth"};
}

WindowPair pair_by_name(const std::string& name) {
    if (name == "indicator") return builtin_indicator_pair();
    if (name == "smooth") return builtin_smooth_pair();
    throw domain_error("unknown window pair '" + name + "' (expected indicator|smooth)");
}

double F_K_eval(const WindowF& f, double K, double theta) {
    if (K < 1.0) throw domain_error("F_K_eval: K must be >= 1");
    double scale = K / kHalfPi;
    double acc = 0.0;
    // copies at (pi/2) j; only |theta - (pi/2) j| <= R/scale contribute
    long j0 = std::lround(theta / kHalfPi);
    long span = static_cast<long>(f.support_radius() / (scale * kHalfPi)) + 1;
    for (long j = j0 - span; j <= j0 + span; ++j) {
        acc += f.evaluate(scale * (theta - kHalfPi * double(j)));
    }
    return acc;
}

std::pair<double, double> parseval_check(const WindowF& f, double K) {
    // copies at spacing pi/2 with width 2R (pi/2)/K are disjoint iff 2R <= K
    if (2.0 * f.support_radius() > K) {
        throw domain_error("parseval_check: K too small, periodized copies overlap");
    }
    // lhs by quadrature over one period, split at the window edge (jump for
    // the indicator)
    double edge = f.support_radius() * kHalfPi / K;
    auto g = [&](double th) {
        double v = F_K_eval(f, K, th);
        return v * v;
    };
    double lhs = 0.0;
    lhs += quad::adaptive_gk(g, 0.0, edge, 1e-13).value;
    lhs += quad::adaptive_gk(g, kHalfPi - edge, kHalfPi, 1e-13).value;
    lhs *= 2.0 / kPi;

    // rhs: (1/K^2) sum_k f^(k/K)^2 with an Euler-Maclaurin tail for the
    // indicator's slowly decaying transform
    double rhs = f.fourier(0.0) * f.fourier(0.0);
    if (f.is_indicator()) {
        long M = static_cast<long>(4e5);
        for (long k = 1; k <= M; ++k) {
            double v = f.fourier(double(k) / K);
            rhs += 2.0 * v * v;
        }
        // sum_{k>M} f^(k/K)^2 = (2R)^2 (K/(2R pi))^2 sum sin^2/k^2; for R=1/2:
        // (K/pi)^2 [ sum_{k>M} 1/(2k^2) - sum_{k>M} cos(2pi k/K)/(2k^2) ]; the
        // oscillatory piece is below K^3/(pi^3 M^2), negligible at M = 4e5.
        double inv = 1.0 / double(M);
        double tail_half = 0.5 * inv - 0.25 * inv * inv + inv * inv * inv / 12.0;
        rhs += 2.0 * (K * K / (kPi * kPi)) * tail_half;
    } else {
        long M = static_cast<long>((f.order() + 60) * K) + 60;
        for (long k = 1; k <= M; ++k) {
            double v = f.fourier(double(k) / K);
            rhs += 2.0 * v * v;
        }
    }
    rhs /= K * K;
    return {lhs, rhs};
}

}  // namespace gps::windows
