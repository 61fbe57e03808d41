#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gps::windows {

// Angular window f: even, real, supported in [-support_radius, support_radius].
// Built-ins carry closed-form transforms; `fourier` is f^(y) = int f(x) e^{-2pi i x y} dx
// and `autocorr` is rho(t) = int f(u) f(u - t) du (supported in [-2R, 2R]).
class WindowF {
public:
    enum class Kind { indicator, cospow };

    static WindowF indicator();       // 1 on [-1/2, 1/2]
    static WindowF cospow(int m);     // cos^{2m}(pi x) on [-1/2, 1/2]
    static WindowF scaled_indicator(double radius);  // 1 on [-radius, radius]

    Kind kind() const { return kind_; }
    bool is_indicator() const { return kind_ == Kind::indicator; }
    int order() const { return m_; }
    double support_radius() const { return radius_; }
    double int_f() const { return int_f_; }
    double int_f2() const { return int_f2_; }

    double evaluate(double x) const;
    double fourier(double y) const;
    double autocorr(double t) const;

    // decreasing envelope with |fourier(y)| <= envelope(y) for y > order()+1
    double fourier_envelope(double y) const;

private:
    Kind kind_;
    int m_ = 0;
    double radius_ = 0.5;
    std::vector<double> a_;  // cosine coefficients, f = sum a_j cos(2 pi j x)
    double int_f_ = 0, int_f2_ = 0;
};

// Radial window Phi supported in (0, support_cap]; `mellin` is
// Phi~(s) = int_0^inf Phi(x) x^{s-1} dx, entire in s for the built-ins.
// `rho_phi` is the autocorrelation of phi(y) = Phi(e^y) e^{y/2}; it drives the
// closed prime-sum routes for the lower-order prediction constants.
class WindowPhi {
public:
    enum class Kind { indicator, logcos };

    static WindowPhi indicator();              // 1 on (0, 1]
    static WindowPhi logcos(int r, double Y);  // cos^{2r} bump in log x on [e^-Y, 1]

    Kind kind() const { return kind_; }
    bool is_indicator() const { return kind_ == Kind::indicator; }
    double support_cap() const { return 1.0; }
    double int_phi() const { return int_phi_; }
    double int_phi2() const { return int_phi2_; }
    double int_logphi2() const { return int_logphi2_; }
    double phi_half() const { return phi_half_; }  // Phi~(1/2)

    double evaluate(double x) const;
    std::complex<double> mellin(std::complex<double> s) const;
    double mellin_sq_line(double t) const;  // |Phi~(1/2 + it)|^2
    double rho_phi(double tau) const;

    int order() const { return r_; }
    double log_width() const { return Y_; }

private:
    Kind kind_;
    int r_ = 0;
    double Y_ = 0;
    std::vector<double> a_;
    double int_phi_ = 0, int_phi2_ = 0, int_logphi2_ = 0, phi_half_ = 0;
};

struct WindowPair {
    WindowF f;
    WindowPhi phi;
    std::string name;
};

// Figure-style pair: f = 1_[-1/2,1/2], Phi = 1_(0,1].
WindowPair builtin_indicator_pair();

// Smooth pair: f = cos^{2m}(pi x), Phi = log-cosine of order r and log-width Y.
// Defaults chosen so the Fourier/Mellin tails are negligible past |y| ~ 8.
WindowPair builtin_smooth_pair(int m = 5, int r = 5, double Y = 3.0);

// Registry for the CLI: "indicator" | "smooth".
WindowPair pair_by_name(const std::string& name);

// F_K(theta) = sum_j f((K/(pi/2)) (theta - (pi/2) j)); pi/2-periodic.
double F_K_eval(const WindowF& f, double K, double theta);

// lhs = (2/pi) int_0^{pi/2} F_K^2 by quadrature; rhs = (1/K^2) sum_k f^(k/K)^2.
// Requires the periodized copies to be disjoint (K >= 2 * support diameter).
std::pair<double, double> parseval_check(const WindowF& f, double K);

}  // namespace gps::windows
