#include "gps/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gps::quad {
namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] (Kronrod extension of G7).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double value, err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * xgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

Result adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, int max_depth) {
    struct Item {
        double a, b;
        Panel p;
        int depth;
    };
    Result out;
    std::vector<Item> stack;
    stack.push_back({a, b, gk15(f, a, b), 0});
    double total_err = stack.back().p.err;
    while (!stack.empty()) {
        // refine the worst panel until the summed estimate fits the budget
        auto worst = std::max_element(stack.begin(), stack.end(),
                                      [](const Item& u, const Item& v) { return u.p.err < v.p.err; });
        if (total_err <= abs_tol || worst->depth >= max_depth ||
            stack.size() > 20000) {
            break;
        }
        Item it = *worst;
        stack.erase(worst);
        total_err -= it.p.err;
        double m = 0.5 * (it.a + it.b);
        Item l{it.a, m, gk15(f, it.a, m), it.depth + 1};
        Item r{m, it.b, gk15(f, m, it.b), it.depth + 1};
        total_err += l.p.err + r.p.err;
        stack.push_back(l);
        stack.push_back(r);
    }
    for (const auto& it : stack) {
        out.value += it.p.value;
        out.err_bound += it.p.err;
        ++out.panels;
    }
    return out;
}

Result composite_gk(const std::function<double(double)>& f, double a, double b,
                    double h) {
    Result out;
    double x = a;
    while (x < b) {
        double x2 = std::min(x + h, b);
        Panel p = gk15(f, x, x2);
        out.value += p.value;
        out.err_bound += p.err;
        ++out.panels;
        x = x2;
    }
    return out;
}

}  // namespace gps::quad
