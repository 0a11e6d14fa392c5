#include "extham/tagged_trig.h"

#include "extham/errors.h"

#include <cmath>
#include <type_traits>

namespace extham::tagged {

namespace {

constexpr double kPoleGuard = 1e-300;

// Shared implementation over double and Jet. Returns (gamma, s2) where s2 is
// the real value of S_k^2 at the (possibly translated) argument, so that
// gamma' = -c / s2.
template <class X>
struct Eval {
    X gamma;
    X s2;
};

template <class X>
Eval<X> evaluate(const GammaProfile& g, const X& u, double u_value) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    X x = g.c * (u + g.shift);
    if (g.kappa == 0.0) {
        if (std::abs(g.c * (u_value + g.shift)) < kPoleGuard) throw PoleError("gamma pole (c u = 0)", u_value);
        return {1.0 / x, x * x};
    }
    const double a = std::sqrt(std::abs(g.kappa));
    X ax = x * a;
    if (!g.quarter_turn) {
        X s = g.kappa > 0 ? X(sin(ax) / a) : X(sinh(ax) / a);
        X co = g.kappa > 0 ? X(cos(ax)) : X(cosh(ax));
        double sv;
        if constexpr (std::is_same_v<X, double>) sv = s; else sv = s.value();
        if (std::abs(sv) < kPoleGuard || !std::isfinite(sv)) throw PoleError("gamma pole (S_k = 0)", u_value);
        return {co / s, s * s};
    }
    if (g.kappa > 0) {
        // S -> cos(ax)/a, C -> -sin(ax)
        X s = cos(ax) / a;
        double sv;
        if constexpr (std::is_same_v<X, double>) sv = s; else sv = s.value();
        if (std::abs(sv) < kPoleGuard) throw PoleError("gamma pole (cos = 0, translated)", u_value);
        return {-(sin(ax) / s), s * s};
    }
    // S -> i cosh(ax)/a, C -> i sinh(ax): gamma = a tanh(ax), S^2 = -cosh^2/a^2
    X ch = cosh(ax);
    X s2 = -(ch * ch) / (a * a);
    return {sinh(ax) / ch * a, s2};
}

}  // namespace

double S(double kappa, double x) {
    if (kappa > 0) return std::sin(std::sqrt(kappa) * x) / std::sqrt(kappa);
    if (kappa < 0) return std::sinh(std::sqrt(-kappa) * x) / std::sqrt(-kappa);
    return x;
}

double C(double kappa, double x) {
    if (kappa > 0) return std::cos(std::sqrt(kappa) * x);
    if (kappa < 0) return std::cosh(std::sqrt(-kappa) * x);
    return 1.0;
}

double T(double kappa, double x) { return S(kappa, x) / C(kappa, x); }

Jet S(double kappa, const Jet& x) {
    if (kappa > 0) return sin(x * std::sqrt(kappa)) / std::sqrt(kappa);
    if (kappa < 0) return sinh(x * std::sqrt(-kappa)) / std::sqrt(-kappa);
    return x;
}

Jet C(double kappa, const Jet& x) {
    if (kappa > 0) return cos(x * std::sqrt(kappa));
    if (kappa < 0) return cosh(x * std::sqrt(-kappa));
    return Jet::constant(x.nvars(), x.order(), 1.0);
}

Jet T(double kappa, const Jet& x) { return S(kappa, x) / C(kappa, x); }

GammaProfile GammaProfile::make(double c, double C, double shift, bool quarter_turn) {
    if (c == 0.0 && C == 0.0) throw std::invalid_argument("gamma profile: (c, C) = (0, 0)");
    if (!std::isfinite(c) || !std::isfinite(C) || !std::isfinite(shift))
        throw std::invalid_argument("gamma profile: non-finite parameter");
    GammaProfile g;
    g.c = c;
    g.C = C;
    g.shift = shift;
    g.kappa = c != 0.0 ? C / c : 0.0;
    if (quarter_turn && (c == 0.0 || g.kappa == 0.0))
        throw std::invalid_argument("gamma profile: quarter-turn translation needs c != 0 and kappa != 0");
    g.quarter_turn = quarter_turn;
    return g;
}

double gamma(const GammaProfile& g, double u) {
    if (g.c == 0.0) return -g.C * (u + g.shift);
    return evaluate<double>(g, u, u).gamma;
}

double gamma_prime(const GammaProfile& g, double u) {
    if (g.c == 0.0) return -g.C;
    return -g.c / evaluate<double>(g, u, u).s2;
}

Jet gamma(const GammaProfile& g, const Jet& u) {
    if (g.c == 0.0) return (u + g.shift) * (-g.C);
    return evaluate<Jet>(g, u, u.value()).gamma;
}

Jet gamma_prime(const GammaProfile& g, const Jet& u) {
    if (g.c == 0.0) return Jet::constant(u.nvars(), u.order(), -g.C);
    return -g.c / evaluate<Jet>(g, u, u.value()).s2;
}

double ode_residual(const GammaProfile& g, double u) {
    const double gm = gamma(g, u);
    return std::abs(gamma_prime(g, u) + g.c * gm * gm + g.C);
}

}  // namespace extham::tagged
