#include "extham/extension.h"

#include "extham/errors.h"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace extham::ext {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

BaseSystem make_base(std::function<Jet(const Jet& psi)> potential, std::function<Jet(const Jet& psi)> g, double c,
                     double c0, std::string family, std::map<std::string, double> params) {
    BaseSystem b;
    b.V = PhaseFunction::from_expression(1, [potential](std::span<const Jet> z) { return potential(z[0]); });
    b.L = PhaseFunction::from_expression(1, [potential](std::span<const Jet> z) {
        return 0.5 * z[1] * z[1] + potential(z[0]);
    });
    b.g = PhaseFunction::from_expression(1, [g](std::span<const Jet> z) { return g(z[0]); });
    b.G = PhaseFunction::from_expression(1, [g](std::span<const Jet> z) { return g(z[0]) * z[1]; });
    b.c = c;
    b.c0 = c0;
    b.family = std::move(family);
    b.params = std::move(params);
    return b;
}

ExtensionSpec ExtensionSpec::make(int m, int n, double c, double c0, double Omega, tagged::GammaProfile gamma) {
    if (m < 1 || n < 1) throw std::invalid_argument("extension: m and n must be positive integers");
    if (c == 0.0 && c0 == 0.0) throw std::invalid_argument("extension: (c, c0) = (0, 0)");
    if (!std::isfinite(c) || !std::isfinite(c0) || !std::isfinite(Omega))
        throw std::invalid_argument("extension: non-finite parameter");
    if (gamma.c != c) throw std::invalid_argument("extension: gamma profile built for a different c");
    ExtensionSpec s;
    s.m = m;
    s.n = n;
    s.c = c;
    s.c0 = c0;
    s.Omega = Omega;
    s.gamma = gamma;
    return s;
}

ExtensionSpec ExtensionSpec::flat(int m, int n, const BaseSystem& base, double Omega) {
    return make(m, n, base.c, base.c0, Omega, tagged::GammaProfile::inverse_linear(base.c));
}

int ExtensionSpec::gcd() const { return std::gcd(m, n); }

ExtensionSpec ExtensionSpec::doubled() const {
    ExtensionSpec s = *this;
    s.m = 2 * m;
    s.n = 2 * n;
    return s;
}

double g_equation_residual(const BaseSystem& base, double c, double c0, const PhasePoint& x) {
    const PhaseFunction x2 = x_l_apply(base.L, x_l_apply(base.L, base.G));
    return x2(x) + 2.0 * (c * base.L(x) + c0) * base.G(x);
}

PhaseFunction build_Gn_recursive(const BaseSystem& base, double, double, int n) {
    if (n < 1) throw std::invalid_argument("G_n: n must be positive");
    const PhaseFunction XG = x_l_apply(base.L, base.G);
    PhaseFunction Gk = base.G;
    for (int k = 1; k < n; ++k) Gk = XG * Gk + (1.0L / k) * (base.G * x_l_apply(base.L, Gk));
    return Gk;
}

PhaseFunction build_Gn_closed(const BaseSystem& base, double c, double c0, int n) {
    if (n < 1) throw std::invalid_argument("G_n: n must be positive");
    const PhaseFunction XG = x_l_apply(base.L, base.G);
    const PhaseFunction L = base.L;
    const PhaseFunction G = base.G;
    return PhaseFunction(1, [=](const PhasePoint& x, int r) {
        const Jet g = G.taylor(x, r);
        const Jet xg = XG.taylor(x, r);
        const Jet w = -2.0 * (c * L.taylor(x, r) + c0);
        Jet sum(2, r);
        for (int j = 0; 2 * j + 1 <= n; ++j)
            sum += binomial(n, 2 * j + 1) * powi(g, 2 * j + 1) * powi(xg, n - 2 * j - 1) * powi(w, j);
        return sum;
    });
}

PhaseFunction lift_base(const PhaseFunction& f) {
    if (f.dof() == 2) return f;
    return lift(f, 2, {kPsi, kPpsi});
}

namespace {

void require_extended(const PhasePoint& x) {
    if (x.dof() != 2) throw std::invalid_argument("extension: expected a point (u, psi, p_u, p_psi)");
}

Jet u_jet(const PhasePoint& x, int r) { return Jet::variable(4, r, kU, x.q[0]); }

// X_L f for jets of order R (L independent of u, p_u); result has order R-1
Jet x_l_jet(const Jet& f, const Jet& L) {
    return f.derivative(kPsi) * L.derivative(kPpsi) - f.derivative(kPpsi) * L.derivative(kPsi);
}


// one application of U to an order-R jet; L must have order >= R. Result has order R-1.
Jet apply_U(const ExtensionSpec& spec, const Jet& f, const Jet& L, const PhasePoint& x) {
    const int r = f.order() - 1;
    const JetReal a = JetReal(spec.m) / JetReal(spec.n * spec.n);
    const Jet pu = Jet::variable(4, r, kPu, x.p[0]);
    const Jet gm = tagged::gamma(spec.gamma, u_jet(x, r));
    return pu * f.truncated(r) + a * gm * x_l_jet(f, L.truncated(f.order()));
}

// 2 Omega / gamma^2 at order r
Jet omega_weight(const ExtensionSpec& spec, const Jet& omega, const PhasePoint& x, int r) {
    const Jet gm = tagged::gamma(spec.gamma, u_jet(x, r));
    if (gm.value() == 0.0) throw PoleError("Omega / gamma^2: gamma vanishes", x.q[0]);
    return 2.0 * omega / square(gm);
}

void require_no_omega(const ExtensionSpec& spec) {
    if (spec.Omega != 0.0) throw std::invalid_argument("K_{m,n} needs Omega = 0; use Kbar");
}

void require_kbar_shape(const ExtensionSpec& spec, int s, int r) {
    if (s < 1 || r < 1) throw std::invalid_argument("Kbar: s and r must be positive");
    if (spec.m != 2 * s || spec.n != r) throw std::invalid_argument("Kbar: spec must have m = 2s and n = r");
}

}  // namespace

PhaseFunction build_extended_H(const ExtensionSpec& spec, const BaseSystem& base, UProfile extra) {
    const PhaseFunction L = lift_base(base.L);
    return PhaseFunction(2, [spec, L, extra](const PhasePoint& x, int r) {
        require_extended(x);
        const JetReal k2 = JetReal(spec.m) * spec.m / (JetReal(spec.n) * spec.n);
        const Jet u = u_jet(x, r);
        const Jet pu = Jet::variable(4, r, kPu, x.p[0]);
        const Jet gm = tagged::gamma(spec.gamma, u);
        Jet h = 0.5 * pu * pu - k2 * tagged::gamma_prime(spec.gamma, u) * L.taylor(x, r);
        if (spec.c0 != 0.0) h += k2 * spec.c0 * square(gm);
        if (spec.Omega != 0.0) {
            if (gm.value() == 0.0) throw PoleError("Omega / gamma^2: gamma vanishes", x.q[0]);
            h += spec.Omega / square(gm);
        }
        if (extra) h += extra(u);
        return h;
    });
}

PhaseFunction U_apply(const ExtensionSpec& spec, const BaseSystem& base, const PhaseFunction& f) {
    const PhaseFunction L = lift_base(base.L);
    const PhaseFunction F = lift_base(f);
    return PhaseFunction(2, [spec, L, F](const PhasePoint& x, int r) {
        require_extended(x);
        return apply_U(spec, F.taylor(x, r + 1), L.taylor(x, r + 1), x);
    });
}

std::vector<Jet> u_chain(const ExtensionSpec& spec, const BaseSystem& base, const PhaseFunction& f,
                         const PhasePoint& x, int order, int powers) {
    require_extended(x);
    if (powers < 0) throw std::invalid_argument("u_chain: negative power");
    const int top = order + powers;
    const Jet L = lift_base(base.L).taylor(x, top);
    Jet cur = lift_base(f).taylor(x, top);
    std::vector<Jet> out;
    out.reserve(powers + 1);
    out.push_back(cur.truncated(order));
    for (int k = 1; k <= powers; ++k) {
        cur = apply_U(spec, cur, L, x);
        out.push_back(cur.truncated(order));
    }
    return out;
}

PhaseFunction K_mn_recursive(const ExtensionSpec& spec, const BaseSystem& base) {
    require_no_omega(spec);
    const PhaseFunction Gn = build_Gn_recursive(base, spec.c, spec.c0, spec.n);
    return PhaseFunction(2, [spec, base, Gn](const PhasePoint& x, int r) {
        return u_chain(spec, base, Gn, x, r, spec.m).back();
    });
}

PhaseFunction U_power_closed(const ExtensionSpec& spec, const BaseSystem& base, int rpow) {
    if (rpow < 0) throw std::invalid_argument("U power: negative exponent");
    const PhaseFunction Gn = lift_base(build_Gn_closed(base, spec.c, spec.c0, spec.n));
    const PhaseFunction XGn = lift_base(x_l_apply(base.L, build_Gn_closed(base, spec.c, spec.c0, spec.n)));
    const PhaseFunction L = lift_base(base.L);
    return PhaseFunction(2, [=](const PhasePoint& x, int r) {
        require_extended(x);
        const JetReal mn = JetReal(spec.m) / spec.n;
        const Jet pu = Jet::variable(4, r, kPu, x.p[0]);
        const Jet gm = tagged::gamma(spec.gamma, u_jet(x, r));
        const Jet w = -2.0 * (spec.c * L.taylor(x, r) + spec.c0);
        const Jet mg = mn * gm;
        Jet P(4, r), D(4, r);
        for (int j = 0; 2 * j <= rpow; ++j)
            P += binomial(rpow, 2 * j) * powi(mg, 2 * j) * powi(pu, rpow - 2 * j) * powi(w, j);
        for (int j = 0; 2 * j + 1 <= rpow; ++j)
            D += binomial(rpow, 2 * j + 1) * powi(mg, 2 * j + 1) * powi(pu, rpow - 2 * j - 1) * powi(w, j);
        D /= JetReal(spec.n);
        return P * Gn.taylor(x, r) + D * XGn.taylor(x, r);
    });
}

PhaseFunction K_mn_closed(const ExtensionSpec& spec, const BaseSystem& base) {
    require_no_omega(spec);
    return U_power_closed(spec, base, spec.m);
}

namespace {

PhaseFunction kbar_chain(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, PhaseFunction omega) {
    require_kbar_shape(spec, s, r);
    const PhaseFunction Gr = build_Gn_recursive(base, spec.c, spec.c0, r);
    return PhaseFunction(2, [spec, base, s, Gr, omega](const PhasePoint& x, int ord) {
        const auto chain = u_chain(spec, base, Gr, x, ord, 2 * s);
        const Jet om = omega.valid() ? omega.taylor(x, ord) : Jet::constant(4, ord, spec.Omega);
        const Jet w = omega_weight(spec, om, x, ord);
        Jet sum(4, ord);
        Jet wj = Jet::constant(4, ord, 1.0);
        for (int j = 0; j <= s; ++j) {
            sum += binomial(s, j) * wj * chain[2 * (s - j)];
            wj *= w;
        }
        return sum;
    });
}

PhaseFunction kbar_closed(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, PhaseFunction omega) {
    require_kbar_shape(spec, s, r);
    std::vector<PhaseFunction> powers;
    for (int k = 0; k <= s; ++k) powers.push_back(U_power_closed(spec, base, 2 * k));
    return PhaseFunction(2, [spec, s, powers, omega](const PhasePoint& x, int ord) {
        require_extended(x);
        const Jet om = omega.valid() ? omega.taylor(x, ord) : Jet::constant(4, ord, spec.Omega);
        const Jet w = omega_weight(spec, om, x, ord);
        Jet sum(4, ord);
        Jet wj = Jet::constant(4, ord, 1.0);
        for (int j = 0; j <= s; ++j) {
            sum += binomial(s, j) * wj * powers[s - j].taylor(x, ord);
            wj *= w;
        }
        return sum;
    });
}

PhaseFunction weight_function(const ExtensionSpec& spec) {
    return PhaseFunction(2, [spec](const PhasePoint& x, int r) {
        require_extended(x);
        return omega_weight(spec, Jet::constant(4, r, spec.Omega), x, r);
    });
}

}  // namespace

PhaseFunction Kbar(const ExtensionSpec& spec, const BaseSystem& base, int s, int r) {
    return kbar_chain(spec, base, s, r, PhaseFunction());
}

PhaseFunction Kbar(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, const PhaseFunction& Omega) {
    if (Omega.dof() != 2) throw std::invalid_argument("Kbar: Omega must live on the extended phase space");
    return kbar_chain(spec, base, s, r, Omega);
}

PhaseFunction Kbar_closed(const ExtensionSpec& spec, const BaseSystem& base, int s, int r) {
    return kbar_closed(spec, base, s, r, PhaseFunction());
}

PhaseFunction Kbar_closed(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, const PhaseFunction& Omega) {
    if (Omega.dof() != 2) throw std::invalid_argument("Kbar: Omega must live on the extended phase space");
    return kbar_closed(spec, base, s, r, Omega);
}

PhaseFunction Kbar_unmemoized(const ExtensionSpec& spec, const BaseSystem& base, int s, int r) {
    require_kbar_shape(spec, s, r);
    const PhaseFunction W = weight_function(spec);
    PhaseFunction sum = PhaseFunction::constant(2, 0.0);
    for (int j = 0; j <= s; ++j) {
        PhaseFunction term = lift_base(build_Gn_recursive(base, spec.c, spec.c0, r));
        for (int k = 0; k < 2 * (s - j); ++k) term = U_apply(spec, base, term);
        for (int k = 0; k < j; ++k) term = W * term;
        sum = sum + binomial(s, j) * term;
    }
    return sum;
}

PhaseFunction Kbar_operator_form(const ExtensionSpec& spec, const BaseSystem& base, int s, int r) {
    require_kbar_shape(spec, s, r);
    const PhaseFunction W = weight_function(spec);
    PhaseFunction f = lift_base(build_Gn_recursive(base, spec.c, spec.c0, r));
    for (int k = 0; k < s; ++k) f = U_apply(spec, base, U_apply(spec, base, f)) + W * f;
    return f;
}

CharacteristicIntegral characteristic_integral(const ExtensionSpec& spec, const BaseSystem& base) {
    if (spec.Omega == 0.0)
        return {K_mn_closed(spec, base), "K_{" + std::to_string(spec.m) + "," + std::to_string(spec.n) + "}",
                spec.m, spec.n};
    const ExtensionSpec use = spec.m % 2 == 0 ? spec : spec.doubled();
    return {Kbar_closed(use, base, use.m / 2, use.n),
            "Kbar_{" + std::to_string(use.m) + "," + std::to_string(use.n) + "}", use.m, use.n};
}

CharacteristicIntegral characteristic_integral(const ExtensionSpec& spec, const BaseSystem& base,
                                               const PhaseFunction& Omega) {
    const ExtensionSpec use = spec.m % 2 == 0 ? spec : spec.doubled();
    return {Kbar_closed(use, base, use.m / 2, use.n, Omega),
            "Kbar_{" + std::to_string(use.m) + "," + std::to_string(use.n) + "}", use.m, use.n};
}

IndependenceResult functional_independence(const std::vector<PhaseFunction>& fs, const PhasePoint& x,
                                           double threshold) {
    if (fs.empty()) return {};
    const int cols = 2 * x.dof();
    Eigen::MatrixXd J(fs.size(), cols);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto g = fs[i].gradient(x);
        for (int j = 0; j < cols; ++j) J(Eigen::Index(i), j) = g[j];
        const double norm = J.row(Eigen::Index(i)).norm();
        if (norm > 0) J.row(Eigen::Index(i)) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    IndependenceResult res;
    res.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double top = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (top > 0 && sv(i) > threshold * top) ++res.rank;
    return res;
}

}  // namespace extham::ext
