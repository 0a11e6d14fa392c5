#include "extham/catalog.h"

#include "extham/errors.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace extham::catalog {

using ext::BaseSystem;
using ext::ExtensionSpec;

Rational Rational::make(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num, den);
    return {num / (g ? g : 1), den / (g ? g : 1)};
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    auto parse_long = [&](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("rational: cannot parse '" + text + "'");
        }
        if (used != s.size()) throw std::invalid_argument("rational: cannot parse '" + text + "' (expected p/q)");
        return v;
    };
    if (slash == std::string::npos) return make(parse_long(text), 1);
    return make(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

std::string chart_name(Chart c) {
    switch (c) {
    case Chart::null_coordinates: return "null-coordinates";
    case Chart::pseudo_polar: return "pseudo-polar";
    case Chart::polar_like: return "polar-like";
    }
    return "unknown";
}

const PhaseFunction& ModelInstance::integral(const std::string& label) const {
    for (const auto& k : known_integrals)
        if (k.label == label) return k.f;
    throw std::out_of_range("model " + id + " has no integral '" + label + "'");
}

// ---------------------------------------------------------------- bases

BaseSystem make_base_family(double C1, double C2, double C3, double C4, double eta) {
    if (C1 == 0.0 && C2 == 0.0) throw std::invalid_argument("base family: (C1, C2) = (0, 0)");
    if (C3 == 0.0 && C4 == 0.0) throw std::invalid_argument("base family: (C3, C4) = (0, 0)");
    if (eta == 0.0) throw std::invalid_argument("base family: eta = 0");
    auto g = [=](const Jet& psi) { return C1 * exp(eta * psi) + C2 * exp(-eta * psi); };
    auto V = [=](const Jet& psi) {
        const Jet gg = g(psi);
        if (gg.value() == 0.0) throw DomainError("base family: g vanishes");
        return (C3 + C4 * (C1 * exp(eta * psi) - C2 * exp(-eta * psi))) / square(gg);
    };
    BaseSystem b = ext::make_base(V, g, -eta * eta, 0.0, C4 == 0.0 ? "hyperbolic-V1" : "hyperbolic",
                                  {{"C1", C1}, {"C2", C2}, {"C3", C3}, {"C4", C4}, {"eta", eta}});
    b.s = C4 / eta;
    return b;
}

BaseSystem make_trig_family(double alpha, double beta, double A, double psi0, double lambda) {
    if (A == 0.0) throw std::invalid_argument("trig family: A = 0");
    if (alpha == 0.0 && beta == 0.0) throw std::invalid_argument("trig family: (alpha, beta) = (0, 0)");
    if (lambda == 0.0) throw std::invalid_argument("trig family: lambda = 0");
    auto g = [=](const Jet& psi) { return A * sin(lambda * psi + psi0); };
    auto V = [=](const Jet& psi) {
        const Jet th = lambda * psi + psi0;
        const Jet s = sin(th);
        if (s.value() == 0.0) throw DomainError("trig family: sin(theta) vanishes");
        return (alpha + beta * cos(th)) / square(s);
    };
    BaseSystem b = ext::make_base(V, g, lambda * lambda, 0.0, "trig",
                                  {{"alpha", alpha}, {"beta", beta}, {"A", A}, {"psi0", psi0}, {"lambda", lambda}});
    b.s = beta * A / lambda;
    return b;
}

BaseSystem make_cosh_family(double alpha, double beta, double A, double psi0) {
    if (A == 0.0) throw std::invalid_argument("cosh family: A = 0");
    auto g = [=](const Jet& psi) { return A * cosh(2.0 * psi + psi0); };
    auto V = [=](const Jet& psi) {
        const Jet th = 2.0 * psi + psi0;
        return (alpha + beta * sinh(th)) / square(cosh(th));
    };
    BaseSystem b = ext::make_base(V, g, -4.0, 0.0, "cosh", {{"alpha", alpha}, {"beta", beta}, {"A", A}, {"psi0", psi0}});
    b.s = beta * A / 2.0;
    return b;
}

BaseSystem make_sinh_family(double alpha, double beta, double A, double psi0) {
    if (A == 0.0) throw std::invalid_argument("sinh family: A = 0");
    auto g = [=](const Jet& psi) { return A * sinh(2.0 * psi + psi0); };
    auto V = [=](const Jet& psi) {
        const Jet th = 2.0 * psi + psi0;
        const Jet s = sinh(th);
        if (s.value() == 0.0) throw DomainError("sinh family: sinh vanishes");
        return (alpha + beta * cosh(th)) / square(s);
    };
    BaseSystem b = ext::make_base(V, g, -4.0, 0.0, "sinh", {{"alpha", alpha}, {"beta", beta}, {"A", A}, {"psi0", psi0}});
    b.s = beta * A / 2.0;
    return b;
}

// ---------------------------------------------------------------- Minkowski

std::pair<int, int> minkowski_mn(Rational k) {
    const long num = std::labs(2 * (k.num + k.den));
    if (num == 0) throw std::invalid_argument("minkowski: k = -1 degenerates the pseudo-polar map");
    const long g = std::gcd(num, k.den);
    return {int(num / g), int(k.den / g)};
}

namespace {

void require_k(double k) {
    if (!std::isfinite(k) || k == -1.0) throw std::invalid_argument("minkowski: k must be finite and != -1");
}

void require_wedge(double q1, double q2) {
    if (!(q1 > 0.0) || !(q2 > 0.0)) throw DomainError("minkowski: point outside the wedge q1, q2 > 0");
}

PhaseFunction minkowski_null_H(double k, double alpha, double beta, double Omega) {
    return PhaseFunction::from_expression(2, [=](std::span<const Jet> z) {
        require_wedge(z[0].value(), z[1].value());
        const Jet& q1 = z[0];
        const Jet& q2 = z[1];
        return z[2] * z[3] - alpha * pow(q2, 2 * k + 1) * pow(q1, -2 * k - 3) -
               0.5 * beta * pow(q2, k) * pow(q1, -k - 2) + 2.0 * Omega * q1 * q2;
    });
}

// the Minkowski base at eta = 2: V = at e^{-4 psi} + bt e^{-2 psi}
BaseSystem minkowski_base(double k, double alpha, double beta) {
    const double k1 = (k + 1) * (k + 1);
    const double at = 2.0 * alpha / k1;
    const double bt = beta / k1;
    if (at == 0.0 && bt == 0.0) {
        // free motion: the seed equation still holds for V = 0, only the family constructor refuses it
        auto g = [](const Jet& psi) { return exp(2.0 * psi); };
        auto V = [](const Jet& psi) { return Jet::constant(psi.nvars(), psi.order(), 0.0); };
        BaseSystem b = ext::make_base(V, g, -4.0, 0.0, "hyperbolic",
                                      {{"C1", 1}, {"C2", 0}, {"C3", 0}, {"C4", 0}, {"eta", 2}});
        return b;
    }
    return make_base_family(1.0, 0.0, at, bt, 2.0);
}

PhaseFunction polar_L(const BaseSystem& base) { return ext::lift_base(base.L); }

}  // namespace

PhasePoint to_pseudo_polar(double k, const PhasePoint& x) {
    require_k(k);
    if (x.dof() != 2) throw std::invalid_argument("to_pseudo_polar: expected (q1, q2, p1, p2)");
    const double q1 = x.q[0], q2 = x.q[1], p1 = x.p[0], p2 = x.p[1];
    require_wedge(q1, q2);
    const double u = std::sqrt(2.0 * q1 * q2);
    const double chi = 0.5 * std::log(q1 / q2);
    const double pu = (p1 * std::exp(chi) + p2 * std::exp(-chi)) / std::sqrt(2.0);
    const double pchi = p1 * q1 - p2 * q2;
    return PhasePoint({u, (k + 1) * chi}, {pu, pchi / (k + 1)});
}

PhasePoint from_pseudo_polar(double k, const PhasePoint& y) {
    require_k(k);
    if (y.dof() != 2) throw std::invalid_argument("from_pseudo_polar: expected (u, psi, p_u, p_psi)");
    const double u = y.q[0], chi = y.q[1] / (k + 1), pu = y.p[0], pchi = (k + 1) * y.p[1];
    if (!(u > 0.0)) throw DomainError("from_pseudo_polar: u must be positive");
    const double q1 = u * std::exp(chi) / std::sqrt(2.0);
    const double q2 = u * std::exp(-chi) / std::sqrt(2.0);
    return PhasePoint({q1, q2}, {(u * pu + pchi) / (2 * q1), (u * pu - pchi) / (2 * q2)});
}

std::vector<PhaseFunction> pseudo_polar_chart(double k) {
    require_k(k);
    auto component = [k](int which) {
        return PhaseFunction::from_expression(2, [k, which](std::span<const Jet> z) {
            require_wedge(z[0].value(), z[1].value());
            const Jet chi = 0.5 * log(z[0] / z[1]);
            switch (which) {
            case 0: return sqrt(2.0 * z[0] * z[1]);
            case 1: return (k + 1) * chi;
            case 2: return (z[2] * exp(chi) + z[3] * exp(-chi)) / std::sqrt(2.0);
            default: return (z[2] * z[0] - z[3] * z[1]) / (k + 1);
            }
        });
    };
    return {component(0), component(1), component(2), component(3)};
}

std::vector<PhaseFunction> null_chart(double k) {
    require_k(k);
    auto component = [k](int which) {
        return PhaseFunction::from_expression(2, [k, which](std::span<const Jet> z) {
            if (!(z[0].value() > 0.0)) throw DomainError("null chart: u must be positive");
            const Jet chi = z[1] / (k + 1);
            const Jet q1 = z[0] * exp(chi) / std::sqrt(2.0);
            const Jet q2 = z[0] * exp(-chi) / std::sqrt(2.0);
            const Jet pchi = (k + 1) * z[3];
            switch (which) {
            case 0: return q1;
            case 1: return q2;
            case 2: return (z[0] * z[2] + pchi) / (2.0 * q1);
            default: return (z[0] * z[2] - pchi) / (2.0 * q2);
            }
        });
    };
    return {component(0), component(1), component(2), component(3)};
}

ModelInstance make_minkowski_polar(Rational k, double alpha, double beta, double Omega) {
    const double kv = k.value();
    require_k(kv);
    const auto [m, n] = minkowski_mn(k);
    const BaseSystem base = minkowski_base(kv, alpha, beta);
    // Omega u^2 = Omega_ext / gamma^2 with gamma = 1/(c u), c = -4
    const ExtensionSpec spec =
        ExtensionSpec::make(m, n, -4.0, 0.0, Omega / 16.0, tagged::GammaProfile::inverse_linear(-4.0));
    ModelInstance mi;
    mi.id = "minkowski-polar";
    mi.H = ext::build_extended_H(spec, base);
    mi.chart = Chart::pseudo_polar;
    mi.geometry = "M2";
    mi.params = {{"k", kv}, {"alpha", alpha}, {"beta", beta}, {"Omega", Omega}, {"m", m}, {"n", n}};
    const auto ci = ext::characteristic_integral(spec, base);
    mi.known_integrals = {{"L", polar_L(base)}, {"K", ci.K}};
    mi.notes = {{"k", k.str()}, {"K_form", ci.label}};
    mi.extension = spec;
    mi.base = base;
    return mi;
}

ModelInstance make_minkowski_H(Rational k, double alpha, double beta, double Omega) {
    const double kv = k.value();
    ModelInstance polar = make_minkowski_polar(k, alpha, beta, Omega);
    const auto chart = pseudo_polar_chart(kv);
    ModelInstance mi = polar;
    mi.id = "minkowski";
    mi.H = minkowski_null_H(kv, alpha, beta, Omega);
    mi.chart = Chart::null_coordinates;
    mi.known_integrals.clear();
    for (const auto& ki : polar.known_integrals) mi.known_integrals.push_back({ki.label, compose(ki.f, chart)});
    return mi;
}

ModelInstance make_minkowski_H(double k, double alpha, double beta, double Omega) {
    require_k(k);
    ModelInstance mi;
    mi.id = "minkowski";
    mi.H = minkowski_null_H(k, alpha, beta, Omega);
    mi.chart = Chart::null_coordinates;
    mi.geometry = "M2";
    mi.params = {{"k", k}, {"alpha", alpha}, {"beta", beta}, {"Omega", Omega}};
    const BaseSystem base = minkowski_base(k, alpha, beta);
    mi.known_integrals = {{"L", compose(polar_L(base), pseudo_polar_chart(k))}};
    mi.notes = {{"K_form", "none (irrational k)"}};
    mi.base = base;
    return mi;
}

// ---------------------------------------------------------------- other extensions

ModelInstance make_generalized_H(const BaseSystem& base, int m, int n, double Omega) {
    if (!(base.c < 0)) throw std::invalid_argument("generalized extension: needs a hyperbolic base (c < 0)");
    const double eta2 = -base.c;
    const ExtensionSpec spec = ExtensionSpec::make(m, n, base.c, base.c0, Omega, tagged::GammaProfile::inverse_linear(base.c));
    ModelInstance mi;
    mi.id = "generalized";
    mi.H = ext::build_extended_H(spec, base);
    mi.chart = Chart::pseudo_polar;
    mi.geometry = "M2";
    mi.params = base.params;
    mi.params["m"] = m;
    mi.params["n"] = n;
    mi.params["Omega"] = Omega;
    mi.params["eta4_Omega"] = eta2 * eta2 * Omega;
    const auto ci = ext::characteristic_integral(spec, base);
    mi.known_integrals = {{"L", ext::lift_base(base.L)}, {"K", ci.K}};
    mi.notes = {{"K_form", ci.label}};
    mi.extension = spec;
    mi.base = base;
    return mi;
}

namespace {

std::string curved_geometry(double c, int kappa) {
    if (c > 0) return kappa > 0 ? "S2" : "H2";
    return kappa > 0 ? "dS2" : "AdS2";
}

ModelInstance curved_common(const BaseSystem& base, double k, double c, int kappa, double Omega) {
    if (kappa != 1 && kappa != -1) throw std::invalid_argument("curved model: kappa must be +1 or -1");
    if (c == 0.0) throw std::invalid_argument("curved model: c = 0");
    if (c != base.c) throw std::invalid_argument("curved model: c must equal the base constant");
    const double k1 = (k + 1) * (k + 1);
    const PhaseFunction L = ext::lift_base(base.L);
    ModelInstance mi;
    mi.id = kappa > 0 ? "curved-h1" : "curved-h2";
    mi.H = PhaseFunction(2, [=](const PhasePoint& x, int r) {
        const Jet cu = c * Jet::variable(4, r, ext::kU, x.q[0]);
        const Jet s = kappa > 0 ? sin(cu) : sinh(cu);
        const Jet t = kappa > 0 ? tan(cu) : tanh(cu);
        if (s.value() == 0.0) throw PoleError("curved model: sin(c u) vanishes", x.q[0]);
        const Jet pu = Jet::variable(4, r, ext::kPu, x.p[0]);
        return 0.5 * pu * pu + k1 * c / square(s) * L.taylor(x, r) + Omega * square(t);
    });
    mi.chart = Chart::polar_like;
    mi.geometry = curved_geometry(c, kappa);
    mi.params = base.params;
    mi.params["k"] = k;
    mi.params["c"] = c;
    mi.params["kappa"] = kappa;
    mi.params["Omega"] = Omega;
    mi.known_integrals = {{"L", L}};
    mi.base = base;
    return mi;
}

}  // namespace

ModelInstance make_curved_H(const BaseSystem& base, double k, double c, int kappa, double Omega) {
    ModelInstance mi = curved_common(base, k, c, kappa, Omega);
    mi.notes = {{"K_form", "none (irrational k)"}};
    return mi;
}

ModelInstance make_curved_H(const BaseSystem& base, Rational k, double c, int kappa, double Omega) {
    ModelInstance mi = curved_common(base, k.value(), c, kappa, Omega);
    // warp (m/n)^2 c / S^2(c u) with gamma = C_kappa/S_kappa: (k+1)^2 = (m/n)^2
    const long num = std::labs(k.num + k.den);
    if (num == 0) throw std::invalid_argument("curved model: k = -1 has no extension");
    const long g = std::gcd(num, k.den);
    const int m = int(num / g), n = int(k.den / g);
    const ExtensionSpec spec =
        ExtensionSpec::make(m, n, c, base.c0, Omega, tagged::GammaProfile::make(c, kappa * c));
    const auto ci = ext::characteristic_integral(spec, base);
    mi.known_integrals.push_back({"K", ci.K});
    mi.params["m"] = m;
    mi.params["n"] = n;
    mi.notes = {{"k", k.str()}, {"K_form", ci.label}};
    mi.extension = spec;
    return mi;
}

ModelInstance make_flat_TTW_H(const BaseSystem& base, int m, int n, double Omega) {
    if (base.family != "trig") throw std::invalid_argument("flat TTW: needs a trigonometric base");
    const double lambda = base.params.at("lambda");
    const double l2 = lambda * lambda;
    const PhaseFunction L = ext::lift_base(base.L);
    const double w = double(m * m) / (l2 * n * n);
    ModelInstance mi;
    mi.id = "flat-ttw";
    mi.H = PhaseFunction(2, [=](const PhasePoint& x, int r) {
        const Jet u = Jet::variable(4, r, ext::kU, x.q[0]);
        if (u.value() == 0.0) throw PoleError("flat TTW: u = 0", 0.0);
        const Jet pu = Jet::variable(4, r, ext::kPu, x.p[0]);
        return 0.5 * pu * pu + w / square(u) * L.taylor(x, r) + l2 * l2 * Omega * square(u);
    });
    mi.chart = Chart::polar_like;
    mi.geometry = "E2";
    mi.params = base.params;
    mi.params["m"] = m;
    mi.params["n"] = n;
    mi.params["Omega"] = Omega;
    const ExtensionSpec spec = ExtensionSpec::make(m, n, base.c, base.c0, Omega, tagged::GammaProfile::inverse_linear(base.c));
    const auto ci = ext::characteristic_integral(spec, base);
    mi.known_integrals = {{"L", L}, {"K", ci.K}};
    mi.notes = {{"K_form", ci.label}};
    mi.extension = spec;
    mi.base = base;
    return mi;
}

// ---------------------------------------------------------------- non-extendable pair

namespace {

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

bool remark_h1_admissible(double d) {
    // d = p or d = (1 - 2p)/2, p natural
    if (d >= 0 && near_integer(d)) return true;
    const double p = (1.0 - 2.0 * d) / 2.0;
    return p >= 0 && near_integer(p);
}

bool remark_h2_admissible(double d) {
    // d = (1 - p)/p, p >= 1, or d = (1 + 2p)/(1 - 2p), p natural
    const double p1 = 1.0 / (d + 1.0);
    if (std::isfinite(p1) && p1 >= 1 - 1e-12 && near_integer(p1)) return true;
    // (1 + 2p) = d (1 - 2p)  =>  p = (d - 1) / (2 (d + 1))
    const double p2 = (d - 1.0) / (2.0 * (d + 1.0));
    return std::isfinite(p2) && p2 >= -1e-12 && near_integer(p2);
}

std::pair<ModelInstance, ModelInstance> make_remark_pair(double d1, double d2) {
    if (d2 == -1.0) throw std::invalid_argument("remark pair: d2 = -1 makes I2 singular");
    auto positive = [](const Jet& q1, const Jet& q2) {
        if (!(q1.value() > 0.0) || !(q2.value() > 0.0)) throw DomainError("remark pair: needs q1, q2 > 0");
    };
    ModelInstance a;
    a.id = "remark-h1";
    a.H = PhaseFunction::from_expression(2, [=](std::span<const Jet> z) {
        positive(z[0], z[1]);
        return 2.0 * z[2] * z[3] + pow(z[1], d1) / sqrt(z[0]);
    });
    a.known_integrals = {{"I1", PhaseFunction::from_expression(2, [=](std::span<const Jet> z) {
                              positive(z[0], z[1]);
                              return 2.0 * z[2] * (z[1] * z[3] - z[2] * z[0]) + pow(z[1], d1 + 1) / sqrt(z[0]);
                          })}};
    a.chart = Chart::null_coordinates;
    a.geometry = "M2";
    a.params = {{"d", d1}};
    a.extendable = false;
    a.notes = {{"d_admissible", remark_h1_admissible(d1) ? "true" : "false"}};

    ModelInstance b;
    b.id = "remark-h2";
    b.H = PhaseFunction::from_expression(2, [=](std::span<const Jet> z) {
        positive(z[0], z[1]);
        return 2.0 * z[2] * z[3] + z[0] * pow(z[1], d2);
    });
    b.known_integrals = {{"I2", PhaseFunction::from_expression(2, [=](std::span<const Jet> z) {
                              positive(z[0], z[1]);
                              return z[2] * z[2] + pow(z[1], d2 + 1) / (d2 + 1);
                          })}};
    b.chart = Chart::null_coordinates;
    b.geometry = "M2";
    b.params = {{"d", d2}};
    b.extendable = false;
    b.notes = {{"d_admissible", remark_h2_admissible(d2) ? "true" : "false"}};
    return {a, b};
}

// ---------------------------------------------------------------- listing

nlohmann::json describe(const ModelInstance& model) {
    nlohmann::json j;
    j["id"] = model.id;
    j["chart"] = chart_name(model.chart);
    j["geometry"] = model.geometry;
    j["params"] = model.params;
    j["extendable"] = model.extendable;
    auto& ints = j["known_integrals"] = nlohmann::json::array();
    for (const auto& k : model.known_integrals) ints.push_back(k.label);
    j["notes"] = model.notes;
    if (model.extension) {
        const auto& s = *model.extension;
        j["extension"] = {{"m", s.m},
                          {"n", s.n},
                          {"c", s.c},
                          {"c0", s.c0},
                          {"Omega", s.Omega},
                          {"gamma",
                           {{"c", s.gamma.c},
                            {"C", s.gamma.C},
                            {"kappa", s.gamma.kappa},
                            {"shift", s.gamma.shift},
                            {"quarter_turn", s.gamma.quarter_turn}}}};
    }
    if (model.base) j["base_family"] = model.base->family;
    return j;
}

nlohmann::json catalog_listing() {
    nlohmann::json list = nlohmann::json::array();
    list.push_back(describe(make_minkowski_H(Rational::make(1, 1), 1.0, 2.0, 0.0)));
    list.push_back(describe(make_minkowski_polar(Rational::make(1, 1), 1.0, 2.0, 0.0)));
    list.push_back(describe(make_generalized_H(make_base_family(1.0, 0.5, 0.7, 0.3, 2.0), 4, 1, 0.0)));
    const BaseSystem trig = make_trig_family(0.8, 0.3, 1.0, 0.5, 1.0);
    const BaseSystem hyp = make_base_family(1.0, 0.5, 0.7, 0.3, 1.0);
    list.push_back(describe(make_curved_H(trig, Rational::make(1, 1), 1.0, 1, 0.0)));
    list.push_back(describe(make_curved_H(trig, Rational::make(1, 1), 1.0, -1, 0.0)));
    list.push_back(describe(make_curved_H(hyp, Rational::make(1, 1), -1.0, 1, 0.0)));
    list.push_back(describe(make_curved_H(hyp, Rational::make(1, 1), -1.0, -1, 0.0)));
    list.push_back(describe(make_flat_TTW_H(trig, 3, 2, 0.0)));
    const auto [h1, h2] = make_remark_pair();
    list.push_back(describe(h1));
    list.push_back(describe(h2));
    return list;
}

}  // namespace extham::catalog
