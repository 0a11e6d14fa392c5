#pragma once
// Concrete extended Hamiltonians: the Minkowski family in null coordinates,
// its pseudo-polar chart, the hyperbolic and trigonometric base families, the
// curved and flat extensions, and a pair of superintegrable Hamiltonians that
// are not extensions.

#include "extham/extension.h"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace extham::catalog {

/// exact rational number p/q, q > 0, stored reduced
struct Rational {
    long num = 0;
    long den = 1;

    static Rational make(long num, long den);
    /// parses "p/q" or an integer "p"; rejects decimals
    static Rational parse(const std::string& text);
    double value() const { return double(num) / double(den); }
    std::string str() const;
};

enum class Chart { null_coordinates, pseudo_polar, polar_like };
std::string chart_name(Chart c);

struct KnownIntegral {
    std::string label;
    PhaseFunction f;
};

struct ModelInstance {
    std::string id;
    PhaseFunction H;
    std::vector<KnownIntegral> known_integrals;
    Chart chart = Chart::polar_like;
    /// configuration manifold: "M2", "E2", "S2", "H2", "dS2", "AdS2"
    std::string geometry;
    std::map<std::string, double> params;
    bool extendable = true;
    std::optional<ext::ExtensionSpec> extension;
    std::optional<ext::BaseSystem> base;
    /// free-form metadata (e.g. d_admissible)
    std::map<std::string, std::string> notes;

    /// the integral with the given label; throws std::out_of_range
    const PhaseFunction& integral(const std::string& label) const;
};

// ---- base systems ----

/// g = C1 e^{eta psi} + C2 e^{-eta psi},
/// V = (C3 + C4 (C1 e^{eta psi} - C2 e^{-eta psi})) / g^2, c = -eta^2, c0 = 0
ext::BaseSystem make_base_family(double C1, double C2, double C3, double C4, double eta);

/// real form of the family at imaginary eta: theta = lambda psi + psi0,
/// g = A sin(theta), V = (alpha + beta cos(theta)) / sin^2(theta), c = +lambda^2
ext::BaseSystem make_trig_family(double alpha, double beta, double A, double psi0, double lambda);

/// essential-parameter forms at eta = 2:
/// g = A cosh(2 psi + psi0), V = (alpha + beta sinh(2 psi + psi0)) / cosh^2(2 psi + psi0)   (C1 C2 > 0)
ext::BaseSystem make_cosh_family(double alpha, double beta, double A, double psi0);
/// g = A sinh(2 psi + psi0), V = (alpha + beta cosh(2 psi + psi0)) / sinh^2(2 psi + psi0)   (C1 C2 < 0)
ext::BaseSystem make_sinh_family(double alpha, double beta, double A, double psi0);

// ---- Minkowski family ----

/// (m, n) with m/n = 2|k+1| in lowest terms; throws for k = -1
std::pair<int, int> minkowski_mn(Rational k);

/// H = p1 p2 - alpha q2^{2k+1} q1^{-2k-3} - (beta/2) q2^k q1^{-k-2} + 2 Omega q1 q2 on the wedge
/// q1, q2 > 0, with L and the characteristic integral pulled back from the pseudo-polar chart.
ModelInstance make_minkowski_H(Rational k, double alpha, double beta, double Omega);
/// real k: only L is attached (no characteristic integral)
ModelInstance make_minkowski_H(double k, double alpha, double beta, double Omega);

/// the same system as an extension in (u, psi, p_u, p_psi):
/// H = p_u^2/2 - (k+1)^2/u^2 (p_psi^2/2 + at e^{-4 psi} + bt e^{-2 psi}) + Omega u^2,
/// at = 2 alpha/(k+1)^2, bt = beta/(k+1)^2
ModelInstance make_minkowski_polar(Rational k, double alpha, double beta, double Omega);

/// u = sqrt(2 q1 q2), psi = (k+1)/2 ln(q1/q2), momenta by the cotangent lift
PhasePoint to_pseudo_polar(double k, const PhasePoint& x);
PhasePoint from_pseudo_polar(double k, const PhasePoint& y);
/// the two transforms as component functions, for pulling functions back
std::vector<PhaseFunction> pseudo_polar_chart(double k);
std::vector<PhaseFunction> null_chart(double k);

// ---- generalized, curved and flat extensions ----

/// p_u^2/2 - m^2/(eta^2 n^2 u^2) L + eta^4 Omega u^2 for a hyperbolic base (c = -eta^2)
ModelInstance make_generalized_H(const ext::BaseSystem& base, int m, int n, double Omega);

/// kappa = +1: p_u^2/2 + (k+1)^2 c / sin^2(c u) L + Omega tan^2(c u)
/// kappa = -1: p_u^2/2 + (k+1)^2 c / sinh^2(c u) L + Omega tanh^2(c u)
/// c must equal the base constant. Integrals are attached for rational k.
ModelInstance make_curved_H(const ext::BaseSystem& base, Rational k, double c, int kappa, double Omega);
ModelInstance make_curved_H(const ext::BaseSystem& base, double k, double c, int kappa, double Omega);

/// p_u^2/2 + m^2/(lambda^2 n^2 u^2) L + lambda^4 Omega u^2 for a trigonometric base
ModelInstance make_flat_TTW_H(const ext::BaseSystem& base, int m, int n, double Omega);

/// H1 = 2 p1 p2 + q2^d1 / sqrt(q1) with I1, and H2 = 2 p1 p2 + q1 q2^d2 with I2.
/// Both are flagged not extendable; notes["d_admissible"] records whether d
/// belongs to the listed exponent families.
std::pair<ModelInstance, ModelInstance> make_remark_pair(double d1 = 2.0, double d2 = 3.0);
bool remark_h1_admissible(double d);
bool remark_h2_admissible(double d);

/// machine-readable description of a model (id, params, chart, integrals, flags)
nlohmann::json describe(const ModelInstance& model);
/// the default catalog listing
nlohmann::json catalog_listing();

}  // namespace extham::catalog
