#pragma once
// Extensions of one-dimensional Hamiltonians L = p_psi^2/2 + V(psi):
// the seed equation X_L^2 G = -2(cL + c0) G, the G_n recursion, the operator
// U_{m,n} = p_u + (m/n^2) gamma(u) X_L, the extended Hamiltonian and its
// characteristic first integrals K_{m,n} and Kbar_{2s,r}.
//
// The extended phase space uses z = (u, psi, p_u, p_psi). Functions of
// (psi, p_psi) alone are promoted with lift_base(); X_L then acts only on the
// (psi, p_psi) block.

#include "extham/phase.h"
#include "extham/tagged_trig.h"

#include <map>
#include <string>
#include <vector>

namespace extham::ext {

enum Coord : int { kU = 0, kPsi = 1, kPu = 2, kPpsi = 3 };

/// One-dimensional natural Hamiltonian together with a seed G of the
/// extension equation.
struct BaseSystem {
    PhaseFunction V;  ///< potential, 1 dof, independent of p_psi
    PhaseFunction L;  ///< p_psi^2/2 + V
    PhaseFunction G;  ///< seed solving X_L^2 G = -2(cL + c0) G
    PhaseFunction g;  ///< G = g(psi) p_psi when the seed has that shape (else empty)
    double c = 0;
    double c0 = 0;
    /// V = (C + s g')/g^2 for the families built here; drives the ladder constant
    double s = 0;
    std::string family;
    std::map<std::string, double> params;
};

/// builds L = p^2/2 + V for a potential given as a jet expression in psi
BaseSystem make_base(std::function<Jet(const Jet& psi)> potential, std::function<Jet(const Jet& psi)> g,
                     double c, double c0, std::string family, std::map<std::string, double> params);

struct ExtensionSpec {
    int m = 1;
    int n = 1;
    double c = 0;
    double c0 = 0;
    double Omega = 0;
    tagged::GammaProfile gamma;

    /// validates m, n >= 1, (c, c0) != (0, 0) and gamma.c == c
    static ExtensionSpec make(int m, int n, double c, double c0, double Omega, tagged::GammaProfile gamma);
    /// gamma = 1/(c u) using the base's (c, c0)
    static ExtensionSpec flat(int m, int n, const BaseSystem& base, double Omega = 0.0);

    double ratio() const { return double(m) / double(n); }
    int gcd() const;
    /// (2m, 2n): same Hamiltonian, used for Kbar when m is odd and Omega != 0
    ExtensionSpec doubled() const;
};

/// X_L^2(G)(x) + 2(c L(x) + c0) G(x)
double g_equation_residual(const BaseSystem& base, double c, double c0, const PhasePoint& x);

/// G_1 = G, G_{k+1} = X_L(G) G_k + (1/k) G X_L(G_k)
PhaseFunction build_Gn_recursive(const BaseSystem& base, double c, double c0, int n);
/// sum_j binom(n, 2j+1) G^{2j+1} (X_L G)^{n-2j-1} (-2)^j (cL + c0)^j
PhaseFunction build_Gn_closed(const BaseSystem& base, double c, double c0, int n);

/// promote a (psi, p_psi) function to the extended phase space
PhaseFunction lift_base(const PhaseFunction& f);

/// scalar function of u added to the extended Hamiltonian
using UProfile = std::function<Jet(const Jet& u)>;

/// H = p_u^2/2 - (m/n)^2 gamma' L + (m/n)^2 c0 gamma^2 + Omega/gamma^2 (+ extra(u))
PhaseFunction build_extended_H(const ExtensionSpec& spec, const BaseSystem& base, UProfile extra = {});

/// p_u f + (m/n^2) gamma X_L f; 1-dof functions are lifted first
PhaseFunction U_apply(const ExtensionSpec& spec, const BaseSystem& base, const PhaseFunction& f);

/// Jets of U^0 f, ..., U^powers f at x, all of the requested order, from a
/// single evaluation of f at order + powers.
std::vector<Jet> u_chain(const ExtensionSpec& spec, const BaseSystem& base, const PhaseFunction& f,
                         const PhasePoint& x, int order, int powers);

/// K_{m,n} = U^m(G_n); requires Omega = 0
PhaseFunction K_mn_recursive(const ExtensionSpec& spec, const BaseSystem& base);
/// P_{m,n,m} G_n + D_{m,n,m} X_L(G_n); requires Omega = 0
PhaseFunction K_mn_closed(const ExtensionSpec& spec, const BaseSystem& base);

/// U^r(G_n) = P G_n + D X_L(G_n), any r >= 0
PhaseFunction U_power_closed(const ExtensionSpec& spec, const BaseSystem& base, int r);

/// sum_j binom(s, j) (2 Omega / gamma^2)^j U^{2(s-j)}(G_r), evaluated through
/// one memoized U chain per point. Requires spec.m == 2s and spec.n == r.
PhaseFunction Kbar(const ExtensionSpec& spec, const BaseSystem& base, int s, int r);
/// same, with Omega supplied as a phase function (coupling-constant metamorphosis)
PhaseFunction Kbar(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, const PhaseFunction& Omega);
/// the same sum with each U power in its P/D closed form; far better conditioned
/// than the chain for large m
PhaseFunction Kbar_closed(const ExtensionSpec& spec, const BaseSystem& base, int s, int r);
PhaseFunction Kbar_closed(const ExtensionSpec& spec, const BaseSystem& base, int s, int r, const PhaseFunction& Omega);
/// the same sum built from independently constructed U powers (no shared chain)
PhaseFunction Kbar_unmemoized(const ExtensionSpec& spec, const BaseSystem& base, int s, int r);
/// (U^2 + 2 Omega gamma^-2)^s (G_r) applied as an operator, s times
PhaseFunction Kbar_operator_form(const ExtensionSpec& spec, const BaseSystem& base, int s, int r);

/// The first integral guaranteed for this extension: K_{m,n} if Omega = 0,
/// Kbar_{m,n} if m is even, Kbar_{2m,2n} otherwise. Built from the closed forms.
struct CharacteristicIntegral {
    PhaseFunction K;
    std::string label;
    int m = 0;
    int n = 0;
};
CharacteristicIntegral characteristic_integral(const ExtensionSpec& spec, const BaseSystem& base);
/// same, with Omega replaced by a phase function
CharacteristicIntegral characteristic_integral(const ExtensionSpec& spec, const BaseSystem& base,
                                               const PhaseFunction& Omega);

struct IndependenceResult {
    int rank = 0;
    std::vector<double> singular_values;
};
/// numerical rank of the Jacobian of fs at x, rows scaled to unit length
/// (threshold 1e-8 relative to the largest singular value)
IndependenceResult functional_independence(const std::vector<PhaseFunction>& fs, const PhasePoint& x,
                                           double threshold = 1e-8);

/// exact binomial coefficient
double binomial(int n, int k);

}  // namespace extham::ext
