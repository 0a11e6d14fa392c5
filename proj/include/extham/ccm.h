#pragma once
// Coupling-constant metamorphosis: H = Hhat - Etilde U with integral K(Etilde)
// becomes H' = (Hhat - E)/U with integral K' = K(Etilde = H').

#include "extham/extension.h"

#include <functional>

namespace extham::ccm {

/// Builds the integral of Hhat - Etilde U for a given Etilde. Etilde arrives as a
/// phase function so that its dependence on the point is differentiated too.
using KBuilder = std::function<PhaseFunction(const PhaseFunction& Etilde)>;

struct CcmSpec {
    PhaseFunction U;  ///< positions only, nonzero on the working domain
    double E = 0.0;
    /// when false, Etilde is passed frozen (value only) and the chain rule through it is dropped
    bool chain_rule = true;
};

struct CcmResult {
    PhaseFunction Hprime;
    PhaseFunction Kprime;
};

CcmResult ccm_transform(const PhaseFunction& Hhat, const KBuilder& builder, const CcmSpec& spec);

/// The extended family p_u^2/2 - m^2/(eta^2 n^2 u^2) L + eta^4 Omega u^2 split as
/// Hhat - Etilde U with U = u^2, Etilde = -eta^4 Omega.
struct ExtendedFamilyCcm {
    PhaseFunction Hhat;
    PhaseFunction U;
    KBuilder builder;
    ext::ExtensionSpec spec;  ///< Omega left at 1 as a placeholder; the builder supplies it
    ext::BaseSystem base;
    double eta = 0;
};
ExtendedFamilyCcm extended_family(const ext::BaseSystem& base, int m, int n);

/// canonical chart u = sqrt(2v), p_u = sqrt(2v) p_v on (u, psi, p_u, p_psi)
PhasePoint to_radial(const PhasePoint& x_u);
PhasePoint from_radial(const PhasePoint& x_v);
/// f(u, psi, p_u, p_psi) rewritten in (v, psi, p_v, p_psi)
PhaseFunction rescale_radial(const PhaseFunction& f);

/// p_v^2/2 - m^2/(4 eta^2 n^2 v^2) L - E/(2v), written out directly
PhaseFunction h2_direct(const ext::BaseSystem& base, int m, int n, double E);

}  // namespace extham::ccm
