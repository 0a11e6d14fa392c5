#include "extham/ccm.h"

#include "extham/errors.h"

#include <cmath>
#include <stdexcept>

namespace extham::ccm {

CcmResult ccm_transform(const PhaseFunction& Hhat, const KBuilder& builder, const CcmSpec& spec) {
    if (!spec.U.valid()) throw std::invalid_argument("ccm: coupling function U missing");
    if (spec.U.dof() != Hhat.dof()) throw std::invalid_argument("ccm: U and Hhat live on different spaces");
    const PhaseFunction U = spec.U;
    const double E = spec.E;
    const int d = Hhat.dof();
    const PhaseFunction Hp(d, [Hhat, U, E, d](const PhasePoint& x, int r) {
        const Jet u = U.taylor(x, r);
        if (u.value() == 0.0) throw DomainError("ccm: U vanishes");
        if (r >= 1)
            for (int i = d; i < 2 * d; ++i)
                if (u.partial(i) != 0.0) throw std::invalid_argument("ccm: U depends on momenta");
        return (Hhat.taylor(x, r) - E) / u;
    });
    const PhaseFunction Kp = builder(spec.chain_rule ? Hp : freeze(Hp));
    if (Kp.dof() != d) throw std::invalid_argument("ccm: builder returned a function on another space");
    return {Hp, Kp};
}

ExtendedFamilyCcm extended_family(const ext::BaseSystem& base, int m, int n) {
    if (!(base.c < 0)) throw std::invalid_argument("ccm: extended family needs c = -eta^2 < 0");
    const double eta = std::sqrt(-base.c);
    const double eta4 = eta * eta * eta * eta;
    const double w = double(m * m) / (eta * eta * n * n);
    const PhaseFunction L = ext::lift_base(base.L);
    ExtendedFamilyCcm out;
    out.Hhat = PhaseFunction(2, [L, w](const PhasePoint& x, int r) {
        const Jet u = Jet::variable(4, r, ext::kU, x.q[0]);
        if (u.value() == 0.0) throw PoleError("ccm: u = 0", 0.0);
        const Jet pu = Jet::variable(4, r, ext::kPu, x.p[0]);
        return 0.5 * pu * pu - w / square(u) * L.taylor(x, r);
    });
    out.U = PhaseFunction(2, [](const PhasePoint& x, int r) {
        const Jet u = Jet::variable(4, r, ext::kU, x.q[0]);
        return u * u;
    });
    out.spec = ext::ExtensionSpec::make(m, n, base.c, base.c0, 1.0, tagged::GammaProfile::inverse_linear(base.c));
    out.base = base;
    out.eta = eta;
    const auto spec = out.spec;
    out.builder = [spec, base, eta4](const PhaseFunction& Etilde) {
        // Omega/gamma^2 = eta^4 Omega u^2 = -Etilde u^2
        return ext::characteristic_integral(spec, base, (-1.0 / eta4) * Etilde).K;
    };
    return out;
}

PhasePoint to_radial(const PhasePoint& x) {
    if (x.dof() != 2) throw std::invalid_argument("radial chart: expected (u, psi, p_u, p_psi)");
    const double u = x.q[0];
    if (!(u > 0.0)) throw DomainError("radial chart: u must be positive");
    return PhasePoint({0.5 * u * u, x.q[1]}, {x.p[0] / u, x.p[1]});
}

PhasePoint from_radial(const PhasePoint& y) {
    if (y.dof() != 2) throw std::invalid_argument("radial chart: expected (v, psi, p_v, p_psi)");
    const double v = y.q[0];
    if (!(v > 0.0)) throw DomainError("radial chart: v must be positive");
    const double u = std::sqrt(2.0 * v);
    return PhasePoint({u, y.q[1]}, {u * y.p[0], y.p[1]});
}

PhaseFunction rescale_radial(const PhaseFunction& f) {
    if (f.dof() != 2) throw std::invalid_argument("rescale_radial: expected a function on (u, psi, p_u, p_psi)");
    auto guard = [](const Jet& v) {
        if (!(v.value() > 0.0)) throw DomainError("rescale_radial: v must be positive");
    };
    std::vector<PhaseFunction> chart = {
        PhaseFunction::from_expression(2, [guard](std::span<const Jet> z) { guard(z[0]); return sqrt(2.0 * z[0]); }),
        PhaseFunction::coordinate(2, 1),
        PhaseFunction::from_expression(2, [guard](std::span<const Jet> z) { guard(z[0]); return sqrt(2.0 * z[0]) * z[2]; }),
        PhaseFunction::coordinate(2, 3),
    };
    return compose(f, std::move(chart));
}

PhaseFunction h2_direct(const ext::BaseSystem& base, int m, int n, double E) {
    const double eta2 = -base.c;
    const double w = double(m * m) / (4.0 * eta2 * n * n);
    const PhaseFunction L = ext::lift_base(base.L);
    return PhaseFunction(2, [L, w, E](const PhasePoint& x, int r) {
        const Jet v = Jet::variable(4, r, ext::kU, x.q[0]);
        if (!(v.value() > 0.0)) throw DomainError("H2: v must be positive");
        const Jet pv = Jet::variable(4, r, ext::kPu, x.p[0]);
        return 0.5 * pv * pv - w / square(v) * L.taylor(x, r) - E / (2.0 * v);
    });
}

}  // namespace extham::ccm
