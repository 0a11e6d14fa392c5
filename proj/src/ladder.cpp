#include "extham/ladder.h"

#include "extham/errors.h"

#include <cmath>
#include <stdexcept>

namespace extham::ladder {

LadderData LadderData::from_base(const ext::BaseSystem& base) {
    LadderData d;
    d.F = partial(base.g, 0);
    d.eta2 = -base.c;
    d.c1 = -base.s * base.c * base.c;
    d.c0 = base.c0;
    d.base = base;
    return d;
}

LadderData LadderData::with_F(const ext::BaseSystem& base, std::function<Jet(const Jet& psi)> F, double c1) {
    LadderData d;
    d.F = PhaseFunction::from_expression(1, [F](std::span<const Jet> z) { return F(z[0]); });
    d.eta2 = -base.c;
    d.c1 = c1;
    d.c0 = base.c0;
    d.base = base;
    return d;
}

Residuals ladder_residuals(const LadderData& data, double psi) {
    const PhasePoint x({psi}, {0.0});
    const Jet F = data.F.taylor(x, 2);
    const Jet V = data.base.V.taylor(x, 1);
    const double F0 = F.value();
    const double F1 = F.partial(0);
    const double F2 = F.derivative(0).partial(0);
    const double V0 = V.value();
    const double V1 = V.partial(0);
    return {F2 - data.eta2 * F0, V1 * F1 + 2.0 * data.eta2 * V0 * F0 + data.c1};
}

PhaseFunction ladder_f(const LadderData& data) {
    const double eta2 = data.eta2, c0 = data.c0;
    return map_value(data.base.L, [eta2, c0](const Jet& L) {
        const Jet rad = 2.0 * (eta2 * L + c0);
        if (!(rad.value() > 0.0)) throw DomainError("ladder: eta^2 L + c0 must be positive");
        return sqrt(rad);
    });
}

PhaseFunction ladder_function(const LadderData& data, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("ladder: sign must be +1 or -1");
    const PhaseFunction f = ladder_f(data);
    const PhaseFunction F = data.F;
    const PhaseFunction dF = partial(data.F, 0);
    const double c1 = data.c1;
    return PhaseFunction(1, [=](const PhasePoint& x, int r) {
        const Jet fj = f.taylor(x, r);
        const Jet p = Jet::variable(2, r, 1, x.p[0]);
        return double(sign) * dF.taylor(x, r) * p + F.taylor(x, r) * fj + c1 / fj;
    });
}

double ladder_eigen_residual(const LadderData& data, const PhasePoint& x, int sign) {
    return ladder_eigen_diagnostics(data, x, sign).printed;
}

EigenDiagnostics ladder_eigen_diagnostics(const LadderData& data, const PhasePoint& x, int sign) {
    const PhaseFunction Fs = ladder_function(data, sign);
    const PhaseFunction X1 = x_l_apply(data.base.L, Fs);
    const PhaseFunction X2 = x_l_apply(data.base.L, X1);
    const double fv = ladder_f(data)(x);
    const double Fv = Fs(x);
    EigenDiagnostics d;
    const double x2 = X2(x);
    d.printed = x2 - fv * Fv;
    d.first_order = X1(x) - sign * fv * Fv;
    d.second_order = x2 - fv * fv * Fv;
    d.scale = 1.0 + std::abs(Fv) * (1.0 + fv * fv);
    return d;
}

}  // namespace extham::ladder
