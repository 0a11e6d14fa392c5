#pragma once
// Ladder-function conditions for the base families:
//   F'' - eta^2 F = 0,   V' F' + 2 eta^2 V F + c1 = 0,
// with F = g', c1 = -C4 eta^3, and the ladder functions
//   F+- = +-F' p + F f + c1/f,   f = sqrt(2 (eta^2 L + c0)).
// eta^2 = -c, so the trigonometric families enter with eta^2 = -lambda^2.

#include "extham/extension.h"

namespace extham::ladder {

struct LadderData {
    PhaseFunction F;  ///< function of psi on the base phase space
    double c1 = 0;
    double eta2 = 0;
    double c0 = 0;
    ext::BaseSystem base;

    /// F = g', c1 = -s eta^4 (= -C4 eta^3 for the hyperbolic family)
    static LadderData from_base(const ext::BaseSystem& base);
    /// a custom F (given as a jet expression in psi) against the base potential
    static LadderData with_F(const ext::BaseSystem& base, std::function<Jet(const Jet& psi)> F, double c1);
};

struct Residuals {
    double r1 = 0;
    double r2 = 0;
};
Residuals ladder_residuals(const LadderData& data, double psi);

/// f = sqrt(2 (eta^2 L + c0)); DomainError where the radicand is not positive
PhaseFunction ladder_f(const LadderData& data);
/// F+ for sign = +1, F- for sign = -1
PhaseFunction ladder_function(const LadderData& data, int sign);

/// X_L^2(F+-)(x) - f(x) F+-(x), the relation as printed
double ladder_eigen_residual(const LadderData& data, const PhasePoint& x, int sign);

/// the printed relation next to its first- and second-order variants
struct EigenDiagnostics {
    double printed = 0;       ///< X_L^2 F - f F
    double first_order = 0;   ///< X_L F - sign f F
    double second_order = 0;  ///< X_L^2 F - f^2 F
    double scale = 0;         ///< 1 + |F| (1 + f^2)
};
EigenDiagnostics ladder_eigen_diagnostics(const LadderData& data, const PhasePoint& x, int sign);

}  // namespace extham::ladder
