#pragma once
// Curvature-tagged trigonometric functions S_k, C_k, T_k and the profiles
// gamma(u) solving  gamma' + c gamma^2 + C = 0.

#include "extham/jet.h"

namespace extham::tagged {

/// sin(sqrt(k) x)/sqrt(k) for k>0, x for k=0, sinh(sqrt(-k) x)/sqrt(-k) for k<0.
double S(double kappa, double x);
/// cos(sqrt(k) x), 1, cosh(sqrt(-k) x)
double C(double kappa, double x);
double T(double kappa, double x);

Jet S(double kappa, const Jet& x);
Jet C(double kappa, const Jet& x);
Jet T(double kappa, const Jet& x);

/// Solution of gamma' + c gamma^2 + C = 0 up to translations of u.
///
/// `quarter_turn` selects the translated real forms: for kappa > 0 the
/// argument c(u+shift) is advanced by a quarter period (sin <-> cos), for
/// kappa < 0 by the imaginary quarter period i*pi/(2 sqrt(-kappa)), which
/// keeps gamma real and turns coth into tanh (sinh^-2 into -cosh^-2).
struct GammaProfile {
    double c = 0;
    double C = 0;
    /// C/c, kept explicitly so c = 0 is handled uniformly (unused then)
    double kappa = 0;
    double shift = 0;
    bool quarter_turn = false;

    /// validated constructor; computes kappa = C/c when c != 0
    static GammaProfile make(double c, double C, double shift = 0.0, bool quarter_turn = false);
    /// gamma = 1/(c u), the profile of the flat extensions (C = 0)
    static GammaProfile inverse_linear(double c) { return make(c, 0.0); }
};

/// gamma(u); throws PoleError where S_k(c(u+shift)) vanishes
double gamma(const GammaProfile& g, double u);
/// gamma'(u), computed from its closed form -c/S_k^2 (or -C when c = 0)
double gamma_prime(const GammaProfile& g, double u);

Jet gamma(const GammaProfile& g, const Jet& u);
Jet gamma_prime(const GammaProfile& g, const Jet& u);

/// |gamma' + c gamma^2 + C|, the defining-ODE residual
double ode_residual(const GammaProfile& g, double u);

}  // namespace extham::tagged
