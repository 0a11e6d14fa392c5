#pragma once
// Central finite differences on plain values, independent of the jet machinery.

#include "extham/phase.h"

#include <cmath>
#include <functional>
#include <vector>

namespace fd {

using Scalar = std::function<double(const std::vector<double>&)>;

inline Scalar values_of(const extham::PhaseFunction& f) {
    return [f](const std::vector<double>& z) { return f(extham::PhasePoint::from_coordinates(z)); };
}

inline double partial(const Scalar& f, std::vector<double> z, int i, double h = 1e-5) {
    const double z0 = z[i];
    z[i] = z0 + h;
    const double fp = f(z);
    z[i] = z0 - h;
    const double fm = f(z);
    return (fp - fm) / (2 * h);
}

inline std::vector<double> gradient(const Scalar& f, const std::vector<double>& z, double h = 1e-5) {
    std::vector<double> g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = partial(f, z, int(i), h);
    return g;
}

inline double bracket(const Scalar& f, const Scalar& g, const std::vector<double>& z, double h = 1e-5) {
    const auto df = gradient(f, z, h), dg = gradient(g, z, h);
    const std::size_t d = z.size() / 2;
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += df[i] * dg[d + i] - df[d + i] * dg[i];
    return s;
}

/// x -> {f, L}(x) by differences
inline Scalar x_l(const Scalar& L, const Scalar& f, double h = 1e-5) {
    return [L, f, h](const std::vector<double>& z) { return bracket(f, L, z, h); };
}

}  // namespace fd
