#pragma once
// Truncated multivariate Taylor polynomials ("jets") used as the augmented
// scalar for exact forward-mode differentiation of phase-space functions.
//
// A jet of order r in n variables stores every Taylor coefficient
//   f_a / a!   for multi-indices |a| <= r
// of a smooth function at an expansion point. Arithmetic and elementary
// functions propagate all coefficients exactly (up to rounding), so nested
// derivatives are obtained by asking for a higher order instead of
// differentiating finite-difference data.

#include <cstdint>
#include <span>
#include <vector>

namespace extham {

/// Coefficient type. Values cross the interface as double; the wider internal
/// type absorbs cancellation inside deep U chains.
using JetReal = long double;

/// Largest supported total degree. Order 10 in four variables (the deepest
/// characteristic integrals plus one bracket) needs ~1000 coefficients.
constexpr int kMaxJetOrder = 20;
/// Largest supported number of variables (2 degrees of freedom).
constexpr int kMaxJetVars = 4;

class Jet {
public:
    Jet() = default;
    /// zero jet
    Jet(int nvars, int order);

    static Jet constant(int nvars, int order, JetReal value);
    /// the coordinate function x_i expanded at x_i = value
    static Jet variable(int nvars, int order, int i, double value);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    std::size_t size() const { return c_.size(); }

    double value() const { return double(c_[0]); }
    /// first partial derivative with respect to variable i
    double partial(int i) const;
    /// raw coefficient access in graded monomial order
    std::span<const JetReal> coefficients() const { return c_; }
    JetReal& operator[](std::size_t k) { return c_[k]; }
    JetReal operator[](std::size_t k) const { return c_[k]; }
    /// coefficient of the monomial with the given exponents (zero if above order)
    double coefficient(std::span<const int> exponents) const;

    /// d/dx_i, one order lower. Requires order() >= 1.
    Jet derivative(int i) const;
    /// drop all terms above the given total degree
    Jet truncated(int order) const;
    /// the same function viewed in a larger variable set: old variable j
    /// becomes new variable var_map[j]
    Jet embedded(int nvars, std::span<const int> var_map) const;
    /// constant jet carrying only the value (all derivatives discarded)
    Jet frozen() const { return constant(nvars_, order_, c_[0]); }

    /// substitute jets for the variables: this is the Taylor expansion of f
    /// at y, and args[i] are jets (in another variable set) whose constant
    /// parts equal y_i. Returns the expansion of f(args) (chain rule to all
    /// orders).
    Jet compose(std::span<const Jet> args) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(JetReal s) { c_[0] += s; return *this; }
    Jet& operator-=(JetReal s) { c_[0] -= s; return *this; }
    Jet& operator*=(JetReal s);
    Jet& operator/=(JetReal s) { return *this *= 1.0L / s; }

    /// f(a + h) = sum_k coeffs[k] h^k where a = value(), h the non-constant part;
    /// coeffs[k] must be f^(k)(a)/k! for k = 0..order().
    Jet apply_series(std::span<const JetReal> coeffs) const;

private:
    std::uint8_t nvars_ = 0;
    std::uint8_t order_ = 0;
    std::vector<JetReal> c_;
};

Jet operator-(Jet a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, JetReal s);
Jet operator+(JetReal s, Jet a);
Jet operator-(Jet a, JetReal s);
Jet operator-(JetReal s, const Jet& a);
Jet operator*(Jet a, JetReal s);
Jet operator*(JetReal s, Jet a);
Jet operator/(Jet a, JetReal s);
Jet operator/(JetReal s, const Jet& a);

Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet tanh(const Jet& x);
/// real power; a non-integer exponent needs a positive base
Jet pow(const Jet& x, double r);
/// integer power by repeated multiplication (any sign of the base)
Jet powi(const Jet& x, int k);
Jet sqrt(const Jet& x);
Jet reciprocal(const Jet& x);
inline Jet square(const Jet& x) { return x * x; }

/// number of monomials of total degree <= order in nvars variables
std::size_t jet_size(int nvars, int order);
/// exponent vector of the k-th monomial in graded order
std::span<const std::uint8_t> jet_monomial(int nvars, std::size_t k);

}  // namespace extham
