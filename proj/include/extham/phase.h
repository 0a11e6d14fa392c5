#pragma once
// Phase-space points, smooth phase functions with exact derivatives, Poisson
// brackets and Hamiltonian vector fields.
//
// Conventions:
//   coordinates are ordered z = (q^1..q^d, p_1..p_d);
//   {f, g} = sum_i df/dq^i dg/dp_i - df/dp_i dg/dq^i;
//   X_L(f) = {f, L}.

#include "extham/jet.h"

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace extham {

struct PhasePoint {
    std::vector<double> q;
    std::vector<double> p;

    PhasePoint() = default;
    /// throws std::invalid_argument on length mismatch, unsupported size or non-finite entries
    PhasePoint(std::vector<double> q, std::vector<double> p);
    static PhasePoint from_coordinates(std::span<const double> z);

    int dof() const { return int(q.size()); }
    std::vector<double> coordinates() const;
    double coordinate(int i) const { return i < dof() ? q[i] : p[i - dof()]; }
};

/// A scalar function on the phase space of `dof` degrees of freedom.
///
/// Evaluation returns the Taylor jet of the requested order at a point, so any
/// derivative up to that order is exact. Composite functions (brackets,
/// products, X_L images) evaluate their operands at a higher order and
/// differentiate the resulting jets. Values are immutable and cheap to copy.
class PhaseFunction {
public:
    using Rule = std::function<Jet(const PhasePoint&, int order)>;
    /// expression over seeded coordinate jets z = (q, p)
    using Expression = std::function<Jet(std::span<const Jet> z)>;

    PhaseFunction() = default;
    PhaseFunction(int dof, Rule rule);

    static PhaseFunction from_expression(int dof, Expression e);
    static PhaseFunction constant(int dof, double value);
    /// the coordinate z_index
    static PhaseFunction coordinate(int dof, int index);

    int dof() const { return dof_; }
    bool valid() const { return bool(rule_); }

    Jet taylor(const PhasePoint& x, int order) const;
    double operator()(const PhasePoint& x) const { return taylor(x, 0).value(); }
    /// dz-gradient, ordered like PhasePoint::coordinates()
    std::vector<double> gradient(const PhasePoint& x) const;

private:
    int dof_ = 0;
    std::shared_ptr<const Rule> rule_;
};

PhaseFunction operator+(const PhaseFunction& f, const PhaseFunction& g);
PhaseFunction operator-(const PhaseFunction& f, const PhaseFunction& g);
PhaseFunction operator*(const PhaseFunction& f, const PhaseFunction& g);
PhaseFunction operator/(const PhaseFunction& f, const PhaseFunction& g);
PhaseFunction operator-(const PhaseFunction& f);
PhaseFunction operator+(const PhaseFunction& f, JetReal s);
PhaseFunction operator*(JetReal s, const PhaseFunction& f);
PhaseFunction operator*(const PhaseFunction& f, JetReal s);

/// pointwise image under a jet-valued scalar function (sqrt, pow, ...)
PhaseFunction map_value(const PhaseFunction& f, std::function<Jet(const Jet&)> op);

/// the function with its derivatives discarded: value f(x), zero gradient
PhaseFunction freeze(const PhaseFunction& f);

/// d f / d z_index as a phase function
PhaseFunction partial(const PhaseFunction& f, int index);

/// f viewed on a phase space with `dof` degrees of freedom; coordinate j of f
/// (in z ordering) is coordinate var_map[j] of the larger space
PhaseFunction lift(const PhaseFunction& f, int dof, std::vector<int> var_map);

/// f o T where chart[j] gives f's coordinate z_j as a function on the new space
PhaseFunction compose(const PhaseFunction& f, std::vector<PhaseFunction> chart);

/// bracket of two jets of order r+1 on a dof-dimensional space, as an order-r jet
Jet bracket_jets(const Jet& f, const Jet& g, int dof);

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x);
PhaseFunction bracket(const PhaseFunction& f, const PhaseFunction& g);
/// x -> {f, L}(x); closed under composition so X_L^k f is well defined
PhaseFunction x_l_apply(const PhaseFunction& L, const PhaseFunction& f);

/// bracket value together with the scale |grad f| |grad g| used for relative tolerances
struct BracketSample {
    double value = 0;
    double scale = 0;
    double relative() const { return scale > 0 ? std::abs(value) / scale : std::abs(value); }
};
BracketSample bracket_sample(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x);

/// Axis-aligned sampling box: positions in [q_lo, q_hi], momenta in [p_lo, p_hi],
/// optionally overridden per coordinate.
struct SamplingBox {
    double q_lo = 0.3, q_hi = 2.0;
    double p_lo = -2.0, p_hi = 2.0;
    /// per-coordinate (lo, hi) overrides in z ordering; empty = defaults
    std::vector<std::pair<double, double>> overrides;
};

/// Reproducible uniform sampler: std::mt19937_64 with a 53-bit mantissa map,
/// so draws are identical across platforms and standard libraries.
class PointSampler {
public:
    static constexpr const char* kGeneratorName = "mt19937_64/53-bit-uniform";

    PointSampler(std::uint64_t seed, SamplingBox box = {});
    double uniform(double lo, double hi);
    PhasePoint draw(int dof);
    std::vector<PhasePoint> draw(int dof, int count);

private:
    std::mt19937_64 engine_;
    SamplingBox box_;
};

}  // namespace extham
