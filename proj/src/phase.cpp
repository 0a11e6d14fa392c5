#include "extham/phase.h"

#include "extham/errors.h"

#include <cmath>
#include <stdexcept>

namespace extham {

PhasePoint::PhasePoint(std::vector<double> q_, std::vector<double> p_) : q(std::move(q_)), p(std::move(p_)) {
    if (q.size() != p.size()) throw std::invalid_argument("phase point: q and p lengths differ");
    if (q.empty() || 2 * q.size() > std::size_t(kMaxJetVars))
        throw std::invalid_argument("phase point: unsupported number of degrees of freedom");
    for (double v : q)
        if (!std::isfinite(v)) throw std::invalid_argument("phase point: non-finite position");
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("phase point: non-finite momentum");
}

PhasePoint PhasePoint::from_coordinates(std::span<const double> z) {
    const std::size_t d = z.size() / 2;
    if (2 * d != z.size()) throw std::invalid_argument("phase point: odd coordinate count");
    return PhasePoint({z.begin(), z.begin() + d}, {z.begin() + d, z.end()});
}

std::vector<double> PhasePoint::coordinates() const {
    std::vector<double> z(q);
    z.insert(z.end(), p.begin(), p.end());
    return z;
}

PhaseFunction::PhaseFunction(int dof, Rule rule) : dof_(dof), rule_(std::make_shared<const Rule>(std::move(rule))) {
    if (dof < 1 || 2 * dof > kMaxJetVars) throw std::invalid_argument("phase function: unsupported dof");
}

PhaseFunction PhaseFunction::from_expression(int dof, Expression e) {
    return PhaseFunction(dof, [dof, e = std::move(e)](const PhasePoint& x, int order) {
        std::vector<Jet> z;
        z.reserve(2 * dof);
        const auto c = x.coordinates();
        for (int i = 0; i < 2 * dof; ++i) z.push_back(Jet::variable(2 * dof, order, i, c[i]));
        return e(z);
    });
}

PhaseFunction PhaseFunction::constant(int dof, double value) {
    return PhaseFunction(dof, [dof, value](const PhasePoint&, int order) { return Jet::constant(2 * dof, order, value); });
}

PhaseFunction PhaseFunction::coordinate(int dof, int index) {
    if (index < 0 || index >= 2 * dof) throw std::invalid_argument("phase function: coordinate index out of range");
    return PhaseFunction(dof, [dof, index](const PhasePoint& x, int order) {
        return Jet::variable(2 * dof, order, index, x.coordinate(index));
    });
}

Jet PhaseFunction::taylor(const PhasePoint& x, int order) const {
    if (!rule_) throw std::logic_error("phase function: empty");
    if (x.dof() != dof_)
        throw std::invalid_argument("phase function: point has " + std::to_string(x.dof()) + " dof, expected " +
                                    std::to_string(dof_));
    Jet j = (*rule_)(x, order);
    if (!std::isfinite(j.value())) throw DomainError("phase function: non-finite value");
    return j;
}

std::vector<double> PhaseFunction::gradient(const PhasePoint& x) const {
    const Jet j = taylor(x, 1);
    std::vector<double> g(2 * dof_);
    for (int i = 0; i < 2 * dof_; ++i) {
        g[i] = j.partial(i);
        if (!std::isfinite(g[i])) throw DomainError("phase function: non-finite derivative");
    }
    return g;
}

namespace {
void same_space(const PhaseFunction& f, const PhaseFunction& g) {
    if (f.dof() != g.dof()) throw std::invalid_argument("phase functions live on different phase spaces");
}
}  // namespace

PhaseFunction operator+(const PhaseFunction& f, const PhaseFunction& g) {
    same_space(f, g);
    return PhaseFunction(f.dof(), [f, g](const PhasePoint& x, int r) { return f.taylor(x, r) + g.taylor(x, r); });
}

PhaseFunction operator-(const PhaseFunction& f, const PhaseFunction& g) {
    same_space(f, g);
    return PhaseFunction(f.dof(), [f, g](const PhasePoint& x, int r) { return f.taylor(x, r) - g.taylor(x, r); });
}

PhaseFunction operator*(const PhaseFunction& f, const PhaseFunction& g) {
    same_space(f, g);
    return PhaseFunction(f.dof(), [f, g](const PhasePoint& x, int r) { return f.taylor(x, r) * g.taylor(x, r); });
}

PhaseFunction operator/(const PhaseFunction& f, const PhaseFunction& g) {
    same_space(f, g);
    return PhaseFunction(f.dof(), [f, g](const PhasePoint& x, int r) {
        const Jet d = g.taylor(x, r);
        if (d.value() == 0.0) throw DomainError("phase function: division by zero");
        return f.taylor(x, r) / d;
    });
}

PhaseFunction operator-(const PhaseFunction& f) {
    return PhaseFunction(f.dof(), [f](const PhasePoint& x, int r) { return -f.taylor(x, r); });
}

PhaseFunction operator+(const PhaseFunction& f, JetReal s) {
    return PhaseFunction(f.dof(), [f, s](const PhasePoint& x, int r) { return f.taylor(x, r) + s; });
}

PhaseFunction operator*(JetReal s, const PhaseFunction& f) {
    return PhaseFunction(f.dof(), [f, s](const PhasePoint& x, int r) { return f.taylor(x, r) * s; });
}

PhaseFunction operator*(const PhaseFunction& f, JetReal s) { return s * f; }

PhaseFunction map_value(const PhaseFunction& f, std::function<Jet(const Jet&)> op) {
    return PhaseFunction(f.dof(), [f, op = std::move(op)](const PhasePoint& x, int r) { return op(f.taylor(x, r)); });
}

PhaseFunction freeze(const PhaseFunction& f) {
    return PhaseFunction(f.dof(), [f](const PhasePoint& x, int r) { return Jet::constant(2 * f.dof(), r, f(x)); });
}

PhaseFunction partial(const PhaseFunction& f, int index) {
    if (index < 0 || index >= 2 * f.dof()) throw std::invalid_argument("partial: coordinate index out of range");
    return PhaseFunction(f.dof(), [f, index](const PhasePoint& x, int r) { return f.taylor(x, r + 1).derivative(index); });
}

PhaseFunction lift(const PhaseFunction& f, int dof, std::vector<int> var_map) {
    if (var_map.size() != std::size_t(2 * f.dof())) throw std::invalid_argument("lift: variable map size mismatch");
    for (int v : var_map)
        if (v < 0 || v >= 2 * dof) throw std::invalid_argument("lift: variable map out of range");
    return PhaseFunction(dof, [f, dof, var_map = std::move(var_map)](const PhasePoint& x, int r) {
        const auto z = x.coordinates();
        std::vector<double> y(var_map.size());
        for (std::size_t j = 0; j < var_map.size(); ++j) y[j] = z[var_map[j]];
        return f.taylor(PhasePoint::from_coordinates(y), r).embedded(2 * dof, var_map);
    });
}

PhaseFunction compose(const PhaseFunction& f, std::vector<PhaseFunction> chart) {
    if (chart.size() != std::size_t(2 * f.dof())) throw std::invalid_argument("compose: chart size mismatch");
    const int dof = chart.front().dof();
    for (const auto& c : chart)
        if (c.dof() != dof) throw std::invalid_argument("compose: chart components disagree on dof");
    return PhaseFunction(dof, [f, chart = std::move(chart)](const PhasePoint& x, int r) {
        std::vector<Jet> args;
        args.reserve(chart.size());
        std::vector<double> y;
        for (const auto& c : chart) {
            args.push_back(c.taylor(x, r));
            y.push_back(args.back().value());
        }
        return f.taylor(PhasePoint::from_coordinates(y), r).compose(args);
    });
}

Jet bracket_jets(const Jet& f, const Jet& g, int dof) {
    Jet r = f.derivative(0) * g.derivative(dof) - f.derivative(dof) * g.derivative(0);
    for (int i = 1; i < dof; ++i) r += f.derivative(i) * g.derivative(dof + i) - f.derivative(dof + i) * g.derivative(i);
    return r;
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x) {
    same_space(f, g);
    const auto df = f.gradient(x);
    const auto dg = g.gradient(x);
    const int d = f.dof();
    double s = 0;
    for (int i = 0; i < d; ++i) s += df[i] * dg[d + i] - df[d + i] * dg[i];
    return s;
}

PhaseFunction bracket(const PhaseFunction& f, const PhaseFunction& g) {
    same_space(f, g);
    return PhaseFunction(f.dof(), [f, g](const PhasePoint& x, int r) {
        return bracket_jets(f.taylor(x, r + 1), g.taylor(x, r + 1), f.dof());
    });
}

PhaseFunction x_l_apply(const PhaseFunction& L, const PhaseFunction& f) { return bracket(f, L); }

BracketSample bracket_sample(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x) {
    same_space(f, g);
    const auto df = f.gradient(x);
    const auto dg = g.gradient(x);
    const int d = f.dof();
    double s = 0, nf = 0, ng = 0;
    for (int i = 0; i < d; ++i) s += df[i] * dg[d + i] - df[d + i] * dg[i];
    for (int i = 0; i < 2 * d; ++i) {
        nf += df[i] * df[i];
        ng += dg[i] * dg[i];
    }
    return {s, std::sqrt(nf) * std::sqrt(ng)};
}

PointSampler::PointSampler(std::uint64_t seed, SamplingBox box) : engine_(seed), box_(std::move(box)) {}

double PointSampler::uniform(double lo, double hi) {
    const double u = double(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

PhasePoint PointSampler::draw(int dof) {
    std::vector<double> z(2 * dof);
    for (int i = 0; i < 2 * dof; ++i) {
        if (std::size_t(i) < box_.overrides.size())
            z[i] = uniform(box_.overrides[i].first, box_.overrides[i].second);
        else
            z[i] = i < dof ? uniform(box_.q_lo, box_.q_hi) : uniform(box_.p_lo, box_.p_hi);
    }
    return PhasePoint::from_coordinates(z);
}

std::vector<PhasePoint> PointSampler::draw(int dof, int count) {
    std::vector<PhasePoint> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(draw(dof));
    return pts;
}

}  // namespace extham
