#include "extham/jet.h"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace extham {

namespace {

constexpr int kBits = 5;  // bits per exponent in the packed monomial key
static_assert(kMaxJetOrder < (1 << kBits));

struct Layout {
    int nvars = 0;
    std::vector<std::array<std::uint8_t, kMaxJetVars>> exps;
    std::vector<int> degree;
    // lower[k * nvars + i] = index of monomial k with exponent i decreased, or -1
    std::vector<int> lower;
    std::vector<int> index_of;  // dense packed-key lookup
    std::array<std::size_t, kMaxJetOrder + 2> count{};  // count[d] = #monomials of degree < d

    static std::uint32_t key(const std::array<std::uint8_t, kMaxJetVars>& e) {
        std::uint32_t k = 0;
        for (int i = 0; i < kMaxJetVars; ++i) k |= std::uint32_t(e[i]) << (kBits * i);
        return k;
    }
    int find(const std::array<std::uint8_t, kMaxJetVars>& e) const {
        int total = 0;
        for (int i = 0; i < kMaxJetVars; ++i) total += e[i];
        if (total > kMaxJetOrder) return -1;
        return index_of[key(e)];
    }
};

void enumerate(int pos, int remaining, int nvars, std::array<std::uint8_t, kMaxJetVars>& e,
               Layout& out) {
    if (pos == nvars - 1) {
        e[pos] = std::uint8_t(remaining);
        out.exps.push_back(e);
        e[pos] = 0;
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        e[pos] = std::uint8_t(v);
        enumerate(pos + 1, remaining - v, nvars, e, out);
    }
    e[pos] = 0;
}

Layout build_layout(int nvars) {
    Layout l;
    l.nvars = nvars;
    std::array<std::uint8_t, kMaxJetVars> e{};
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        l.count[d] = l.exps.size();
        enumerate(0, d, nvars, e, l);
        while (l.degree.size() < l.exps.size()) l.degree.push_back(d);
    }
    l.count[kMaxJetOrder + 1] = l.exps.size();
    l.index_of.assign(std::size_t(1) << (kBits * nvars), -1);
    for (std::size_t k = 0; k < l.exps.size(); ++k) l.index_of[Layout::key(l.exps[k])] = int(k);
    l.lower.assign(l.exps.size() * nvars, -1);
    for (std::size_t k = 0; k < l.exps.size(); ++k)
        for (int i = 0; i < nvars; ++i)
            if (l.exps[k][i] > 0) {
                auto f = l.exps[k];
                --f[i];
                l.lower[k * nvars + i] = l.find(f);
            }
    return l;
}

const Layout& layout(int nvars) {
    static std::array<std::once_flag, kMaxJetVars + 1> flags;
    static std::array<std::unique_ptr<Layout>, kMaxJetVars + 1> layouts;
    if (nvars < 1 || nvars > kMaxJetVars)
        throw std::invalid_argument("jet: unsupported number of variables " + std::to_string(nvars));
    std::call_once(flags[nvars], [nvars] { layouts[nvars] = std::make_unique<Layout>(build_layout(nvars)); });
    return *layouts[nvars];
}

struct MulEntry {
    std::uint16_t i, j, k;
};

const std::vector<MulEntry>& mul_table(int nvars, int order) {
    static std::array<std::array<std::once_flag, kMaxJetOrder + 1>, kMaxJetVars + 1> flags;
    static std::array<std::array<std::vector<MulEntry>, kMaxJetOrder + 1>, kMaxJetVars + 1> tables;
    std::call_once(flags[nvars][order], [nvars, order] {
        const Layout& l = layout(nvars);
        const std::size_t n = l.count[order + 1];
        auto& t = tables[nvars][order];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (l.degree[i] + l.degree[j] > order) break;  // graded: the rest is higher
                std::array<std::uint8_t, kMaxJetVars> e{};
                for (int v = 0; v < nvars; ++v) e[v] = std::uint8_t(l.exps[i][v] + l.exps[j][v]);
                t.push_back({std::uint16_t(i), std::uint16_t(j), std::uint16_t(l.find(e))});
            }
    });
    return tables[nvars][order];
}

void check_compatible(const Jet& a, const Jet& b) {
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("jet: variable count mismatch (" + std::to_string(a.nvars()) +
                                    " vs " + std::to_string(b.nvars()) + ")");
}

JetReal factorial(int k) {
    JetReal f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

std::size_t jet_size(int nvars, int order) {
    if (order < 0 || order > kMaxJetOrder)
        throw std::invalid_argument("jet: order " + std::to_string(order) + " out of range");
    return layout(nvars).count[order + 1];
}

std::span<const std::uint8_t> jet_monomial(int nvars, std::size_t k) {
    const Layout& l = layout(nvars);
    return {l.exps.at(k).data(), std::size_t(nvars)};
}

Jet::Jet(int nvars, int order)
    : nvars_(std::uint8_t(nvars)), order_(std::uint8_t(order)), c_(jet_size(nvars, order), 0.0) {}

Jet Jet::constant(int nvars, int order, JetReal value) {
    Jet j(nvars, order);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(int nvars, int order, int i, double value) {
    if (i < 0 || i >= nvars) throw std::invalid_argument("jet: variable index out of range");
    Jet j = constant(nvars, order, value);
    if (order >= 1) j.c_[1 + i] = 1.0;
    return j;
}

double Jet::partial(int i) const {
    if (order_ < 1) throw std::logic_error("jet: first derivative requested from order-0 jet");
    return double(c_[1 + i]);
}

double Jet::coefficient(std::span<const int> exponents) const {
    std::array<std::uint8_t, kMaxJetVars> e{};
    int total = 0;
    for (std::size_t v = 0; v < exponents.size() && v < std::size_t(nvars_); ++v) {
        e[v] = std::uint8_t(exponents[v]);
        total += exponents[v];
    }
    if (total > order_) return 0.0;
    return double(c_[layout(nvars_).find(e)]);
}

Jet Jet::derivative(int i) const {
    if (order_ < 1) throw std::logic_error("jet: cannot differentiate an order-0 jet");
    const Layout& l = layout(nvars_);
    Jet r(nvars_, order_ - 1);
    for (std::size_t k = l.count[1]; k < c_.size(); ++k) {
        const int e = l.exps[k][i];
        if (e == 0) continue;
        r.c_[l.lower[k * nvars_ + i]] += c_[k] * e;
    }
    return r;
}

Jet Jet::truncated(int order) const {
    if (order >= order_) return *this;
    Jet r = *this;
    r.order_ = std::uint8_t(order);
    r.c_.resize(jet_size(nvars_, order));
    return r;
}

Jet Jet::embedded(int nvars, std::span<const int> var_map) const {
    if (var_map.size() != std::size_t(nvars_)) throw std::invalid_argument("jet: bad variable map");
    const Layout& src = layout(nvars_);
    const Layout& dst = layout(nvars);
    Jet r(nvars, order_);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        std::array<std::uint8_t, kMaxJetVars> e{};
        for (int v = 0; v < nvars_; ++v) e[var_map[v]] = src.exps[k][v];
        r.c_[dst.find(e)] = c_[k];
    }
    return r;
}

Jet Jet::compose(std::span<const Jet> args) const {
    if (args.size() != std::size_t(nvars_)) throw std::invalid_argument("jet: compose arity mismatch");
    const int m = args[0].nvars();
    int order = order_;
    for (const Jet& a : args) {
        if (a.nvars() != m) throw std::invalid_argument("jet: compose arguments disagree on variables");
        order = std::min(order, a.order());
    }
    std::vector<Jet> delta;
    delta.reserve(args.size());
    for (const Jet& a : args) {
        Jet d = a.truncated(order);
        d.c_[0] = 0.0;
        delta.push_back(std::move(d));
    }
    const Layout& l = layout(nvars_);
    const std::size_t n = l.count[order + 1];
    std::vector<Jet> powers;
    powers.reserve(n);
    powers.push_back(constant(m, order, 1.0));
    Jet result = constant(m, order, c_[0]);
    for (std::size_t k = 1; k < n; ++k) {
        int v = 0;
        while (l.exps[k][v] == 0) ++v;
        powers.push_back(powers[l.lower[k * nvars_ + v]] * delta[v]);
        if (c_[k] != 0.0) result += powers.back() * c_[k];
    }
    return result;
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(*this, o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(*this, o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    *this = *this * reciprocal(o);
    return *this;
}

Jet& Jet::operator*=(JetReal s) {
    for (JetReal& v : c_) v *= s;
    return *this;
}

Jet Jet::apply_series(std::span<const JetReal> coeffs) const {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r = constant(nvars_, order_, coeffs[order_]);
    for (int k = order_ - 1; k >= 0; --k) {
        r = r * h;
        r.c_[0] += coeffs[k];
    }
    return r;
}

Jet operator-(Jet a) { return a *= -1.0; }
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    const int order = std::min(a.order(), b.order());
    Jet r(a.nvars(), order);
    const auto ac = a.coefficients();
    const auto bc = b.coefficients();
    for (const MulEntry& t : mul_table(a.nvars(), order)) r[t.k] += ac[t.i] * bc[t.j];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, JetReal s) { return a += s; }
Jet operator+(JetReal s, Jet a) { return a += s; }
Jet operator-(Jet a, JetReal s) { return a -= s; }
Jet operator-(JetReal s, const Jet& a) { return -a + s; }
Jet operator*(Jet a, JetReal s) { return a *= s; }
Jet operator*(JetReal s, Jet a) { return a *= s; }
Jet operator/(Jet a, JetReal s) { return a /= s; }
Jet operator/(JetReal s, const Jet& a) { return reciprocal(a) * s; }

Jet exp(const Jet& x) {
    std::vector<JetReal> c(x.order() + 1);
    const JetReal e = std::exp(x[0]);
    for (int k = 0; k <= x.order(); ++k) c[k] = e / factorial(k);
    return x.apply_series(c);
}

Jet log(const Jet& x) {
    const JetReal a = x[0];
    if (!(a > 0)) throw std::domain_error("jet log: non-positive argument " + std::to_string(x.value()));
    std::vector<JetReal> c(x.order() + 1);
    c[0] = std::log(a);
    JetReal ak = 1;
    for (int k = 1; k <= x.order(); ++k) {
        ak *= a;
        c[k] = ((k % 2) ? 1.0L : -1.0L) / (k * ak);
    }
    return x.apply_series(c);
}

namespace {
// derivatives of sin (hyperbolic=false) or sinh (true) cycle with period 4 / 2
Jet periodic_series(const Jet& x, JetReal f0, JetReal f1, bool hyperbolic) {
    std::vector<JetReal> c(x.order() + 1);
    for (int k = 0; k <= x.order(); ++k) {
        JetReal d = (k % 2 == 0) ? f0 : f1;
        if (!hyperbolic && (k % 4 == 2 || k % 4 == 3)) d = -d;
        c[k] = d / factorial(k);
    }
    return x.apply_series(c);
}
}  // namespace

Jet sin(const Jet& x) { return periodic_series(x, std::sin(x[0]), std::cos(x[0]), false); }
Jet cos(const Jet& x) { return periodic_series(x, std::cos(x[0]), -std::sin(x[0]), false); }
Jet sinh(const Jet& x) { return periodic_series(x, std::sinh(x[0]), std::cosh(x[0]), true); }
Jet cosh(const Jet& x) { return periodic_series(x, std::cosh(x[0]), std::sinh(x[0]), true); }
Jet tan(const Jet& x) { return sin(x) / cos(x); }
Jet tanh(const Jet& x) { return sinh(x) / cosh(x); }

Jet pow(const Jet& x, double r) {
    const JetReal a = x[0];
    if (r == std::round(r) && std::abs(r) < 64) return powi(x, int(r));
    if (!(a > 0))
        throw std::domain_error("jet pow: non-integer exponent of non-positive base " + std::to_string(x.value()));
    std::vector<JetReal> c(x.order() + 1);
    c[0] = r == 0.5 ? std::sqrt(a) : std::pow(a, JetReal(r));
    for (int k = 1; k <= x.order(); ++k) c[k] = c[k - 1] * (r - k + 1) / (k * a);
    return x.apply_series(c);
}

Jet powi(const Jet& x, int k) {
    if (k < 0) return reciprocal(powi(x, -k));
    Jet result = Jet::constant(x.nvars(), x.order(), 1.0);
    Jet base = x;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

Jet sqrt(const Jet& x) {
    if (!(x.value() > 0)) throw std::domain_error("jet sqrt: non-positive argument " + std::to_string(x.value()));
    return pow(x, 0.5);
}

Jet reciprocal(const Jet& x) {
    const JetReal a = x[0];
    if (a == 0.0 || !std::isfinite(a)) throw std::domain_error("jet reciprocal: zero or non-finite divisor");
    std::vector<JetReal> c(x.order() + 1);
    c[0] = 1.0L / a;
    for (int k = 1; k <= x.order(); ++k) c[k] = -c[k - 1] / a;
    return x.apply_series(c);
}

}  // namespace extham
