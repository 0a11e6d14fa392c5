#include "extham/catalog.h"
#include "extham/errors.h"
#include "extham/extension.h"

#include "fd_oracle.h"

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <cmath>

using namespace extham;
using namespace extham::ext;

namespace {

// the Minkowski base for k = 1, alpha = 1, beta = 2: V = 0.5 e^{-4 psi} + 0.5 e^{-2 psi}
BaseSystem section3_base() { return catalog::make_base_family(1.0, 0.0, 0.5, 0.5, 2.0); }

std::vector<BaseSystem> all_bases() {
    return {section3_base(),
            catalog::make_base_family(1.0, 0.5, 0.7, 0.3, 2.0),
            catalog::make_base_family(0.8, 1.3, -0.4, 0.9, 1.5),
            catalog::make_base_family(1.0, 0.5, 0.7, 0.0, 2.0),
            catalog::make_trig_family(0.8, 0.3, 1.0, 0.5, 1.0),
            catalog::make_cosh_family(0.6, 0.4, 1.2, 0.3),
            catalog::make_sinh_family(0.6, 0.4, 1.2, 0.3)};
}

SamplingBox box_for(const BaseSystem& b) {
    SamplingBox box;
    if (b.family == "trig") box.overrides = {{0.3, 2.0}, {0.2, 2.4}, {-2, 2}, {-2, 2}};
    return box;
}

double max_bracket(const PhaseFunction& H, const PhaseFunction& K, std::uint64_t seed, int n, SamplingBox box = {}) {
    PointSampler s(seed, box);
    double worst = 0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, bracket_sample(H, K, s.draw(2)).relative());
    return worst;
}

}  // namespace

TEST(Extension, SpecValidation) {
    const auto g = tagged::GammaProfile::inverse_linear(-4);
    EXPECT_THROW(ExtensionSpec::make(0, 1, -4, 0, 0, g), std::invalid_argument);
    EXPECT_THROW(ExtensionSpec::make(1, 0, -4, 0, 0, g), std::invalid_argument);
    EXPECT_THROW(ExtensionSpec::make(1, 1, -1, 0, 0, g), std::invalid_argument);
    EXPECT_THROW(ExtensionSpec::make(1, 1, 0, 0, 0, tagged::GammaProfile::make(0, 1)), std::invalid_argument);
    const auto s = ExtensionSpec::make(6, 4, -4, 0, 0, g);
    EXPECT_EQ(s.m, 6);
    EXPECT_EQ(s.gcd(), 2);
    EXPECT_EQ(s.doubled().n, 8);
}

TEST(Extension, SeedEquationHoldsForEveryFamily) {
    for (const auto& b : all_bases()) {
        PointSampler s(31, box_for(b));
        for (int i = 0; i < 50; ++i) {
            const auto z = s.draw(2);
            const PhasePoint x({z.q[1]}, {z.p[1]});
            const double scale = 1 + std::abs(b.G(x)) * (1 + std::abs(b.L(x)));
            EXPECT_LE(std::abs(g_equation_residual(b, b.c, b.c0, x)), 1e-10 * scale) << b.family;
        }
    }
}

TEST(Extension, SeedResidualAgreesWithDifferenceOracle) {
    const auto b = catalog::make_base_family(1.0, 0.5, 0.7, 0.3, 2.0);
    const auto L = fd::values_of(b.L), G = fd::values_of(b.G);
    const auto x2 = fd::x_l(L, fd::x_l(L, G, 1e-4), 1e-4);
    const PhasePoint x({0.4}, {0.9});
    const double oracle = x2(x.coordinates()) + 2 * b.c * b.L(x) * b.G(x);
    EXPECT_NEAR(oracle, 0.0, 1e-5);
    // a wrong c is detected
    EXPECT_GT(std::abs(g_equation_residual(b, -3.0, 0.0, x)), 1e-2);
}

TEST(Extension, GnRecursionBaseCases) {
    const auto b = section3_base();
    const auto XG = x_l_apply(b.L, b.G);
    PointSampler s(2);
    for (const auto& z : s.draw(1, 10)) {
        EXPECT_EQ(build_Gn_recursive(b, b.c, b.c0, 1)(z), b.G(z));
        EXPECT_EQ(build_Gn_closed(b, b.c, b.c0, 1)(z), b.G(z));
        const double two = 2 * b.G(z) * XG(z);
        EXPECT_NEAR(build_Gn_recursive(b, b.c, b.c0, 2)(z), two, 1e-13 * (1 + std::abs(two)));
        EXPECT_NEAR(build_Gn_closed(b, b.c, b.c0, 2)(z), two, 1e-13 * (1 + std::abs(two)));
    }
    EXPECT_THROW(build_Gn_recursive(b, b.c, b.c0, 0), std::invalid_argument);
}

TEST(Extension, GnRecursiveEqualsClosedForm) {
    for (const auto& b : all_bases())
        for (int n = 1; n <= 5; ++n) {
            const auto r = build_Gn_recursive(b, b.c, b.c0, n);
            const auto c = build_Gn_closed(b, b.c, b.c0, n);
            PointSampler s(40 + n, box_for(b));
            for (int i = 0; i < 20; ++i) {
                const auto z = s.draw(2);
                const PhasePoint x({z.q[1]}, {z.p[1]});
                const double a = r(x);
                EXPECT_LE(std::abs(a - c(x)), 1e-11 * (1 + std::abs(a))) << b.family << " n=" << n;
            }
        }
}

TEST(Extension, ExtendedHamiltonianCoefficients) {
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(4, 1, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
    const auto H = build_extended_H(spec, b);
    const PhasePoint x({1.0, 0.3}, {0.7, -0.2});
    const PhasePoint xb({0.3}, {-0.2});
    EXPECT_NEAR(H(x), 0.5 * 0.49 - 4 * b.L(xb), 1e-14);
    const auto s1 = ExtensionSpec::make(4, 1, -4, 0, 1.0, tagged::GammaProfile::inverse_linear(-4));
    const PhasePoint y({0.6, 0.3}, {0.7, -0.2});
    EXPECT_NEAR(build_extended_H(s1, b)(y) - build_extended_H(spec, b)(y), 16 * 0.36, 1e-13);
    const auto extra = build_extended_H(spec, b, [](const Jet& u) { return 3.0 * u; });
    EXPECT_NEAR(extra(y) - build_extended_H(spec, b)(y), 1.8, 1e-14);
    EXPECT_THROW(H(PhasePoint({0.0, 0.3}, {0.7, -0.2})), PoleError);
}

TEST(Extension, UOperatorSmallCases) {
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(1, 1, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
    const auto U1 = U_apply(spec, b, PhaseFunction::constant(1, 1.0));
    const auto UG = U_apply(spec, b, b.G);
    const auto XG = lift_base(x_l_apply(b.L, b.G));
    const auto Gl = lift_base(b.G);
    PointSampler s(8);
    for (const auto& x : s.draw(2, 10)) {
        EXPECT_NEAR(U1(x), x.p[0], 1e-15);
        const double want = x.p[0] * Gl(x) + tagged::gamma(spec.gamma, x.q[0]) * XG(x);
        EXPECT_NEAR(UG(x), want, 1e-13 * (1 + std::abs(want)));
        EXPECT_NEAR(K_mn_recursive(spec, b)(x), want, 1e-13 * (1 + std::abs(want)));
        EXPECT_NEAR(K_mn_closed(spec, b)(x), want, 1e-13 * (1 + std::abs(want)));
    }
}

TEST(Extension, UPowersMatchClosedForm) {
    const auto b = catalog::make_base_family(1.0, 0.5, 0.7, 0.3, 2.0);
    const auto spec = ExtensionSpec::make(3, 2, b.c, 0, 0, tagged::GammaProfile::inverse_linear(b.c));
    const auto G2 = build_Gn_recursive(b, b.c, b.c0, 2);
    PointSampler s(12);
    for (const auto& x : s.draw(2, 20)) {
        const auto chain = u_chain(spec, b, G2, x, 0, 3);
        for (int r = 0; r <= 3; ++r) {
            const double want = U_power_closed(spec, b, r)(x);
            EXPECT_NEAR(chain[r].value(), want, 1e-10 * (1 + std::abs(want))) << "r=" << r;
        }
        const double twice = U_apply(spec, b, U_apply(spec, b, G2))(x);
        EXPECT_NEAR(chain[2].value(), twice, 1e-12 * (1 + std::abs(twice)));
    }
}

TEST(Extension, KmnIsAFirstIntegral) {
    const auto b = section3_base();
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 2}, {4, 1}, {5, 3}}) {
        const auto spec = ExtensionSpec::make(m, n, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
        const auto H = build_extended_H(spec, b);
        EXPECT_LE(max_bracket(H, K_mn_recursive(spec, b), 100 + m, 50), 1e-9) << m << "," << n;
        EXPECT_LE(max_bracket(H, lift_base(b.L), 200 + m, 20), 1e-12);
    }
}

TEST(Extension, KmnRequiresZeroOmega) {
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(2, 1, -4, 0, 0.3, tagged::GammaProfile::inverse_linear(-4));
    EXPECT_THROW(K_mn_recursive(spec, b), std::invalid_argument);
    EXPECT_THROW(K_mn_closed(spec, b), std::invalid_argument);
    EXPECT_THROW(Kbar(spec, b, 2, 1), std::invalid_argument);
}

TEST(Extension, KbarIsAFirstIntegral) {
    for (const auto& b : {section3_base(), catalog::make_base_family(1.0, 0.5, 0.7, 0.3, 2.0)})
        for (auto [m, r] : std::vector<std::pair<int, int>>{{2, 1}, {4, 3}, {6, 1}})
            for (double Om : {0.3, -0.7}) {
                const auto spec = ExtensionSpec::make(m, r, b.c, 0, Om, tagged::GammaProfile::inverse_linear(b.c));
                const auto H = build_extended_H(spec, b);
                EXPECT_LE(max_bracket(H, Kbar(spec, b, m / 2, r), 300 + m, 50), 1e-9) << m << "," << r << " " << Om;
            }
}

TEST(Extension, KbarRoutesAgree) {
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(4, 3, -4, 0, 0.3, tagged::GammaProfile::inverse_linear(-4));
    const auto a = Kbar(spec, b, 2, 3), u = Kbar_unmemoized(spec, b, 2, 3), o = Kbar_operator_form(spec, b, 2, 3);
    const auto c = Kbar_closed(spec, b, 2, 3);
    PointSampler s(5);
    for (const auto& x : s.draw(2, 10)) {
        const double v = a(x);
        EXPECT_NEAR(u(x), v, 1e-11 * (1 + std::abs(v)));
        EXPECT_NEAR(o(x), v, 1e-11 * (1 + std::abs(v)));
        EXPECT_NEAR(c(x), v, 1e-11 * (1 + std::abs(v)));
        const auto ga = a.gradient(x), gu = u.gradient(x);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(ga[i], gu[i], 1e-10 * (1 + std::abs(ga[i])));
    }
}

TEST(Extension, ClosedFormsStayAccurateAtHighPower) {
    // m = 8: the U chain loses digits to cancellation, the closed form does not
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(8, 1, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
    const auto H = build_extended_H(spec, b);
    EXPECT_LE(max_bracket(H, K_mn_closed(spec, b), 63, 50), 1e-13);
    EXPECT_LE(max_bracket(H, K_mn_recursive(spec, b), 63, 50), 1e-8);
    const auto so = ExtensionSpec::make(8, 1, -4, 0, 0.3, tagged::GammaProfile::inverse_linear(-4));
    EXPECT_LE(max_bracket(build_extended_H(so, b), Kbar_closed(so, b, 4, 1), 64, 50), 1e-12);
}

TEST(Extension, CharacteristicIntegralParityRule) {
    const auto b = section3_base();
    const auto g = tagged::GammaProfile::inverse_linear(-4);
    EXPECT_EQ(characteristic_integral(ExtensionSpec::make(3, 2, -4, 0, 0, g), b).label, "K_{3,2}");
    EXPECT_EQ(characteristic_integral(ExtensionSpec::make(4, 3, -4, 0, 0.3, g), b).label, "Kbar_{4,3}");
    const auto odd = characteristic_integral(ExtensionSpec::make(3, 2, -4, 0, 0.3, g), b);
    EXPECT_EQ(odd.label, "Kbar_{6,4}");
    const auto H = build_extended_H(ExtensionSpec::make(3, 2, -4, 0, 0.3, g), b);
    EXPECT_LE(max_bracket(H, odd.K, 77, 50), 1e-9);
}

TEST(Extension, FunctionalIndependence) {
    const auto b = section3_base();
    const auto spec = ExtensionSpec::make(4, 1, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
    const auto H = build_extended_H(spec, b);
    const auto L = lift_base(b.L);
    const auto K = K_mn_recursive(spec, b);
    PointSampler s(19);
    for (const auto& x : s.draw(2, 20)) {
        EXPECT_EQ(functional_independence({H, H * H, H + 1.0}, x).rank, 1);
        EXPECT_EQ(functional_independence({H, L}, x).rank, 2);
        const auto r = functional_independence({H, L, K}, x);
        EXPECT_EQ(r.rank, 3);
        EXPECT_GT(r.singular_values[2], 1e-8 * r.singular_values[0]);
    }
}

TEST(Extension, MomentumDegreeOfK) {
    // K_{m,n}(q, lambda p) is a polynomial in lambda of degree m + 2n - 1
    const auto b = section3_base();
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 2}, {4, 1}, {5, 3}}) {
        const auto spec = ExtensionSpec::make(m, n, -4, 0, 0, tagged::GammaProfile::inverse_linear(-4));
        const auto K = K_mn_recursive(spec, b);
        const PhasePoint x0({0.9, 0.4}, {0.6, -0.5});
        const int D = m + 2 * n - 1;
        auto fit_residual = [&](int degree) {
            const int samples = D + 2;
            Eigen::MatrixXd A(samples, degree + 1);
            Eigen::VectorXd y(samples);
            for (int j = 0; j < samples; ++j) {
                const double lam = double(j + 1) / samples;
                for (int d = 0; d <= degree; ++d) A(j, d) = std::pow(lam, d);
                y(j) = K(PhasePoint(x0.q, {lam * x0.p[0], lam * x0.p[1]}));
            }
            const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
            return (A * c - y).norm() / y.norm();
        };
        EXPECT_LE(fit_residual(D), 1e-12) << m << "," << n;
        if (D >= 2) EXPECT_GT(fit_residual(D - 1), 1e-10) << m << "," << n;
    }
}

TEST(Extension, BinomialIsExact) {
    EXPECT_EQ(binomial(12, 6), 924.0);
    EXPECT_EQ(binomial(5, 0), 1.0);
    EXPECT_EQ(binomial(5, 7), 0.0);
}
