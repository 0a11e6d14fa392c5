#include "extham/catalog.h"
#include "extham/dynamics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace extham;
using namespace extham::dyn;

namespace {

PhaseFunction free_particle() {
    return PhaseFunction::from_expression(1, [](std::span<const Jet> z) { return 0.5 * z[1] * z[1]; });
}

catalog::ModelInstance section3() { return catalog::make_minkowski_polar(catalog::Rational::make(1, 1), 1.0, 2.0, 0.0); }

IntegratorOptions radial_guard() {
    IntegratorOptions opt;
    opt.radius = [](const PhasePoint& x) { return x.q[0]; };
    return opt;
}

}  // namespace

TEST(Dynamics, FreeParticleIsExact) {
    const auto tr = integrate(free_particle(), PhasePoint({0.0}, {1.0}), 1e-2, 100);
    ASSERT_EQ(tr.status, Status::completed);
    ASSERT_EQ(tr.states.size(), 101u);
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        EXPECT_NEAR(tr.states[k].q[0], tr.times[k], 1e-12);
        EXPECT_EQ(tr.states[k].p[0], 1.0);
    }
    EXPECT_EQ(tr.method, "implicit-midpoint");
}

TEST(Dynamics, QuadraticInvariantsArePreserved) {
    const auto H = PhaseFunction::from_expression(1, [](std::span<const Jet> z) {
        return 0.5 * z[1] * z[1] + 0.5 * (z[0] - 3.0) * (z[0] - 3.0);
    });
    const auto tr = integrate(H, PhasePoint({3.5}, {0.2}), 0.1, 500);
    EXPECT_LE(drift_report(tr, {H})[0], 1e-13);
}

TEST(Dynamics, ExtendedSystemConservesItsIntegrals) {
    const auto mi = section3();
    const auto tr = integrate(mi.H, PhasePoint({3.0, 1.0}, {2.0, 0.5}), 1e-3, 10000);
    ASSERT_EQ(tr.status, Status::completed);
    const auto d = drift_report(tr, {mi.H, mi.integral("L"), mi.integral("K")});
    EXPECT_LE(d[0], 1e-8);
    EXPECT_LE(d[1], 1e-6);
    EXPECT_LE(d[2], 1e-6);
}

TEST(Dynamics, SecondOrderDriftScaling) {
    const auto mi = section3();
    const PhasePoint x0({3.0, 1.0}, {2.0, 0.5});
    const auto coarse = integrate(mi.H, x0, 1e-3, 10000);
    const auto fine = integrate(mi.H, x0, 5e-4, 20000);
    const double ratio = drift_report(coarse, {mi.H})[0] / drift_report(fine, {mi.H})[0];
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
}

TEST(Dynamics, TimeReversal) {
    const auto mi = section3();
    const PhasePoint x0({3.0, 1.0}, {2.0, 0.5});
    const auto fwd = integrate(mi.H, x0, 1e-3, 2000);
    const auto back = integrate(mi.H, fwd.states.back(), -1e-3, 2000);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(back.states.back().coordinate(i), x0.coordinate(i), 1e-9);
}

TEST(Dynamics, InfallingOrbitEndsWithDomainExit) {
    const auto mi = section3();
    const auto tr = integrate(mi.H, PhasePoint({1.0, 0.0}, {0.2, 0.5}), 1e-3, 10000, radial_guard());
    EXPECT_EQ(tr.status, Status::domain_exit);
    EXPECT_GT(tr.exit_step, 0);
    EXPECT_EQ(int(tr.states.size()), tr.exit_step);
    EXPECT_EQ(status_name(tr.status), "domain-exit");
    EXPECT_FALSE(tr.exit_reason.empty());
    const auto start = integrate(mi.H, PhasePoint({0.01, 0.0}, {0.2, 0.5}), 1e-3, 10, radial_guard());
    EXPECT_EQ(start.exit_step, 0);
}

TEST(Dynamics, ConvergenceFailureIsReported) {
    const auto mi = section3();
    IntegratorOptions opt;
    opt.max_iterations = 1;
    try {
        integrate(mi.H, PhasePoint({3.0, 1.0}, {2.0, 0.5}), 1e-2, 10, opt);
        FAIL() << "expected a convergence error";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.step(), 1);
    }
}

TEST(Dynamics, ArgumentValidation) {
    EXPECT_THROW(integrate(free_particle(), PhasePoint({1.0}, {1.0}), 0.0, 10), std::invalid_argument);
    EXPECT_THROW(integrate(free_particle(), PhasePoint({1.0}, {1.0}), 1e-2, -1), std::invalid_argument);
}

TEST(Dynamics, DriftReport) {
    const auto tr = integrate(free_particle(), PhasePoint({1.0}, {1.0}), 0.5, 4);
    const auto d = drift_report(tr, {PhaseFunction::constant(1, 2.0), PhaseFunction::coordinate(1, 0)});
    EXPECT_EQ(d[0], 0.0);
    EXPECT_NEAR(d[1], 2.0 / 2.0, 1e-14);
}

TEST(Dynamics, CsvLayout) {
    const auto mi = section3();
    const auto tr = integrate(mi.H, PhasePoint({3.0, 1.0}, {2.0, 0.5}), 1e-3, 3);
    std::ostringstream os;
    write_csv(os, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "t,q1,q2,p1,p2");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 4);
    std::istringstream again(os.str());
    std::getline(again, line);
    std::getline(again, line);
    EXPECT_EQ(line, "0,3,1,2,0.5");
}
