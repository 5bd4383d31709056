#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "hpdyn/catalog.hpp"
#include "hpdyn/herglotz.hpp"

using namespace hpdyn;
using D = DensityComponent;
using M = FiniteMeasure;

namespace {

std::vector<cplx> grid5() {
    std::vector<cplx> g;
    for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0})
        for (double y : {0.1, 0.5, 1.0, 3.0, 10.0}) g.emplace_back(x, y);
    return g;
}

cplx ev(const HerglotzTriplet& f, cplx z) { return evaluate(f, UpperHalfPoint(z)).z(); }

// (1 + t z)/(t - z) summed over atoms
cplx atom_sum(const M& mu, cplx z) {
    cplx s{};
    for (const auto& a : mu.atoms()) s += a.mass * (1.0 + a.location * z) / (a.location - z);
    return s;
}

} // namespace

TEST(HerglotzTriplet, RejectsBadCoefficients) {
    EXPECT_THROW(HerglotzTriplet(-1, 0, M::zero()), DomainError);
    EXPECT_THROW(HerglotzTriplet(INFINITY, 0, M::zero()), DomainError);
    EXPECT_THROW(HerglotzTriplet(1, NAN, M::zero()), DomainError);
}

TEST(Evaluate, CauchyKernelIsIdenticallyI) {
    const HerglotzTriplet f(0, 0, M::density(D::cauchy(1)));
    for (const cplx& z : grid5()) EXPECT_LT(std::abs(ev(f, z) - cplx(0, 1)), 1e-9) << z;
    EXPECT_LT(std::abs(ev(f, {2, 3}) - cplx(0, 1)), 1e-10);
    // far from the origin the same identity holds
    EXPECT_LT(std::abs(ev(f, {1e7, 1}) - cplx(0, 1)), 1e-7);
    EXPECT_LT(std::abs(ev(f, {0, 1e9}) - cplx(0, 1)), 1e-9);
}

TEST(Evaluate, ClosedForms) {
    EXPECT_EQ(ev(HerglotzTriplet(2, 1, M::zero()), {0, 1}), cplx(1, 2));
    for (double m : {0.1, 1.0, 4.0}) {
        const HerglotzTriplet f(1, 0, M::atom(0, m));
        EXPECT_LT(std::abs(ev(f, {0, 1}) - cplx(0, 1 + m)), 1e-14) << m;
    }
}

TEST(Evaluate, GaussianAgainstReferenceQuadrature) {
    // mpmath quad at 50 digits of 2z + int (1+tz)/(t-z) phi(t) dt
    const HerglotzTriplet f(2, 0, M::density(D::gaussian(1)));
    const struct {
        cplx z, w;
    } ref[] = {
        {{2.0, 3.0}, {3.7643453732108800038523129461, 6.4581750663015888773502828784}},
        {{0.3, 0.5}, {0.50649173394674122021694878335, 2.1645582468259239520885172240}},
        {{-1.0, 0.25}, {-1.5641758621672678501590685311, 1.8101725143425778910953303972}},
    };
    for (const auto& r : ref) EXPECT_LT(std::abs(ev(f, r.z) - r.w), 1e-9 * std::abs(r.w)) << r.z;
}

TEST(Evaluate, AtomOnlyMatchesRationalFormula) {
    const M mu({{-2, 1}, {3, 2}, {0.5, 0.25}}, {});
    const HerglotzTriplet f(1.5, -0.75, mu);
    for (const cplx& z : grid5()) {
        const cplx expect = 1.5 * z - 0.75 + atom_sum(mu, z);
        EXPECT_LT(std::abs(ev(f, z) - expect), 1e-12 * std::max(1.0, std::abs(expect))) << z;
    }
}

TEST(Evaluate, AdditiveInTheMeasure) {
    const M a = M::density(D::gaussian(0.7)) + M::atom(1, 0.5);
    const M b = M::density(D::compact_uniform(1.3, -2, 1));
    const HerglotzTriplet fa(0, 0, a), fb(0, 0, b), fab(0, 0, a + b);
    for (const cplx& z : grid5()) {
        const cplx s = ev(fa, z) + ev(fb, z);
        EXPECT_LT(std::abs(ev(fab, z) - s), 1e-10 * std::max(1.0, std::abs(s))) << z;
    }
}

TEST(ImagExcess, Examples) {
    const double m = 0.6;
    const HerglotzTriplet f(1, 0, M::atom(0, m));
    // f(iy) = i(y + m/y): kernel integral m/y^2, excess m/y
    EXPECT_NEAR(excess_kernel_integral(f, 2.0), m / 4, 1e-15);
    EXPECT_NEAR(imag_excess(f, 2.0), m / 2, 1e-15);
    EXPECT_NEAR(imag_excess(f, 2.0), ev(f, {0, 2}).imag() - 2.0, 1e-14);
    for (double y : {0.01, 1.0, 1e8}) EXPECT_EQ(imag_excess(HerglotzTriplet(3, 1, M::zero()), y), 0.0);
    EXPECT_NEAR(imag_excess(HerglotzTriplet(0, 0, M::density(D::cauchy(1))), 1.0), 1.0, 1e-10);
    EXPECT_THROW(imag_excess(f, 0.0), DomainError);
}

TEST(ImagExcess, GaussianKernelAgainstReferenceQuadrature) {
    // mpmath: int (1+t^2)/(t^2+y^2) phi(t) dt
    const HerglotzTriplet f(2, 0, M::density(D::gaussian(1)));
    EXPECT_NEAR(excess_kernel_integral(f, 0.5), 2.3145466846805385200917797140, 1e-10);
    EXPECT_NEAR(excess_kernel_integral(f, 2.0), 0.36794615606791829016259849969, 1e-10);
    EXPECT_NEAR(excess_kernel_integral(f, 100.0), 0.00019996001798801048867453141482, 1e-14);
}

TEST(Classify, ByAlpha) {
    EXPECT_EQ(classify(HerglotzTriplet(2, 0, M::zero())), MapClass::Hyperbolic);
    EXPECT_EQ(classify(HerglotzTriplet(1, 0, M::zero())), MapClass::ParabolicCandidate);
    EXPECT_EQ(classify(HerglotzTriplet(0.5, 0, M::zero())), MapClass::NotDenjoyWolffInfinity);
}

// Julia: z -> f(z) - alpha z maps H into its closure.
TEST(CatalogInvariants, JuliaLowerBoundOnGrid) {
    for (const auto& e : catalog())
        for (const cplx& z : grid5()) EXPECT_GE(ev(e.map, z).imag(), e.map.alpha() * z.imag() - 1e-9) << e.name << z;
}

TEST(CatalogInvariants, RealPartAtIIsBeta) {
    for (const auto& e : catalog()) EXPECT_NEAR(ev(e.map, {0, 1}).real(), e.map.beta(), 1e-9) << e.name;
}

bool has_log_tail(const HerglotzTriplet& f) {
    for (const auto& d : f.mu().densities())
        if (d.family == DensityFamily::log_tail) return true;
    return false;
}

TEST(CatalogInvariants, AngularDerivativeAlongTheAxis) {
    for (const auto& e : catalog()) {
        if (has_log_tail(e.map)) continue;
        const cplx q = ev(e.map, {0, 1e6}) / cplx(0, 1e6);
        EXPECT_NEAR(std::abs(q / e.map.alpha() - 1.0), 0.0, 1e-4) << e.name;
    }
}

// Im f(iy)/y - alpha is the kernel integral, which for log_tail decays only
// like 1/log y: about 0.07 at y = 1e6. Check the decay instead of the 1e-4 mark.
TEST(CatalogInvariants, AngularDerivativeLogTailDecay) {
    for (const auto& e : catalog()) {
        if (!has_log_tail(e.map)) continue;
        double prev = INFINITY;
        for (double y : {1e2, 1e4, 1e6, 1e12, 1e24, 1e48}) {
            const double gap = std::abs(ev(e.map, {0, y}) / cplx(0, y) / e.map.alpha() - 1.0);
            EXPECT_LT(gap, prev) << e.name << " " << y;
            EXPECT_LT(gap * std::log(y), 1.0) << e.name << " " << y;
            prev = gap;
        }
    }
}
