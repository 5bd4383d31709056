#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "hpdyn/catalog.hpp"
#include "hpdyn/koenigs.hpp"

using namespace hpdyn;
using M = FiniteMeasure;

namespace {

const UpperHalfPoint I0{0.0, 1.0};

HerglotzTriplet affine(double a, double b) { return HerglotzTriplet(a, b, M::zero()); }

} // namespace

TEST(Valiron, AffineIsIdentity) {
    for (std::size_t depth : {1u, 10u, 40u, 2000u}) {
        const auto h = KoenigsApprox::valiron(affine(2, 0), depth);
        for (const cplx& z : unit_grid()) EXPECT_LT(std::abs(h(z) - z), 1e-12 * std::abs(z)) << depth << z;
        EXPECT_EQ(abel_residual(h, unit_grid()), 0.0);
    }
}

TEST(Valiron, ShiftedAffine) {
    // f^n(z) = 2^n (z+1) - 1, |f^n(i)| -> 2^n sqrt2
    const auto h = KoenigsApprox::valiron(affine(2, 1), 40);
    for (const cplx& z : unit_grid()) EXPECT_LT(std::abs(h(z) - (z + 1.0) / std::sqrt(2.0)), 1e-8) << z;
    EXPECT_LT(abel_residual(h, unit_grid()), 1e-8);
}

TEST(Valiron, ResidualShrinksWithDepth) {
    double prev = INFINITY;
    for (std::size_t depth : {2u, 5u, 10u, 20u}) {
        const double r = abel_residual(KoenigsApprox::valiron(affine(2, 1), depth), unit_grid());
        EXPECT_LT(r, prev) << depth;
        prev = r;
    }
}

TEST(Valiron, ArgumentMatchesOrbitAngle) {
    const auto& f = catalog_entry("logtail2").map;
    const auto h = KoenigsApprox::valiron(f, 500);
    const auto a = orbit_angle(iterate(f, I0, 500));
    ASSERT_EQ(a.tag, LimitTag::Finite);
    EXPECT_NEAR(std::arg(h(cplx(0, 1))), a.theta, 1e-3);
}

TEST(Valiron, Guards) {
    EXPECT_THROW(KoenigsApprox::valiron(affine(1, 1), 10), ClassificationError);
    EXPECT_THROW(KoenigsApprox::valiron(affine(2, 0), 0), DomainError);
}

TEST(Pommerenke, Translation) {
    const auto h = KoenigsApprox::pommerenke(affine(1, 1), I0, 100);
    EXPECT_EQ(h.drift(), 1.0);
    for (const cplx& z : unit_grid()) EXPECT_LT(std::abs(h(z) - z), 1e-12) << z;
    EXPECT_EQ(abel_residual(h, unit_grid()), 0.0);
}

TEST(Pommerenke, AtomPerturbedTranslation) {
    const auto h = KoenigsApprox::pommerenke(catalog_entry("translate2_atom").map, I0, 10000);
    // b = lim (x_{n+1} - x_n)/y_n = beta / I
    const auto shift = shift_classification(iterate(h.map(), I0, 10000));
    ASSERT_TRUE(shift.finite);
    EXPECT_NEAR(h.drift() * shift.I, 2.0, 1e-6);
    EXPECT_LT(abel_residual(h, unit_grid()), 1e-4);
}

TEST(Pommerenke, ZeroStepIsDriftZero) {
    EXPECT_THROW(KoenigsApprox::pommerenke(catalog_entry("sqrtgrowth").map, I0, 2000), DriftZero);
    EXPECT_THROW(KoenigsApprox::pommerenke(catalog_entry("vertical").map, I0, 2000), DriftZero);
    EXPECT_THROW(KoenigsApprox::pommerenke(affine(2, 0), I0, 100), ClassificationError);
}

TEST(Conformality, IdentityAndSyntheticMaps) {
    const auto id = conformality_at_infinity([](const cplx& z) { return z; });
    ASSERT_EQ(id.verdict, Conformality::Conformal);
    EXPECT_LT(std::abs(id.derivative - 1.0), 1e-12);
    const auto s = conformality_at_infinity([](const cplx& z) { return z + std::sqrt(z); });
    ASSERT_EQ(s.verdict, Conformality::Conformal);
    EXPECT_LT(std::abs(s.derivative - 1.0), 1e-3);
}

TEST(Conformality, KoenigsMaps) {
    const auto c = conformality_at_infinity(KoenigsApprox::valiron(affine(2, 1), 40));
    ASSERT_EQ(c.verdict, Conformality::Conformal);
    EXPECT_LT(std::abs(c.derivative - 1.0 / std::sqrt(2.0)), 1e-6);
    const auto lt = conformality_at_infinity(KoenigsApprox::valiron(catalog_entry("logtail2").map, 200));
    EXPECT_EQ(lt.verdict, Conformality::NotConformal);
    for (const char* name : {"atom2", "gaussian2", "uniform2"})
        EXPECT_EQ(conformality_at_infinity(KoenigsApprox::valiron(catalog_entry(name).map, 200)).verdict,
                  Conformality::Conformal)
            << name;
}

TEST(DistanceDefect, Examples) {
    for (double y : {1.0, 3.0, 1e4}) {
        const ScaledPoint w{cplx(0, y), 0};
        EXPECT_EQ(distance_defect(w, w), 0.0);
        EXPECT_NEAR(distance_defect(w, ScaledPoint(cplx(0, 2 * y), 0)), -0.5 * ln2, 1e-14) << y;
    }
    EXPECT_NEAR(distance_defect(KoenigsApprox::valiron(affine(2, 0), 30), UpperHalfPoint(0.3, 2.0)), 0.0, 1e-12);
    EXPECT_THROW(distance_defect(ScaledPoint(cplx(0, 1), 0), ScaledPoint(cplx(1, 0), 0)), DomainError);
}
