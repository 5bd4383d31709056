#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "hpdyn/catalog.hpp"
#include "hpdyn/criteria.hpp"
#include "hpdyn/disc.hpp"

using namespace hpdyn;
using D = DensityComponent;
using M = FiniteMeasure;

namespace {

HerglotzTriplet random_map(std::mt19937_64& rng, double alpha) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Atom> atoms;
    const int k = static_cast<int>(4 * U(rng));
    for (int i = 0; i < k; ++i) atoms.push_back({-5.0 + 10.0 * U(rng) + 1e-3 * i, 0.05 + 2.0 * U(rng)});
    std::vector<D> dens;
    if (U(rng) < 0.5) dens.push_back(D::gaussian(0.1 + U(rng)));
    if (U(rng) < 0.3) dens.push_back(D::cauchy(0.1 + U(rng)));
    return HerglotzTriplet(alpha, -2.0 + 4.0 * U(rng), M(std::move(atoms), std::move(dens)));
}

UpperHalfPoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    return UpperHalfPoint(-4.0 + 8.0 * U(rng), std::pow(10.0, -1.5 + 3.0 * U(rng)));
}

} // namespace

// All determined routes agree with each other and with the catalog label.
TEST(TheoremEquivalence, HomogeneousOnTheCatalog) {
    for (const auto& e : catalog()) {
        if (e.map_class == MapClass::NotDenjoyWolffInfinity) continue;
        RateReport r;
        ASSERT_NO_THROW(r = consolidate(e.map)) << e.name;
        EXPECT_EQ(r.consensus, e.extremal) << e.name;
        EXPECT_EQ(r.regime, e.regime) << e.name;
        std::size_t determined = 0;
        for (const auto& v : r.routes)
            if (v.verdict != Verdict::Undetermined) {
                ++determined;
                EXPECT_EQ(v.verdict, e.extremal) << e.name << " " << route_name(v.route);
            }
        EXPECT_GE(determined, 3u) << e.name;
    }
}

TEST(DiscProductLaw, EveryNonEllipticCatalogMap) {
    for (const auto& e : catalog()) {
        if (e.map_class == MapClass::NotDenjoyWolffInfinity) continue;
        for (cplx tau : {cplx(1, 0), cplx(0, 1)}) {
            const auto g = DiscMap::conjugate(e.map, tau);
            for (cplx z : {cplx(0, 0), cplx(0.5, 0.5)}) {
                const auto r = disc_rate_products(g, z, e.disc_budget, *e.regime);
                EXPECT_NEAR(r.product.back(), 2.0, 1e-3) << e.name << " tau " << tau << " z " << z;
            }
        }
    }
}

TEST(SchwarzPick, RandomMapsContractTheMetric) {
    std::mt19937_64 rng(17);
    for (int m = 0; m < 50; ++m) {
        const auto f = random_map(rng, m % 2 ? 1.0 : 2.5);
        for (int k = 0; k < 40; ++k) {
            const auto z = random_point(rng), w = random_point(rng);
            const double before = hyperbolic_distance_stable(z, w);
            const double after = hyperbolic_distance_stable(evaluate(f, z), evaluate(f, w));
            EXPECT_LE(after, before * (1 + 1e-9) + 1e-12);
        }
    }
}

TEST(JuliaWolff, RandomMapsDominateAlphaY) {
    std::mt19937_64 rng(23);
    for (int m = 0; m < 50; ++m) {
        const double alpha = 1.0 + 3.0 * (m % 5) / 4.0;
        const auto f = random_map(rng, alpha);
        for (int k = 0; k < 40; ++k) {
            const auto z = random_point(rng);
            EXPECT_GE(evaluate(f, z).im(), alpha * z.im() * (1 - 1e-12));
        }
    }
}

TEST(NormBounds, OrderedAndWithinArithmeticRatio) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double m = 0.999 * U(rng), p = 1.0 + 9.0 * U(rng);
        const auto h = hardy_norm_bounds(m, p);
        const auto b = bergman_norm_bounds(m, p);
        EXPECT_GE(h.lower, 1.0);
        EXPECT_LE(h.lower, h.upper * (1 + 1e-15));
        EXPECT_LE(std::pow(h.upper / h.lower, p), 4.0 * (1 + 1e-12));
        EXPECT_NEAR(b.lower, h.lower * h.lower, 1e-12 * b.lower);
        EXPECT_NEAR(b.upper, h.upper * h.upper, 1e-12 * b.upper);
    }
}

TEST(NormGrowth, VerdictsMatchTheCatalog) {
    for (const auto& e : catalog()) {
        if (!e.regime || *e.regime == Regime::ParabolicZero) continue;
        for (Space s : {Space::Hardy, Space::Bergman}) {
            const auto r = norm_growth_report(e.map, 1.0, 1.0, s, e.disc_budget, *e.regime);
            EXPECT_EQ(r.verdict, e.extremal) << e.name << " " << space_name(s);
        }
    }
}
