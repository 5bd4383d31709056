#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hpdyn/limits.hpp"

using namespace hpdyn;

namespace {

template <class F>
std::vector<double> seq(std::size_t n, F f) {
    std::vector<double> s;
    for (std::size_t k = 1; k <= n; ++k) s.push_back(f(static_cast<double>(k)));
    return s;
}

} // namespace

TEST(DetectLimit, Examples) {
    const auto a = detect_limit(seq(4096, [](double n) { return 1.0 / n; }));
    ASSERT_TRUE(a.finite());
    EXPECT_NEAR(a.value, 0.0, 1e-3);

    const auto b = detect_limit(seq(4096, [](double n) { return std::log(n); }));
    EXPECT_TRUE(b.diverging());
    EXPECT_EQ(b.direction, 1);

    const auto c = detect_limit(seq(4096, [](double n) { return std::fmod(n, 2.0) == 0 ? 1.0 : -1.0; }));
    EXPECT_EQ(c.tag, LimitTag::Undetermined);
}

TEST(DetectLimit, GeometricTailIsExtrapolated) {
    // block spans shrink by 4; the extrapolation removes the 1/n^2 tail exactly
    const auto v = detect_limit(seq(1024, [](double n) { return 3.0 + 1.0 / (n * n); }));
    ASSERT_TRUE(v.finite());
    EXPECT_NEAR(v.value, 3.0, 1e-9);
}

TEST(DetectLimit, ConstantAndShortSequences) {
    const auto v = detect_limit(std::vector<double>(100, 2.5));
    ASSERT_TRUE(v.finite());
    EXPECT_EQ(v.value, 2.5);
    EXPECT_EQ(detect_limit(std::vector<double>(31, 1.0)).tag, LimitTag::Undetermined);
    std::vector<double> bad(100, 1.0);
    bad[50] = NAN;
    EXPECT_EQ(detect_limit(bad).tag, LimitTag::Undetermined);
}

TEST(DetectLimit, LinearGrowthAndDecay) {
    const auto up = detect_limit(seq(1000, [](double n) { return 0.5 * n; }));
    ASSERT_TRUE(up.diverging());
    EXPECT_NEAR(up.growth, 1.0, 1e-2);  // spans double with the blocks
    const auto down = detect_limit(seq(1000, [](double n) { return -std::sqrt(n); }));
    ASSERT_TRUE(down.diverging());
    EXPECT_EQ(down.direction, -1);
}

TEST(DetectLimit, Deterministic) {
    const auto s = seq(777, [](double n) { return std::sin(n) / n; });
    const auto a = detect_limit(s), b = detect_limit(s);
    EXPECT_EQ(a.tag, b.tag);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.evidence.ratio, b.evidence.ratio);
}

TEST(DecadeTrend, ConvergingAndDivergingIntegrals) {
    // int_1^Y dy/y^2 = 1 - 1/Y
    std::vector<double> conv, div;
    for (int k = 1; k <= 6; ++k) {
        const double Y = std::pow(10.0, k);
        conv.push_back(1.0 - 1.0 / Y);
        div.push_back(std::log(Y));
    }
    const auto c = decade_trend(conv);
    ASSERT_EQ(c.trend, Trend::Converging);
    EXPECT_NEAR(c.extrapolated, 1.0, 1e-9);
    EXPECT_EQ(decade_trend(div).trend, Trend::Diverging);
    EXPECT_EQ(decade_trend({1, 2, 3}).trend, Trend::Undetermined);
    EXPECT_EQ(decade_trend(std::vector<double>(6, 0.0)).trend, Trend::Converging);
}
