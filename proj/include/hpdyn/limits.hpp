#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hpdyn {

enum class LimitTag { Finite, Diverging, Undetermined };

inline const char* tag_name(LimitTag t) {
    switch (t) {
    case LimitTag::Finite: return "finite";
    case LimitTag::Diverging: return "diverging";
    case LimitTag::Undetermined: return "undetermined";
    }
    return "?";
}

// Window statistics behind a verdict. The sequence is cut into the dyadic
// blocks [N/8, N/4], [N/4, N/2], [N/2, N]; `spans` are their max - min.
struct LimitEvidence {
    std::size_t length = 0;
    double last = 0.0;
    double tail_span = 0.0;   // max - min over the last quarter
    double tail_mean = 0.0;
    double spans[3] = {0.0, 0.0, 0.0};
    double ratio = 0.0;       // spans[2] / spans[1]
    int direction = 0;        // +1 / -1 if the last half is monotone, else 0
};

struct LimitVerdict {
    LimitTag tag = LimitTag::Undetermined;
    double value = 0.0;   // Finite: extrapolated limit
    double growth = 0.0;  // Diverging: block growth exponent, log2 of the span ratio
    int direction = 0;    // Diverging: +1 towards +inf, -1 towards -inf
    LimitEvidence evidence;

    bool finite() const { return tag == LimitTag::Finite; }
    bool diverging() const { return tag == LimitTag::Diverging; }
};

struct LimitConfig {
    double atol = 1e-12;
    double rtol = 1e-9;
    double finite_ratio = 0.7;    // block span ratio at or below which the tail is summable
    double diverge_ratio = 0.8;   // at or above which a monotone tail is not
    double noise = 1e-12;         // relative slack in the monotonicity test
};

namespace detail {

inline std::pair<double, double> span_of(std::span<const double> s) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return {*lo, *hi};
}

inline int monotone_direction(std::span<const double> s, double slack) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double d = s[i] - s[i - 1];
        const double tol = slack * std::max(std::abs(s[i]), std::abs(s[i - 1]));
        if (d < -tol) up = false;
        if (d > tol) down = false;
    }
    if (up && !down) return 1;
    if (down && !up) return -1;
    return up ? 1 : 0;  // constant counts as non-decreasing
}

} // namespace detail

// Classify the tail of a sequence. Deterministic in (seq, cfg).
inline LimitVerdict detect_limit(std::span<const double> seq, const LimitConfig& cfg = {}) {
    LimitVerdict v;
    auto& ev = v.evidence;
    ev.length = seq.size();
    if (seq.size() < 32) return v;
    for (double x : seq)
        if (!std::isfinite(x)) return v;

    const std::size_t N = seq.size() - 1;
    const std::size_t i0 = N / 8, i1 = N / 4, i2 = N / 2, q3 = (3 * N) / 4;
    ev.last = seq[N];

    const auto tail = seq.subspan(q3);
    const auto [tlo, thi] = detail::span_of(tail);
    ev.tail_span = thi - tlo;
    double sum = 0.0;
    for (double x : tail) sum += x;
    ev.tail_mean = sum / static_cast<double>(tail.size());

    const std::size_t cut[4] = {i0, i1, i2, N};
    for (int b = 0; b < 3; ++b) {
        const auto [lo, hi] = detail::span_of(seq.subspan(cut[b], cut[b + 1] - cut[b] + 1));
        ev.spans[b] = hi - lo;
    }
    ev.direction = detail::monotone_direction(seq.subspan(i2), cfg.noise);

    if (ev.tail_span <= cfg.atol + cfg.rtol * std::abs(ev.tail_mean)) {
        v.tag = LimitTag::Finite;
        v.value = seq[N];
        return v;
    }
    if (!(ev.spans[1] > 0.0)) return v;
    ev.ratio = ev.spans[2] / ev.spans[1];
    const double r0 = ev.spans[0] > 0.0 ? ev.spans[1] / ev.spans[0] : 1.0;

    if (ev.ratio <= cfg.finite_ratio && r0 <= cfg.finite_ratio) {
        v.tag = LimitTag::Finite;
        if (ev.direction != 0) {
            // geometric tail of the remaining dyadic blocks
            v.value = seq[N] + ev.direction * ev.spans[2] * ev.ratio / (1.0 - ev.ratio);
        } else {
            const auto [lo, hi] = detail::span_of(seq.subspan(i2));
            v.value = 0.5 * (lo + hi);
        }
        return v;
    }
    const int d_prev = detail::monotone_direction(seq.subspan(i1, i2 - i1 + 1), cfg.noise);
    if (ev.direction != 0 && d_prev == ev.direction && ev.ratio >= cfg.diverge_ratio && r0 >= cfg.diverge_ratio) {
        v.tag = LimitTag::Diverging;
        v.direction = ev.direction;
        v.growth = std::log2(ev.ratio);
        return v;
    }
    return v;
}

inline LimitVerdict detect_limit(const std::vector<double>& seq, const LimitConfig& cfg = {}) {
    return detect_limit(std::span<const double>(seq), cfg);
}

// Trend of F(Y) sampled at Y = 10, 100, ...: the ratio of successive
// increments decides between a convergent and a divergent improper integral.
enum class Trend { Converging, Diverging, Undetermined };

inline const char* trend_name(Trend t) {
    switch (t) {
    case Trend::Converging: return "converging";
    case Trend::Diverging: return "diverging";
    case Trend::Undetermined: return "undetermined";
    }
    return "?";
}

struct DecadeTrend {
    Trend trend = Trend::Undetermined;
    double last_ratio = 0.0;
    double extrapolated = 0.0;  // Converging: value plus geometric tail
};

inline DecadeTrend decade_trend(const std::vector<double>& values, double converge_ratio = 0.4,
                                double diverge_ratio = 0.55, double atol = 1e-14) {
    DecadeTrend t;
    const std::size_t n = values.size();
    if (n < 4) return t;
    const double d1 = values[n - 2] - values[n - 3];
    const double d2 = values[n - 1] - values[n - 2];
    if (std::abs(d2) <= atol + 1e-12 * std::abs(values[n - 1]) && std::abs(d1) <= atol + 1e-10 * std::abs(values[n - 1])) {
        t.trend = Trend::Converging;
        t.extrapolated = values[n - 1];
        return t;
    }
    if (d1 == 0.0) return t;
    const double d0 = values[n - 3] - values[n - 4];
    const double r = d2 / d1;
    const double rp = d0 != 0.0 ? d1 / d0 : 1.0;
    t.last_ratio = r;
    if (r >= 0.0 && r <= converge_ratio && rp >= 0.0 && rp <= converge_ratio) {
        t.trend = Trend::Converging;
        t.extrapolated = values[n - 1] + d2 * r / (1.0 - r);
    } else if (r >= diverge_ratio && rp >= diverge_ratio && d2 * d1 > 0.0) {
        t.trend = Trend::Diverging;
    }
    return t;
}

} // namespace hpdyn
