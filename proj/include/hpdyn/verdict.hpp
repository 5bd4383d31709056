#pragma once

namespace hpdyn {

enum class Verdict { Extremal, NotExtremal, Undetermined, NotApplicable };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Extremal: return "extremal";
    case Verdict::NotExtremal: return "not_extremal";
    case Verdict::Undetermined: return "undetermined";
    case Verdict::NotApplicable: return "not_applicable";
    }
    return "?";
}

// Dynamical regime of a map with Denjoy-Wolff point at infinity.
enum class Regime { Hyperbolic, ParabolicPositive, ParabolicZero };

inline const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Hyperbolic: return "hyperbolic";
    case Regime::ParabolicPositive: return "parabolic_positive_step";
    case Regime::ParabolicZero: return "parabolic_zero_step";
    }
    return "?";
}

} // namespace hpdyn
