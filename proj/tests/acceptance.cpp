// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hpdyn.hpp"

#ifndef HPDYN_CLI_PATH
#define HPDYN_CLI_PATH "hpdyn"
#endif

using namespace hpdyn;
using M = FiniteMeasure;
using D = DensityComponent;

namespace {

const UpperHalfPoint I0{0.0, 1.0};

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
    template <class T>
    void note(const std::string& key, const T& v) {
        detail << " " << key << "=" << v;
    }
};

std::vector<cplx> grid5() {
    std::vector<cplx> g;
    for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0})
        for (double y : {0.1, 0.5, 1.0, 3.0, 10.0}) g.emplace_back(x, y);
    return g;
}

HerglotzTriplet affine(double a, double b) { return HerglotzTriplet(a, b, M::zero()); }

void c1(Check& c) {
    const HerglotzTriplet f(0, 0, M::density(D::cauchy(1)));
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const cplx& z : grid5()) worst = std::max(worst, std::abs(evaluate(f, UpperHalfPoint(z)).z() - cplx(0, 1)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("max_err", worst);
    c.note("seconds", secs);
    c.require(worst <= 1e-9, "|f(z) - i| <= 1e-9");
    c.require(secs < 1.0, "runtime < 1 s");
}

void c2(Check& c) {
    const auto f = affine(2, 0);
    const auto L = hyperbolic_rate_limit(iterate(f, I0, 60));
    const double lerr = std::abs(L.value - cplx(0, 1));
    c.note("L_err", lerr);
    c.require(L.tag == LimitTag::Finite && lerr <= 1e-10, "L(i) = i within 1e-10 by n=60");

    const auto h = KoenigsApprox::valiron(f, 40);
    double herr = 0.0;
    for (const cplx& z : unit_grid()) herr = std::max(herr, std::abs(h(z) - z));
    c.note("h_err", herr);
    c.require(herr <= 1e-12, "h = id within 1e-12");

    const auto d = hyperbolic_distance_rate(f, I0, 200);
    double derr = 0.0;
    for (double x : d.sequence) derr = std::max(derr, std::abs(x));
    c.note("distance_err", derr);
    c.require(derr <= 1e-9, "d_H(i, 2^n i) - (n/2) log 2 = 0 within 1e-9 for n <= 200");
    c.require(d.predicted && std::abs(*d.predicted) <= 1e-9, "closed-form limit 0 within 1e-9");
}

void c3(Check& c) {
    const auto f = affine(2, 1);
    const auto L = hyperbolic_rate_limit(iterate(f, I0, hyperbolic_budget));
    const double lerr = std::abs(L.value - cplx(1, 1));
    c.note("L_err", lerr);
    c.require(L.tag == LimitTag::Finite && lerr <= 1e-8, "L(i) = 1+i within 1e-8");

    const auto conf = conformality_at_infinity(KoenigsApprox::valiron(f, 40));
    c.note("conformality", conformality_name(conf.verdict));
    c.require(conf.verdict == Conformality::Conformal, "Conformal");

    // h(z) = (z+1)/sqrt2, |L(i)| = sqrt2: limit 1/2 log(|z+1| / sin arg(z+1))
    double worst = 0.0;
    for (cplx z : {cplx(0, 1), cplx(0.5, 2), cplx(-3, 0.5)}) {
        const auto d = hyperbolic_distance_rate(f, UpperHalfPoint(z), hyperbolic_budget);
        const double closed = 0.5 * std::log(std::abs(z + 1.0) / std::sin(std::arg(z + 1.0)));
        if (!d.verdict.finite()) {
            worst = INFINITY;
            continue;
        }
        worst = std::max({worst, std::abs(d.verdict.value - closed), std::abs(d.predicted.value_or(INFINITY) - closed)});
    }
    c.note("distance_limit_err", worst);
    c.require(worst <= 1e-6, "closed-form distance limit within 1e-6");
}

void c4(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    int maps = 0, contradictions = 0, mismatches = 0;
    for (const auto& e : catalog()) {
        if (e.map_class != MapClass::Hyperbolic) continue;
        ++maps;
        try {
            const auto r = consolidate(e.map);
            if (r.consensus != e.extremal) ++mismatches;
            for (const auto& v : r.routes)
                if (v.verdict != Verdict::Undetermined && v.verdict != e.extremal) ++mismatches;
        } catch (const ContradictionError& err) {
            ++contradictions;
            c.detail << " " << e.name << ": " << err.what();
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("maps", maps);
    c.note("contradictions", contradictions);
    c.note("mismatches", mismatches);
    c.note("seconds", secs);
    c.require(maps >= 6, ">= 6 hyperbolic maps");
    c.require(contradictions == 0 && mismatches == 0, "all determined routes agree with the catalog");
    c.require(secs < 60.0, "runtime < 60 s");
}

void c5(Check& c) {
    const auto f = affine(1, 1);
    const auto o = iterate(f, I0, 100000);
    const auto st = hyperbolic_step(o);
    c.require(st.positive, "step positive");
    const double b = drift_coefficient(o).b;
    c.note("b", b);
    c.require(b == 1.0, "b = 1 exactly");
    const auto s = shift_classification(o);
    c.note("I", s.I);
    c.require(s.finite && s.I == 1.0, "finite shift, I = 1 exactly");
    const auto L = parabolic_rate_limit(o);
    c.note("L", L.value);
    c.require(L.finite() && L.value == 1.0, "L = 1 exactly");
    const auto d = parabolic_distance_rate(o);
    c.note("distance_at_1e5", d.sequence.back());
    c.require(std::abs(d.sequence.back()) <= 1e-3, "d_H(i, n+i) - log n within 1e-3 at n = 1e5");
    const auto disc = disc_rate_products(o, Regime::ParabolicPositive);
    const double depth = std::exp(disc.log_depth.back());
    c.note("n2_depth", depth);
    c.require(std::abs(depth - 2.0) <= 1e-3, "n^2 (1 - |g^n(0)|) -> 2 within 1e-3");
}

void c6(Check& c) {
    const std::size_t N = 100000;
    {
        const auto o = iterate(catalog_entry("translate2_atom").map, I0, N);
        const auto s = shift_classification(o);
        const auto L = parabolic_rate_limit(o);
        const auto d = parabolic_distance_rate(o);
        c.note("I", s.I);
        c.note("L", L.value);
        c.require(s.finite, "translate2_atom finite shift");
        c.require(L.finite() && std::abs(L.value - 2.0) <= 1e-4, "L = 2 within 1e-4");
        const double target = std::log(2.0 / std::sqrt(s.I));
        const double got = d.verdict.finite() ? d.verdict.value : d.sequence.back();
        c.note("distance_limit", got);
        c.note("log_L_over_sqrt_I", target);
        c.require(d.verdict.finite() && std::abs(got - target) <= 1e-3, "log(|L|/sqrt I) within 1e-3");
    }
    {
        const auto o = iterate(catalog_entry("onesided_heavy").map, I0, N);
        bool infinite = false;
        try {
            infinite = !shift_classification(o).finite;
        } catch (const Undetermined&) {
        }
        c.require(infinite, "onesided_heavy infinite shift");
        const auto d = parabolic_distance_rate(o);
        c.require(d.verdict.diverging() && d.verdict.direction > 0, "onesided_heavy distance defect diverging");
        const double diag = infinite_shift_diagnostic(o).back();
        c.note("diagnostic_at_budget", diag);
        c.require(diag > 1e2, "|f^n(i)|/(n sqrt y_n) > 1e2 at budget");
    }
}

void c7(Check& c) {
    for (const char* name : {"vertical", "sqrtgrowth"}) {
        const auto r = consolidate(catalog_entry(name).map);
        bool all_na = !r.routes.empty();
        for (const auto& v : r.routes) all_na = all_na && v.verdict == Verdict::NotApplicable;
        c.note(name, r.regime ? regime_name(*r.regime) : "undetermined");
        c.require(r.regime == Regime::ParabolicZero, std::string(name) + " zero step");
        c.require(all_na && r.consensus == Verdict::NotApplicable, std::string(name) + " routes NotApplicable");
        c.require(r.limit_tag == LimitTag::Undetermined && !r.shift, std::string(name) + " no rate verdict");
    }
}

void c8(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = run_lemma_suite();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& [name, t] : {std::pair{"estimate_sum", s.estimate_sum}, std::pair{"nontangential", s.nontangential},
                                  std::pair{"normalization", s.normalization}}) {
        c.detail << " " << name << "=" << t.checks << "/" << t.violations;
        c.require(t.checks >= 10000 && t.violations == 0, std::string(name) + " >= 1e4 checks, 0 violations");
    }
    c.note("seconds", secs);
    c.require(secs < 30.0, "runtime < 30 s");
}

void c9(Check& c) {
    for (const char* name : {"atom2", "gaussian2"}) {
        const auto r = divergence_sandwich(catalog_entry(name).map, I0, 60);
        bool positive = true;
        for (std::size_t k = 29; k < r.ratio.size(); ++k) positive = positive && r.ratio[k] > 0.0;
        c.detail << " " << name << "=[" << r.C1 << ", " << r.C2 << "]";
        c.require(positive && r.C1 > 0.0 && r.C2 / r.C1 < 1e2, std::string(name) + " ratio positive, max/min < 1e2");
    }
}

void c10(Check& c) {
    double worst = 0.0;
    int runs = 0;
    for (const auto& e : catalog()) {
        if (e.map_class == MapClass::NotDenjoyWolffInfinity) continue;
        for (cplx tau : {cplx(1, 0), cplx(0, 1)}) {
            const auto g = DiscMap::conjugate(e.map, tau);
            for (cplx z : {cplx(0, 0), cplx(0.5, 0.5)}) {
                const auto r = disc_rate_products(g, z, e.disc_budget, *e.regime);
                worst = std::max(worst, std::abs(r.product.back() - 2.0));
                ++runs;
            }
        }
    }
    c.note("runs", runs);
    c.note("max_err", worst);
    c.require(worst <= 1e-3, "|g^n - tau| |f^n(w)| -> 2 within 1e-3");
}

void c11(Check& c) {
    // "exactly": within a few ulps of the hand values
    auto same = [](double a, double b) { return std::abs(a - b) <= 4e-16 * std::abs(b); };
    const auto h = hardy_norm_bounds(1.0 / 3.0, 1.0);
    const auto b = bergman_norm_bounds(0.5, 1.0);
    c.detail << " hardy=(" << h.lower << ", " << h.upper << ") bergman=(" << b.lower << ", " << b.upper << ")";
    c.require(same(h.lower, 9.0 / 8.0) && same(h.upper, 2.0), "hardy m=1/3 p=1 -> (9/8, 2)");
    c.require(same(b.lower, 16.0 / 9.0) && same(b.upper, 9.0), "bergman m=1/2 p=1 -> (16/9, 9)");
    int maps = 0, bad = 0;
    for (const auto& e : catalog()) {
        if (!e.regime || *e.regime == Regime::ParabolicZero) continue;
        ++maps;
        for (Space s : {Space::Hardy, Space::Bergman})
            if (norm_growth_report(e.map, 1.0, 1.0, s, e.disc_budget, *e.regime).verdict != e.extremal) ++bad;
    }
    c.note("maps", maps);
    c.note("verdict_mismatches", bad);
    c.require(bad == 0, "norm_growth_report verdicts match half-plane verdicts");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void c12(Check& c) {
    const auto dir = std::filesystem::temp_directory_path() / "hpdyn_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> configs = {
        "rate --catalog atom2 --base 0,1 --base 0.5,2",
        "classify --catalog translate2_atom",
        "koenigs --catalog affine2shift",
        "norms --catalog translate1 --space bergman",
    };
    int k = 0;
    for (const auto& cfg : configs) {
        std::string out[2];
        for (int run = 0; run < 2; ++run) {
            const auto path = dir / ("run" + std::to_string(k) + "_" + std::to_string(run) + ".json");
            const std::string cmd = std::string(HPDYN_CLI_PATH) + " " + cfg + " --out " + path.string();
            const int rc = std::system(cmd.c_str());
            c.require(rc == 0, "exit 0: " + cfg);
            out[run] = slurp(path);
        }
        c.require(!out[0].empty() && out[0] == out[1], "byte-identical: " + cfg);
        ++k;
    }
    c.note("configs", configs.size());
    std::filesystem::remove_all(dir);
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
        {"constant-map identity", c1},
        {"affine hyperbolic exactness", c2},
        {"shifted affine", c3},
        {"theorem-equivalence homogeneity", c4},
        {"parabolic translate", c5},
        {"parabolic dichotomy", c6},
        {"zero-step guard", c7},
        {"lemma grid suites", c8},
        {"divergence sandwich", c9},
        {"disc product law", c10},
        {"norm bounds arithmetic", c11},
        {"determinism", c12},
    };
    int failed = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Check c;
        try {
            run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " [exception: " << e.what() << "]";
        }
        if (!c.ok) ++failed;
        std::printf("criterion %2d %-32s %s%s\n", n, name, c.ok ? "PASS" : "FAIL", c.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
