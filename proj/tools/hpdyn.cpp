// hpdyn: command-line front end for the half-plane dynamics library.

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpdyn.hpp"

using json = nlohmann::ordered_json;
using namespace hpdyn;

namespace {

enum Exit { ok = 0, input_error = 2, undetermined_exit = 3, contradiction_exit = 4 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string spec_path;
    std::string catalog_name;
    std::optional<std::size_t> budget;
    double tol = evaluation_tolerance;
    std::string out;
    std::string format = "json";
    bool strict = false;
    std::string tau_text = "1,0";
    double p = 1.0;
    std::string space = "hardy";
    std::vector<std::string> base_text;
    std::vector<std::size_t> depths;
    bool pommerenke = false;
    std::optional<double> m;

    cplx tau{1.0, 0.0};
    std::vector<UpperHalfPoint> bases;
    std::optional<HerglotzTriplet> map;
    const CatalogEntry* entry = nullptr;
};

cplx parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError(std::string(what) + " must be RE,IM, got '" + s + "'");
    try {
        std::size_t a = 0, b = 0;
        const double re = std::stod(s.substr(0, comma), &a);
        const std::string tail = s.substr(comma + 1);
        const double im = std::stod(tail, &b);
        if (a != comma || b != tail.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::logic_error&) {
        throw InputError(std::string(what) + " must be RE,IM, got '" + s + "'");
    }
}

// Non-finite values are written as strings so the JSON stays valid.
json num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json pair_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

std::string csv_num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json limit_json(const LimitVerdict& v) {
    json j;
    j["tag"] = tag_name(v.tag);
    if (v.finite()) j["value"] = num(v.value);
    if (v.diverging()) {
        j["direction"] = v.direction;
        j["growth"] = num(v.growth);
    }
    j["last"] = num(v.evidence.last);
    j["block_ratio"] = num(v.evidence.ratio);
    return j;
}

json route_json(const CriterionVerdict& c) {
    json j;
    j["route"] = route_name(c.route);
    j["verdict"] = verdict_name(c.verdict);
    if (!c.note.empty()) j["note"] = c.note;
    json n = json::object();
    for (const auto& [k, v] : c.numbers) n[k] = num(v);
    j["numbers"] = n;
    return j;
}

// At most ~256 evenly spaced entries plus the last one.
std::vector<std::size_t> thin(std::size_t size) {
    std::vector<std::size_t> idx;
    if (size == 0) return idx;
    const std::size_t stride = std::max<std::size_t>(1, size / 256);
    for (std::size_t k = 0; k < size; k += stride) idx.push_back(k);
    if (idx.back() != size - 1) idx.push_back(size - 1);
    return idx;
}

struct Series {
    std::string name;
    std::vector<double> n;
    std::vector<double> value;
};

json series_json(const Series& s) {
    json n = json::array(), v = json::array();
    for (std::size_t k : thin(s.n.size())) {
        n.push_back(num(s.n[k]));
        v.push_back(num(s.value[k]));
    }
    return {{"n", n}, {"value", v}};
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t thread_cap() {
    if (const char* e = std::getenv("HPDYN_THREADS")) {
        const long v = std::strtol(e, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs job(k) for k < count on up to HPDYN_THREADS workers; results stay ordered.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& job) {
    std::vector<std::optional<T>> out(count);
    std::vector<std::exception_ptr> err(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < count;) {
            try {
                out[k] = job(k);
            } catch (...) {
                err[k] = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::min(thread_cap(), count);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    std::vector<T> r;
    r.reserve(count);
    for (auto& o : out) r.push_back(std::move(*o));
    return r;
}

// --- commands --------------------------------------------------------------

struct Outcome {
    json result;
    std::vector<Series> series;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    bool undetermined = false;
};

const HerglotzTriplet& need_map(const RunConfig& c) {
    if (!c.map) throw InputError(c.command + ": a map is required (--spec or --catalog)");
    return *c.map;
}

std::size_t budget_or(const RunConfig& c, std::size_t fallback) { return c.budget.value_or(fallback); }

Outcome cmd_classify(const RunConfig& c) {
    const auto& f = need_map(c);
    Outcome o;
    o.csv_header = {"base", "key", "value"};
    const MapClass mc = classify(f);
    auto runs = parallel_map<json>(c.bases.size(), [&](std::size_t k) {
        const UpperHalfPoint& z = c.bases[k];
        json j;
        j["base"] = pair_json(z.z());
        j["class"] = class_name(mc);
        j["alpha"] = num(f.alpha());
        j["beta"] = num(f.beta());
        if (mc == MapClass::Hyperbolic) {
            j["regime"] = regime_name(Regime::Hyperbolic);
            const Orbit orb = iterate(f, z, budget_or(c, hpdyn::hyperbolic_budget), c.tol);
            const auto L = hyperbolic_rate_limit(orb);
            j["limit"] = {{"tag", tag_name(L.tag)}};
            if (L.tag == LimitTag::Finite) j["limit"]["value"] = pair_json(L.value);
        } else if (mc == MapClass::ParabolicCandidate) {
            const Orbit orb = iterate(f, z, budget_or(c, hpdyn::parabolic_budget), c.tol);
            json ev;
            try {
                const auto st = hyperbolic_step(orb);
                j["step"] = st.positive ? "positive" : "zero";
                j["regime"] = regime_name(st.positive ? Regime::ParabolicPositive : Regime::ParabolicZero);
                ev["step_limit"] = num(st.limit);
                ev["log_step_distance"] = limit_json(st.log_distance);
                if (!st.positive) {
                    // |f^n(z)|/sqrt(n) at n = N/100, N/10, N; reported, not judged
                    json d = json::array();
                    for (std::size_t n : {orb.steps() / 100, orb.steps() / 10, orb.steps()})
                        if (n > 0)
                            d.push_back({{"n", n}, {"value", num(std::exp(orb.points[n].log_abs() - 0.5 * std::log(double(n))))}});
                    ev["modulus_over_sqrt_n"] = d;
                }
            } catch (const Undetermined& e) {
                j["step"] = "undetermined";
                ev["step_note"] = e.what();
            }
            try {
                j["b"] = num(drift_coefficient(orb).b);
            } catch (const Undetermined&) {
                j["b"] = "undetermined";
            }
            try {
                const auto sv = shift_classification(orb);
                j["shift"] = sv.finite ? "finite" : "infinite";
                if (sv.finite) j["I"] = num(sv.I);
                ev["shift_imaginary_parts"] = limit_json(sv.verdict);
            } catch (const Undetermined& e) {
                j["shift"] = "undetermined";
                ev["shift_note"] = e.what();
            }
            ev["budget"] = orb.steps();
            ev["last_point"] = pair_json(orb.points.back().value());
            j["evidence"] = ev;
        } else {
            j["note"] = "alpha < 1: Denjoy-Wolff point in the interior";
        }
        return j;
    });
    for (const auto& j : runs) {
        for (const char* key : {"step", "shift", "b"})
            if (j.contains(key) && j[key] == "undetermined") o.undetermined = true;
        const std::string base = csv_num(j["base"][0].get<double>()) + ";" + csv_num(j["base"][1].get<double>());
        for (const auto& [k, v] : j.items())
            if (!v.is_structured()) o.csv_rows.push_back({base, k, v.is_string() ? v.get<std::string>() : v.dump()});
    }
    o.result["runs"] = runs;
    return o;
}

Outcome cmd_rate(const RunConfig& c) {
    const auto& f = need_map(c);
    Outcome o;
    o.csv_header = {"base", "series", "n", "value"};
    struct Run {
        json j;
        std::vector<Series> series;
        bool undetermined;
    };
    auto runs = parallel_map<Run>(c.bases.size(), [&](std::size_t k) {
        RateConfig rc;
        rc.base = c.bases[k];
        rc.tau = c.tau;
        rc.p = c.p;
        if (c.budget) rc.hyperbolic_budget = rc.parabolic_budget = *c.budget;
        const RateReport r = consolidate(f, rc);
        Run run;
        json& j = run.j;
        j["base"] = pair_json(rc.base.z());
        j["class"] = class_name(r.map_class);
        j["alpha"] = num(r.alpha);
        j["regime"] = r.regime ? json(regime_name(*r.regime)) : json("undetermined");
        if (r.b) j["b"] = num(*r.b);
        if (r.shift) {
            j["shift"] = r.shift->finite ? "finite" : "infinite";
            if (r.shift->finite) j["I"] = num(r.shift->I);
        }
        j["limit"] = {{"tag", tag_name(r.limit_tag)}};
        if (r.limit_tag == LimitTag::Finite) {
            if (r.regime == Regime::Hyperbolic) j["limit"]["value"] = pair_json(r.limit);
            else j["limit"]["value"] = num(r.limit.real());
        }
        j["angle"] = {{"tag", tag_name(r.angle.tag)}, {"theta", num(r.angle.theta)}, {"tangential", r.angle.tangential}};
        json routes = json::array();
        for (const auto& rv : r.routes) routes.push_back(route_json(rv));
        j["routes"] = routes;
        j["consensus"] = verdict_name(r.consensus);
        run.undetermined = r.consensus == Verdict::Undetermined;

        Series ys{"y_scaled", {}, {}};
        const double y0 = std::exp(r.orbit.points.front().log_im());
        for (std::size_t n = 0; n < r.orbit.points.size(); ++n) {
            ys.n.push_back(static_cast<double>(n));
            ys.value.push_back(y0 * std::exp(r.orbit.log_y_ratio[n]));
        }
        run.series.push_back(std::move(ys));
        if (!r.distance_sequence.empty()) {
            Series s{"distance", {}, {}};
            const std::size_t first = r.regime == Regime::Hyperbolic ? 0 : 1;
            for (std::size_t k = 0; k < r.distance_sequence.size(); ++k) {
                s.n.push_back(static_cast<double>(k + first));
                s.value.push_back(r.distance_sequence[k]);
            }
            run.series.push_back(std::move(s));
        }
        if (!r.defect_sequence.empty()) {
            Series s{"defect", {}, {}};
            for (std::size_t k = 0; k < r.defect_sequence.size(); ++k) {
                s.n.push_back(static_cast<double>(k));
                s.value.push_back(r.defect_sequence[k]);
            }
            run.series.push_back(std::move(s));
        }
        if (!r.disc.n.empty()) {
            Series s{"disc_product", {}, {}};
            for (std::size_t k = 0; k < r.disc.n.size(); ++k) {
                s.n.push_back(static_cast<double>(r.disc.n[k]));
                s.value.push_back(r.disc.product[k]);
            }
            run.series.push_back(std::move(s));
        }
        json sj = json::object();
        for (const auto& s : run.series) sj[s.name] = series_json(s);
        j["series"] = sj;
        return run;
    });
    json arr = json::array();
    for (auto& run : runs) {
        arr.push_back(run.j);
        o.undetermined = o.undetermined || run.undetermined;
        const std::string base = csv_num(run.j["base"][0].get<double>()) + ";" + csv_num(run.j["base"][1].get<double>());
        for (const auto& s : run.series)
            for (std::size_t k = 0; k < s.n.size(); ++k)
                o.csv_rows.push_back({base, s.name, csv_num(s.n[k]), csv_num(s.value[k])});
    }
    o.result["runs"] = arr;
    return o;
}

Outcome cmd_koenigs(const RunConfig& c) {
    const auto& f = need_map(c);
    Outcome o;
    o.csv_header = {"depth", "re", "im", "h_re", "h_im", "residual"};
    std::vector<std::size_t> depths = c.depths;
    if (depths.empty()) depths.push_back(c.pommerenke ? 2000 : 40);
    const auto grid = unit_grid(5, 5);
    json arr = json::array();
    for (std::size_t depth : depths) {
        const KoenigsApprox h = c.pommerenke ? KoenigsApprox::pommerenke(f, c.bases.front(), depth, c.tol)
                                             : KoenigsApprox::valiron(f, depth, c.tol);
        json j;
        j["depth"] = depth;
        j["construction"] = c.pommerenke ? "pommerenke" : "valiron";
        if (c.pommerenke) j["b"] = num(h.drift());
        auto rows = parallel_map<json>(grid.size(), [&](std::size_t k) {
            const cplx z = grid[k];
            const cplx hz = h(z);
            const double res = abel_residual(h, {z});
            return json::array({num(z.real()), num(z.imag()), num(hz.real()), num(hz.imag()), num(res)});
        });
        double worst = 0.0;
        for (const auto& r : rows) {
            worst = std::max(worst, r[4].get<double>());
            std::vector<std::string> line{std::to_string(depth)};
            for (const auto& v : r) line.push_back(csv_num(v.get<double>()));
            o.csv_rows.push_back(line);
        }
        j["columns"] = json::array({"re", "im", "h_re", "h_im", "residual"});
        j["grid"] = rows;
        j["max_abel_residual"] = num(worst);
        if (!c.pommerenke) {
            const auto cr = conformality_at_infinity(h);
            j["conformality"] = conformality_name(cr.verdict);
            if (cr.verdict == Conformality::Conformal) j["derivative"] = pair_json(cr.derivative);
            json ci = json::array();
            for (double v : cr.cone_inf) ci.push_back(num(v));
            j["cone_inf"] = ci;
            if (cr.verdict == Conformality::Undetermined) o.undetermined = true;
        }
        arr.push_back(j);
    }
    o.result["approximations"] = arr;
    return o;
}

Space parse_space(const std::string& s) { return s == "bergman" ? Space::Bergman : Space::Hardy; }

Outcome cmd_norms(const RunConfig& c) {
    Outcome o;
    const Space space = parse_space(c.space);
    if (c.m) {
        const NormBounds b = space == Space::Hardy ? hardy_norm_bounds(*c.m, c.p) : bergman_norm_bounds(*c.m, c.p);
        o.result["bounds"] = {{"m", num(*c.m)}, {"lower", num(b.lower)}, {"upper", num(b.upper)}};
        o.csv_header = {"m", "lower", "upper"};
        o.csv_rows.push_back({csv_num(*c.m), csv_num(b.lower), csv_num(b.upper)});
        if (!c.map) return o;
    }
    const auto& f = need_map(c);
    require_dw_infinity(f);
    Regime regime = Regime::Hyperbolic;
    std::size_t N = budget_or(c, c.entry ? c.entry->disc_budget : hpdyn::hyperbolic_budget);
    if (f.is_parabolic()) {
        N = budget_or(c, c.entry ? c.entry->disc_budget : 10000);
        const Orbit orb = iterate(f, UpperHalfPoint(0.0, 1.0), std::max<std::size_t>(N, 10000), c.tol);
        try {
            regime = hyperbolic_step(orb).positive ? Regime::ParabolicPositive : Regime::ParabolicZero;
        } catch (const Undetermined&) {
            o.result["regime"] = "undetermined";
            o.result["verdict"] = verdict_name(Verdict::Undetermined);
            o.undetermined = true;
            return o;
        }
    }
    o.result["regime"] = regime_name(regime);
    o.result["space"] = space_name(space);
    o.result["p"] = num(c.p);
    o.result["tau"] = pair_json(c.tau);
    if (regime == Regime::ParabolicZero) {
        o.result["verdict"] = verdict_name(Verdict::NotApplicable);
        o.result["note"] = "zero hyperbolic step";
        return o;
    }
    const NormBoundReport r = norm_growth_report(f, c.tau, c.p, space, N, regime);
    o.result["budget"] = N;
    o.result["normalizer"] = regime == Regime::Hyperbolic ? (space == Space::Hardy ? "alpha^n" : "alpha^2n")
                                                          : (space == Space::Hardy ? "n^2" : "n^4");
    o.result["lower_verdict"] = limit_json(r.lower_verdict);
    o.result["max_upper_over_lower"] = num(r.max_upper_over_lower);
    o.result["verdict"] = verdict_name(r.verdict);
    json rows = json::array();
    for (std::size_t k : thin(r.n.size()))
        rows.push_back(json::array({r.n[k], num(r.modulus[k]), num(r.log_lower_p[k]), num(r.log_upper_p[k]),
                                    num(r.log_norm_lower[k]), num(r.log_norm_upper[k])}));
    o.result["columns"] =
        json::array({"n", "modulus", "log_lower_p", "log_upper_p", "log_normalized_lower", "log_normalized_upper"});
    o.result["rows"] = rows;
    o.csv_header = {"n", "modulus", "log_lower_p", "log_upper_p", "log_normalized_lower", "log_normalized_upper"};
    o.csv_rows.clear();
    for (std::size_t k = 0; k < r.n.size(); ++k)
        o.csv_rows.push_back({std::to_string(r.n[k]), csv_num(r.modulus[k]), csv_num(r.log_lower_p[k]),
                              csv_num(r.log_upper_p[k]), csv_num(r.log_norm_lower[k]), csv_num(r.log_norm_upper[k])});
    o.undetermined = r.verdict == Verdict::Undetermined;
    return o;
}

json axis_json(const AxisIntegral& a) {
    json Y = json::array(), v = json::array();
    for (std::size_t k = 0; k < a.Y.size(); ++k) {
        Y.push_back(num(a.Y[k]));
        v.push_back(num(a.value[k]));
    }
    return {{"Y", Y}, {"value", v}, {"trend", trend_name(a.trend.trend)}};
}

Outcome cmd_criteria(const RunConfig& c) {
    Outcome o;
    o.csv_header = {"check", "value"};
    const LemmaSuite s = run_lemma_suite();
    auto tally = [](const LemmaTally& t) {
        return json{{"checks", t.checks}, {"violations", t.violations}, {"pass", t.pass()}};
    };
    o.result["lemmas"] = {{"estimate_sum", tally(s.estimate_sum)},
                          {"nontangential_constant", tally(s.nontangential)},
                          {"normalization_bounds", tally(s.normalization)}};
    o.csv_rows.push_back({"estimate_sum_violations", std::to_string(s.estimate_sum.violations)});
    o.csv_rows.push_back({"nontangential_violations", std::to_string(s.nontangential.violations)});
    o.csv_rows.push_back({"normalization_violations", std::to_string(s.normalization.violations)});
    if (!c.map) return o;
    const auto& f = *c.map;
    require_dw_infinity(f);
    json m;
    const auto it = integral_t_equivalence_check(f);
    m["integral_t"] = {{"trajectory", axis_json(it.trajectory)},
                       {"abs_moment_finite", it.abs_moment.finite},
                       {"flags_agree", it.flags_agree},
                       {"kernel_identity_error", num(it.kernel_error)}};
    if (it.abs_moment.finite) m["integral_t"]["kernel_total"] = num(it.kernel_total);
    if (f.is_hyperbolic()) {
        m["log_moment"] = route_json(extremal_by_log_moment(f));
        const auto a = extremal_by_asymptotic(f);
        m["asymptotic"] = route_json(a.verdict);
        const auto sw = divergence_sandwich(f, c.bases.front(), budget_or(c, 60));
        json sj;
        sj["trivial"] = sw.trivial;
        if (!sw.trivial) {
            json r = json::array();
            for (double v : sw.ratio) r.push_back(num(v));
            sj["ratio"] = r;
            sj["C1"] = num(sw.C1);
            sj["C2"] = num(sw.C2);
            o.csv_rows.push_back({"sandwich_C1", csv_num(sw.C1)});
            o.csv_rows.push_back({"sandwich_C2", csv_num(sw.C2)});
        }
        m["divergence_sandwich"] = sj;
        if (a.verdict.verdict == Verdict::Undetermined) o.undetermined = true;
    } else {
        const auto sh = finite_shift_necessary_integral(f);
        m["shift_integral"] = {{"trajectory", axis_json(sh.trajectory)}, {"finite", sh.finite}};
        if (sh.finite) m["shift_integral"]["value"] = num(sh.value);
    }
    o.result["map"] = m;
    return o;
}

// --- driver ------------------------------------------------------------------

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    if (c.entry) j["catalog"] = c.entry->name;
    if (c.map) j["map"] = triplet_to_json(*c.map);
    j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
    j["tol"] = num(c.tol);
    j["format"] = c.format;
    j["strict"] = c.strict;
    j["tau"] = pair_json(c.tau);
    j["p"] = num(c.p);
    j["space"] = c.space;
    json b = json::array();
    for (const auto& z : c.bases) b.push_back(pair_json(z.z()));
    j["bases"] = b;
    if (c.command == "koenigs") {
        j["depths"] = c.depths;
        j["pommerenke"] = c.pommerenke;
    }
    if (c.m) j["m"] = num(*c.m);
    return j;
}

void resolve(RunConfig& c) {
    if (c.budget && *c.budget < 32) throw InputError("--budget must be at least 32");
    if (!(c.tol > 0)) throw InputError("--tol must be positive");
    if (!c.spec_path.empty() && !c.catalog_name.empty()) throw InputError("--spec and --catalog are exclusive");
    c.tau = parse_pair(c.tau_text, "--tau");
    if (std::abs(std::abs(c.tau) - 1.0) > 1e-12) throw InputError("--tau must be unimodular");
    for (const auto& s : c.base_text) c.bases.emplace_back(parse_pair(s, "--base"));
    if (c.bases.empty()) c.bases.emplace_back(0.0, 1.0);
    if (!c.catalog_name.empty()) {
        c.entry = &catalog_entry(c.catalog_name);
        c.map = c.entry->map;
    } else if (!c.spec_path.empty()) {
        c.map = load_map_spec(c.spec_path);
    }
}

std::string render(const RunConfig& c, const Outcome& o) {
    const json cfg = config_json(c);
    const std::string hash = [&] {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(cfg.dump()));
        return std::string(buf);
    }();
    if (c.format == "csv") {
        std::ostringstream s;
        s << "# hpdyn " << version << " config " << hash << '\n';
        for (std::size_t k = 0; k < o.csv_header.size(); ++k) s << (k ? "," : "") << o.csv_header[k];
        s << '\n';
        for (const auto& row : o.csv_rows) {
            for (std::size_t k = 0; k < row.size(); ++k) s << (k ? "," : "") << row[k];
            s << '\n';
        }
        return s.str();
    }
    json doc;
    doc["header"] = {{"tool", "hpdyn"}, {"version", version}, {"config_hash", hash}, {"config", cfg}};
    doc["result"] = o.result;
    return doc.dump(2) + "\n";
}

int run(RunConfig& c) {
    resolve(c);
    Outcome o;
    if (c.command == "classify") o = cmd_classify(c);
    else if (c.command == "rate") o = cmd_rate(c);
    else if (c.command == "koenigs") o = cmd_koenigs(c);
    else if (c.command == "norms") o = cmd_norms(c);
    else o = cmd_criteria(c);
    const std::string text = render(c, o);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.out, std::ios::binary);
        if (!out) throw InputError("cannot write '" + c.out + "'");
        out << text;
    }
    return c.strict && o.undetermined ? undetermined_exit : ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremal-rate diagnostics for self-maps of the upper half-plane"};
    app.set_version_flag("--version", std::string(version));
    RunConfig c;
    app.add_option("command", c.command, "classify | rate | koenigs | norms | criteria")
        ->required()
        ->check(CLI::IsMember({"classify", "rate", "koenigs", "norms", "criteria"}));
    app.add_option("--spec", c.spec_path, "map spec JSON file");
    app.add_option("--catalog", c.catalog_name, "built-in catalog map");
    app.add_option("--budget", c.budget, "iteration budget N");
    app.add_option("--tol", c.tol, "evaluation tolerance");
    app.add_option("--out", c.out, "output path (default stdout)");
    app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--strict", c.strict, "exit 3 when a verdict is undetermined");
    app.add_option("--tau", c.tau_text, "boundary point RE,IM on the unit circle");
    app.add_option("--p", c.p, "exponent p >= 1");
    app.add_option("--space", c.space, "hardy | bergman")->check(CLI::IsMember({"hardy", "bergman"}));
    app.add_option("--base", c.base_text, "base point RE,IM (repeatable)");
    app.add_option("--depth", c.depths, "Koenigs depth (repeatable)");
    app.add_flag("--pommerenke", c.pommerenke, "parabolic normalization for koenigs");
    app.add_option("--m", c.m, "norms: bounds at a single modulus |g(0)| = m");
    app.add_flag_callback("--list", [] {
        for (const auto& e : catalog()) std::cout << e.name << "  " << e.formula << '\n';
        std::exit(0);
    }, "list catalog maps and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : input_error;
    }
    try {
        return run(c);
    } catch (const ContradictionError& e) {
        std::cerr << "contradiction: " << e.what() << '\n';
        return contradiction_exit;
    } catch (const DriftZero& e) {
        std::cerr << "drift zero: " << e.what() << '\n';
        return undetermined_exit;
    } catch (const Undetermined& e) {
        std::cerr << "undetermined: " << e.what() << '\n';
        return undetermined_exit;
    } catch (const QuadratureFailure& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return undetermined_exit;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const ClassificationError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    }
}
