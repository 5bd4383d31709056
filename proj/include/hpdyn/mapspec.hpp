#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "herglotz.hpp"
#include "measure.hpp"

namespace hpdyn {

// {"alpha": a, "beta": b, "atoms": [[t, m], ...],
//  "densities": [{"family": name, "scale": c, "params": {...}}, ...]}
// params: compact_uniform {"a", "b"}; log_tail {"one_sided"}; others none.

inline nlohmann::ordered_json measure_to_json(const FiniteMeasure& mu) {
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (const auto& a : mu.atoms()) atoms.push_back({a.location, a.mass});
    nlohmann::ordered_json dens = nlohmann::ordered_json::array();
    for (const auto& d : mu.densities()) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        if (d.family == DensityFamily::compact_uniform) {
            params["a"] = d.lower;
            params["b"] = d.upper;
        } else if (d.family == DensityFamily::log_tail) {
            params["one_sided"] = d.one_sided;
        }
        nlohmann::ordered_json j;
        j["family"] = std::string(family_name(d.family));
        j["scale"] = d.scale;
        j["params"] = params;
        dens.push_back(j);
    }
    return {{"atoms", atoms}, {"densities", dens}};
}

inline nlohmann::ordered_json triplet_to_json(const HerglotzTriplet& f) {
    nlohmann::ordered_json j;
    j["alpha"] = f.alpha();
    j["beta"] = f.beta();
    const auto m = measure_to_json(f.mu());
    j["atoms"] = m["atoms"];
    j["densities"] = m["densities"];
    return j;
}

namespace detail {

inline double number_at(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("map spec: missing '") + key + "'");
    if (!j.at(key).is_number()) throw DomainError(std::string("map spec: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace detail

inline HerglotzTriplet triplet_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("map spec: expected a JSON object");
    const double alpha = detail::number_at(j, "alpha");
    const double beta = detail::number_at(j, "beta");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw DomainError("map spec: 'atoms' must be an array");
        for (const auto& a : j["atoms"]) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw DomainError("map spec: each atom must be [t, m]");
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
    }
    std::vector<DensityComponent> dens;
    if (j.contains("densities")) {
        if (!j["densities"].is_array()) throw DomainError("map spec: 'densities' must be an array");
        for (const auto& d : j["densities"]) {
            if (!d.is_object() || !d.contains("family") || !d["family"].is_string())
                throw DomainError("map spec: each density needs a 'family' string");
            const auto fam = family_from_name(d["family"].get<std::string>());
            const double c = detail::number_at(d, "scale");
            if (!(c > 0) || !std::isfinite(c)) throw DomainError("map spec: density scale must be positive");
            const nlohmann::json params = d.contains("params") ? d["params"] : nlohmann::json::object();
            switch (fam) {
            case DensityFamily::compact_uniform:
                dens.push_back(DensityComponent::compact_uniform(c, detail::number_at(params, "a"), detail::number_at(params, "b")));
                break;
            case DensityFamily::log_tail: {
                bool one = false;
                if (params.contains("one_sided")) {
                    if (!params["one_sided"].is_boolean()) throw DomainError("map spec: 'one_sided' must be a boolean");
                    one = params["one_sided"].get<bool>();
                }
                dens.push_back(DensityComponent::log_tail(c, one));
                break;
            }
            case DensityFamily::cauchy: dens.push_back(DensityComponent::cauchy(c)); break;
            case DensityFamily::one_sided_quadratic: dens.push_back(DensityComponent::one_sided_quadratic(c)); break;
            case DensityFamily::gaussian: dens.push_back(DensityComponent::gaussian(c)); break;
            }
        }
    }
    return HerglotzTriplet(alpha, beta, FiniteMeasure(std::move(atoms), std::move(dens)));
}

inline HerglotzTriplet parse_map_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("map spec: ") + e.what());
    }
    return triplet_from_json(j);
}

inline HerglotzTriplet load_map_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("map spec: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_map_spec(ss.str());
}

inline void save_map_spec(const HerglotzTriplet& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("map spec: cannot write '" + path + "'");
    out << triplet_to_json(f).dump(2) << '\n';
}

} // namespace hpdyn
