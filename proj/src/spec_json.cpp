#include "asqlab/spec_json.hpp"

#include <set>

#include "json.hpp"

#include "asqlab/errors.hpp"

namespace asqlab {

namespace {

std::int64_t int_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        throw ConfigError(std::string("space spec: missing field ") + key);
    const auto& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(std::string("space spec: field ") + key + " must be an integer");
    return v.get<std::int64_t>();
}

} // namespace

SpaceSpec parse_space_spec(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ConfigError("space spec: not a JSON object: " + text);
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("space spec: missing string field kind");

    SpaceSpec spec;
    spec.kind = j.at("kind").get<std::string>();

    std::set<std::string> allowed;
    if (spec.kind == "fkn") {
        allowed = {"kind", "k", "n", "m"};
        spec.k = int_field(j, "k");
        spec.n = int_field(j, "n");
        spec.m = int_field(j, "m");
    } else if (spec.kind == "xn") {
        allowed = {"kind", "k", "N", "m"};
        spec.k = int_field(j, "k");
        spec.N = int_field(j, "N");
        spec.m = int_field(j, "m");
    } else if (spec.kind == "c0_sum") {
        allowed = {"kind", "k", "m", "components"};
        spec.k = int_field(j, "k");
        spec.m = int_field(j, "m");
        if (!j.contains("components"))
            throw ConfigError("space spec: missing field components");
        const auto& comps = j.at("components");
        if (!comps.is_array() || comps.empty())
            throw ConfigError("space spec: components must be a nonempty array");
        for (const auto& c : comps) {
            if (!c.is_number_integer() && !c.is_number_unsigned())
                throw ConfigError("space spec: components must hold integers");
            spec.components.push_back(c.get<std::int64_t>());
        }
    } else {
        throw ConfigError("space spec: unknown kind " + spec.kind);
    }

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("space spec: unexpected field " + key);
    }
    return spec;
}

} // namespace asqlab
