#include "serialize.hpp"

#include "fjet/error.hpp"

namespace fjet::serialize {

nlohmann::json system_to_json(const SystemSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : spec.params()) params[k] = v;
    return {{"kind", std::string(to_string(spec.kind()))}, {"params", params}};
}

SystemSpec system_from_json(const nlohmann::json& j) {
    try {
        std::map<std::string, double> params;
        for (const auto& [k, v] : j.at("params").items()) params[k] = v.get<double>();
        return SystemSpec(parse_system_kind(j.at("kind").get<std::string>()), std::move(params));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed system description: ") + e.what());
    }
}

nlohmann::json domains_to_json(const Domains& d) {
    return {{"t", {d.t.lo, d.t.hi}}, {"u", {d.u.lo, d.u.hi}}, {"v", {d.v.lo, d.v.hi}}};
}

Domains domains_from_json(const nlohmann::json& j) {
    try {
        auto iv = [&](const char* key) {
            return Interval{j.at(key).at(0).get<double>(), j.at(key).at(1).get<double>()};
        };
        return Domains{iv("t"), iv("u"), iv("v")};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed domains: ") + e.what());
    }
}

}  // namespace fjet::serialize
