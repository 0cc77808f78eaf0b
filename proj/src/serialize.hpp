#pragma once

// JSON forms shared by the dataset sidecar, model files and manifests.

#include <json.hpp>

#include "fjet/datagen.hpp"
#include "fjet/systems.hpp"

namespace fjet::serialize {

nlohmann::json system_to_json(const SystemSpec& spec);
SystemSpec system_from_json(const nlohmann::json& j);

nlohmann::json domains_to_json(const Domains& d);
Domains domains_from_json(const nlohmann::json& j);

}  // namespace fjet::serialize
