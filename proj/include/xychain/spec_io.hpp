#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "xychain/chain_model.hpp"

namespace xychain {

// Chain-spec document:
//   {"k":3,"n":334,"form":"kn_minus_1","omega":[0,0,0],
//    "couplings":[38301.0, ...],"label":"fig1"}
// Structural problems (missing keys, wrong types, unknown form) raise
// ValidationError. Invariants are left to validate_spec.
PeriodicChainSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const PeriodicChainSpec& spec);

PeriodicChainSpec load_spec(const std::filesystem::path& path);

}  // namespace xychain
