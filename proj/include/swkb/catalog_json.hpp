#pragma once

#include <string>

#include <json.hpp>

#include "swkb/catalog.hpp"

namespace swkb {

std::string to_string(Mapping m);

// {id, params, hbar, domain:[a,b], mapping, omega:{num, den}}; infinite domain ends are "inf"/"-inf",
// coefficients are [re, im] pairs in ascending degree.
nlohmann::json to_json(const PotentialSpec& spec);

// Rebuilds the entry from id, params and hbar. Any omega, domain or mapping present must match the
// rebuilt entry, otherwise DomainError.
PotentialSpec spec_from_json(const nlohmann::json& doc);

}  // namespace swkb
