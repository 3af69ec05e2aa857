#pragma once

#include <map>
#include <string>

#include "vcm/experiments.hpp"

namespace vcm {

// Plain-text hierarchical key-value config: one `key = value` per line,
// '#' comments, dotted keys. Duplicate keys are rejected.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);

// Builds a plan, rejecting unknown keys and missing required keys with a
// diagnostic naming the offending key.
ExperimentPlan plan_from_config(const ConfigMap& cfg);

// Resolved config; re-parses to an identical plan.
std::string manifest_text(const ExperimentPlan& plan);

std::string dictionary_kind_name(DictionaryKind kind);
std::string noise_kind_name(NoiseKind kind);
std::string basis_kind_name(BasisKind kind);
DictionaryKind dictionary_kind_from(const std::string& name);
NoiseKind noise_kind_from(const std::string& name);
BasisKind basis_kind_from(const std::string& name);

}  // namespace vcm
