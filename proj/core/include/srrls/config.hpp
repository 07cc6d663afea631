#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "srrls/harness.hpp"

namespace srrls {

/// Parses the key-value experiment format (see README, "Config files").
///
///   # comment
///   case = case1
///   runs = 20
///   [algorithm]
///   variant = JO-S-RRLS
///   tau = 1.4
///
/// Global keys come before the first [algorithm] header. Each header opens a
/// block that starts from the scenario defaults for its variant. Without
/// any block the scenario's default algorithm list is used. Errors carry
/// `origin:line`.
ExperimentConfig parse_config(std::istream& in, std::string_view origin = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Serialises every field, defaults included, in the format parse_config reads.
std::string format_config(const ExperimentConfig& config);

}  // namespace srrls
