#pragma once

#include <string>
#include <vector>

#include "conesq/experiments.hpp"

namespace conesq {

// Delta lists: comma-separated items, each a number, "2^-k", or an inclusive dyadic range "2^-a:2^-b".
std::vector<double> parse_deltas(const std::string& text);

// Sets one field by config key; unknown keys throw DomainError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// INI-style file: top-level "key = value" lines, then [experiment] tables applied when that experiment is
// selected. `experiment` (if non-empty) picks the table before the file's own choice.
ExperimentConfig load_config(const std::string& path, const std::string& experiment = "");
ExperimentConfig parse_config(const std::string& text, const std::string& experiment = "");

// Memory ceiling in MB from CONESQ_MEMORY_MB, or the fallback.
double memory_ceiling_mb(double fallback = 4096);

}  // namespace conesq
