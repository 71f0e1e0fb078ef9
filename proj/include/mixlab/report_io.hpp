#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mixlab/czd.hpp"
#include "mixlab/verify.hpp"

namespace mixlab {

// 17 significant digits, classic locale.
std::string format_number(double x);

std::string report_csv(const verify::InequalityReport& r);

// Everything except "metadata" is a pure function of the configuration.
nlohmann::json report_json(const verify::InequalityReport& r);
nlohmann::json config_json(const verify::ExperimentConfig& c);
nlohmann::json cubes_json(const DecompositionResult& d);
nlohmann::json metadata_json(double runtime_seconds);

// Non-finite values become the strings "inf", "-inf" or "nan".
nlohmann::json number_json(double x);

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::string& path, const std::string& contents);

// N little-endian float64 values.
void write_f64(const std::string& path, const std::vector<double>& values);

}  // namespace mixlab
