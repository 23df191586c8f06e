#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "wfg/grid.hpp"
#include "wfg/wavefront.hpp"

namespace wfg {

// Shipped schema by file name, e.g. "signal.schema.json".
const std::string& schema_text(const std::string& name);

// Parses text and validates it against a shipped schema. Errors are ConfigError with
// the line and column (syntax) or the offending field pointer (schema).
nlohmann::json parse_validated(const std::string& text, const std::string& schema, const std::string& source);
void validate_json(const nlohmann::json& doc, const std::string& schema, const std::string& source);

std::string read_text(const std::filesystem::path& p);
// Writes to a temporary sibling, then renames over p.
void write_text_atomic(const std::filesystem::path& p, const std::string& text);

// Little-endian float64 (re, im) pairs, base64.
std::string encode_payload(const CVec& v);
CVec decode_payload(const std::string& b64, std::size_t count);

nlohmann::json signal_to_json(const SampledSignal& u);
SampledSignal signal_from_json(const nlohmann::json& j);
void save_signal(const std::filesystem::path& p, const SampledSignal& u);
SampledSignal load_signal(const std::filesystem::path& p);

// Columns: direction_deg, abscissa, sup, fitted_order, class.
std::string report_csv(const WaveFrontReport& r);

// Shortest round-trip text for a double; nan and inf spelled out.
std::string format_double(double v);

}  // namespace wfg
