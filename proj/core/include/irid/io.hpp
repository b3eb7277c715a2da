#ifndef IRID_IO_HPP
#define IRID_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "irid/model.hpp"
#include "irid/solver.hpp"

namespace irid {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Reads the JSON model format into a spec without validating the model.
/// Throws SyntaxError (with line and column) and SchemaError (with the
/// offending field path).
ModelSpec parse_model_spec(std::string_view text);

/// parse_model_spec followed by build_model.
IridModel parse_model(std::string_view text);

/// Reads and parses a model file. Throws InvalidArgument if unreadable.
IridModel load_model(const std::filesystem::path& path);

/// Canonical JSON text; parse_model(serialize_model(m)) == m.
std::string serialize_model(const IridModel& model);

/// FNV-1a 64 of the canonical model text, as 16 hex digits.
std::string model_hash(const IridModel& model);

/// Canonical solution JSON: stable key order, values with two decimals.
/// Identical solutions give identical bytes.
std::string serialize_solution(const Solution& solution, const IridModel& model);

/// Fixed-width policy tables in frame order, followed by the expected value.
std::string format_policy_table(const Solution& solution, const IridModel& model);

/// Fixed-point rendering with `decimals` digits; never prints "-0.00".
std::string format_fixed(double value, int decimals);

}  // namespace irid

#endif  // IRID_IO_HPP
