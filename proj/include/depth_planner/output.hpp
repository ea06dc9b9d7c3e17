#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace depth::cli {

enum class OutputFormat { Csv, Json };

struct OutputEnvelope {
  OutputFormat format = OutputFormat::Csv;
  int precision = 9;         // significant digits
  std::string destination;   // empty or "-" means standard output
};

/// `precision` significant digits, trailing zeros dropped, scientific
/// notation below 1e-4 (and at or above 10^precision). Locale independent.
std::string format_number(double value, int precision);

/// Rounds to what format_number would print.
double round_to_precision(double value, int precision);

using Value = std::variant<double, std::int64_t, std::string>;
using Field = std::pair<std::string, Value>;

/// Everything one command produces. Either `columns`/`rows` (a series) or
/// `scalars` (a single record) carry the primary result; `extras` only
/// appear in JSON.
struct Report {
  std::string command;
  std::vector<Field> inputs;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::vector<Field> scalars;
  std::vector<Field> extras;
  std::vector<Field> provenance;
};

std::string render(const Report& report, const OutputEnvelope& env);

/// Writes the rendered report to env.destination, or to `console` when the
/// destination is standard output. Throws std::runtime_error naming the path
/// and cause on I/O failure.
void emit(const Report& report, const OutputEnvelope& env, std::ostream& console);

}  // namespace depth::cli
