#include "depth_planner/output.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "depth_planner/errors.hpp"

namespace depth::cli {
namespace {

using nlohmann::ordered_json;

std::string format_value(const Value& v, int precision) {
  if (const auto* d = std::get_if<double>(&v)) {
    return format_number(*d, precision);
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return std::to_string(*i);
  }
  return std::get<std::string>(v);
}

ordered_json to_json(const Value& v, int precision) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) {
      return nullptr;
    }
    return round_to_precision(*d, precision);
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return *i;
  }
  return std::get<std::string>(v);
}

ordered_json fields_to_json(const std::vector<Field>& fields, int precision) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, value] : fields) {
    out[key] = to_json(value, precision);
  }
  return out;
}

std::string render_csv(const Report& report, int precision) {
  std::string out;
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += cells[i];
    }
    out += '\n';
  };
  if (!report.columns.empty()) {
    write_row(report.columns);
    for (const auto& row : report.rows) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& v : row) {
        cells.push_back(format_value(v, precision));
      }
      write_row(cells);
    }
    return out;
  }
  std::vector<std::string> header;
  std::vector<std::string> values;
  for (const auto& [key, value] : report.scalars) {
    header.push_back(key);
    values.push_back(format_value(value, precision));
  }
  write_row(header);
  write_row(values);
  return out;
}

std::string render_json(const Report& report, int precision) {
  ordered_json doc;
  doc["command"] = report.command;
  doc["inputs"] = fields_to_json(report.inputs, precision);
  ordered_json outputs = fields_to_json(report.scalars, precision);
  if (!report.columns.empty()) {
    outputs["columns"] = report.columns;
    ordered_json points = ordered_json::array();
    for (const auto& row : report.rows) {
      ordered_json point = ordered_json::object();
      for (std::size_t i = 0; i < row.size() && i < report.columns.size(); ++i) {
        point[report.columns[i]] = to_json(row[i], precision);
      }
      points.push_back(std::move(point));
    }
    outputs["points"] = std::move(points);
  }
  for (const auto& [key, value] : report.extras) {
    outputs[key] = to_json(value, precision);
  }
  doc["outputs"] = std::move(outputs);
  doc["provenance"] = fields_to_json(report.provenance, precision);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string format_number(double value, int precision) {
  if (precision < 1 || precision > 17) {
    throw InvalidArgument("precision must lie in [1,17]");
  }
  if (!std::isfinite(value)) {
    return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  }
  if (value == 0.0) {
    return "0";
  }
  std::array<char, 64> buf{};
  // Shortest round-trip form first; fall back to rounding when it needs more
  // digits than allowed.
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, precision);
  if (ec != std::errc{}) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf.data(), end);
}

double round_to_precision(double value, int precision) {
  if (!std::isfinite(value)) {
    return value;
  }
  const std::string text = format_number(value, precision);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

std::string render(const Report& report, const OutputEnvelope& env) {
  return env.format == OutputFormat::Csv ? render_csv(report, env.precision)
                                         : render_json(report, env.precision);
}

void emit(const Report& report, const OutputEnvelope& env, std::ostream& console) {
  const std::string text = render(report, env);
  if (env.destination.empty() || env.destination == "-") {
    console << text;
    return;
  }
  std::ofstream file(env.destination, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open " + env.destination + ": " + std::strerror(errno));
  }
  file << text;
  file.flush();
  if (!file) {
    throw std::runtime_error("cannot write " + env.destination + ": " + std::strerror(errno));
  }
}

}  // namespace depth::cli
