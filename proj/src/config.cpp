#include "depth_planner/config.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>

#include "depth_planner/errors.hpp"

namespace depth::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigMap parse_config(std::istream& in, std::string_view origin) {
  ConfigMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    std::string_view key = eq == std::string_view::npos ? std::string_view{} : trim(text.substr(0, eq));
    if (key.starts_with("--")) {
      key.remove_prefix(2);
    }
    if (key.empty()) {
      throw InvalidArgument(std::string(origin) + ":" + std::to_string(line_no) +
                            ": expected key = value");
    }
    out.insert_or_assign(std::string(key), std::string(trim(text.substr(eq + 1))));
  }
  return out;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot read config " + path + ": " + std::strerror(errno));
  }
  return parse_config(in, path);
}

}  // namespace depth::cli
