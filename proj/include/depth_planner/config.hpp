#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace depth::cli {

using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// Parses `key = value` lines. Blank lines and text after '#' are ignored,
/// keys may carry a leading "--", and a later line overrides an earlier one.
/// Throws depth::InvalidArgument naming `origin` and the line on malformed input.
ConfigMap parse_config(std::istream& in, std::string_view origin);

/// Reads and parses the file at `path`; unreadable files throw
/// depth::InvalidArgument naming the path.
ConfigMap load_config(const std::string& path);

}  // namespace depth::cli
