#pragma once

// key = value configuration files. Each entry is equivalent to the flag
// --key value; blank lines and lines starting with '#' are ignored.

#include <string>
#include <vector>

namespace swe {

/// Flag/value pairs of a configuration text; raises Usage naming the line on malformed input.
std::vector<std::string> config_arguments(const std::string& text, const std::string& origin = "config");
/// As config_arguments on a file's contents; raises Io when unreadable.
std::vector<std::string> read_config_arguments(const std::string& path);

}  // namespace swe
