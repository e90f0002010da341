#include "swe/config.hpp"

#include "swe/common.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace swe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& text, const std::string& origin) {
  std::vector<std::string> args;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(number);
    if (eq == std::string::npos) raise(ErrorKind::Usage, where + ": expected key = value");
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos)
      raise(ErrorKind::Usage, where + ": invalid key '" + key + "'");
    if (value.empty()) raise(ErrorKind::Usage, where + ": missing value for '" + key + "'");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::vector<std::string> read_config_arguments(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot open '" + path + "' for reading: " + std::strerror(errno));
  std::stringstream ss;
  ss << in.rdbuf();
  return config_arguments(ss.str(), path);
}

}  // namespace swe
