#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace lbtest {

inline std::filesystem::path fixture_path(const std::string& rel) {
  return std::filesystem::path(LB_FIXTURE_DIR) / rel;
}

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture_path(rel), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + rel);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline nlohmann::json read_json_fixture(const std::string& rel) { return nlohmann::json::parse(read_fixture(rel)); }

}  // namespace lbtest
