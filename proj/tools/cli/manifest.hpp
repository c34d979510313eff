#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace svmreg::cli {

/// Embedded in every report. `timestamp` is the only field allowed to differ
/// between two runs with the same inputs, flags and seed.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string input_digest;  ///< "sha256:<hex>" of the input file, empty when there is none
  std::string version;
  std::string timestamp;  ///< UTC, ISO 8601
};

nlohmann::json to_json(const RunManifest& m);

std::string sha256_hex(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

std::string utc_timestamp();

std::string_view artifact_version();

}  // namespace svmreg::cli
