#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatscan/system/system.hpp"

namespace flatscan::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kInputError = 1, kDiagnostic = 2, kNegative = 3 };

struct ModelFile {
  std::string name;
  std::vector<std::string> states;
  std::array<std::string, 2> inputs{"u1", "u2"};
  std::vector<std::string> parameters;
  std::vector<std::string> drift, g1, g2;
  std::optional<std::array<std::string, 2>> flat_output;
  std::vector<std::string> constraints;  // expressions that must not vanish
};

// Throws ValidationError / ParseError on malformed content.
ModelFile model_from_json(const Json& j);
Json model_to_json(const ModelFile& m);
ModelFile load_model(const std::string& path);
void save_model(const ModelFile& m, const std::string& path);

system::ControlAffineSystem to_system(const ModelFile& m);
ModelFile from_system(const system::ControlAffineSystem& sys,
                      const std::optional<std::array<std::string, 2>>& flat_output = std::nullopt);

struct Outcome {
  Json report;
  int exit_code = kPass;
};

struct AnalyzeOptions {
  int algorithm = 2;
  unsigned max_prolong = 0;
  std::uint64_t seed = 1;
  bool timing = false;
};

// Each command catches its own errors and maps them to exit codes.
Outcome cmd_analyze(const std::string& model_path, const AnalyzeOptions& options);
Outcome cmd_verify(const std::string& model_path, const std::string& phi1, const std::string& phi2,
                   std::uint64_t seed, bool timing = false);
Outcome cmd_prolong(const std::string& model_path, unsigned p1, unsigned p2, const std::string& out_path);

// Indented plain-text view of a report.
std::string render_text(const Json& report);

}  // namespace flatscan::cli
