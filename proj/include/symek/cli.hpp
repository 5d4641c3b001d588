#pragma once

// Reproducible experiment runner behind the `symek` command-line tool.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symek/io.hpp"
#include "symek/variational.hpp"

namespace symek {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

enum class Command { VerifyAxioms, CheckMonotone, Ekeland, SymmetricEkeland, SPS };
enum class OutputFormat { JSON, CSV };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::SPS;
  ModelDescriptor model = ModelDescriptor::vector(16);
  std::string functional = "quadratic";
  std::vector<std::pair<std::string, double>> functional_params;
  EkelandParams params;
  std::string schedule = "geometric:0.5:10";
  PolarizationSchedule polarization = PolarizationSchedule::sweep();
  long samples = 1000;
  std::uint64_t seed = 0;
  double conv_tol = 2e-3;
  std::string output_path;
  OutputFormat format = OutputFormat::JSON;
};

void to_json(json& j, const RunConfig& c);
RunConfig config_from_json(const json& j);

/// "vector:8", "grid1d:17" (h = 1/m), "grid1d:17:0.125".
ModelDescriptor parse_model(const std::string& spec);

/// "name" or "name:k=v,k=v".
std::pair<std::string, std::vector<std::pair<std::string, double>>> parse_functional_spec(const std::string& spec);

/// "geometric:<ratio>:<count>" -> ratio^j, j = 1..count; "list:v1,v2,..." strictly decreasing.
std::vector<double> parse_schedule(const std::string& spec);

struct RunResult {
  std::string artifact;  ///< bytes written to output_path
  json summary;
  int exit_status = kExitOk;
};

/// Runs a command without touching the filesystem.
RunResult execute(const RunConfig& config);

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
  std::string command;
  json summary;
  int exit_status = kExitOk;
};

void to_json(json& j, const RunManifest& m);

/// execute() + writes the artifact to output_path (stdout when empty) and the
/// manifest to output_path + ".manifest.json".
RunManifest run(const RunConfig& config);

std::string config_hash(const RunConfig& config);

}  // namespace symek
