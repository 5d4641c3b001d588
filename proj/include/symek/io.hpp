#pragma once

// JSON and CSV encodings of the public data types.

#include <json.hpp>
#include <string>
#include <vector>

#include "symek/functional.hpp"
#include "symek/rearrangement.hpp"
#include "symek/space.hpp"
#include "symek/variational.hpp"

namespace symek {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void to_json(json& j, const ModelDescriptor& m);
void to_json(json& j, const FunctionElement& u);
void to_json(json& j, const Polarizer& H);
void to_json(json& j, const AxiomResult& r);
void to_json(json& j, const ConformanceReport& r);
void to_json(json& j, const MonotonicityReport& r);
void to_json(json& j, const EkelandParams& p);
void to_json(json& j, const EkelandDiagnostics& d);
void to_json(json& j, const EkelandCertificate& c);
void to_json(json& j, const SlopeCertificate& c);
void to_json(json& j, const SPSEntry& e);
void to_json(json& j, const SPSTrace& t);
void to_json(json& j, const ExtractionReport& r);

ModelDescriptor model_from_json(const json& j);
FunctionElement element_from_json(const json& j);
Polarizer polarizer_from_json(const json& j, const ModelDescriptor& model);
std::vector<Polarizer> polarizers_from_json(const json& j, const ModelDescriptor& model);

/// Rows (j, eps, f, slope_bound, asymmetry), 17 significant digits.
std::string trace_csv(const SPSTrace& trace);

/// Indented dump with a trailing newline, used for every file artifact.
std::string dump_artifact(const json& j);

}  // namespace symek
