#include "symek/io.hpp"

#include <cstdio>

namespace symek {

void to_json(json& j, const ModelDescriptor& m) {
  j = json{{"kind", m.kind() == ModelKind::Vector ? "vector" : "grid1d"},
           {"n", m.n()},
           {"h_mesh", m.h_mesh()}};
}

void to_json(json& j, const FunctionElement& u) {
  j = json{{"model", u.model()}, {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

void to_json(json& j, const Polarizer& H) {
  if (H.model().kind() == ModelKind::Vector)
    j = json{{"pair", {H.first(), H.second()}}};
  else
    j = json{{"half_steps", H.half_steps()}, {"a", H.center()}};
}

void to_json(json& j, const AxiomResult& r) {
  j = json{{"name", r.name},
           {"passed", r.passed},
           {"worst_residual", r.worst_residual},
           {"tolerance", r.tolerance},
           {"worst_sample", r.worst_sample}};
  j["witness"] = r.witness.empty() ? json(nullptr) : json::parse(r.witness);
}

void to_json(json& j, const ConformanceReport& r) {
  j = json{{"schema_version", kSchemaVersion},
           {"model", r.model},
           {"samples", r.samples},
           {"seed", r.seed},
           {"passed", r.passed()},
           {"axioms", r.axioms}};
}

ModelDescriptor model_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    if (kind == "vector") return ModelDescriptor::vector(n);
    if (kind == "grid1d") return ModelDescriptor::grid1d(n, j.value("h_mesh", 1.0));
    throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("model: ") + e.what());
  }
}

FunctionElement element_from_json(const json& j) {
  try {
    return FunctionElement(model_from_json(j.at("model")), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("element: ") + e.what());
  }
}

Polarizer polarizer_from_json(const json& j, const ModelDescriptor& model) {
  try {
    if (model.kind() == ModelKind::Vector) {
      const auto& p = j.at("pair");
      return Polarizer::pair(model, p.at(0).get<int>(), p.at(1).get<int>());
    }
    return Polarizer::reflection(model, j.at("half_steps").get<int>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("polarizer: ") + e.what());
  }
}

std::vector<Polarizer> polarizers_from_json(const json& j, const ModelDescriptor& model) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "polarizer sequence must be an array");
  std::vector<Polarizer> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(polarizer_from_json(item, model));
  return out;
}

std::string dump_artifact(const json& j) { return j.dump(2) + "\n"; }

}  // namespace symek

namespace symek {

namespace {

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

void to_json(json& j, const MonotonicityReport& r) {
  j = json{{"schema_version", kSchemaVersion},
           {"functional", r.functional},
           {"model", r.model},
           {"samples", r.samples},
           {"seed", r.seed},
           {"max_violation", r.max_violation},
           {"tolerance", r.tolerance},
           {"worst_sample", r.worst_sample},
           {"passed", r.passed}};
  j["witness"] = r.witness.empty() ? json(nullptr) : json::parse(r.witness);
}

void to_json(json& j, const EkelandParams& p) {
  j = json{{"rho", p.rho},
           {"sigma", p.sigma},
           {"inner_tol_initial", p.inner_tol_initial},
           {"inner_budget", p.inner_budget},
           {"max_outer_iters", p.max_outer_iters},
           {"cert_samples", p.cert_samples},
           {"cert_seed", p.cert_seed}};
}

void to_json(json& j, const EkelandDiagnostics& d) {
  j = json{{"outer_iters", d.outer_iters},
           {"accepted_steps", d.accepted_steps},
           {"budget_exhausted", d.budget_exhausted},
           {"path_length", d.path_length},
           {"f_start", d.f_start},
           {"f_end", d.f_end},
           {"final_delta", d.final_delta}};
}

void to_json(json& j, const EkelandCertificate& c) {
  j = json{{"u", c.u},
           {"u_tilde", c.u_tilde},
           {"v", c.v},
           {"rho", c.rho},
           {"sigma", c.sigma},
           {"f_u", c.f_u},
           {"f_u_tilde", c.f_u_tilde},
           {"f_v", c.f_v},
           {"asymmetry", c.asymmetry},
           {"C_used", c.C_used},
           {"displacement", c.displacement},
           {"trho_displacement", c.trho_displacement},
           {"ekeland_displacement", c.ekeland_displacement},
           {"trho_distance", c.trho_distance},
           {"descent_ok", c.descent_ok},
           {"d_residual", c.d_residual},
           {"slope_excess", c.slope_excess},
           {"sampled_w_count", c.sampled_w_count},
           {"polarizer_trace", c.polarizer_trace},
           {"premise", c.premise},
           {"diagnostics", c.diagnostics},
           {"checks",
            {{"a_asymmetry", c.a_ok()}, {"b_displacement", c.b_ok()}, {"c_descent", c.c_ok()}, {"d_probes", c.d_ok()}}},
           {"passed", c.passed()}};
}

void to_json(json& j, const SlopeCertificate& c) {
  j = json{{"at", c.at}, {"upper_bound", c.upper_bound}, {"method", to_string(c.method)}, {"detail", c.detail}};
}

void to_json(json& j, const SPSEntry& e) {
  j = json{{"stage", e.stage},
           {"eps", e.eps},
           {"v", e.v},
           {"f_v", e.f_v},
           {"slope_bound", e.slope_bound},
           {"slope_method", "EkelandInequality"},
           {"gradient_norm", optional_json(e.gradient_norm)},
           {"asymmetry", e.asymmetry},
           {"m_est", e.m_est},
           {"premise_descent", e.premise_descent},
           {"certificate_passed", e.certificate.passed()},
           {"d_residual", e.certificate.d_residual},
           {"displacement", e.certificate.displacement},
           {"polarizations", e.certificate.polarizer_trace.size()}};
}

void to_json(json& j, const SPSTrace& t) {
  j = json{{"schema_version", kSchemaVersion},
           {"functional", t.functional},
           {"m_estimator", t.m_estimator},
           {"C_used", t.C_used},
           {"entries", t.entries},
           {"limit", t.limit ? json(*t.limit) : json(nullptr)},
           {"limit_value", optional_json(t.limit_value)},
           {"limit_symmetric_residual", optional_json(t.limit_symmetric_residual)}};
}

void to_json(json& j, const ExtractionReport& r) {
  j = json{{"converged", r.converged},
           {"conv_tol", r.conv_tol},
           {"trailing_distances", r.trailing_distances},
           {"f_z", r.f_z},
           {"min_observed", r.min_observed},
           {"z_asymmetry", r.z_asymmetry},
           {"chain_slack", r.chain_slack},
           {"symmetric_limit", r.symmetric_limit}};
}

std::string trace_csv(const SPSTrace& trace) {
  std::string out = "j,eps,f,slope_bound,asymmetry\n";
  char buf[160];
  for (const auto& e : trace.entries) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", e.stage, e.eps, e.f_v, e.slope_bound, e.asymmetry);
    out += buf;
  }
  return out;
}

}  // namespace symek
