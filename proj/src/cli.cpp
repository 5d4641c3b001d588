#include "symek/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include <spdlog/spdlog.h>

#include "symek/rng.hpp"

namespace symek {

const char* to_string(Command c) {
  switch (c) {
    case Command::VerifyAxioms: return "verify-axioms";
    case Command::CheckMonotone: return "check-monotone";
    case Command::Ekeland: return "ekeland";
    case Command::SymmetricEkeland: return "symmetric-ekeland";
    case Command::SPS: return "sps";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::VerifyAxioms, Command::CheckMonotone, Command::Ekeland, Command::SymmetricEkeland,
                    Command::SPS})
    if (s == to_string(c)) return c;
  throw Error(ErrorCode::ConfigError, "unknown command '" + s + "'");
}

namespace {

double parse_number(const std::string& text, std::size_t position, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value))
    throw Error(ErrorCode::ParseError, "bad number '" + text + "' at position " + std::to_string(position) +
                                           " in '" + spec + "'");
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

ModelDescriptor parse_model(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw Error(ErrorCode::ParseError, "model must look like kind:n[:h], got '" + spec + "'");
  const std::size_t n_pos = parts[0].size() + 1;
  const double n_real = parse_number(parts[1], n_pos, spec);
  if (n_real != std::floor(n_real) || n_real < 1 || n_real > 1e6)
    throw Error(ErrorCode::ParseError, "model size must be a positive integer at position " +
                                           std::to_string(n_pos) + " in '" + spec + "'");
  const int n = static_cast<int>(n_real);
  if (parts[0] == "vector") {
    if (parts.size() == 3 && parse_number(parts[2], n_pos + parts[1].size() + 1, spec) != 1.0)
      throw Error(ErrorCode::ParseError, "vector model has h_mesh fixed to 1");
    return ModelDescriptor::vector(n);
  }
  if (parts[0] == "grid1d") {
    if (n < 3 || n % 2 == 0) throw Error(ErrorCode::ParseError, "grid1d needs odd n >= 3 in '" + spec + "'");
    const double h = parts.size() == 3 ? parse_number(parts[2], n_pos + parts[1].size() + 1, spec)
                                       : 1.0 / ((n - 1) / 2);
    return ModelDescriptor::grid1d(n, h);
  }
  throw Error(ErrorCode::ParseError, "unknown model kind '" + parts[0] + "' at position 0 in '" + spec + "'");
}

std::pair<std::string, std::vector<std::pair<std::string, double>>> parse_functional_spec(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  std::pair<std::string, std::vector<std::pair<std::string, double>>> out;
  out.first = spec.substr(0, colon);
  if (out.first.empty()) throw Error(ErrorCode::ParseError, "empty functional name");
  if (colon == std::string::npos) return out;
  std::size_t position = colon + 1;
  for (const std::string& kv : split(spec.substr(colon + 1), ',')) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::ParseError, "expected key=value at position " + std::to_string(position) + " in '" +
                                             spec + "'");
    out.second.emplace_back(kv.substr(0, eq), parse_number(kv.substr(eq + 1), position + eq + 1, spec));
    position += kv.size() + 1;
  }
  return out;
}

std::vector<double> parse_schedule(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::ParseError, "schedule must start with 'geometric:' or 'list:', got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<double> out;
  if (kind == "geometric") {
    const auto parts = split(spec.substr(colon + 1), ':');
    if (parts.size() != 2)
      throw Error(ErrorCode::ParseError, "geometric schedule is geometric:<ratio>:<count>, got '" + spec + "'");
    const double ratio = parse_number(parts[0], colon + 1, spec);
    const std::size_t count_pos = colon + 1 + parts[0].size() + 1;
    const double count = parse_number(parts[1], count_pos, spec);
    if (!(ratio > 0.0 && ratio < 1.0))
      throw Error(ErrorCode::ParseError, "ratio must lie in (0, 1) at position " + std::to_string(colon + 1));
    if (count < 1 || count != std::floor(count) || count > 10'000)
      throw Error(ErrorCode::ParseError, "count must be a positive integer at position " + std::to_string(count_pos));
    double eps = 1.0;
    for (int j = 1; j <= static_cast<int>(count); ++j) {
      eps *= ratio;
      out.push_back(eps);
    }
    return out;
  }
  if (kind == "list") {
    std::size_t position = colon + 1;
    for (const std::string& item : split(spec.substr(colon + 1), ',')) {
      const double v = parse_number(item, position, spec);
      if (!(v > 0.0)) throw Error(ErrorCode::ParseError, "value must be positive at position " + std::to_string(position));
      if (!out.empty() && !(v < out.back()))
        throw Error(ErrorCode::ParseError, "values must be strictly decreasing at position " + std::to_string(position));
      out.push_back(v);
      position += item.size() + 1;
    }
    return out;
  }
  throw Error(ErrorCode::ParseError, "unknown schedule kind '" + kind + "' at position 0");
}

void to_json(json& j, const RunConfig& c) {
  json params = json::array();
  for (const auto& [k, v] : c.functional_params) params.push_back({k, v});
  j = json{{"command", to_string(c.command)},
           {"model", c.model},
           {"functional", c.functional},
           {"functional_params", params},
           {"params", c.params},
           {"schedule", c.schedule},
           {"polarization",
            {{"strategy", c.polarization.strategy == ScheduleStrategy::SeededRandom ? "random" : "sweep"},
             {"seed", c.polarization.seed},
             {"max_steps", c.polarization.max_steps}}},
           {"samples", c.samples},
           {"seed", c.seed},
           {"conv_tol", c.conv_tol},
           {"output_path", c.output_path},
           {"format", c.format == OutputFormat::CSV ? "csv" : "json"}};
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; }))
      throw Error(ErrorCode::ConfigError, "unknown key '" + k + "' in " + where);
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown_keys(j,
                      {"command", "model", "functional", "functional_params", "params", "schedule", "polarization",
                       "samples", "seed", "conv_tol", "output_path", "format"},
                      "config");
  try {
    if (j.contains("command")) c.command = command_from_string(j.at("command").get<std::string>());
    if (j.contains("model")) {
      const auto& m = j.at("model");
      c.model = m.is_string() ? parse_model(m.get<std::string>()) : model_from_json(m);
    }
    if (j.contains("functional")) c.functional = j.at("functional").get<std::string>();
    if (j.contains("functional_params")) {
      c.functional_params.clear();
      const auto& p = j.at("functional_params");
      if (p.is_object()) {
        for (const auto& [k, v] : p.items()) c.functional_params.emplace_back(k, v.get<double>());
      } else {
        for (const auto& kv : p) c.functional_params.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<double>());
      }
    }
    if (j.contains("params")) {
      const auto& p = j.at("params");
      reject_unknown_keys(p,
                          {"rho", "sigma", "inner_tol_initial", "inner_budget", "max_outer_iters", "cert_samples",
                           "cert_seed"},
                          "params");
      c.params.rho = p.value("rho", c.params.rho);
      c.params.sigma = p.value("sigma", c.params.sigma);
      c.params.inner_tol_initial = p.value("inner_tol_initial", c.params.inner_tol_initial);
      c.params.inner_budget = p.value("inner_budget", c.params.inner_budget);
      c.params.max_outer_iters = p.value("max_outer_iters", c.params.max_outer_iters);
      c.params.cert_samples = p.value("cert_samples", c.params.cert_samples);
      c.params.cert_seed = p.value("cert_seed", c.params.cert_seed);
    }
    if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::string>();
    if (j.contains("polarization")) {
      const auto& p = j.at("polarization");
      reject_unknown_keys(p, {"strategy", "seed", "max_steps"}, "polarization");
      const std::string strategy = p.value("strategy", std::string("sweep"));
      if (strategy != "sweep" && strategy != "random")
        throw Error(ErrorCode::ConfigError, "polarization.strategy must be sweep or random");
      c.polarization.strategy = strategy == "random" ? ScheduleStrategy::SeededRandom : ScheduleStrategy::DeterministicSweep;
      c.polarization.seed = p.value("seed", c.polarization.seed);
      c.polarization.max_steps = p.value("max_steps", c.polarization.max_steps);
    }
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.conv_tol = j.value("conv_tol", c.conv_tol);
    c.output_path = j.value("output_path", c.output_path);
    if (j.contains("format")) {
      const std::string f = j.at("format").get<std::string>();
      if (f != "json" && f != "csv") throw Error(ErrorCode::ConfigError, "format must be json or csv");
      c.format = f == "csv" ? OutputFormat::CSV : OutputFormat::JSON;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config field: ") + e.what());
  }
  return c;
}

std::string config_hash(const RunConfig& config) {
  // FNV-1a over the canonical JSON encoding.
  const std::string text = json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunResult run_verify_axioms(const RunConfig& c) {
  const ConformanceReport report = verify_framework(c.model, c.samples, c.seed);
  RunResult r;
  if (c.format == OutputFormat::CSV) {
    r.artifact = "axiom,passed,worst_residual,tolerance,worst_sample\n";
    for (const auto& a : report.axioms)
      r.artifact += a.name + "," + (a.passed ? "true" : "false") + "," + csv_number(a.worst_residual) + "," +
                    csv_number(a.tolerance) + "," + std::to_string(a.worst_sample) + "\n";
  } else {
    r.artifact = dump_artifact(report);
  }
  r.summary = {{"passed", report.passed()}};
  r.exit_status = report.passed() ? kExitOk : kExitCheckFailed;
  return r;
}

RunResult run_check_monotone(const RunConfig& c) {
  const FunctionalPtr f = make_functional(c.functional, c.model, c.functional_params);
  const MonotonicityReport report = check_polarization_monotone(*f, c.samples, c.seed);
  RunResult r;
  if (c.format == OutputFormat::CSV)
    r.artifact = "functional,passed,max_violation,tolerance,worst_sample\n" + report.functional + "," +
                 (report.passed ? "true" : "false") + "," + csv_number(report.max_violation) + "," +
                 csv_number(report.tolerance) + "," + std::to_string(report.worst_sample) + "\n";
  else
    r.artifact = dump_artifact(report);
  // The asserted invariant is that the empirical verdict agrees with the functional's claim.
  const bool agrees = report.passed == f->claims_polarization_monotone();
  r.summary = {{"passed", report.passed}, {"claims_monotone", f->claims_polarization_monotone()}, {"agrees", agrees}};
  r.exit_status = agrees ? kExitOk : kExitCheckFailed;
  return r;
}

FunctionElement seeded_start(const Functional& f, std::uint64_t seed) {
  Engine engine = derive_engine(seed, 0xfeedULL);
  FunctionElement u = random_cone_element(f.model(), engine);
  return f.cone_reduce(u);
}

RunResult run_ekeland(const RunConfig& c) {
  const FunctionalPtr f = make_functional(c.functional, c.model, c.functional_params);
  const FunctionElement u0 = seeded_start(*f, c.seed);
  EkelandParams p = c.params;
  const EkelandPoint ek = ekeland_point(*f, u0, p);
  const ProbeSummary probes = probe_ekeland_inequality(*f, ek.v, p.sigma, p.cert_samples, p.cert_seed, p.inner_budget);
  const double f0 = f->eval(u0);
  const double fv = f->eval(ek.v);
  const double displacement = dist_X(ek.v, u0);
  const bool displacement_ok = displacement <= (f0 - fv) / p.sigma + kChainTol;
  const bool descent_ok = fv <= f0;
  const bool d_ok = probes.d_residual <= kProbeTol;
  json out = {{"schema_version", kSchemaVersion},
              {"functional", f->name()},
              {"params", p},
              {"u0", u0},
              {"v", ek.v},
              {"f_u0", f0},
              {"f_v", fv},
              {"displacement", displacement},
              {"displacement_bound", (f0 - fv) / p.sigma},
              {"d_residual", probes.d_residual},
              {"sampled_w_count", probes.count},
              {"diagnostics", ek.diagnostics},
              {"checks", {{"descent", descent_ok}, {"displacement", displacement_ok}, {"d_probes", d_ok}}}};
  RunResult r;
  if (c.format == OutputFormat::CSV)
    r.artifact = "f_u0,f_v,displacement,d_residual\n" + csv_number(f0) + "," + csv_number(fv) + "," +
                 csv_number(displacement) + "," + csv_number(probes.d_residual) + "\n";
  else
    r.artifact = dump_artifact(out);
  const bool ok = displacement_ok && descent_ok && d_ok && !ek.diagnostics.budget_exhausted;
  r.summary = {{"passed", ok}};
  r.exit_status = ok ? kExitOk : kExitCheckFailed;
  return r;
}

RunResult run_symmetric_ekeland(const RunConfig& c) {
  const FunctionalPtr f = make_functional(c.functional, c.model, c.functional_params);
  const NearInfimumStart start =
      near_infimum_start(*f, seeded_start(*f, c.seed), c.params.rho * c.params.sigma, c.seed, c.params.inner_budget);
  const EkelandCertificate cert = symmetric_ekeland(*f, start.u, c.params, c.polarization);
  RunResult r;
  if (c.format == OutputFormat::CSV) {
    r.artifact = "rho,sigma,f_u,f_v,asymmetry,C_used,displacement,trho_displacement,d_residual,passed\n" +
                 csv_number(cert.rho) + "," + csv_number(cert.sigma) + "," + csv_number(cert.f_u) + "," +
                 csv_number(cert.f_v) + "," + csv_number(cert.asymmetry) + "," + csv_number(cert.C_used) + "," +
                 csv_number(cert.displacement) + "," + csv_number(cert.trho_displacement) + "," +
                 csv_number(cert.d_residual) + "," + (cert.passed() ? "true" : "false") + "\n";
  } else {
    json out = cert;
    out["schema_version"] = kSchemaVersion;
    out["functional"] = f->name();
    out["m_est"] = start.m_est;
    out["m_estimator"] = start.estimator;
    r.artifact = dump_artifact(out);
  }
  r.summary = {{"passed", cert.passed()}};
  r.exit_status = cert.passed() ? kExitOk : kExitCheckFailed;
  return r;
}

RunResult run_sps(const RunConfig& c) {
  const FunctionalPtr f = make_functional(c.functional, c.model, c.functional_params);
  const std::vector<double> eps = parse_schedule(c.schedule);
  SPSOptions opts;
  opts.params = c.params;
  opts.params.cert_seed = c.seed;
  opts.schedule = c.polarization;
  SPSTrace trace = sps_sequence(*f, seeded_start(*f, c.seed), eps, opts);
  const Extraction ex = extract_minimizer(trace, c.conv_tol);

  bool ok = true;
  for (const auto& e : trace.entries)
    ok = ok && e.certificate.passed() && e.asymmetry <= trace.C_used * e.eps;
  RunResult r;
  if (c.format == OutputFormat::CSV) {
    r.artifact = trace_csv(trace);
  } else {
    json out = trace;
    out["extraction"] = ex.report;
    r.artifact = dump_artifact(out);
  }
  r.summary = {{"passed", ok}, {"converged", ex.report.converged}, {"symmetric_limit", ex.report.symmetric_limit}};
  r.exit_status = ok ? kExitOk : kExitCheckFailed;
  return r;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult execute(const RunConfig& config) {
  switch (config.command) {
    case Command::VerifyAxioms: return run_verify_axioms(config);
    case Command::CheckMonotone: return run_check_monotone(config);
    case Command::Ekeland: return run_ekeland(config);
    case Command::SymmetricEkeland: return run_symmetric_ekeland(config);
    case Command::SPS: return run_sps(config);
  }
  throw Error(ErrorCode::ConfigError, "unhandled command");
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"config_hash", m.config_hash}, {"tool_version", m.tool_version}, {"started_at", m.started_at},
           {"finished_at", m.finished_at}, {"command", m.command},         {"summary", m.summary},
           {"exit_status", m.exit_status}};
}

RunManifest run(const RunConfig& config) {
  RunManifest m;
  m.config_hash = config_hash(config);
  m.tool_version = kToolVersion;
  m.command = to_string(config.command);
  m.started_at = utc_now();
  RunResult result;
  try {
    result = execute(config);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    result.summary = {{"error", e.what()}};
    const bool config_error = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError ||
                              e.code() == ErrorCode::InvalidModel;
    result.exit_status = config_error ? kExitConfig : kExitRuntime;
  }
  m.finished_at = utc_now();
  m.summary = result.summary;
  m.exit_status = result.exit_status;

  if (config.output_path.empty()) {
    std::cout << result.artifact;
  } else if (!result.artifact.empty()) {
    std::ofstream(config.output_path, std::ios::binary) << result.artifact;
    json mj = m;
    mj["config"] = config;
    std::ofstream(config.output_path + ".manifest.json", std::ios::binary) << dump_artifact(mj);
  }
  return m;
}

}  // namespace symek
