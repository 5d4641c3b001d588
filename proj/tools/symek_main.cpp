// symek: symmetric Ekeland experiments from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "symek/cli.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<std::string> functional;
  std::optional<double> rho;
  std::optional<double> sigma;
  std::optional<std::string> schedule;
  std::optional<std::string> polarization;
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::optional<double> conv_tol;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_flags(CLI::App* app, Flags& f, bool with_config) {
  if (with_config) app->add_option("--config", f.config, "JSON RunConfig file; flags override its fields");
  app->add_option("--model", f.model, "kind:n[:h], e.g. vector:8 or grid1d:17:0.125");
  app->add_option("--functional", f.functional, "name[:k=v,...] (quadratic, dirichlet, dirichlet-box, reverse-hardy)");
  app->add_option("--rho", f.rho, "symmetrization radius");
  app->add_option("--sigma", f.sigma, "Ekeland slope parameter");
  app->add_option("--schedule", f.schedule, "eps schedule: geometric:<ratio>:<count> or list:v1,v2,...");
  app->add_option("--polarization", f.polarization, "sweep or random:<seed>");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--samples", f.samples, "sample count for randomized checks");
  app->add_option("--conv-tol", f.conv_tol, "Cauchy tolerance for minimizer extraction");
  app->add_option("--out", f.out, "output file (stdout when omitted)");
  app->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

symek::RunConfig build_config(const Flags& f, std::optional<symek::Command> command) {
  using namespace symek;
  RunConfig c;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + *f.config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ConfigError, std::string("config file: ") + e.what());
    }
    c = config_from_json(j);
  }
  if (command) c.command = *command;
  if (f.model) c.model = parse_model(*f.model);
  if (f.functional) {
    auto [name, params] = parse_functional_spec(*f.functional);
    c.functional = name;
    c.functional_params = params;
  }
  if (f.rho) c.params.rho = *f.rho;
  if (f.sigma) c.params.sigma = *f.sigma;
  if (f.schedule) c.schedule = *f.schedule;
  if (f.polarization) {
    if (*f.polarization == "sweep") {
      c.polarization = PolarizationSchedule::sweep();
    } else if (f.polarization->rfind("random:", 0) == 0) {
      c.polarization = PolarizationSchedule::random(std::stoull(f.polarization->substr(7)));
    } else {
      throw Error(ErrorCode::ConfigError, "polarization must be sweep or random:<seed>");
    }
  }
  if (f.seed) {
    c.seed = *f.seed;
    c.params.cert_seed = *f.seed;
  }
  if (f.samples) c.samples = *f.samples;
  if (f.conv_tol) c.conv_tol = *f.conv_tol;
  if (f.out) c.output_path = *f.out;
  if (f.format)
    c.format = *f.format == "csv" ? OutputFormat::CSV : OutputFormat::JSON;
  else if (f.out && f.out->size() > 4 && f.out->ends_with(".csv"))
    c.format = OutputFormat::CSV;
  // Unknown functionals are a configuration error for every command.
  if (c.command != Command::VerifyAxioms) (void)make_functional(c.functional, c.model, c.functional_params);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("symek");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SYMEK_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Symmetric Ekeland principle toolkit"};
  app.require_subcommand(1);
  Flags flags;
  struct Sub {
    const char* name;
    std::optional<symek::Command> command;
    const char* help;
  };
  const Sub subs[] = {
      {"verify-axioms", symek::Command::VerifyAxioms, "randomized conformance check of the polarization axioms"},
      {"check-monotone", symek::Command::CheckMonotone, "empirical f(u^H) <= f(u) check"},
      {"ekeland", symek::Command::Ekeland, "plain constructive Ekeland point"},
      {"symmetric-ekeland", symek::Command::SymmetricEkeland, "symmetric Ekeland certificate"},
      {"sps", symek::Command::SPS, "symmetric Palais-Smale sequence and minimizer extraction"},
      {"run", std::nullopt, "run a JSON RunConfig (--config); flags override"},
  };
  std::optional<symek::Command> chosen;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_flags(sub, flags, true);
    sub->callback([&chosen, &s] { chosen = s.command; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const symek::RunConfig config = build_config(flags, chosen);
    const symek::RunManifest manifest = symek::run(config);
    return manifest.exit_status;
  } catch (const symek::Error& e) {
    spdlog::error("{}", e.what());
    return e.code() == symek::ErrorCode::ConfigError || e.code() == symek::ErrorCode::ParseError ||
                   e.code() == symek::ErrorCode::InvalidModel
               ? symek::kExitConfig
               : symek::kExitRuntime;
  }
}
