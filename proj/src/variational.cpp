#include "symek/variational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "symek/kernels.hpp"
#include "symek/rng.hpp"

namespace symek {

void EkelandParams::validate() const {
  if (!(rho > 0.0) || !(sigma > 0.0) || !(inner_tol_initial > 0.0))
    throw Error(ErrorCode::ConfigError, "rho, sigma and inner_tol_initial must be positive");
  if (inner_budget < 1 || max_outer_iters < 1 || cert_samples < 1)
    throw Error(ErrorCode::ConfigError, "inner_budget, max_outer_iters and cert_samples must be >= 1");
}

EkelandPoint ekeland_point(const Functional& f, const FunctionElement& u0, const EkelandParams& params) {
  params.validate();
  double fv = f.eval(u0);
  if (!std::isfinite(fv)) throw Error(ErrorCode::NotProper, "f(u0) is not finite");

  EkelandPoint out{u0, {}};
  auto& diag = out.diagnostics;
  diag.f_start = fv;
  int k = 0;
  bool settled = false;
  for (; diag.outer_iters < params.max_outer_iters; ++diag.outer_iters) {
    const double delta = std::ldexp(params.inner_tol_initial, -k);
    diag.final_delta = delta;
    const FunctionElement w = f.inner_min(out.v, params.sigma, delta, params.inner_budget);
    const double fw = f.eval(w);
    const double step = dist_X(w, out.v);
    ++k;
    if (std::isfinite(fw) && fw + params.sigma * step <= fv - delta) {
      out.v = w;
      fv = fw;
      diag.path_length += step;
      ++diag.accepted_steps;
      continue;
    }
    if (delta <= 1e-12 * std::max(1.0, std::fabs(fv))) {
      settled = true;
      ++diag.outer_iters;
      break;
    }
  }
  diag.budget_exhausted = !settled;
  diag.f_end = fv;
  if (diag.budget_exhausted)
    spdlog::warn("ekeland_point: {} outer iterations used while still making progress", params.max_outer_iters);
  return out;
}

ProbeSummary probe_ekeland_inequality(const Functional& f, const FunctionElement& v, double sigma, long samples,
                                      std::uint64_t seed, long inner_budget) {
  constexpr int kLevels = 16;
  const double r_max = std::max(norm_X(v), 1.0);
  const double r_min = 1e-6;
  std::vector<FunctionElement> probes;
  probes.reserve(static_cast<std::size_t>(samples) + 2);
  for (long i = 0; i < samples; ++i) {
    Engine engine = derive_engine(seed, static_cast<std::uint64_t>(i));
    const int level = static_cast<int>(i % kLevels);
    const double r = r_max * std::pow(r_min / r_max, level / double(kLevels - 1));
    probes.push_back(v + r * random_direction_X(v.model(), engine));
  }
  probes.push_back(f.inner_min(v, 0.5 * sigma, 1e-12, inner_budget));
  probes.push_back(f.inner_min(v, 1e-3 * sigma, 1e-12, inner_budget));

  const double fv = f.eval(v);
  const std::vector<double> values = par::eval_batch(f, probes);
  ProbeSummary s;
  s.count = static_cast<long>(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    const double r = dist_X(probes[i], v);
    const double res = fv - sigma * r - values[i];
    if (res > s.d_residual) {
      s.d_residual = res;
      s.worst_radius = r;
    }
    if (res > 0.0 && r > 0.0) s.slope_excess = std::max(s.slope_excess, res / r);
  }
  return s;
}

double symmetric_constant(const ModelDescriptor& model) {
  return embedding_constant(model) * (theta_lipschitz(model) + 1.0) + 1.0;
}

EkelandCertificate symmetric_ekeland(const Functional& f, const FunctionElement& u, const EkelandParams& params,
                                     const PolarizationSchedule& schedule) {
  params.validate();
  if (!u.in_cone()) throw Error(ErrorCode::NotInCone, "symmetric_ekeland needs u in S");
  if (!f.claims_polarization_monotone())
    throw Error(ErrorCode::NotMonotone, f.name() + " does not claim polarization monotonicity");
  const double f_u = f.eval(u);
  if (!std::isfinite(f_u)) throw Error(ErrorCode::NotProper, "f(u) is not finite");

  double f_prev = f_u;
  const auto approx = approx_symmetrize(u, params.rho, schedule, [&](const FunctionElement& w, const Polarizer&) {
    const double fw = f.eval(w);
    if (!(fw <= f_prev + kMonotoneTol))
      throw Error(ErrorCode::NotMonotone, "f increased along a polarization (" + std::to_string(f_prev) + " -> " +
                                              std::to_string(fw) + ")");
    f_prev = fw;
  });

  const EkelandPoint ek = ekeland_point(f, approx.value, params);
  EkelandCertificate c{u, approx.value, ek.v};
  c.rho = params.rho;
  c.sigma = params.sigma;
  c.f_u = f_u;
  c.f_u_tilde = f.eval(approx.value);
  c.f_v = f.eval(ek.v);
  c.asymmetry = dist_V(ek.v, symmetrize(ek.v));
  c.C_used = symmetric_constant(u.model());
  c.displacement = dist_X(ek.v, u);
  c.trho_displacement = dist_X(approx.value, u);
  c.ekeland_displacement = dist_X(ek.v, approx.value);
  c.trho_distance = approx.distance;
  c.descent_ok = c.f_v <= c.f_u_tilde + kChainTol && c.f_u_tilde <= c.f_u + kChainTol;
  const ProbeSummary probes =
      probe_ekeland_inequality(f, ek.v, params.sigma, params.cert_samples, params.cert_seed, params.inner_budget);
  c.d_residual = probes.d_residual;
  c.slope_excess = probes.slope_excess;
  c.sampled_w_count = probes.count;
  c.polarizer_trace = approx.trace;
  c.diagnostics = ek.diagnostics;

  const double floor = f.known_min_value().value_or(f.lower_bound());
  if (f_u < floor + params.rho * params.sigma)
    c.premise = "verified";
  else if (f.known_min_value())
    c.premise = "violated";
  else
    c.premise = "unverified";
  if (c.premise == "violated")
    spdlog::warn(
        "symmetric_ekeland: premise f(u) < inf f + rho*sigma is {} (f(u)={}, bound={})", c.premise, f_u, floor);
  else if (c.premise == "unverified")
    spdlog::debug("symmetric_ekeland: premise f(u) < inf f + rho*sigma is {} (f(u)={}, bound={})", c.premise, f_u,
                 floor);
  return c;
}

namespace {

FunctionElement descend(const Functional& f, FunctionElement w, double sigma, long budget, int rounds) {
  double fw = f.eval(w);
  for (int r = 0; r < rounds; ++r) {
    FunctionElement next = f.cone_reduce(f.inner_min(w, sigma, 1e-12, budget));
    const double fn = f.eval(next);
    if (!(fn < fw)) break;
    w = std::move(next);
    fw = fn;
  }
  return w;
}

}  // namespace

NearInfimumStart near_infimum_start(const Functional& f, const FunctionElement& start, double gap, std::uint64_t seed,
                                    long inner_budget) {
  if (!(gap > 0.0)) throw Error(ErrorCode::ConfigError, "gap must be positive");
  FunctionElement base = f.cone_reduce(start);
  if (!std::isfinite(f.eval(base))) throw Error(ErrorCode::NotProper, "start has infinite value");
  base = descend(f, base, 1e-3 * std::sqrt(gap), inner_budget, 64);
  const double f_base = f.eval(base);

  NearInfimumStart out{base, base, 0.0, ""};
  if (const auto m = f.known_min_value()) {
    out.m_est = *m;
    out.estimator = "known_min_value";
  } else {
    out.m_est = f_base;
    out.estimator = "best_observed";
  }

  Engine engine = derive_engine(seed, 0);
  const FunctionElement noise = random_element(f.model(), engine);
  for (double s = 1.0; s > 1e-12; s *= 0.5) {
    const FunctionElement u = f.cone_reduce(theta(base + s * noise));
    const double fu = f.eval(u);
    if (std::isfinite(fu) && fu < out.m_est + 0.5 * gap) {
      out.u = u;
      return out;
    }
  }
  return out;
}

const char* to_string(SlopeMethod method) {
  switch (method) {
    case SlopeMethod::EkelandInequality: return "EkelandInequality";
    case SlopeMethod::GradientNorm: return "GradientNorm";
    case SlopeMethod::SampledRatio: return "SampledRatio";
  }
  return "Unknown";
}

SlopeCertificate slope_upper_bound(const Functional& f, const FunctionElement& at, SlopeMethod method,
                                   const SlopeParams& params) {
  const double f_at = f.eval(at);
  if (!std::isfinite(f_at)) throw Error(ErrorCode::NotProper, "slope requested at a point with f = +inf");
  SlopeCertificate c{at, 0.0, method, ""};
  std::ostringstream detail;

  switch (method) {
    case SlopeMethod::GradientNorm: {
      const auto g = f.gradient(at);
      if (!g) throw Error(ErrorCode::MethodUnavailable, f.name() + " has no gradient at this point");
      c.upper_bound = dual_norm_X(g->values(), at.model());
      detail << "dual X-norm of the gradient";
      break;
    }
    case SlopeMethod::EkelandInequality: {
      if (!(params.sigma > 0.0)) throw Error(ErrorCode::ConfigError, "EkelandInequality needs sigma > 0");
      const ProbeSummary s =
          probe_ekeland_inequality(f, at, params.sigma, params.samples, params.seed, params.inner_budget);
      c.upper_bound = params.sigma + s.slope_excess;
      detail << "sigma=" << params.sigma << " + max residual/radius=" << s.slope_excess << " over " << s.count
             << " probes (d_residual=" << s.d_residual << ")";
      break;
    }
    case SlopeMethod::SampledRatio: {
      const ModelDescriptor& model = at.model();
      std::vector<FunctionElement> dirs;
      for (int i = 0; i < model.n(); ++i) {
        std::vector<double> e(model.n(), 0.0);
        e[i] = 1.0;
        const FunctionElement unit(model, e);
        dirs.push_back((1.0 / norm_X(unit)) * unit);
        dirs.push_back((-1.0 / norm_X(unit)) * unit);
      }
      if (const auto g = f.gradient(at)) {
        const FunctionElement r(model, riesz_representative(g->values(), model));
        const double nr = norm_X(r);
        if (nr > 0.0) dirs.push_back((-1.0 / nr) * r);
      }
      for (long i = 0; i < params.samples; ++i) {
        Engine engine = derive_engine(params.seed, static_cast<std::uint64_t>(i));
        dirs.push_back(random_direction_X(model, engine));
      }
      constexpr int kLevels = 5;
      std::vector<FunctionElement> probes;
      std::vector<double> radii;
      for (int level = 0; level < kLevels; ++level) {
        const double r = params.max_radius * std::pow(params.min_radius / params.max_radius, level / double(kLevels - 1));
        for (const auto& d : dirs) {
          probes.push_back(at + r * d);
          radii.push_back(r);
        }
      }
      const std::vector<double> values = par::eval_batch(f, probes);
      for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!std::isfinite(values[i])) continue;
        c.upper_bound = std::max(c.upper_bound, (f_at - values[i]) / dist_X(probes[i], at));
      }
      detail << "lower estimate: max decrease ratio over " << probes.size() << " probes at radii "
             << params.max_radius << ".." << params.min_radius;
      break;
    }
  }
  c.detail = detail.str();
  return c;
}

SPSTrace sps_sequence(const Functional& f, const FunctionElement& u_init, const std::vector<double>& eps_schedule,
                      const SPSOptions& options) {
  if (eps_schedule.empty()) throw Error(ErrorCode::ConfigError, "empty eps schedule");
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    if (!(eps_schedule[j] > 0.0) || (j > 0 && !(eps_schedule[j] < eps_schedule[j - 1])))
      throw Error(ErrorCode::ConfigError, "eps schedule must be positive and strictly decreasing");
  }

  SPSTrace trace;
  trace.functional = f.name();
  trace.C_used = symmetric_constant(f.model());
  const auto known = f.known_min_value();
  trace.m_estimator = known ? "known_min_value" : "best_observed";
  double best = kInfinity;
  if (!known) {
    // Reference descent so the stage premise is checked against something better than the start.
    const FunctionElement ref = descend(f, f.cone_reduce(u_init), 1e-3 * eps_schedule.back(),
                                        options.params.inner_budget, 64);
    best = f.eval(ref);
  }

  FunctionElement current = u_init;
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    const double eps = eps_schedule[j];
    const int stage = static_cast<int>(j) + 1;
    try {
      EkelandParams params = options.params;
      if (options.couple_rho_sigma) params.rho = params.sigma = eps;
      params.cert_seed = options.params.cert_seed + j;

      FunctionElement u_hat = f.cone_reduce(current);
      double f_hat = f.eval(u_hat);
      if (!std::isfinite(f_hat)) throw Error(ErrorCode::NotProper, "cone_reduce produced f = +inf");
      best = std::min(best, f_hat);
      double m_est = known.value_or(best);
      bool premise_descent = false;
      if (!(f_hat < m_est + eps * eps)) {
        u_hat = descend(f, u_hat, 1e-3 * eps, params.inner_budget, 64);
        f_hat = f.eval(u_hat);
        best = std::min(best, f_hat);
        m_est = known.value_or(best);
        premise_descent = true;
      }

      EkelandCertificate cert = symmetric_ekeland(f, u_hat, params, options.schedule);
      best = std::min(best, cert.f_v);
      std::optional<double> grad_norm;
      if (const auto g = f.gradient(cert.v)) grad_norm = dual_norm_X(g->values(), cert.v.model());
      SPSEntry e{.stage = stage,
                 .eps = eps,
                 .v = cert.v,
                 .f_v = cert.f_v,
                 .slope_bound = cert.sigma + cert.slope_excess,
                 .gradient_norm = grad_norm,
                 .asymmetry = cert.asymmetry,
                 .m_est = known.value_or(best),
                 .premise_descent = premise_descent,
                 .certificate = std::move(cert)};
      current = e.v;
      trace.entries.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error(err.code(), "sps stage " + std::to_string(stage) + ": " + err.what());
    }
  }
  return trace;
}

Extraction extract_minimizer(SPSTrace& trace, double conv_tol) {
  if (trace.entries.empty()) throw Error(ErrorCode::NotConverged, "empty trace");
  if (!(conv_tol > 0.0)) throw Error(ErrorCode::ConfigError, "conv_tol must be positive");
  Extraction out;
  auto& rep = out.report;
  rep.conv_tol = conv_tol;
  const auto& entries = trace.entries;
  const std::size_t first = entries.size() >= 3 ? entries.size() - 3 : 0;
  for (std::size_t j = first + 1; j < entries.size(); ++j)
    rep.trailing_distances.push_back(dist_X(entries[j].v, entries[j - 1].v));
  rep.converged = std::all_of(rep.trailing_distances.begin(), rep.trailing_distances.end(),
                              [&](double d) { return d < conv_tol; });

  const FunctionElement& z = entries.back().v;
  const ModelDescriptor& model = z.model();
  const double lip = (theta_lipschitz(model) + 1.0) * embedding_constant(model);
  rep.f_z = entries.back().f_v;
  rep.min_observed = entries.front().f_v;
  for (const auto& e : entries) rep.min_observed = std::min(rep.min_observed, e.f_v);
  rep.z_asymmetry = dist_V(z, symmetrize(z));
  rep.chain_slack = kInfinity;
  for (const auto& e : entries)
    rep.chain_slack = std::min(rep.chain_slack, lip * dist_X(e.v, z) + e.asymmetry - rep.z_asymmetry);
  rep.symmetric_limit = rep.converged && rep.z_asymmetry <= conv_tol * (1.0 + lip);

  if (rep.converged) {
    out.z = z;
    trace.limit = z;
    trace.limit_value = rep.f_z;
    trace.limit_symmetric_residual = rep.z_asymmetry;
  }
  return out;
}

}  // namespace symek
