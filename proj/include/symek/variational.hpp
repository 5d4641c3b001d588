#pragma once

// Constructive Ekeland principle, its symmetric refinement, symmetric Palais-Smale
// sequences and slope certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symek/functional.hpp"
#include "symek/rearrangement.hpp"

namespace symek {

inline constexpr double kChainTol = 1e-10;     // descent chain and displacement slack
inline constexpr double kProbeTol = 1e-8;      // sampled Ekeland inequality residual

struct EkelandParams {
  double rho = 0.1;
  double sigma = 0.1;
  double inner_tol_initial = 1e-3;
  long inner_budget = 20'000;
  long max_outer_iters = 400;
  long cert_samples = 1024;
  std::uint64_t cert_seed = 0;

  void validate() const;
};

struct EkelandDiagnostics {
  long outer_iters = 0;
  long accepted_steps = 0;
  bool budget_exhausted = false;
  double path_length = 0.0;  ///< sum of accepted step lengths in ||.||_X
  double f_start = 0.0;
  double f_end = 0.0;
  double final_delta = 0.0;
};

struct EkelandPoint {
  FunctionElement v;
  EkelandDiagnostics diagnostics;
};

/// Perturbed-descent iteration: accept w = inner_min(v_k, sigma, delta_k) while
/// f(w) + sigma ||w - v_k||_X <= f(v_k) - delta_k, with delta_k = delta_0 2^-k.
/// Rejections halve delta until it drops below 1e-12 max(1, |f(v)|).
EkelandPoint ekeland_point(const Functional& f, const FunctionElement& u0, const EkelandParams& params);

/// Sampled check of f(w) >= f(v) - sigma ||w - v||_X.
struct ProbeSummary {
  double d_residual = 0.0;     ///< max (f(v) - sigma||w-v|| - f(w))^+
  double slope_excess = 0.0;   ///< max residual^+ / ||w - v||_X
  long count = 0;
  double worst_radius = 0.0;
};

/// Probes: `samples` random X-directions at radii geometric from max(||v||_X, 1)
/// down to 1e-6, plus inner_min probes at sigma/2 and sigma/1000.
ProbeSummary probe_ekeland_inequality(const Functional& f, const FunctionElement& v, double sigma, long samples,
                                      std::uint64_t seed, long inner_budget);

/// K (C_theta + 1) + 1.
double symmetric_constant(const ModelDescriptor& model);

struct EkelandCertificate {
  FunctionElement u;
  FunctionElement u_tilde;  ///< T_rho u
  FunctionElement v;
  double rho = 0.0;
  double sigma = 0.0;
  double f_u = 0.0;
  double f_u_tilde = 0.0;
  double f_v = 0.0;
  double asymmetry = 0.0;          ///< ||v - v*||_V
  double C_used = 0.0;
  double displacement = 0.0;       ///< ||v - u||_X
  double trho_displacement = 0.0;  ///< ||T_rho u - u||_X
  double ekeland_displacement = 0.0;  ///< ||v - T_rho u||_X
  double trho_distance = 0.0;      ///< ||T_rho u - u*||_V
  bool descent_ok = false;
  double d_residual = 0.0;
  double slope_excess = 0.0;
  long sampled_w_count = 0;
  std::vector<Polarizer> polarizer_trace;
  std::string premise;  ///< "verified", "violated" or "unverified"
  EkelandDiagnostics diagnostics;

  bool a_ok() const { return asymmetry <= C_used * rho; }
  bool b_ok() const { return displacement <= rho + trho_displacement + kChainTol; }
  bool c_ok() const { return descent_ok; }
  bool d_ok() const { return d_residual <= kProbeTol; }
  bool passed() const { return a_ok() && b_ok() && c_ok() && d_ok(); }
};

EkelandCertificate symmetric_ekeland(const Functional& f, const FunctionElement& u, const EkelandParams& params,
                                     const PolarizationSchedule& schedule);

/// A point of S with f(u) < M_est + gap, found by descending f from `start` and
/// perturbing the result with seeded noise.
struct NearInfimumStart {
  FunctionElement u;
  FunctionElement descended;
  double m_est = 0.0;
  std::string estimator;  ///< "known_min_value" or "best_observed"
};

NearInfimumStart near_infimum_start(const Functional& f, const FunctionElement& start, double gap, std::uint64_t seed,
                                    long inner_budget = 20'000);

enum class SlopeMethod { EkelandInequality, GradientNorm, SampledRatio };

const char* to_string(SlopeMethod method);

struct SlopeParams {
  double sigma = 0.0;  ///< EkelandInequality only
  long samples = 256;
  std::uint64_t seed = 0;
  double max_radius = 1e-3;
  double min_radius = 1e-7;
  long inner_budget = 20'000;
};

struct SlopeCertificate {
  FunctionElement at;
  double upper_bound = 0.0;  ///< a lower estimate when method == SampledRatio
  SlopeMethod method = SlopeMethod::GradientNorm;
  std::string detail;
};

SlopeCertificate slope_upper_bound(const Functional& f, const FunctionElement& at, SlopeMethod method,
                                   const SlopeParams& params);

struct SPSEntry {
  int stage = 0;
  double eps = 0.0;
  FunctionElement v;
  double f_v = 0.0;
  double slope_bound = 0.0;                  ///< EkelandInequality certificate
  std::optional<double> gradient_norm;       ///< dual X-norm, when f is differentiable at v
  double asymmetry = 0.0;
  double m_est = 0.0;
  bool premise_descent = false;  ///< the stage had to descend to reach f < M_est + eps^2
  EkelandCertificate certificate;
};

struct SPSTrace {
  std::string functional;
  std::string m_estimator;
  double C_used = 0.0;
  std::vector<SPSEntry> entries;
  std::optional<FunctionElement> limit;
  std::optional<double> limit_value;
  std::optional<double> limit_symmetric_residual;
};

struct SPSOptions {
  EkelandParams params;  ///< template; rho and sigma are overwritten by eps_j when coupled
  PolarizationSchedule schedule = PolarizationSchedule::sweep();
  bool couple_rho_sigma = true;
};

SPSTrace sps_sequence(const Functional& f, const FunctionElement& u_init, const std::vector<double>& eps_schedule,
                      const SPSOptions& options);

struct ExtractionReport {
  bool converged = false;
  double conv_tol = 0.0;
  std::vector<double> trailing_distances;
  double f_z = 0.0;
  double min_observed = 0.0;
  double z_asymmetry = 0.0;   ///< ||z - z*||_V
  double chain_slack = 0.0;   ///< min over stages of bound_j - ||z - z*||_V
  bool symmetric_limit = false;
};

struct Extraction {
  std::optional<FunctionElement> z;
  ExtractionReport report;
};

/// Cauchy test on the last three stages, then the symmetry chain
/// ||z - z*||_V <= (C_theta + 1) K ||v_j - z||_X + ||v_j - v_j*||_V.
/// z is absent when the test fails. Fills trace.limit* on success.
Extraction extract_minimizer(SPSTrace& trace, double conv_tol);

}  // namespace symek
