// One line per acceptance criterion. Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "symek/cli.hpp"
#include "symek/io.hpp"
#include "symek/rng.hpp"
#include "symek/variational.hpp"

using namespace symek;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  json artifact;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

const ModelDescriptor kVec16 = ModelDescriptor::vector(16);
const ModelDescriptor kGrid17 = ModelDescriptor::grid1d(17, 0.125);

std::vector<double> halving(int count) {
  std::vector<double> eps;
  for (int j = 1; j <= count; ++j) eps.push_back(std::ldexp(1.0, -j));
  return eps;
}

// 1. framework axioms -----------------------------------------------------------
Outcome conformance() {
  Outcome o;
  for (const auto& model : {ModelDescriptor::vector(8), kGrid17}) {
    const auto start = std::chrono::steady_clock::now();
    const ConformanceReport r = verify_framework(model, 1000, 7);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.artifact.push_back(r);
    for (const auto& a : r.axioms) {
      // fixed points compare bitwise, so any residual is a failure
      const double tol = a.name == "fixed_points" ? 0.0 : a.name == "convergence" ? 1e-10 : 1e-12;
      require(o, a.passed && a.worst_residual <= tol, a.name + " residual " + std::to_string(a.worst_residual));
    }
    require(o, secs < 10.0, "runtime " + std::to_string(secs) + " s");
  }
  if (o.pass) o.detail = "4 axiom groups x 2 models, 1000 samples each";
  return o;
}

// 2. approximate symmetrization -------------------------------------------------
Outcome approximation() {
  Outcome o;
  double worst_ratio = 0.0;
  std::size_t max_swaps = 0;
  for (const auto& model : {kVec16, kGrid17}) {
    for (double rho : {1e-1, 1e-2, 1e-3}) {
      for (int k = 0; k < 200; ++k) {
        Engine e = derive_engine(2, k);
        const FunctionElement u = random_cone_element(model, e);
        for (const auto& sched : {PolarizationSchedule::sweep(), PolarizationSchedule::random(k)}) {
          const auto r = approx_symmetrize(u, rho, sched);
          const double measured = dist_V(r.value, symmetrize(u));
          require(o, measured < rho, "distance " + std::to_string(measured) + " >= rho");
          worst_ratio = std::max(worst_ratio, measured / rho);
        }
      }
    }
  }
  for (int k = 0; k < 200; ++k) {
    Engine e = derive_engine(3, k);
    const auto r = approx_symmetrize(random_cone_element(kVec16, e), 1e-300, PolarizationSchedule::sweep());
    require(o, r.distance == 0.0 && r.trace.size() <= 120, "vector sweep did not reach u* exactly in 120 swaps");
    max_swaps = std::max(max_swaps, r.trace.size());
  }
  o.artifact = {{"worst_distance_over_rho", worst_ratio}, {"max_sweep_swaps", max_swaps}};
  if (o.pass)
    o.detail = "max distance/rho " + std::to_string(worst_ratio) + ", vector sweep exact in <= " +
               std::to_string(max_swaps) + " swaps";
  return o;
}

// 3. polarization monotonicity ------------------------------------------------
Outcome monotonicity() {
  Outcome o;
  const std::vector<std::pair<std::string, ModelDescriptor>> catalog = {
      {"quadratic", kVec16}, {"quadratic", kGrid17}, {"dirichlet", kGrid17}, {"dirichlet-box", kGrid17}};
  double worst = -kInfinity;
  for (const auto& [name, model] : catalog) {
    const auto f = make_functional(name, model);
    const auto r = check_polarization_monotone(*f, 1000, 3);
    require(o, r.passed && r.max_violation <= 1e-10, name + " violation " + std::to_string(r.max_violation));
    worst = std::max(worst, r.max_violation);
    o.artifact.push_back(r);
  }
  const auto control = make_functional("reverse-hardy", kGrid17);
  const auto bad = check_polarization_monotone(*control, 1000, 3);
  const auto again = check_polarization_monotone(*control, 1000, 3);
  require(o, !bad.passed && !bad.witness.empty(), "negative control was not caught");
  require(o, bad.witness == again.witness, "negative control witness not reproducible");
  o.artifact.push_back(bad);
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "catalog max violation %.3g, control violation %.3g with witness", worst,
                  bad.max_violation);
    o.detail = buf;
  }
  return o;
}

// 4. certificate conclusions ----------------------------------------------------
Outcome conclusions() {
  Outcome o;
  double worst_a = 0.0, worst_b = -kInfinity, worst_c = -kInfinity, worst_d = 0.0;
  long min_probes = 1L << 40;
  int runs = 0;
  for (const auto& [name, model] : std::vector<std::pair<std::string, ModelDescriptor>>{{"quadratic", kVec16},
                                                                                          {"dirichlet", kGrid17}}) {
    const auto f = make_functional(name, model);
    for (double rs : {0.1, 0.05}) {
      for (int k = 0; k < 50; ++k) {
        EkelandParams p;
        p.rho = p.sigma = rs;
        p.cert_seed = 1000 + k;
        Engine e = derive_engine(4, k);
        const auto start = near_infimum_start(*f, random_cone_element(model, e), rs * rs, k);
        const auto sched = k % 2 ? PolarizationSchedule::random(k) : PolarizationSchedule::sweep();
        const auto c = symmetric_ekeland(*f, start.u, p, sched);
        ++runs;
        require(o, c.asymmetry <= 3.0 * rs, name + ": (a) failed");
        require(o, c.b_ok(), name + ": (b) failed");
        require(o, c.f_v <= c.f_u_tilde + 1e-10 && c.f_u_tilde <= c.f_u + 1e-10, name + ": (c) failed");
        require(o, c.d_residual <= 1e-8, name + ": (d) residual " + std::to_string(c.d_residual));
        require(o, c.sampled_w_count >= 1000, "fewer than 1000 probes");
        worst_a = std::max(worst_a, c.asymmetry / rs);
        worst_b = std::max(worst_b, c.displacement - rs - c.trho_displacement);
        worst_c = std::max({worst_c, c.f_v - c.f_u_tilde, c.f_u_tilde - c.f_u});
        worst_d = std::max(worst_d, c.d_residual);
        min_probes = std::min(min_probes, c.sampled_w_count);
        o.artifact.push_back({{"functional", name}, {"rho", rs}, {"run", k}, {"certificate", c}});
      }
    }
  }
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d runs; max asym/rho %.3g, (b) slack %.3g, (c) %.3g, (d) %.3g, probes >= %ld",
                  runs, worst_a, worst_b, worst_c, worst_d, min_probes);
    o.detail = buf;
  }
  return o;
}

// 5. exhaustive lattice oracle ------------------------------------------------
Outcome lattice() {
  Outcome o;
  const auto model = ModelDescriptor::vector(4);
  const auto points = lattice_points(model, 5, 0.5);
  int nontrivial = 0;
  for (int run = 0; run < 20; ++run) {
    Engine e = derive_engine(5, run);
    const double scale = 1.0 + 0.5 * (run % 3);
    const auto f = build_lattice_restriction(make_functional("quadratic", model, {{"scale", scale}}), 5, 0.5);
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<double> start(4);
    for (double& x : start) x = 0.5 * level(e);
    EkelandParams p;
    p.sigma = 0.25 * (1 + run % 8);
    const FunctionElement v = ekeland_point(*f, FunctionElement(model, start), p).v;
    const double fv = f->eval(v);
    if (fv > *f->known_min_value()) ++nontrivial;
    long violations = 0;
    for (const auto& w : points)
      if (f->eval(w) < fv - p.sigma * dist_X(w, v)) ++violations;
    require(o, violations == 0, "run " + std::to_string(run) + ": " + std::to_string(violations) + " lattice points");
    o.artifact.push_back({{"run", run}, {"sigma", p.sigma}, {"v", v}, {"f_v", fv}, {"violations", violations}});
  }
  if (o.pass)
    o.detail = "20 runs x 625 points, 0 violations; " + std::to_string(nontrivial) + " runs stop above the minimum";
  return o;
}

// 6. SPS on the quadratic target ----------------------------------------------
Outcome sps_quadratic() {
  Outcome o;
  const auto f = make_functional("quadratic", kVec16);
  Engine e = derive_engine(6, 0);
  SPSOptions opts;
  opts.params.cert_seed = 6;
  SPSTrace trace = sps_sequence(*f, random_cone_element(kVec16, e), halving(10), opts);
  double worst_grad = -kInfinity;
  for (const auto& s : trace.entries) {
    require(o, s.certificate.passed(), "stage " + std::to_string(s.stage) + " certificate failed");
    require(o, s.asymmetry <= 3.0 * s.eps, "stage " + std::to_string(s.stage) + " asymmetry");
    require(o, s.gradient_norm && *s.gradient_norm <= s.eps + 1e-6, "stage " + std::to_string(s.stage) + " slope");
    if (s.gradient_norm) worst_grad = std::max(worst_grad, *s.gradient_norm - s.eps);
  }
  const double f10 = trace.entries.back().f_v;
  require(o, f10 < std::ldexp(1.0, -20), "f(v_10) = " + std::to_string(f10));
  const Extraction ex = extract_minimizer(trace, 2e-3);
  require(o, ex.z.has_value(), "extraction did not converge");
  const double err = ex.z ? dist_X(*ex.z, *f->known_minimizer()) : kInfinity;
  require(o, err <= 1e-3, "||z - t||_X = " + std::to_string(err));
  require(o, ex.report.symmetric_limit, "symmetric_limit false");
  o.artifact = {{"trace", trace}, {"extraction", ex.report}};
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "f(v_10) %.3g, max(grad - eps) %.3g, ||z - t||_X %.3g, symmetric limit", f10,
                  worst_grad, err);
    o.detail = buf;
  }
  return o;
}

// 7. nonsmooth path -------------------------------------------------------------

// Hides every gradient so that only the Ekeland inequality can certify a stage.
class NoGradient final : public Functional {
 public:
  explicit NoGradient(FunctionalPtr f) : f_(std::move(f)) {}
  std::string name() const override { return f_->name(); }
  const ModelDescriptor& model() const override { return f_->model(); }
  double eval(const FunctionElement& u) const override { return f_->eval(u); }
  FunctionElement inner_min(const FunctionElement& c, double sigma, double tol, long budget) const override {
    return f_->inner_min(c, sigma, tol, budget);
  }
  double lower_bound() const override { return f_->lower_bound(); }
  bool claims_polarization_monotone() const override { return f_->claims_polarization_monotone(); }
  FunctionElement cone_reduce(const FunctionElement& u) const override { return f_->cone_reduce(u); }

 private:
  FunctionalPtr f_;
};

Outcome sps_box() {
  Outcome o;
  const NoGradient f(make_functional("dirichlet-box", kGrid17));
  Engine e = derive_engine(7, 0);
  SPSOptions opts;
  opts.params.cert_seed = 7;
  SPSTrace trace = sps_sequence(f, random_cone_element(kGrid17, e), halving(10), opts);
  double worst = 0.0;
  bool touches = false;
  for (const auto& s : trace.entries) {
    require(o, !s.gradient_norm.has_value(), "a gradient was used");
    require(o, s.certificate.passed(), "stage " + std::to_string(s.stage) + " certificate failed");
    require(o, s.asymmetry <= 3.0 * s.eps, "stage " + std::to_string(s.stage) + " asymmetry");
    worst = std::max(worst, s.asymmetry / s.eps);
  }
  require(o, trace.entries.size() == 10, "not all stages completed");
  for (double x : trace.entries.back().v.values()) touches |= x == 0.5;
  o.artifact = {{"trace", trace}};
  if (o.pass)
    o.detail = "10 stages certified by the Ekeland inequality, max asym/eps " + std::to_string(worst) +
               (touches ? ", box constraint active" : "");
  return o;
}

// 8. determinism ----------------------------------------------------------------
std::vector<RunConfig> cli_configs() {
  std::vector<RunConfig> out;
  RunConfig c;
  c.seed = 1;
  c.command = Command::VerifyAxioms;
  c.model = ModelDescriptor::vector(8);
  out.push_back(c);
  c.command = Command::CheckMonotone;
  c.model = kGrid17;
  c.functional = "dirichlet";
  out.push_back(c);
  c.command = Command::SymmetricEkeland;
  out.push_back(c);
  c.command = Command::SPS;
  c.functional = "dirichlet-box";
  out.push_back(c);
  c.format = OutputFormat::CSV;
  out.push_back(c);
  c.functional = "quadratic";
  c.model = kVec16;
  out.push_back(c);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "framework conformance", 20.0, conformance},   {2, "approximate symmetrization", 30.0, approximation},
      {3, "polarization monotonicity", 10.0, monotonicity}, {4, "certificate conclusions (a)-(d)", 120.0, conclusions},
      {5, "exhaustive lattice oracle", 10.0, lattice},   {6, "SPS on the quadratic target", 30.0, sps_quadratic},
      {7, "SPS on the box-constrained path", 60.0, sps_box},
  };

  int failed = 0;
  std::vector<std::string> first_pass;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s && o.pass) {
      o.pass = false;
      o.detail = "runtime over " + std::to_string(c.limit_s) + " s";
    }
    first_pass.push_back(dump_artifact(o.artifact));
    failed += !o.pass;
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }

  // 8: rerun everything and compare serialized artifacts byte for byte
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    std::size_t bytes = 0;
    try {
      for (std::size_t i = 0; i < criteria.size(); ++i) {
        const std::string again = dump_artifact(criteria[i].fn().artifact);
        bytes += again.size();
        require(o, again == first_pass[i], "criterion " + std::to_string(criteria[i].id) + " artifact differs");
      }
      for (const auto& cfg : cli_configs()) {
        const std::string a = execute(cfg).artifact, b = execute(cfg).artifact;
        bytes += a.size();
        require(o, a == b, std::string("cli ") + to_string(cfg.command) + " artifact differs");
      }
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass) o.detail = std::to_string(bytes) + " bytes of JSON/CSV identical across reruns";
    failed += !o.pass;
    std::printf("[%s] 8 determinism: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  }
  std::printf("%d of 8 criteria failed\n", failed);
  return failed;
}
