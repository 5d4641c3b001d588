#include "symek/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symek/io.hpp"
#include "symek/kernels.hpp"
#include "symek/rng.hpp"

namespace symek {

Polarizer Polarizer::pair(const ModelDescriptor& model, int i, int j) {
  if (model.kind() != ModelKind::Vector)
    throw Error(ErrorCode::InvalidPolarizer, "index pairs only exist in the vector model");
  if (!(0 <= i && i < j && j < model.n()))
    throw Error(ErrorCode::InvalidPolarizer,
                "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
  return Polarizer(model, i, j);
}

Polarizer Polarizer::reflection(const ModelDescriptor& model, int half_steps) {
  if (model.kind() != ModelKind::Grid1D)
    throw Error(ErrorCode::InvalidPolarizer, "reflections only exist in the grid model");
  const int limit = 2 * model.half_width() - 1;
  if (std::abs(half_steps) > limit)
    throw Error(ErrorCode::InvalidPolarizer,
                "reflection center maps no node pair onto the grid (half_steps=" + std::to_string(half_steps) +
                    ")");
  return Polarizer(model, half_steps, 0);
}

std::vector<Polarizer> polarizer_family(const ModelDescriptor& model) {
  std::vector<Polarizer> out;
  if (model.kind() == ModelKind::Vector) {
    for (int i = 0; i < model.n(); ++i)
      for (int j = i + 1; j < model.n(); ++j) out.push_back(Polarizer::pair(model, i, j));
    return out;
  }
  out.push_back(Polarizer::reflection(model, 0));
  for (int c = 1; c <= 2 * model.half_width() - 1; ++c) {
    out.push_back(Polarizer::reflection(model, c));
    out.push_back(Polarizer::reflection(model, -c));
  }
  return out;
}

FunctionElement polarize(const FunctionElement& u, const Polarizer& H) {
  require_same_model(u.model(), H.model());
  std::vector<double> w(u.values().begin(), u.values().end());
  if (u.model().kind() == ModelKind::Vector) {
    const auto i = static_cast<std::size_t>(H.first());
    const auto j = static_cast<std::size_t>(H.second());
    w[i] = std::max(u[i], u[j]);
    w[j] = std::min(u[i], u[j]);
    return FunctionElement(u.model(), std::move(w));
  }
  const int m = u.model().half_width();
  const int c = H.half_steps();
  for (int x = -m; x <= m; ++x) {
    const bool kept = c > 0 ? 2 * x < c : 2 * x > c;
    const int partner = c - x;
    if (!kept || partner < -m || partner > m) continue;
    const auto k = static_cast<std::size_t>(x + m);
    const auto p = static_cast<std::size_t>(partner + m);
    w[k] = std::max(u[k], u[p]);
    w[p] = std::min(u[k], u[p]);
  }
  return FunctionElement(u.model(), std::move(w));
}

int grid_rank_node(int rank) { return rank % 2 == 1 ? (rank + 1) / 2 : -(rank / 2); }

FunctionElement symmetrize(const FunctionElement& u) {
  std::vector<double> sorted(u.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = std::fabs(u[i]);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (u.model().kind() == ModelKind::Vector) return FunctionElement(u.model(), std::move(sorted));
  const int m = u.model().half_width();
  std::vector<double> w(u.size());
  for (int rank = 0; rank < static_cast<int>(sorted.size()); ++rank)
    w[static_cast<std::size_t>(grid_rank_node(rank) + m)] = sorted[static_cast<std::size_t>(rank)];
  return FunctionElement(u.model(), std::move(w));
}

PolarizerStream::PolarizerStream(const ModelDescriptor& model, const PolarizationSchedule& schedule)
    : model_(model), schedule_(schedule), family_(polarizer_family(model)), engine_(schedule.seed) {
  if (schedule.max_steps < 1) throw Error(ErrorCode::ConfigError, "max_steps must be >= 1");
}

Polarizer PolarizerStream::next() {
  if (schedule_.strategy == ScheduleStrategy::SeededRandom) {
    std::uniform_int_distribution<std::size_t> pick(0, family_.size() - 1);
    return family_[pick(engine_)];
  }
  if (model_.kind() == ModelKind::Grid1D) return Polarizer::reflection(model_, round_++ % 2 == 0 ? 1 : 0);
  // Odd-even transposition over adjacent pairs; a vector of length 1 has no pairs.
  const int n = model_.n();
  if (n < 2) throw Error(ErrorCode::InvalidPolarizer, "vector of length 1 has no polarizers");
  for (;;) {
    const int start = static_cast<int>(round_ % 2);
    const int i = start + 2 * offset_;
    if (i + 1 < n) {
      ++offset_;
      return Polarizer::pair(model_, i, i + 1);
    }
    offset_ = 0;
    ++round_;
  }
}

ApproxSymmetrization approx_symmetrize(
    const FunctionElement& u, double rho, const PolarizationSchedule& schedule,
    const std::function<void(const FunctionElement&, const Polarizer&)>& on_step) {
  if (!u.in_cone()) throw Error(ErrorCode::NotInCone, "approx_symmetrize needs u in S");
  if (!(rho > 0.0)) throw Error(ErrorCode::ConfigError, "rho must be positive");
  const FunctionElement target = symmetrize(u);
  ApproxSymmetrization out{u, {}, dist_V(u, target)};
  if (out.distance < rho || u.size() < 2) return out;
  PolarizerStream stream(u.model(), schedule);
  for (long step = 0; step < schedule.max_steps; ++step) {
    const Polarizer H = stream.next();
    out.value = polarize(out.value, H);
    out.trace.push_back(H);
    if (on_step) on_step(out.value, H);
    out.distance = dist_V(out.value, target);
    if (out.distance < rho) return out;
  }
  throw Error(ErrorCode::ScheduleExhausted, "no rho-approximation after " + std::to_string(schedule.max_steps) +
                                                " polarizations (distance " + std::to_string(out.distance) + ")");
}

bool ConformanceReport::passed() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.passed; });
}

namespace {

constexpr const char* kAxiomNames[AxiomSample::kGroups] = {
    "continuity",     // 1-Lipschitz in u for fixed H, local perturbations
    "fixed_points",   // (u*)^H = (u^H)* = u*, u^{HH} = u^H, bitwise
    "convergence",    // DeterministicSweep reaches u*
    "nonexpansive",   // ||u^H - v^H||_V <= ||u - v||_V
};

constexpr double kAxiomTol[AxiomSample::kGroups] = {kNonexpansiveTol, 0.0, kSweepTol, kNonexpansiveTol};

double max_abs_diff(const FunctionElement& a, const FunctionElement& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

std::string witness_json(const json& j) { return j.dump(); }

}  // namespace

AxiomSample evaluate_axiom_sample(const ModelDescriptor& model, std::uint64_t seed, long index,
                                  const PolarizeFn& fn) {
  Engine engine = derive_engine(seed, static_cast<std::uint64_t>(index));
  const auto family = polarizer_family(model);
  std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
  const FunctionElement u = random_cone_element(model, engine);
  const FunctionElement v = random_cone_element(model, engine);
  const Polarizer H = family[pick(engine)];

  AxiomSample s;

  // Small perturbation of u inside S.
  std::uniform_real_distribution<double> jitter(0.0, 1e-3);
  std::vector<double> near(u.values().begin(), u.values().end());
  for (double& x : near) x += jitter(engine);
  const FunctionElement u_near(model, std::move(near));
  s.residual[0] = dist_V(fn(u, H), fn(u_near, H)) - dist_V(u, u_near);
  if (s.residual[0] > 0.0) s.witness[0] = witness_json({{"u", u}, {"v", u_near}, {"H", H}});

  const FunctionElement us = symmetrize(u);
  const FunctionElement uH = fn(u, H);
  const double r3 = std::max({max_abs_diff(fn(us, H), us), max_abs_diff(symmetrize(uH), us),
                              max_abs_diff(fn(uH, H), uH)});
  const bool bitwise = fn(us, H) == us && symmetrize(uH) == us && fn(uH, H) == uH;
  s.residual[1] = bitwise ? 0.0 : std::max(r3, std::numeric_limits<double>::min());
  if (!bitwise) s.witness[1] = witness_json({{"u", u}, {"H", H}});

  FunctionElement w = u;
  PolarizerStream sweep(model, PolarizationSchedule::sweep());
  const long steps = model.kind() == ModelKind::Vector ? static_cast<long>(model.n()) * model.n() : model.n();
  for (long k = 0; k < steps && model.n() > 1; ++k) w = fn(w, sweep.next());
  s.residual[2] = dist_V(w, us);
  if (s.residual[2] > 0.0) s.witness[2] = witness_json({{"u", u}, {"steps", steps}});

  s.residual[3] = dist_V(uH, fn(v, H)) - dist_V(u, v);
  if (s.residual[3] > 0.0) s.witness[3] = witness_json({{"u", u}, {"v", v}, {"H", H}});
  return s;
}

ConformanceReport merge_axiom_samples(const ModelDescriptor& model, std::uint64_t seed,
                                      const std::vector<AxiomSample>& draws) {
  ConformanceReport report{model, static_cast<long>(draws.size()), seed, {}};
  for (int g = 0; g < AxiomSample::kGroups; ++g) {
    AxiomResult r;
    r.name = kAxiomNames[g];
    r.tolerance = kAxiomTol[g];
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < draws.size(); ++i) {
      if (draws[i].residual[g] > worst) {
        worst = draws[i].residual[g];
        r.worst_sample = static_cast<long>(i);
      }
    }
    r.worst_residual = draws.empty() ? 0.0 : worst;
    r.passed = r.worst_residual <= r.tolerance;
    if (r.worst_sample >= 0) r.witness = draws[static_cast<std::size_t>(r.worst_sample)].witness[g];
    report.axioms.push_back(std::move(r));
  }
  return report;
}

ConformanceReport verify_framework(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                   const PolarizeFn& fn) {
  if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be >= 1");
  return merge_axiom_samples(model, seed, par::axiom_samples(model, samples, seed, fn));
}

}  // namespace symek
