#pragma once

// Two-point rearrangements (polarizations), the symmetrization they converge to,
// and a randomized conformance check of the symmetrization framework axioms.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "symek/space.hpp"

namespace symek {

/// One element of the finite polarizer family.
///
/// Vector model: compare-swap of indices (i, j), i < j, larger value kept at i.
/// Grid model: reflection x -> 2a - x about a = half_steps * h / 2. The kept side is
/// the side of a containing the origin; for a = 0 it is x > 0.
class Polarizer {
 public:
  static Polarizer pair(const ModelDescriptor& model, int i, int j);
  static Polarizer reflection(const ModelDescriptor& model, int half_steps);

  const ModelDescriptor& model() const noexcept { return model_; }
  int first() const noexcept { return i_; }
  int second() const noexcept { return j_; }
  int half_steps() const noexcept { return i_; }
  /// Reflection center a (grid model only).
  double center() const noexcept { return 0.5 * i_ * model_.h_mesh(); }

  friend bool operator==(const Polarizer&, const Polarizer&) = default;

 private:
  Polarizer(ModelDescriptor model, int i, int j) : model_(model), i_(i), j_(j) {}

  ModelDescriptor model_;
  int i_;
  int j_;
};

/// All polarizers of the model. Grid reflections are listed by increasing |a|.
std::vector<Polarizer> polarizer_family(const ModelDescriptor& model);

FunctionElement polarize(const FunctionElement& u, const Polarizer& H);

/// u* = symmetrization of theta(u). Vector: sorted nonincreasing. Grid: k-th largest
/// value at the node with k-th smallest |x|, positive side first on ties.
FunctionElement symmetrize(const FunctionElement& u);

/// Grid node offset (in units of h) holding rank k of the symmetric rearrangement.
int grid_rank_node(int rank);

enum class ScheduleStrategy { DeterministicSweep, SeededRandom };

struct PolarizationSchedule {
  ScheduleStrategy strategy = ScheduleStrategy::DeterministicSweep;
  std::uint64_t seed = 0;
  long max_steps = 1'000'000;

  static PolarizationSchedule sweep(long max_steps = 1'000'000) {
    return {ScheduleStrategy::DeterministicSweep, 0, max_steps};
  }
  static PolarizationSchedule random(std::uint64_t seed, long max_steps = 1'000'000) {
    return {ScheduleStrategy::SeededRandom, seed, max_steps};
  }
};

/// Infinite stream of polarizers realizing a schedule.
///
/// DeterministicSweep is odd-even transposition sort: adjacent index pairs for vectors,
/// and alternating reflections a = h/2, a = 0 for grids (these are the odd and even
/// phases in rank order). Either reaches u* after at most n polarizer applications
/// on the grid and n(n-1)/2 compare-swaps on vectors.
class PolarizerStream {
 public:
  PolarizerStream(const ModelDescriptor& model, const PolarizationSchedule& schedule);
  Polarizer next();

 private:
  ModelDescriptor model_;
  PolarizationSchedule schedule_;
  std::vector<Polarizer> family_;
  std::mt19937_64 engine_;
  long round_ = 0;
  int offset_ = 0;
};

struct ApproxSymmetrization {
  FunctionElement value;
  std::vector<Polarizer> trace;
  double distance = 0.0;  ///< ||value - u*||_V, measured
};

/// T_rho u: iterated polarizations of u in S until ||T_rho u - u*||_V < rho.
/// `on_step` (optional) sees every intermediate iterate.
ApproxSymmetrization approx_symmetrize(
    const FunctionElement& u, double rho, const PolarizationSchedule& schedule,
    const std::function<void(const FunctionElement&, const Polarizer&)>& on_step = {});

/// Polarization map used by the conformance checker; injectable for negative controls.
using PolarizeFn = std::function<FunctionElement(const FunctionElement&, const Polarizer&)>;

struct AxiomResult {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  long worst_sample = -1;
  std::string witness;  ///< JSON of the worst inputs; empty when nothing was violated
};

struct ConformanceReport {
  ModelDescriptor model;
  long samples = 0;
  std::uint64_t seed = 0;
  std::vector<AxiomResult> axioms;

  bool passed() const;
};

/// Residuals of one randomized draw; index order is fixed by the axiom list.
struct AxiomSample {
  static constexpr int kGroups = 4;
  double residual[kGroups] = {0, 0, 0, 0};
  std::string witness[kGroups];
};

inline constexpr double kNonexpansiveTol = 1e-12;
inline constexpr double kSweepTol = 1e-10;

/// Evaluates all axiom groups for one draw. Pure; safe to call concurrently.
AxiomSample evaluate_axiom_sample(const ModelDescriptor& model, std::uint64_t seed, long index,
                                  const PolarizeFn& fn);

/// Merges per-draw residuals; ties resolve to the lowest sample index.
ConformanceReport merge_axiom_samples(const ModelDescriptor& model, std::uint64_t seed,
                                      const std::vector<AxiomSample>& draws);

ConformanceReport verify_framework(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                   const PolarizeFn& fn = polarize);

}  // namespace symek
