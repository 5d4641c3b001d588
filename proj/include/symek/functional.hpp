#pragma once

// Extended-real objectives f: X -> R u {+inf} with the polarization-monotonicity
// contract f(u^H) <= f(u) on S, and the catalog of shipped functionals.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symek/rearrangement.hpp"
#include "symek/space.hpp"

namespace symek {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kMonotoneTol = 1e-10;

class Functional {
 public:
  virtual ~Functional() = default;

  virtual std::string name() const = 0;
  virtual const ModelDescriptor& model() const = 0;

  /// Finite value or +inf; never NaN.
  virtual double eval(const FunctionElement& u) const = 0;

  /// Coordinate partial derivatives, present iff f is differentiable at u.
  virtual std::optional<FunctionElement> gradient(const FunctionElement& u) const;

  /// Approximate minimizer of w -> f(w) + sigma * ||w - center||_X.
  virtual FunctionElement inner_min(const FunctionElement& center, double sigma, double tol, long budget) const;

  /// Analytic lower bound: eval(u) >= lower_bound() for every u.
  virtual double lower_bound() const = 0;

  virtual bool claims_polarization_monotone() const { return true; }

  /// A point of S with f no larger than f(u).
  virtual FunctionElement cone_reduce(const FunctionElement& u) const { return theta(u); }

  virtual std::optional<FunctionElement> known_minimizer() const { return std::nullopt; }
  virtual std::optional<double> known_min_value() const { return std::nullopt; }

  /// Gradient of the smooth part used by the default inner_min; one-sided on the feasible set.
  virtual std::optional<FunctionElement> descent_gradient(const FunctionElement& u) const { return gradient(u); }
  /// Pointwise feasibility constraint applied inside the default inner_min (none by default).
  virtual void project_feasible(std::vector<double>&) const {}
};

using FunctionalPtr = std::shared_ptr<const Functional>;

/// Options of the default perturbed-problem solver.
struct ProximalOptions {
  double sigma = 0.0;
  double tol = 1e-10;
  long budget = 10'000;
};

/// Minimizes w -> f(w) + sigma ||w - center||_X from a smooth-part gradient. Without a projection
/// this is proximal gradient in the X-metric; with one it is projected gradient in the Gram diagonal.
FunctionElement proximal_descent(
    const FunctionElement& center, const ProximalOptions& opts,
    const std::function<double(const FunctionElement&)>& value,
    const std::function<std::optional<FunctionElement>(const FunctionElement&)>& grad,
    const std::function<void(std::vector<double>&)>& project = {});

/// f(u) = ||u - t||_V^2 with t symmetric-decreasing.
FunctionalPtr build_quadratic_target(const FunctionElement& t);

/// Scalar potential W with derivative and an exact lower bound of W(s) - g s over s >= 0.
struct Potential {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  /// min over s >= 0 of W(s) - g s, or nullopt when unbounded (linear-growth W).
  std::function<std::optional<double>(double)> tilted_min;

  static Potential zero();
  /// W(s) = s^4/4 - s^2/2.
  static Potential double_well();
};

/// Discrete Dirichlet energy with potential and load on a grid with zero extension:
/// f(u) = 1/2 h sum_edges (du/h)^2 + h sum W(u_i) - h sum g_i u_i on S, where the
/// edge sum includes the two boundary edges to the virtual zero nodes, and
/// f(u) = f(theta(u)) + penalty * dist_V(u, S)^2 off S.
FunctionalPtr build_dirichlet_potential(const FunctionElement& g, Potential W, double penalty = 1.0);

/// base(u) on the box [0, upper]^n, +inf outside.
FunctionalPtr build_nonsmooth_box(FunctionalPtr base, double upper);

/// base restricted to the lattice {0, step, ..., (levels-1) step}^n of a vector model
/// (+inf elsewhere), with inner_min by exhaustive enumeration. Small n only: levels^n points.
FunctionalPtr build_lattice_restriction(FunctionalPtr base, int levels, double step);

/// Every point of the lattice above, in lexicographic order of level indices.
std::vector<FunctionElement> lattice_points(const ModelDescriptor& model, int levels, double step);

/// f(u) = h sum g_i |u_i| with g symmetric-decreasing: increases under polarization.
/// Negative control for the monotonicity checker.
FunctionalPtr build_reverse_hardy_control(const FunctionElement& g);

struct MonotoneSample {
  double violation = 0.0;  ///< f(u^H) - f(u)
  std::string witness;
};

struct MonotonicityReport {
  std::string functional;
  ModelDescriptor model;
  long samples = 0;
  std::uint64_t seed = 0;
  double max_violation = 0.0;
  double tolerance = kMonotoneTol;
  long worst_sample = -1;
  std::string witness;
  bool passed = true;
};

MonotoneSample evaluate_monotone_sample(const Functional& f, std::uint64_t seed, long index);

MonotonicityReport check_polarization_monotone(const Functional& f, long samples, std::uint64_t seed);

// Catalog --------------------------------------------------------------------

struct FunctionalCatalogEntry {
  std::string name;
  std::string description;
  std::function<FunctionalPtr(const ModelDescriptor&, const std::vector<std::pair<std::string, double>>&)> builder;
};

const std::vector<FunctionalCatalogEntry>& functional_catalog();

/// Builds a catalog functional by name, with key=value overrides.
FunctionalPtr make_functional(const std::string& name, const ModelDescriptor& model,
                              const std::vector<std::pair<std::string, double>>& params = {});

/// Default symmetric-decreasing profiles used by the catalog.
FunctionElement default_target(const ModelDescriptor& model, double scale = 1.0);
FunctionElement default_load(const ModelDescriptor& model, double amplitude = 4.0, double width = 0.5);

}  // namespace symek
