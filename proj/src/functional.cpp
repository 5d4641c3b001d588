#include "symek/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symek/io.hpp"
#include "symek/kernels.hpp"
#include "symek/rng.hpp"

namespace symek {

std::optional<FunctionElement> Functional::gradient(const FunctionElement&) const { return std::nullopt; }

FunctionElement Functional::inner_min(const FunctionElement& center, double sigma, double tol, long budget) const {
  return proximal_descent(
      center, {sigma, tol, budget}, [this](const FunctionElement& w) { return eval(w); },
      [this](const FunctionElement& w) { return descent_gradient(w); },
      [this](std::vector<double>& w) { project_feasible(w); });
}

namespace {

// Projected gradient on f + sigma ||. - c||_X in the diagonal of the Gram matrix, where a
// coordinatewise clamp is the exact metric projection. The X-metric step is not compatible
// with a clamp and can stall on the constraint.
FunctionElement projected_descent(const FunctionElement& center, const ProximalOptions& opts,
                                  const std::function<double(const FunctionElement&)>& value,
                                  const std::function<std::optional<FunctionElement>(const FunctionElement&)>& grad,
                                  const std::function<void(std::vector<double>&)>& project) {
  const ModelDescriptor& model = center.model();
  const std::size_t n = center.size();
  std::vector<double> diag(n, 1.0);
  if (model.kind() == ModelKind::Grid1D) {
    const double h = model.h_mesh();
    for (std::size_t i = 0; i < n; ++i) diag[i] = h + ((i > 0) + (i + 1 < n)) / h;
  }

  std::vector<double> start(center.values().begin(), center.values().end());
  project(start);
  FunctionElement w(model, start);
  auto phi = [&](const FunctionElement& x) { return value(x) + opts.sigma * dist_X(x, center); };
  double phi_w = phi(w);
  if (!std::isfinite(phi_w)) return center;
  double step = 1.0;
  const double step_tol = std::max(opts.tol * 1e-4, 1e-15 * (1.0 + norm_X(center)));

  std::vector<double> G(n), cand(n), d(n), off(n);
  for (long it = 0; it < opts.budget; ++it) {
    const auto g = grad(w);
    if (!g) break;
    for (std::size_t i = 0; i < n; ++i) off[i] = w[i] - center[i];
    const double dist = std::sqrt(std::max(inner_X(off, off, model), 0.0));
    const std::vector<double> Aoff = apply_gram(off, model);
    for (std::size_t i = 0; i < n; ++i) G[i] = (*g)[i] + (dist > 0.0 ? opts.sigma * Aoff[i] / dist : 0.0);

    bool accepted = false;
    double moved = 0.0;
    for (int backtrack = 0; backtrack < 80; ++backtrack) {
      for (std::size_t i = 0; i < n; ++i) cand[i] = w[i] - step * G[i] / diag[i];
      project(cand);
      double nd2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = cand[i] - w[i];
        nd2 += diag[i] * d[i] * d[i];
      }
      if (nd2 == 0.0) break;
      const FunctionElement cw(model, cand);
      const double phi_c = phi(cw);
      if (std::isfinite(phi_c) && phi_c <= phi_w - nd2 / (4.0 * step)) {
        w = cw;
        phi_w = phi_c;
        moved = std::sqrt(std::max(inner_X(d, d, model), 0.0));
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || moved <= step_tol) break;
    step *= 2.0;
  }
  return w;
}

}  // namespace

FunctionElement proximal_descent(
    const FunctionElement& center, const ProximalOptions& opts,
    const std::function<double(const FunctionElement&)>& value,
    const std::function<std::optional<FunctionElement>(const FunctionElement&)>& grad,
    const std::function<void(std::vector<double>&)>& project) {
  if (project) return projected_descent(center, opts, value, grad, project);
  const ModelDescriptor& model = center.model();
  const std::size_t n = center.size();
  const auto c = center.values();

  FunctionElement w = center;
  double fw = value(w);
  if (!std::isfinite(fw)) return w;
  double phi_w = fw;  // ||w - c|| = 0
  double step = 1.0;
  const double step_tol = std::max(opts.tol * 1e-4, 1e-15 * (1.0 + norm_X(center)));

  std::vector<double> y(n), cand(n), d(n);
  for (long it = 0; it < opts.budget; ++it) {
    const auto g = grad(w);
    if (!g) break;
    const std::vector<double> r = riesz_representative(g->values(), model);

    bool accepted = false;
    double moved = 0.0;
    for (int backtrack = 0; backtrack < 80; ++backtrack) {
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] - step * r[i] - c[i];
      const double ny = std::sqrt(std::max(inner_X(y, y, model), 0.0));
      const double shrink = ny > step * opts.sigma ? 1.0 - step * opts.sigma / ny : 0.0;
      for (std::size_t i = 0; i < n; ++i) cand[i] = c[i] + shrink * y[i];
      for (std::size_t i = 0; i < n; ++i) d[i] = cand[i] - w[i];
      const double nd2 = std::max(inner_X(d, d, model), 0.0);
      if (nd2 == 0.0) break;

      const FunctionElement cw(model, cand);
      const double fc = value(cw);
      if (std::isfinite(fc)) {
        double lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) lin += (*g)[i] * d[i];
        const double phi_c = fc + opts.sigma * dist_X(cw, center);
        if (fc <= fw + lin + nd2 / (2.0 * step) && phi_c <= phi_w) {
          w = cw;
          fw = fc;
          phi_w = phi_c;
          moved = std::sqrt(nd2);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || moved <= step_tol) break;
    step *= 2.0;
  }
  return w;
}

namespace {

double mesh_weight(const ModelDescriptor& m) { return m.kind() == ModelKind::Grid1D ? m.h_mesh() : 1.0; }

void require_symmetric(const FunctionElement& t, const char* what) {
  if (!(symmetrize(t) == t))
    throw Error(ErrorCode::NotSymmetric, std::string(what) + " must equal its symmetrization");
}

// Quadratic target ------------------------------------------------------------

class QuadraticTarget final : public Functional {
 public:
  explicit QuadraticTarget(FunctionElement t) : t_(std::move(t)) {}

  std::string name() const override { return "quadratic"; }
  const ModelDescriptor& model() const override { return t_.model(); }

  double eval(const FunctionElement& u) const override {
    require_same_model(u.model(), model());
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - t_[i]) * (u[i] - t_[i]);
    return mesh_weight(model()) * s;
  }

  std::optional<FunctionElement> gradient(const FunctionElement& u) const override {
    return (2.0 * mesh_weight(model())) * (u - t_);
  }

  FunctionElement inner_min(const FunctionElement& center, double sigma, double tol, long budget) const override {
    if (model().kind() != ModelKind::Vector) return Functional::inner_min(center, sigma, tol, budget);
    // Minimizer lies on the segment [center, t] where ||grad|| = sigma.
    const double d = dist_V(center, t_);
    if (2.0 * d <= sigma) return center;
    return center + (1.0 - sigma / (2.0 * d)) * (t_ - center);
  }

  double lower_bound() const override { return 0.0; }
  std::optional<FunctionElement> known_minimizer() const override { return t_; }
  std::optional<double> known_min_value() const override { return 0.0; }

 private:
  FunctionElement t_;
};

// Dirichlet potential ---------------------------------------------------------

class DirichletPotential final : public Functional {
 public:
  DirichletPotential(FunctionElement g, Potential W, double penalty)
      : g_(std::move(g)), W_(std::move(W)), penalty_(penalty) {}

  std::string name() const override { return "dirichlet"; }
  const ModelDescriptor& model() const override { return g_.model(); }

  double eval(const FunctionElement& u) const override {
    require_same_model(u.model(), model());
    const double h = model().h_mesh();
    double neg2 = 0.0;
    for (double x : u.values())
      if (x < 0.0) neg2 += x * x;
    return on_cone(u) + penalty_ * h * neg2;
  }

  std::optional<FunctionElement> gradient(const FunctionElement& u) const override {
    const FunctionElement a = theta(u);
    const std::vector<double> dF = cone_gradient(a);
    const double h = model().h_mesh();
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] > 0.0)
        out[i] = dF[i];
      else if (u[i] < 0.0)
        out[i] = -dF[i] + 2.0 * penalty_ * h * u[i];
      else if (dF[i] == 0.0)
        out[i] = 0.0;
      else
        return std::nullopt;  // kink of F(|u|) at u_i = 0
    }
    return FunctionElement(model(), std::move(out));
  }

  double lower_bound() const override {
    const double h = model().h_mesh();
    double tilted = 0.0;
    bool all = true;
    for (double gi : g_.values()) {
      const auto m = W_.tilted_min(gi);
      if (!m) {
        all = false;
        break;
      }
      tilted += *m;
    }
    if (all) return h * tilted;
    // Poincare: (1/2h) u^T L_D u >= lambda/(2h) |u|^2, then Cauchy-Schwarz on the load.
    const int n = model().n();
    const double s = std::sin(std::numbers::pi / (2.0 * (n + 1)));
    const double lambda = 4.0 * s * s;
    double g2 = 0.0;
    for (double gi : g_.values()) g2 += gi * gi;
    return h * n * W_.tilted_min(0.0).value_or(0.0) - h * h * h * g2 / (2.0 * lambda);
  }

  std::optional<FunctionElement> descent_gradient(const FunctionElement& u) const override {
    return FunctionElement(model(), cone_gradient(theta(u)));
  }
  void project_feasible(std::vector<double>& w) const override {
    for (double& x : w) x = std::max(x, 0.0);
  }

 private:
  double on_cone(const FunctionElement& u) const {
    const double h = model().h_mesh();
    const std::size_t n = u.size();
    double grad2 = 0.0, pot = 0.0, load = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::fabs(u[i]);
      grad2 += (a - prev) * (a - prev);
      prev = a;
      pot += W_.value(a);
      load += g_[i] * a;
    }
    grad2 += prev * prev;
    return 0.5 * grad2 / h + h * pot - h * load;
  }

  std::vector<double> cone_gradient(const FunctionElement& a) const {
    const double h = model().h_mesh();
    const std::size_t n = a.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i > 0 ? a[i - 1] : 0.0;
      const double right = i + 1 < n ? a[i + 1] : 0.0;
      out[i] = (2.0 * a[i] - left - right) / h + h * W_.derivative(a[i]) - h * g_[i];
    }
    return out;
  }

  FunctionElement g_;
  Potential W_;
  double penalty_;
};

// Box indicator ---------------------------------------------------------------

class NonsmoothBox final : public Functional {
 public:
  NonsmoothBox(FunctionalPtr base, double upper) : base_(std::move(base)), upper_(upper) {}

  std::string name() const override { return base_->name() + "-box"; }
  const ModelDescriptor& model() const override { return base_->model(); }

  double eval(const FunctionElement& u) const override {
    for (double x : u.values())
      if (x < 0.0 || x > upper_) return kInfinity;
    return base_->eval(u);
  }

  std::optional<FunctionElement> descent_gradient(const FunctionElement& u) const override {
    return base_->descent_gradient(u);
  }
  void project_feasible(std::vector<double>& w) const override {
    for (double& x : w) x = std::clamp(x, 0.0, upper_);
  }

  // Differentiable only where the indicator is locally constant.
  std::optional<FunctionElement> gradient(const FunctionElement& u) const override {
    for (double x : u.values())
      if (!(x > 0.0 && x < upper_)) return std::nullopt;
    return base_->gradient(u);
  }

  double lower_bound() const override { return base_->lower_bound(); }
  bool claims_polarization_monotone() const override { return base_->claims_polarization_monotone(); }

  FunctionElement cone_reduce(const FunctionElement& u) const override {
    if (std::isfinite(eval(u))) return u;
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::min(std::fabs(u[i]), upper_);
    return FunctionElement(u.model(), std::move(w));
  }

  double upper() const { return upper_; }

 private:
  FunctionalPtr base_;
  double upper_;
};

// Lattice restriction ---------------------------------------------------------

class LatticeRestriction final : public Functional {
 public:
  LatticeRestriction(FunctionalPtr base, int levels, double step)
      : base_(std::move(base)), levels_(levels), step_(step), points_(lattice_points(base_->model(), levels, step)) {}

  std::string name() const override { return base_->name() + "-lattice"; }
  const ModelDescriptor& model() const override { return base_->model(); }

  double eval(const FunctionElement& u) const override {
    for (double x : u.values()) {
      const double k = x / step_;
      if (k != std::round(k) || k < 0.0 || k > levels_ - 1) return kInfinity;
    }
    return base_->eval(u);
  }

  FunctionElement inner_min(const FunctionElement& center, double sigma, double, long) const override {
    FunctionElement best = center;
    double best_phi = eval(center);
    for (const auto& w : points_) {
      const double phi = base_->eval(w) + sigma * dist_X(w, center);
      if (phi < best_phi) {
        best_phi = phi;
        best = w;
      }
    }
    return best;
  }

  double lower_bound() const override { return base_->lower_bound(); }
  bool claims_polarization_monotone() const override { return base_->claims_polarization_monotone(); }
  std::optional<double> known_min_value() const override {
    double m = kInfinity;
    for (const auto& w : points_) m = std::min(m, base_->eval(w));
    return m;
  }

 private:
  FunctionalPtr base_;
  int levels_;
  double step_;
  std::vector<FunctionElement> points_;
};

// Negative control ------------------------------------------------------------

class ReverseHardy final : public Functional {
 public:
  explicit ReverseHardy(FunctionElement g) : g_(std::move(g)) {}

  std::string name() const override { return "reverse-hardy"; }
  const ModelDescriptor& model() const override { return g_.model(); }

  double eval(const FunctionElement& u) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g_[i] * std::fabs(u[i]);
    return mesh_weight(model()) * s;
  }

  double lower_bound() const override { return 0.0; }
  bool claims_polarization_monotone() const override { return false; }

 private:
  FunctionElement g_;
};

double sampling_scale(const Functional& f) {
  if (const auto* box = dynamic_cast<const NonsmoothBox*>(&f)) return box->upper();
  return 1.0;
}

std::vector<std::pair<std::string, double>> check_keys(const std::vector<std::pair<std::string, double>>& params,
                                                       std::initializer_list<const char*> keys,
                                                       const std::string& who) {
  for (const auto& [k, v] : params) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; }))
      throw Error(ErrorCode::ConfigError, "unknown parameter '" + k + "' for functional " + who);
  }
  return params;
}

double param(const std::vector<std::pair<std::string, double>>& params, const char* key, double fallback) {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return fallback;
}

FunctionalPtr make_dirichlet(const ModelDescriptor& model, const std::vector<std::pair<std::string, double>>& p) {
  if (model.kind() != ModelKind::Grid1D)
    throw Error(ErrorCode::ConfigError, "dirichlet functionals need a grid1d model");
  const Potential W = param(p, "well", 1.0) != 0.0 ? Potential::double_well() : Potential::zero();
  return build_dirichlet_potential(default_load(model, param(p, "amp", 4.0), param(p, "width", 0.5)), W,
                                   param(p, "penalty", 1.0));
}

}  // namespace

FunctionalPtr build_quadratic_target(const FunctionElement& t) {
  require_symmetric(t, "quadratic target t");
  return std::make_shared<QuadraticTarget>(t);
}

Potential Potential::zero() {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; },
          [](double g) -> std::optional<double> {
            if (g > 0.0) return std::nullopt;
            return 0.0;
          }};
}

Potential Potential::double_well() {
  auto value = [](double s) { return 0.25 * s * s * s * s - 0.5 * s * s; };
  return {"double-well", value, [](double s) { return s * s * s - s; },
          [value](double g) -> std::optional<double> {
            // Stationary points of s^4/4 - s^2/2 - g s on s >= 0 solve s^3 - s = g.
            double best = 0.0;
            if (g >= 0.0) {
              double s = 1.0 + g;
              for (int it = 0; it < 100; ++it) {
                const double next = s - (s * s * s - s - g) / (3.0 * s * s - 1.0);
                if (next == s) break;
                s = next;
              }
              best = std::min(best, value(s) - g * s);
            } else {
              // g < 0: the largest root of s^3 - s - g lies in [0, 1].
              double lo = 0.0, hi = 1.0;
              for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (mid * mid * mid - mid - g > 0.0 ? hi : lo) = mid;
              }
              best = std::min(best, value(lo) - g * lo);
            }
            return best;
          }};
}

FunctionalPtr build_dirichlet_potential(const FunctionElement& g, Potential W, double penalty) {
  if (g.model().kind() != ModelKind::Grid1D)
    throw Error(ErrorCode::ConfigError, "dirichlet potential needs a grid1d model");
  if (!g.in_cone()) throw Error(ErrorCode::NotNonnegative, "load g must be nonnegative");
  require_symmetric(g, "load g");
  if (!(penalty > 0.0)) throw Error(ErrorCode::ConfigError, "penalty must be positive");
  return std::make_shared<DirichletPotential>(g, std::move(W), penalty);
}

FunctionalPtr build_nonsmooth_box(FunctionalPtr base, double upper) {
  if (!(upper > 0.0)) throw Error(ErrorCode::ConfigError, "box upper bound must be positive");
  return std::make_shared<NonsmoothBox>(std::move(base), upper);
}

FunctionalPtr build_reverse_hardy_control(const FunctionElement& g) {
  require_symmetric(g, "control weight g");
  return std::make_shared<ReverseHardy>(g);
}

std::vector<FunctionElement> lattice_points(const ModelDescriptor& model, int levels, double step) {
  if (model.kind() != ModelKind::Vector) throw Error(ErrorCode::ConfigError, "lattice needs a vector model");
  if (levels < 2 || !(step > 0.0)) throw Error(ErrorCode::ConfigError, "lattice needs levels >= 2 and step > 0");
  const double count = std::pow(static_cast<double>(levels), model.n());
  if (count > 1e6) throw Error(ErrorCode::ConfigError, "lattice too large for enumeration");
  std::vector<FunctionElement> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> idx(model.n(), 0);
  std::vector<double> v(model.n());
  for (;;) {
    for (int i = 0; i < model.n(); ++i) v[i] = idx[i] * step;
    out.emplace_back(model, v);
    int i = model.n() - 1;
    while (i >= 0 && ++idx[i] == levels) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

FunctionalPtr build_lattice_restriction(FunctionalPtr base, int levels, double step) {
  return std::make_shared<LatticeRestriction>(std::move(base), levels, step);
}

MonotoneSample evaluate_monotone_sample(const Functional& f, std::uint64_t seed, long index) {
  Engine engine = derive_engine(seed, static_cast<std::uint64_t>(index));
  const auto family = polarizer_family(f.model());
  std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
  const FunctionElement u = random_cone_element(f.model(), engine, sampling_scale(f));
  const Polarizer H = family[pick(engine)];
  const double fu = f.eval(u);
  const double fh = f.eval(polarize(u, H));
  MonotoneSample s;
  if (fu == kInfinity)
    s.violation = fh == kInfinity ? 0.0 : -kInfinity;
  else
    s.violation = fh - fu;
  if (s.violation > 0.0) s.witness = json{{"u", u}, {"H", H}, {"f_u", fu}, {"f_uH", fh}}.dump();
  return s;
}

MonotonicityReport check_polarization_monotone(const Functional& f, long samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be >= 1");
  const auto draws = par::monotone_samples(f, samples, seed);
  MonotonicityReport r{.functional = f.name(), .model = f.model()};
  r.samples = samples;
  r.seed = seed;
  r.max_violation = -kInfinity;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (draws[i].violation > r.max_violation) {
      r.max_violation = draws[i].violation;
      r.worst_sample = static_cast<long>(i);
    }
  }
  r.witness = draws[static_cast<std::size_t>(r.worst_sample)].witness;
  r.passed = r.max_violation <= r.tolerance;
  return r;
}

FunctionElement default_target(const ModelDescriptor& model, double scale) {
  std::vector<double> t(model.n());
  if (model.kind() == ModelKind::Vector) {
    for (int i = 0; i < model.n(); ++i) t[i] = scale * (model.n() - i) / model.n();
  } else {
    const int m = model.half_width();
    for (int x = -m; x <= m; ++x) t[x + m] = scale * (1.0 - std::abs(x) / (m + 1.0));
  }
  return FunctionElement(model, std::move(t));
}

FunctionElement default_load(const ModelDescriptor& model, double amplitude, double width) {
  std::vector<double> g(model.n());
  if (model.kind() == ModelKind::Vector) {
    for (int i = 0; i < model.n(); ++i) g[i] = amplitude * (model.n() - i) / model.n();
  } else {
    const int m = model.half_width();
    for (int x = -m; x <= m; ++x)
      g[x + m] = amplitude * std::max(0.0, 1.0 - std::abs(x) * model.h_mesh() / width);
  }
  return FunctionElement(model, std::move(g));
}

const std::vector<FunctionalCatalogEntry>& functional_catalog() {
  static const std::vector<FunctionalCatalogEntry> catalog = {
      {"quadratic", "||u - t||_V^2 with the default symmetric-decreasing target (scale)",
       [](const ModelDescriptor& m, const auto& p) {
         check_keys(p, {"scale"}, "quadratic");
         return build_quadratic_target(default_target(m, param(p, "scale", 1.0)));
       }},
      {"dirichlet", "zero-boundary Dirichlet energy + potential - load (amp, width, well, penalty)",
       [](const ModelDescriptor& m, const auto& p) {
         check_keys(p, {"amp", "width", "well", "penalty"}, "dirichlet");
         return make_dirichlet(m, p);
       }},
      {"dirichlet-box", "dirichlet restricted to the box [0, upper]^n (amp, width, well, penalty, upper)",
       [](const ModelDescriptor& m, const auto& p) {
         check_keys(p, {"amp", "width", "well", "penalty", "upper"}, "dirichlet-box");
         std::vector<std::pair<std::string, double>> base;
         for (const auto& kv : p)
           if (kv.first != "upper") base.push_back(kv);
         return build_nonsmooth_box(make_dirichlet(m, base), param(p, "upper", 0.5));
       }},
      {"reverse-hardy", "negative control h sum g|u|, not polarization-monotone (amp, width)",
       [](const ModelDescriptor& m, const auto& p) {
         check_keys(p, {"amp", "width"}, "reverse-hardy");
         return build_reverse_hardy_control(default_load(m, param(p, "amp", 4.0), param(p, "width", 0.5)));
       }},
  };
  return catalog;
}

FunctionalPtr make_functional(const std::string& name, const ModelDescriptor& model,
                              const std::vector<std::pair<std::string, double>>& params) {
  for (const auto& entry : functional_catalog())
    if (entry.name == name) return entry.builder(model, params);
  throw Error(ErrorCode::ConfigError, "unknown functional '" + name + "'");
}

}  // namespace symek
