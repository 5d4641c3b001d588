#include "symek/space.hpp"

#include <cmath>
#include <string>

namespace symek {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::InvalidPolarizer: return "InvalidPolarizer";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::ScheduleExhausted: return "ScheduleExhausted";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

ModelDescriptor ModelDescriptor::vector(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidModel, "vector model needs n >= 1, got " + std::to_string(n));
  return ModelDescriptor(ModelKind::Vector, n, 1.0);
}

ModelDescriptor ModelDescriptor::grid1d(int n, double h_mesh) {
  if (n < 3 || n % 2 == 0)
    throw Error(ErrorCode::InvalidModel, "grid1d model needs odd n >= 3, got " + std::to_string(n));
  if (!(h_mesh > 0.0) || !std::isfinite(h_mesh))
    throw Error(ErrorCode::InvalidModel, "grid1d model needs h_mesh > 0");
  return ModelDescriptor(ModelKind::Grid1D, n, h_mesh);
}

FunctionElement::FunctionElement(ModelDescriptor model, std::vector<double> values)
    : model_(model), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(model_.n()))
    throw Error(ErrorCode::InvalidElement, "expected " + std::to_string(model_.n()) + " values, got " +
                                               std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidElement, "non-finite entry");
}

FunctionElement FunctionElement::zeros(const ModelDescriptor& model) {
  return FunctionElement(model, std::vector<double>(model.n(), 0.0));
}

bool FunctionElement::in_cone() const noexcept {
  for (double v : values_)
    if (v < 0.0) return false;
  return true;
}

void require_same_model(const ModelDescriptor& a, const ModelDescriptor& b) {
  if (!(a == b)) throw Error(ErrorCode::ModelMismatch, "operands live in different models");
}

FunctionElement operator-(const FunctionElement& a, const FunctionElement& b) {
  require_same_model(a.model(), b.model());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return FunctionElement(a.model(), std::move(out));
}

FunctionElement operator+(const FunctionElement& a, const FunctionElement& b) {
  require_same_model(a.model(), b.model());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return FunctionElement(a.model(), std::move(out));
}

FunctionElement operator*(double s, const FunctionElement& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
  return FunctionElement(a.model(), std::move(out));
}

namespace {

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double diff_sq(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d = x[i] - x[i - 1];
    s += d * d;
  }
  return s;
}

double norm_V_span(std::span<const double> x, const ModelDescriptor& m) {
  if (m.kind() == ModelKind::Vector) return std::sqrt(sum_sq(x));
  return std::sqrt(m.h_mesh() * sum_sq(x));
}

double norm_X_span(std::span<const double> x, const ModelDescriptor& m) {
  if (m.kind() == ModelKind::Vector) return std::sqrt(sum_sq(x));
  const double h = m.h_mesh();
  return std::sqrt(h * sum_sq(x) + diff_sq(x) / h);
}

}  // namespace

double norm_V(const FunctionElement& u) { return norm_V_span(u.values(), u.model()); }
double norm_X(const FunctionElement& u) { return norm_X_span(u.values(), u.model()); }

double dist_V(const FunctionElement& a, const FunctionElement& b) { return norm_V(a - b); }
double dist_X(const FunctionElement& a, const FunctionElement& b) { return norm_X(a - b); }

double embedding_constant(const ModelDescriptor&) { return 1.0; }

double theta_lipschitz(const ModelDescriptor&) { return 1.0; }

FunctionElement theta(const FunctionElement& u) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::fabs(u[i]);
  return FunctionElement(u.model(), std::move(out));
}

double dist_V_to_cone(const FunctionElement& u) {
  std::vector<double> neg(u.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = u[i] < 0.0 ? u[i] : 0.0;
  return norm_V_span(neg, u.model());
}

std::vector<double> apply_gram(std::span<const double> x, const ModelDescriptor& model) {
  std::vector<double> out(x.begin(), x.end());
  if (model.kind() == ModelKind::Vector) return out;
  const double h = model.h_mesh();
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double lap = 0.0;
    if (i > 0) lap += x[i] - x[i - 1];
    if (i + 1 < n) lap += x[i] - x[i + 1];
    out[i] = h * x[i] + lap / h;
  }
  return out;
}

double inner_X(std::span<const double> a, std::span<const double> b, const ModelDescriptor& model) {
  const std::vector<double> Ab = apply_gram(b, model);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Ab[i];
  return s;
}

std::vector<double> riesz_representative(std::span<const double> d, const ModelDescriptor& model) {
  if (model.kind() == ModelKind::Vector) return {d.begin(), d.end()};
  // Thomas algorithm on A = h I + L/h, L the path-graph Laplacian.
  const double h = model.h_mesh();
  const std::size_t n = d.size();
  const double off = -1.0 / h;
  std::vector<double> c(n), r(n);
  auto diag = [&](std::size_t i) { return h + ((i == 0 || i + 1 == n) ? 1.0 : 2.0) / h; };
  double denom = diag(0);
  c[0] = off / denom;
  r[0] = d[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag(i) - off * c[i - 1];
    c[i] = off / denom;
    r[i] = (d[i] - off * r[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
  return r;
}

double dual_norm_X(std::span<const double> d, const ModelDescriptor& model) {
  const std::vector<double> r = riesz_representative(d, model);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * r[i];
  return std::sqrt(std::max(s, 0.0));
}

}  // namespace symek
