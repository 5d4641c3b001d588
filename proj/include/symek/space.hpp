#pragma once

// Concrete function spaces: a point set X carrying two norms ||.||_X >= ||.||_V,
// the nonnegative cone S and the Lipschitz retraction theta onto S.

#include <span>
#include <vector>

#include "symek/error.hpp"

namespace symek {

enum class ModelKind { Vector, Grid1D };

/// Ambient setting. Grid1D nodes sit at x_i = i*h_mesh for i in [-m, m], n = 2m+1.
class ModelDescriptor {
 public:
  static ModelDescriptor vector(int n);
  static ModelDescriptor grid1d(int n, double h_mesh);

  ModelKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  double h_mesh() const noexcept { return h_mesh_; }
  /// Half-width m of a grid model (0 for vectors).
  int half_width() const noexcept { return kind_ == ModelKind::Grid1D ? (n_ - 1) / 2 : 0; }

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;

 private:
  ModelDescriptor(ModelKind kind, int n, double h) : kind_(kind), n_(n), h_mesh_(h) {}

  ModelKind kind_;
  int n_;
  double h_mesh_;
};

class FunctionElement {
 public:
  FunctionElement(ModelDescriptor model, std::vector<double> values);

  static FunctionElement zeros(const ModelDescriptor& model);

  const ModelDescriptor& model() const noexcept { return model_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool in_cone() const noexcept;

  friend bool operator==(const FunctionElement&, const FunctionElement&) = default;

 private:
  ModelDescriptor model_;
  std::vector<double> values_;
};

// Arithmetic helpers; operands must share a model.
FunctionElement operator-(const FunctionElement& a, const FunctionElement& b);
FunctionElement operator+(const FunctionElement& a, const FunctionElement& b);
FunctionElement operator*(double s, const FunctionElement& a);

void require_same_model(const ModelDescriptor& a, const ModelDescriptor& b);

double norm_V(const FunctionElement& u);
double norm_X(const FunctionElement& u);

/// ||a - b|| without materializing the difference.
double dist_V(const FunctionElement& a, const FunctionElement& b);
double dist_X(const FunctionElement& a, const FunctionElement& b);

/// K with norm_V <= K * norm_X. Equal to 1 for both shipped models.
double embedding_constant(const ModelDescriptor& model);

/// Lipschitz constant of theta in the V-norm.
double theta_lipschitz(const ModelDescriptor& model);

/// Componentwise absolute value: a 1-Lipschitz retraction of X onto S.
FunctionElement theta(const FunctionElement& u);

/// V-distance from u to the cone S (norm of the negative part).
double dist_V_to_cone(const FunctionElement& u);

/// X inner product <a, b>_X = a^T A b, where A is the Gram matrix of norm_X.
double inner_X(std::span<const double> a, std::span<const double> b, const ModelDescriptor& model);

/// Applies the Gram matrix A of norm_X.
std::vector<double> apply_gram(std::span<const double> x, const ModelDescriptor& model);

/// Solves A r = d. Maps a coordinate gradient d to its Riesz representative in X,
/// so that ||r||_X equals the dual X-norm of d.
std::vector<double> riesz_representative(std::span<const double> d, const ModelDescriptor& model);

/// Dual X-norm of a coordinate covector d: sup_w <d, w> / ||w||_X.
double dual_norm_X(std::span<const double> d, const ModelDescriptor& model);

}  // namespace symek
