#include "symek/rng.hpp"

#include <cmath>
#include <vector>

namespace symek {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Engine derive_engine(std::uint64_t seed, std::uint64_t index) {
  return Engine(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

FunctionElement random_cone_element(const ModelDescriptor& model, Engine& engine, double scale) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool quantized = unit(engine) < 0.25;
  std::vector<double> v(model.n());
  for (double& x : v) {
    x = unit(engine);
    if (quantized) x = std::floor(x * 4.0) / 4.0;
    x *= scale;
  }
  return FunctionElement(model, std::move(v));
}

FunctionElement random_element(const ModelDescriptor& model, Engine& engine, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(model.n());
  for (double& x : v) x = dist(engine);
  return FunctionElement(model, std::move(v));
}

FunctionElement random_direction_X(const ModelDescriptor& model, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(model.n());
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (double& x : v) x = normal(engine);
    nrm = norm_X(FunctionElement(model, v));
  }
  for (double& x : v) x /= nrm;
  return FunctionElement(model, std::move(v));
}

}  // namespace symek
