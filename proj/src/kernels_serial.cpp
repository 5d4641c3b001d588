#include "symek/kernels.hpp"

namespace symek::ref {

std::vector<AxiomSample> axiom_samples(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                       const PolarizeFn& fn) {
  std::vector<AxiomSample> out(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = evaluate_axiom_sample(model, seed, i, fn);
  return out;
}

std::vector<MonotoneSample> monotone_samples(const Functional& f, long samples, std::uint64_t seed) {
  std::vector<MonotoneSample> out(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = evaluate_monotone_sample(f, seed, i);
  return out;
}

std::vector<double> eval_batch(const Functional& f, const std::vector<FunctionElement>& points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = f.eval(points[i]);
  return out;
}

}  // namespace symek::ref
