#include "symek/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symek::par {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<AxiomSample> axiom_samples(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                       const PolarizeFn& fn) {
  std::vector<AxiomSample> out(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = evaluate_axiom_sample(model, seed, i, fn);
  return out;
}

std::vector<MonotoneSample> monotone_samples(const Functional& f, long samples, std::uint64_t seed) {
  std::vector<MonotoneSample> out(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = evaluate_monotone_sample(f, seed, i);
  return out;
}

std::vector<double> eval_batch(const Functional& f, const std::vector<FunctionElement>& points) {
  std::vector<double> out(points.size());
  const long count = static_cast<long>(points.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f.eval(points[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace symek::par
