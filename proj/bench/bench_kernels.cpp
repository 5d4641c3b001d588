// Serial reference vs OpenMP kernels on the sample fan-outs.

#include <chrono>
#include <cstdio>

#include "symek/functional.hpp"
#include "symek/kernels.hpp"
#include "symek/rng.hpp"

namespace {

template <class F>
double time_ms(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  using namespace symek;
  std::printf("threads: %d\n", par::max_threads());
  std::printf("%-34s %12s %12s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

  for (const ModelDescriptor model : {ModelDescriptor::vector(64), ModelDescriptor::grid1d(65, 1.0 / 32)}) {
    const long samples = 4000;
    const double s = time_ms([&] { ref::axiom_samples(model, samples, 1, polarize); });
    const double p = time_ms([&] { par::axiom_samples(model, samples, 1, polarize); });
    std::printf("%-34s %12.2f %12.2f %8.2f\n",
                model.kind() == ModelKind::Vector ? "axiom_samples vector:64" : "axiom_samples grid1d:65", s, p, s / p);
  }

  const auto model = ModelDescriptor::grid1d(129, 1.0 / 64);
  const FunctionalPtr f = make_functional("dirichlet", model);
  {
    const double s = time_ms([&] { ref::monotone_samples(*f, 20000, 2); });
    const double p = time_ms([&] { par::monotone_samples(*f, 20000, 2); });
    std::printf("%-34s %12.2f %12.2f %8.2f\n", "monotone_samples dirichlet:129", s, p, s / p);
  }
  {
    std::vector<FunctionElement> points;
    Engine engine = derive_engine(3, 0);
    for (int i = 0; i < 50000; ++i) points.push_back(random_cone_element(model, engine));
    const double s = time_ms([&] { ref::eval_batch(*f, points); });
    const double p = time_ms([&] { par::eval_batch(*f, points); });
    std::printf("%-34s %12.2f %12.2f %8.2f\n", "eval_batch dirichlet:129 x50000", s, p, s / p);
  }
  return 0;
}
