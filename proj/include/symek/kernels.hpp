#pragma once

// Data-parallel sample loops. `par` runs them under OpenMP; `ref` is the serial
// reference kept for testing. Both produce identical results element by element:
// every draw owns an engine derived from (seed, index) and results are stored by index.

#include <cstdint>
#include <vector>

#include "symek/functional.hpp"
#include "symek/rearrangement.hpp"

namespace symek {

namespace ref {
std::vector<AxiomSample> axiom_samples(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                       const PolarizeFn& fn);
std::vector<MonotoneSample> monotone_samples(const Functional& f, long samples, std::uint64_t seed);
std::vector<double> eval_batch(const Functional& f, const std::vector<FunctionElement>& points);
}  // namespace ref

namespace par {
std::vector<AxiomSample> axiom_samples(const ModelDescriptor& model, long samples, std::uint64_t seed,
                                       const PolarizeFn& fn);
std::vector<MonotoneSample> monotone_samples(const Functional& f, long samples, std::uint64_t seed);
std::vector<double> eval_batch(const Functional& f, const std::vector<FunctionElement>& points);

/// Threads the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();
}  // namespace par

}  // namespace symek
