#pragma once

#include <cstdint>
#include <random>

#include "symek/space.hpp"

namespace symek {

using Engine = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `seed`. Streams do not
/// depend on thread count or evaluation order.
Engine derive_engine(std::uint64_t seed, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform cone element. About a quarter of the draws are quantized to a few levels
/// so that ties are exercised.
FunctionElement random_cone_element(const ModelDescriptor& model, Engine& engine, double scale = 1.0);

/// Element with entries uniform in [-scale, scale].
FunctionElement random_element(const ModelDescriptor& model, Engine& engine, double scale = 1.0);

/// Unit standard-normal direction in coordinate space, normalized in the X-norm.
FunctionElement random_direction_X(const ModelDescriptor& model, Engine& engine);

}  // namespace symek
