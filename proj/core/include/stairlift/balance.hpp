#pragma once

#include <cstdint>

#include "stairlift/dataset.hpp"

namespace stairlift {

// Random oversampling with the "not majority" strategy: every class present
// is topped up to the majority count by drawing uniformly, with replacement,
// from its own members. Originals keep their order and come first; the
// duplicates follow grouped by class ordinal.
Dataset random_oversample(const Dataset& data, std::uint64_t seed);

}  // namespace stairlift
