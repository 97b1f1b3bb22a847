// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "egogen/ingest/annotation.hpp"

namespace egogen::ingest {

struct DatasetSplit {
  std::vector<ActionTriplet> train;
  std::vector<ActionTriplet> test;
  double ratio = 0.8;
  std::uint64_t seed = 0;
};

/// Seeded partition: triplets are ranked by a hash of (seed, key) and the first
/// round(ratio * n) go to train. The result does not depend on input order.
/// Each side keeps the input's relative order. EmptyInput on an empty list;
/// ConfigInvalid unless 0 < ratio < 1.
DatasetSplit split_dataset(const std::vector<ActionTriplet>& triplets, double ratio, std::uint64_t seed);

}  // namespace egogen::ingest
