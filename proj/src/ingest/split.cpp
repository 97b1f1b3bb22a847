// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egogen/core/digest.hpp"
#include "egogen/core/error.hpp"

namespace egogen::ingest {

DatasetSplit split_dataset(const std::vector<ActionTriplet>& triplets, double ratio, std::uint64_t seed) {
  if (triplets.empty()) throw Error(ErrorCode::EmptyInput, "cannot split an empty triplet list");
  if (!(ratio > 0 && ratio < 1)) throw Error(ErrorCode::ConfigInvalid, "split ratio must lie in (0, 1)");

  const std::size_t n = triplets.size();
  std::vector<std::uint64_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = mix64(seed ^ fnv1a64(triplets[i].key));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    return triplets[a].key < triplets[b].key;
  });

  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  DatasetSplit split;
  split.ratio = ratio;
  split.seed = seed;
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? split.train : split.test).push_back(triplets[i]);
  return split;
}

}  // namespace egogen::ingest
