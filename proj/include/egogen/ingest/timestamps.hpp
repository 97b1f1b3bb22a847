// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egogen/ingest/annotation.hpp"

namespace egogen::ingest {

/// Frame times for one action.
///
/// PaperDefault: start, midpoint and the 90% point of the interval.
/// LegoStyle: 0.25 s before start (clamped at 0) and the 60% point; it has no
/// final-frame rule, so `final` is PaperDefault's and `final_flagged` is set.
/// AnnotatedKeyframes: the dataset's PRE/PNR/POST times (MissingKeyframes if absent).
Timestamps select_timestamps(const ActionAnnotation& annotation, SelectionStrategy strategy);

/// Builds a triplet (timestamps, strategy, flags) without frame paths.
ActionTriplet make_triplet(const ActionAnnotation& annotation, SelectionStrategy strategy, std::string key);

}  // namespace egogen::ingest
