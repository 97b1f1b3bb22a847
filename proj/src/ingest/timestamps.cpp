// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/timestamps.hpp"

#include <algorithm>

#include "egogen/core/error.hpp"

namespace egogen::ingest {

Timestamps select_timestamps(const ActionAnnotation& annotation, SelectionStrategy strategy) {
  annotation.validate();
  const double ts = annotation.t_start;
  const double tf = annotation.t_end;
  const double paper_final = 0.1 * ts + 0.9 * tf;

  switch (strategy) {
    case SelectionStrategy::PaperDefault:
      return {ts, 0.5 * (ts + tf), paper_final, false};
    case SelectionStrategy::LegoStyle:
      return {std::max(0.0, ts - kLeadIn), ts + 0.6 * (tf - ts), paper_final, true};
    case SelectionStrategy::AnnotatedKeyframes: {
      if (!annotation.keyframes) {
        throw Error(ErrorCode::MissingKeyframes,
                    "dataset " + std::string(to_string(annotation.dataset)) + " provides no keyframes for '" +
                        annotation.action_text + "'");
      }
      const auto& k = *annotation.keyframes;
      return {k.pre, k.pnr, k.post, false};
    }
  }
  throw Error(ErrorCode::Internal, "unhandled selection strategy");
}

ActionTriplet make_triplet(const ActionAnnotation& annotation, SelectionStrategy strategy, std::string key) {
  const Timestamps t = select_timestamps(annotation, strategy);
  ActionTriplet triplet;
  triplet.key = std::move(key);
  triplet.annotation = annotation;
  triplet.t_initial = t.initial;
  triplet.t_action = t.action;
  triplet.t_final = t.final;
  triplet.strategy = strategy;
  if (t.final_flagged) triplet.flags.emplace_back("FINAL_FROM_DEFAULT_RULE");
  if (strategy == SelectionStrategy::AnnotatedKeyframes &&
      (t.initial < annotation.t_start - kLeadIn || t.final > annotation.t_end)) {
    triplet.flags.emplace_back("KEYFRAMES_OUTSIDE_INTERVAL");
  }
  triplet.validate();
  return triplet;
}

}  // namespace egogen::ingest
