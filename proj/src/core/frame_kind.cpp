// SPDX-License-Identifier: Apache-2.0
#include "egogen/core/frame_kind.hpp"

#include <string>

#include "egogen/core/error.hpp"

namespace egogen {

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::Initial: return "initial";
    case FrameKind::Action: return "action";
    case FrameKind::Final: return "final";
  }
  return "initial";
}

FrameKind frame_kind_from_string(std::string_view text) {
  if (text == "initial") return FrameKind::Initial;
  if (text == "action") return FrameKind::Action;
  if (text == "final") return FrameKind::Final;
  throw Error(ErrorCode::SchemaMismatch, "unknown frame kind '" + std::string(text) + "'");
}

}  // namespace egogen
