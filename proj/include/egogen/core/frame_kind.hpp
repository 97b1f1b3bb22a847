// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string_view>

namespace egogen {

enum class FrameKind { Initial, Action, Final };

inline constexpr std::array<FrameKind, 3> kAllFrameKinds = {FrameKind::Initial, FrameKind::Action,
                                                            FrameKind::Final};

std::string_view to_string(FrameKind kind);
FrameKind frame_kind_from_string(std::string_view text);

}  // namespace egogen
