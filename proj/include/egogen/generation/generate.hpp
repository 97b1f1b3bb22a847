// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"
#include "egogen/grounding/masks.hpp"

namespace egogen::generation {

enum class Target { Action, Final };

std::string_view to_string(Target target);
Target target_from_string(std::string_view text);

struct GenerationRequest {
  Image frame_in;
  std::string action;  ///< passed to the inpainter verbatim as the prompt
  grounding::InpaintMaskPlan plan;
  Target target = Target::Action;
  std::uint64_t seed = 0;
  std::string backend_tag;
};

struct StageRecord {
  std::string name;  ///< "functional", "core" or "final"
  std::string mask;  ///< plan raster used
  std::uint64_t seed = 0;
  long mask_pixels = 0;
  bool full_frame_fallback = false;
};

struct GenerationResult {
  Image frame_out;
  std::vector<StageRecord> stages_run;
  double wall_time = 0;  ///< seconds
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
};

struct GenerateOptions {
  /// Replace an empty stage raster with the full frame when that stage runs.
  bool full_frame_fallback = true;
};

/// Masked inpainting for one target frame.
///
/// Action: inpaint the functional raster, then inpaint that result under the
/// core raster (seed, then seed + 1). The first step is skipped, and flagged,
/// when its raster is empty. Final: one step under the final raster.
/// Both start from the relocated frame when the plan has one. Every step
/// re-composites so pixels outside its mask equal the step input exactly,
/// including when the backend works at another resolution.
GenerationResult generate(const GenerationRequest& request, backends::InpaintingBackend& inpainter,
                          const GenerateOptions& options = {});

/// One inpainting step with resolution handling and re-compositing.
Image inpaint_step(const Image& input, const Mask& mask, const std::string& prompt, std::uint64_t seed,
                   backends::InpaintingBackend& inpainter);

/// Sidecar written next to a generated PNG: {target, prompt, seed, stages, masks, flags, backend}.
nlohmann::json result_sidecar(const GenerationRequest& request, const GenerationResult& result);

}  // namespace egogen::generation
