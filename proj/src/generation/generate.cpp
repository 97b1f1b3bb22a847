// SPDX-License-Identifier: Apache-2.0
#include "egogen/generation/generate.hpp"

#include <chrono>

#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"

namespace egogen::generation {

std::string_view to_string(Target target) { return target == Target::Action ? "action" : "final"; }

Target target_from_string(std::string_view text) {
  if (text == "action") return Target::Action;
  if (text == "final") return Target::Final;
  throw Error(ErrorCode::ConfigInvalid, "unknown generation target '" + std::string(text) + "'");
}

Image inpaint_step(const Image& input, const Mask& mask, const std::string& prompt, std::uint64_t seed,
                   backends::InpaintingBackend& inpainter) {
  if (!mask.matches(input)) throw Error(ErrorCode::DimensionMismatch, "stage mask does not match its input");
  Image edited;
  const auto native = inpainter.native_size();
  if (native && (native->width != input.width() || native->height != input.height())) {
    const Image scaled = resize(input, native->width, native->height);
    const Mask scaled_mask = resize_nearest(mask, native->width, native->height);
    const Image raw = inpainter.inpaint(scaled, scaled_mask, prompt, seed);
    if (raw.width() != native->width || raw.height() != native->height || raw.channels() != input.channels()) {
      throw Error(ErrorCode::DimensionMismatch, "inpainter changed the image shape");
    }
    edited = resize(raw, input.width(), input.height());
  } else {
    edited = inpainter.inpaint(input, mask, prompt, seed);
    if (!edited.same_shape(input)) throw Error(ErrorCode::DimensionMismatch, "inpainter changed the image shape");
  }
  return composite(input, edited, mask);
}

GenerationResult generate(const GenerationRequest& request, backends::InpaintingBackend& inpainter,
                          const GenerateOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Image& f_in = request.frame_in;
  const auto& plan = request.plan;
  for (const Mask* m : {&plan.action_stage1, &plan.action_stage2, &plan.final_stage}) {
    if (!m->matches(f_in)) throw Error(ErrorCode::DimensionMismatch, "mask plan does not match the input frame");
  }
  if (plan.relocated_frame && !plan.relocated_frame->same_shape(f_in)) {
    throw Error(ErrorCode::DimensionMismatch, "relocated frame does not match the input frame");
  }

  GenerationResult result;
  result.seed = request.seed;
  if (plan.fallback_applied) result.flags.emplace_back("PLAN_FULL_FRAME_FALLBACK");

  auto run = [&](const Image& input, const Mask& raster, const char* stage, const char* raster_name,
                 std::uint64_t seed) {
    StageRecord rec{stage, raster_name, seed, raster.count(), false};
    Mask mask = raster;
    if (mask.none()) {
      if (options.full_frame_fallback) {
        mask = Mask::full(f_in.width(), f_in.height());
        rec.full_frame_fallback = true;
        rec.mask_pixels = mask.count();
        result.flags.push_back(std::string("FULL_FRAME_FALLBACK_") + stage);
      } else {
        result.flags.push_back(std::string("EMPTY_MASK_") + stage);
      }
    }
    result.stages_run.push_back(rec);
    return inpaint_step(input, mask, request.action, seed, inpainter);
  };

  const Image& base = plan.relocated_frame ? *plan.relocated_frame : f_in;
  if (request.target == Target::Action) {
    Image intermediate = base;
    if (plan.action_stage1.none()) {
      result.flags.emplace_back("STAGE1_EMPTY_SKIPPED");
    } else {
      intermediate = run(base, plan.action_stage1, "functional", "action_stage1", request.seed);
    }
    result.frame_out = run(intermediate, plan.action_stage2, "core", "action_stage2", request.seed + 1);
  } else {
    result.frame_out = run(base, plan.final_stage, "final", "final_stage", request.seed);
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::json result_sidecar(const GenerationRequest& request, const GenerationResult& result) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : result.stages_run) {
    stages.push_back({{"stage", s.name},
                      {"mask", s.mask},
                      {"seed", s.seed},
                      {"mask_pixels", s.mask_pixels},
                      {"full_frame_fallback", s.full_frame_fallback}});
  }
  return {{"target", to_string(request.target)},
          {"prompt", request.action},
          {"seed", result.seed},
          {"stages", stages},
          {"relocated_input", request.plan.relocated_frame.has_value()},
          {"flags", result.flags},
          {"backend", request.backend_tag}};
}

}  // namespace egogen::generation
