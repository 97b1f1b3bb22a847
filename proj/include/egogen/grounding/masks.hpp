// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"
#include "egogen/grounding/objects.hpp"

namespace egogen::grounding {

struct GroundedMask {
  std::string name;
  Category category = Category::Functional;
  BBox bbox;
  std::optional<Mask> pixel_mask;  ///< full-frame raster, set only inside bbox
  double score = 0;
};

struct GroundingOutcome {
  std::vector<GroundedMask> masks;
  std::vector<std::string> dropped;  ///< names with no detection at threshold
};

/// Detects every object of the set in one call and keeps detections at or
/// above threshold, tagged with their category. Objects with no surviving
/// detection are reported in `dropped`. PreconditionViolation on an empty set.
GroundingOutcome ground_masks(const RelevantObjectSet& objects, const Frame& frame,
                              backends::DetectionBackend& segmenter, double threshold = 0.3);

struct Relocation {
  std::string name;
  Image image;       ///< frame with the core object's pixels copied to the destination
  int dx = 0;
  int dy = 0;
  Mask source;       ///< the core pixel mask (vacated region)
  Mask destination;  ///< the translated pixel mask
  long moved_pixels = 0;
  bool clamped = false;  ///< translation shortened to keep the object in frame
};

/// Translates the core object's segmented pixels so their centroid lands on the
/// location box centre, clamped to keep them inside the frame. Pixels are
/// copied from `frame`; the source region is left as is for the inpainter.
/// MissingPixelMask without a pixel mask; DegenerateMask when it is empty.
Relocation relocate_core(const Image& frame, const GroundedMask& core, const GroundedMask& location);

struct RelocationRecord {
  std::string name;
  int dx = 0;
  int dy = 0;
  long moved_pixels = 0;
  bool clamped = false;
};

struct InpaintMaskPlan {
  Mask action_stage1;  ///< functional boxes
  Mask action_stage2;  ///< core boxes at original and relocated positions, plus vacated pixels
  Mask final_stage;    ///< same as action_stage2
  std::optional<Image> relocated_frame;
  bool fallback_applied = false;  ///< every raster was empty and is now full-frame
  std::vector<RelocationRecord> relocations;
  std::vector<std::string> notes;
};

/// Assembles the stage rasters. The location object (highest-scoring
/// location mask) is the relocation target for every core object that has a
/// pixel mask; relocated_frame is present iff a location mask exists. When all
/// rasters come out empty they are all set to full-frame.
InpaintMaskPlan build_mask_plan(const RelevantObjectSet& objects, const std::vector<GroundedMask>& masks,
                                const Image& frame);

nlohmann::json sidecar_json(const GroundedMask& mask);

/// Writes one triplet's masks under `dir`:
///   action_stage1.png, action_stage2.png, final_stage.png  (0 keep, 255 inpaint)
///   action_union.png                                        (stage1 | stage2, for training)
///   relocated.png                                           (when present)
///   object_<i>.png + object_<i>.json                        ({name, category, bbox, score})
///   plan.json                                               (objects, flags, relocations, notes)
void save_mask_plan(const std::filesystem::path& dir, const RelevantObjectSet& objects,
                    const std::vector<GroundedMask>& masks, const InpaintMaskPlan& plan,
                    const nlohmann::json& extra = nlohmann::json::object());

struct StoredPlan {
  RelevantObjectSet objects;
  InpaintMaskPlan plan;
  nlohmann::json meta;  ///< plan.json contents
};

/// MissingPlan when the directory or plan.json is absent.
StoredPlan load_mask_plan(const std::filesystem::path& dir);

}  // namespace egogen::grounding
