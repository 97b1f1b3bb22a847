// SPDX-License-Identifier: Apache-2.0
#include "egogen/grounding/masks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/grounding/replies.hpp"

namespace egogen::grounding {
namespace fs = std::filesystem;

GroundingOutcome ground_masks(const RelevantObjectSet& objects, const Frame& frame,
                              backends::DetectionBackend& segmenter, double threshold) {
  if (objects.empty()) throw Error(ErrorCode::PreconditionViolation, "ground_masks needs a non-empty object set");
  const auto names = objects.all_names();
  const auto detections = segmenter.detect_segment(frame, names);

  GroundingOutcome out;
  for (const auto& name : names) {
    const Category category = *objects.category_of(name);
    bool found = false;
    for (const auto& d : detections) {
      if (normalize_object_name(d.label) != name || d.score < threshold) continue;
      out.masks.push_back({name, category, d.bbox, d.pixel_mask, d.score});
      found = true;
    }
    if (!found) out.dropped.push_back(name);
  }
  return out;
}

Relocation relocate_core(const Image& frame, const GroundedMask& core, const GroundedMask& location) {
  if (!core.pixel_mask) throw Error(ErrorCode::MissingPixelMask, "core object '" + core.name + "' has no pixel mask");
  const Mask& src = *core.pixel_mask;
  if (!src.matches(frame)) throw Error(ErrorCode::DimensionMismatch, "pixel mask does not match frame");
  const auto bounds = src.bounds();
  if (!bounds) throw Error(ErrorCode::DegenerateMask, "core object '" + core.name + "' has an empty pixel mask");
  if (!location.bbox.valid() || !location.bbox.within(frame.width(), frame.height())) {
    throw Error(ErrorCode::PreconditionViolation, "location box for '" + location.name + "' is outside the frame");
  }

  double sx = 0, sy = 0;
  long n = 0;
  for (int y = bounds->y0; y < bounds->y1; ++y) {
    for (int x = bounds->x0; x < bounds->x1; ++x) {
      if (!src.get(x, y)) continue;
      sx += x + 0.5;
      sy += y + 0.5;
      ++n;
    }
  }
  const double cx = sx / static_cast<double>(n), cy = sy / static_cast<double>(n);
  const int want_dx = static_cast<int>(std::lround(location.bbox.center_x() - cx));
  const int want_dy = static_cast<int>(std::lround(location.bbox.center_y() - cy));

  Relocation r;
  r.name = core.name;
  r.dx = std::clamp(want_dx, -bounds->x0, frame.width() - bounds->x1);
  r.dy = std::clamp(want_dy, -bounds->y0, frame.height() - bounds->y1);
  r.clamped = r.dx != want_dx || r.dy != want_dy;
  r.source = src;
  r.destination = Mask(frame.width(), frame.height());
  r.image = frame;
  for (int y = bounds->y0; y < bounds->y1; ++y) {
    for (int x = bounds->x0; x < bounds->x1; ++x) {
      if (!src.get(x, y)) continue;
      const int tx = x + r.dx, ty = y + r.dy;
      for (int c = 0; c < frame.channels(); ++c) r.image.at(tx, ty, c) = frame.at(x, y, c);
      r.destination.set(tx, ty);
    }
  }
  r.moved_pixels = r.destination.count();
  return r;
}

InpaintMaskPlan build_mask_plan(const RelevantObjectSet& objects, const std::vector<GroundedMask>& masks,
                                const Image& frame) {
  const int w = frame.width(), h = frame.height();
  InpaintMaskPlan plan;
  plan.action_stage1 = Mask(w, h);
  plan.action_stage2 = Mask(w, h);

  const GroundedMask* location = nullptr;
  for (const auto& m : masks) {
    if (m.category == Category::Location && (!location || m.score > location->score)) location = &m;
  }

  for (const auto& m : masks) {
    if (!objects.category_of(m.name)) plan.notes.push_back("mask '" + m.name + "' is not in the object set");
    const PixelRect box = m.bbox.to_pixels(w, h);
    if (m.category == Category::Functional) plan.action_stage1.fill(box);
    if (m.category == Category::Core) plan.action_stage2.fill(box);
  }

  if (location) {
    Image relocated = frame;
    Mask occupied(w, h);
    for (const auto& m : masks) {
      if (m.category != Category::Core) continue;
      try {
        Relocation r = relocate_core(frame, m, *location);
        if ((occupied & r.destination).count() > 0) {
          plan.notes.push_back("relocated '" + m.name + "' overlaps another relocated core object");
        }
        occupied |= r.destination;
        relocated = composite(relocated, r.image, r.destination);
        plan.action_stage2.fill(m.bbox.translated(r.dx, r.dy).to_pixels(w, h));
        plan.action_stage2 |= r.source;
        plan.relocations.push_back({m.name, r.dx, r.dy, r.moved_pixels, r.clamped});
        if (r.clamped) plan.notes.push_back("relocation of '" + m.name + "' clamped to the frame");
      } catch (const Error& e) {
        plan.notes.push_back("no relocation for '" + m.name + "': " + e.what());
      }
    }
    plan.relocated_frame = std::move(relocated);
  }

  plan.final_stage = plan.action_stage2;
  if (plan.action_stage1.none() && plan.action_stage2.none()) {
    plan.action_stage1 = Mask::full(w, h);
    plan.action_stage2 = Mask::full(w, h);
    plan.final_stage = Mask::full(w, h);
    plan.fallback_applied = true;
    plan.notes.emplace_back("no masks: all stages use the full frame");
  }
  return plan;
}

nlohmann::json sidecar_json(const GroundedMask& m) {
  return {{"name", m.name},
          {"category", to_string(m.category)},
          {"bbox", {m.bbox.x_min, m.bbox.y_min, m.bbox.x_max, m.bbox.y_max}},
          {"score", m.score},
          {"has_pixel_mask", m.pixel_mask.has_value()}};
}

namespace {

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Internal, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void save_mask_plan(const fs::path& dir, const RelevantObjectSet& objects, const std::vector<GroundedMask>& masks,
                    const InpaintMaskPlan& plan, const nlohmann::json& extra) {
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().rfind("object_", 0) == 0) fs::remove(entry.path());
  }
  write_mask_png(dir / "action_stage1.png", plan.action_stage1);
  write_mask_png(dir / "action_stage2.png", plan.action_stage2);
  write_mask_png(dir / "final_stage.png", plan.final_stage);
  Mask action_union = plan.action_stage1;
  action_union |= plan.action_stage2;
  write_mask_png(dir / "action_union.png", action_union);
  if (plan.relocated_frame) {
    write_png(dir / "relocated.png", *plan.relocated_frame);
  } else {
    fs::remove(dir / "relocated.png");
  }
  const int w = plan.action_stage1.width(), h = plan.action_stage1.height();
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::string stem = "object_" + std::to_string(i);
    write_mask_png(dir / (stem + ".png"), rect_mask(w, h, masks[i].bbox.to_pixels(w, h)));
    write_json(dir / (stem + ".json"), sidecar_json(masks[i]));
  }

  nlohmann::json meta = extra;
  meta["objects"] = {{"action", objects.action},
                     {"core", objects.core},
                     {"location", objects.location},
                     {"functional", objects.functional}};
  meta["fallback_applied"] = plan.fallback_applied;
  meta["relocated"] = plan.relocated_frame.has_value();
  nlohmann::json relocs = nlohmann::json::array();
  for (const auto& r : plan.relocations) {
    relocs.push_back({{"name", r.name}, {"dx", r.dx}, {"dy", r.dy}, {"moved_pixels", r.moved_pixels},
                      {"clamped", r.clamped}});
  }
  meta["relocations"] = relocs;
  meta["notes"] = plan.notes;
  meta["n_masks"] = masks.size();
  write_json(dir / "plan.json", meta);
}

StoredPlan load_mask_plan(const fs::path& dir) {
  std::ifstream in(dir / "plan.json");
  if (!in) throw Error(ErrorCode::MissingPlan, "no mask plan in " + dir.string());
  StoredPlan out;
  try {
    out.meta = nlohmann::json::parse(in);
    const auto& o = out.meta.at("objects");
    out.objects.action = o.at("action").get<std::string>();
    out.objects.core = o.at("core").get<std::vector<std::string>>();
    out.objects.location = o.at("location").get<std::vector<std::string>>();
    out.objects.functional = o.at("functional").get<std::vector<std::string>>();
    out.plan.fallback_applied = out.meta.value("fallback_applied", false);
    for (const auto& r : out.meta.value("relocations", nlohmann::json::array())) {
      out.plan.relocations.push_back({r.at("name").get<std::string>(), r.at("dx").get<int>(), r.at("dy").get<int>(),
                                      r.at("moved_pixels").get<long>(), r.at("clamped").get<bool>()});
    }
    out.plan.notes = out.meta.value("notes", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, (dir / "plan.json").string() + ": " + e.what());
  }
  out.plan.action_stage1 = read_mask_png(dir / "action_stage1.png");
  out.plan.action_stage2 = read_mask_png(dir / "action_stage2.png");
  out.plan.final_stage = read_mask_png(dir / "final_stage.png");
  if (out.meta.value("relocated", false)) out.plan.relocated_frame = read_image(dir / "relocated.png");
  return out;
}

}  // namespace egogen::grounding
