// SPDX-License-Identifier: Apache-2.0
#include "egogen/pipeline/stages.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "egogen/backends/factory.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/core/parallel.hpp"
#include "egogen/filter/curation.hpp"
#include "egogen/filter/filter.hpp"
#include "egogen/generation/finetune.hpp"
#include "egogen/generation/generate.hpp"
#include "egogen/grounding/masks.hpp"
#include "egogen/grounding/objects.hpp"
#include "egogen/grounding/prompts.hpp"
#include "egogen/ingest/manifest.hpp"
#include "egogen/ingest/parsers.hpp"
#include "egogen/ingest/split.hpp"
#include "egogen/ingest/timestamps.hpp"
#include "egogen/ingest/video.hpp"
#include "egogen/metrics/report.hpp"
#include "egogen/pipeline/audit.hpp"

namespace egogen::pipeline {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Terminal outcome of one triplet in one stage.
struct Outcome {
  std::string key;
  std::string status;
  json detail = json::object();
  double wall_time = 0;
  std::optional<ErrorCode> error;
  std::string message;
};

template <typename Body>
Outcome guarded(const std::string& key, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  o.key = key;
  try {
    body(o);
  } catch (const Error& e) {
    o.status = "failed";
    o.error = e.code();
    o.message = e.what();
  } catch (const std::exception& e) {
    o.status = "failed";
    o.error = ErrorCode::Internal;
    o.message = e.what();
  }
  if (o.error) {
    o.detail["error"] = o.message;
    o.detail["code"] = std::string(to_string(*o.error));
  }
  o.wall_time = seconds_since(start);
  return o;
}

void note_failure(StageSummary& s, ErrorCode code, const std::string& message) {
  ++s.failed;
  if (!s.first_error) {
    s.first_error = code;
    s.first_message = message;
  }
}

/// Records outcomes in input order so the log does not depend on scheduling.
void finish(StageSummary& s, AuditLog& audit, const std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes) {
    audit.record(s.stage, o.key, o.status, o.wall_time, o.detail);
    ++s.processed;
    if (o.error) {
      note_failure(s, *o.error, o.message);
    } else {
      ++s.succeeded;
    }
  }
}

fs::path parent_or_dot(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

AuditLog open_audit(const PipelineConfig& config, const fs::path& output_dir) {
  if (!config.audit_log.empty()) return AuditLog(config.audit_log);
  return AuditLog(output_dir / "audit.jsonl");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigInvalid, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_dir(parent_or_dot(path));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path.string());
  out << text;
}

std::string relative_path(const fs::path& target, const fs::path& base_dir) {
  const auto t = fs::absolute(target).lexically_normal();
  const auto b = fs::absolute(base_dir).lexically_normal();
  return t.lexically_relative(b).generic_string();
}

/// Rewrites an entry's frame paths so they resolve from another manifest's directory.
ingest::ManifestEntry rebase(ingest::ManifestEntry entry, const fs::path& from_manifest, const fs::path& to_manifest) {
  const auto to_dir = parent_or_dot(to_manifest);
  auto& fp = entry.triplet.frame_paths;
  for (std::string* p : {&fp.initial, &fp.action, &fp.final}) {
    if (p->empty()) continue;
    *p = relative_path(ingest::resolve_frame_path(from_manifest, *p), to_dir);
  }
  return entry;
}

bool is_kept(const ingest::ManifestEntry& e) {
  const auto it = e.extra.find("kept");
  return it == e.extra.end() || (it->is_boolean() && it->get<bool>());
}

std::vector<ingest::ManifestEntry> kept_entries(const fs::path& manifest) {
  auto all = ingest::read_manifest(manifest);
  std::vector<ingest::ManifestEntry> kept;
  for (auto& e : all) {
    if (is_kept(e)) kept.push_back(std::move(e));
  }
  if (kept.empty()) throw Error(ErrorCode::MissingInput, "manifest " + manifest.string() + " has no usable triplets");
  return kept;
}

Frame load_frame(const fs::path& manifest, const ingest::ActionTriplet& t, FrameKind kind) {
  const auto path = ingest::resolve_frame_path(manifest, t.frame_paths.get(static_cast<std::size_t>(kind)));
  return Frame{path.stem().string(), read_image(path)};
}

grounding::PromptSet prompts_for(const PipelineConfig& config, const fs::path& override_dir) {
  if (!override_dir.empty()) return grounding::PromptSet::load(override_dir);
  if (!config.prompts_dir.empty()) return grounding::PromptSet::load(config.prompts_dir);
  return grounding::PromptSet::builtin();
}

std::optional<ErrorCode> code_in_message(const std::string& message) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::Internal); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    const std::string name(to_string(code));
    if (message.rfind(name + ":", 0) == 0) return code;
  }
  return std::nullopt;
}

std::vector<generation::Target> parse_targets(const std::string& text) {
  if (text == "both") return {generation::Target::Action, generation::Target::Final};
  return {generation::target_from_string(text)};
}

fs::path mask_file_for(generation::Target target) {
  return target == generation::Target::Action ? "action_union.png" : "final_stage.png";
}

}  // namespace

std::string triplet_key(const std::string& video_id, std::size_t index) {
  std::string clean;
  for (char c : video_id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    clean += ok ? c : '_';
  }
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_%04zu", index);
  return clean + suffix;
}

// ---------------------------------------------------------------------------

StageSummary run_curate(const PipelineConfig& config, const CurateArgs& args) {
  StageSummary summary;
  summary.stage = "curate";
  const auto tag = ingest::dataset_tag_from_string(args.dataset);
  const std::string strategy_text = args.strategy.empty() ? config.selection_strategy : args.strategy;
  std::optional<ingest::SelectionStrategy> fixed;
  if (!strategy_text.empty()) fixed = ingest::strategy_from_string(strategy_text);
  if (!fs::exists(args.annotations)) {
    throw Error(ErrorCode::MissingInput, "annotation file " + args.annotations.string() + " not found");
  }
  if (!fs::is_directory(args.videos)) {
    throw Error(ErrorCode::MissingInput, "video directory " + args.videos.string() + " not found");
  }
  const auto parsed = ingest::parse_annotations(args.annotations, tag);
  if (parsed.skipped) summary.notes.push_back(std::to_string(parsed.skipped) + " malformed annotation records skipped");
  for (const auto& r : parsed.skip_reasons) summary.notes.push_back("  " + r);

  const auto out_dir = parent_or_dot(args.out);
  const auto frames_dir = out_dir / "frames";
  ensure_dir(frames_dir);
  AuditLog audit = open_audit(config, out_dir);

  const auto& anns = parsed.annotations;
  std::vector<std::optional<ingest::ManifestEntry>> entries(anns.size());
  std::vector<Outcome> outcomes(anns.size());
  parallel_for(anns.size(), config.workers, [&](std::size_t i) {
    const auto& a = anns[i];
    outcomes[i] = guarded(triplet_key(a.video_id, i), [&](Outcome& o) {
      auto strategy = fixed.value_or(a.dataset == ingest::DatasetTag::Ego4D && a.keyframes
                                         ? ingest::SelectionStrategy::AnnotatedKeyframes
                                         : ingest::SelectionStrategy::PaperDefault);
      auto triplet = ingest::make_triplet(a, strategy, o.key);
      auto video = ingest::open_video(args.videos, a.video_id);
      triplet = ingest::extract_frames(std::move(triplet), *video, frames_dir, out_dir);
      o.status = "curated";
      o.detail = {{"strategy", std::string(ingest::to_string(strategy))},
                  {"timestamps", {triplet.t_initial, triplet.t_action, triplet.t_final}},
                  {"flags", triplet.flags}};
      if (triplet.frame_times) o.detail["frame_times"] = *triplet.frame_times;
      entries[i] = ingest::ManifestEntry{std::move(triplet), json::object()};
    });
  });
  std::vector<ingest::ManifestEntry> written;
  for (auto& e : entries) {
    if (e) written.push_back(std::move(*e));
  }
  ingest::write_manifest(args.out, written);
  summary.outputs.push_back(args.out);
  finish(summary, audit, outcomes);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_filter(const PipelineConfig& config, const FilterArgs& args) {
  StageSummary summary;
  summary.stage = "filter";
  const auto entries = ingest::read_manifest(args.manifest);
  if (entries.empty()) throw Error(ErrorCode::MissingInput, "manifest " + args.manifest.string() + " has no triplets");
  filter::FilterConfig cfg;
  cfg.threshold = args.threshold.value_or(config.detection_threshold);
  cfg.hand_threshold = config.hand_threshold.value_or(cfg.threshold);
  if (cfg.threshold < 0 || cfg.threshold > 1) throw Error(ErrorCode::ConfigInvalid, "threshold must be in [0, 1]");
  auto vlm = backends::make_vlm(config.backend(backends::BackendKind::Vlm));
  auto detector = backends::make_detector(config.backend(backends::BackendKind::Detector));
  const auto prompts = prompts_for(config, {});

  const auto out_dir = parent_or_dot(args.out);
  ensure_dir(out_dir);
  AuditLog audit = open_audit(config, out_dir);

  std::vector<std::optional<ingest::ManifestEntry>> results(entries.size());
  std::vector<Outcome> outcomes(entries.size());
  parallel_for(entries.size(), config.workers, [&](std::size_t i) {
    const auto& entry = entries[i];
    outcomes[i] = guarded(entry.triplet.key, [&](Outcome& o) {
      const auto initial = load_frame(args.manifest, entry.triplet, FrameKind::Initial);
      const auto action = load_frame(args.manifest, entry.triplet, FrameKind::Action);
      const auto decision = filter::filter_triplet(entry.triplet, initial, action, *vlm, *detector, prompts, cfg);
      auto out = rebase(entry, args.manifest, args.out);
      const json fields = filter::decision_fields(decision);
      for (const auto& [k, v] : fields.items()) out.extra[k] = v;
      results[i] = std::move(out);
      o.status = std::string(filter::to_string(decision.verdict));
      o.detail = {{"reasons", decision.reasons}, {"objects", decision.objects}};
      if (decision.verdict == filter::Verdict::Indeterminate) {
        // The decision is still written; the stage reports the backend failure.
        o.detail["error"] = decision.error;
        o.error = code_in_message(decision.error).value_or(ErrorCode::BackendUnavailable);
        o.message = decision.error;
      }
    });
  });
  std::vector<ingest::ManifestEntry> written;
  std::size_t kept = 0;
  for (auto& r : results) {
    if (!r) continue;
    kept += is_kept(*r) ? 1 : 0;
    written.push_back(std::move(*r));
  }
  ingest::write_manifest(args.out, written);
  summary.outputs.push_back(args.out);
  summary.notes.push_back(std::to_string(kept) + " of " + std::to_string(entries.size()) + " triplets kept");
  finish(summary, audit, outcomes);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_score_curation(const PipelineConfig& config, const ScoreCurationArgs& args) {
  StageSummary summary;
  summary.stage = "score-curation";
  const auto automatic = kept_entries(args.automatic);
  const auto manual = filter::read_benchmark(args.manual);
  const auto samples = filter::align_benchmark(args.automatic, automatic, args.manual, manual);
  auto embedder = backends::make_embedder(config.backend(backends::BackendKind::Embedder));
  const auto start = std::chrono::steady_clock::now();
  const auto scores = filter::score_curation(samples, *embedder, config.similarity_threshold);
  const double elapsed = seconds_since(start);

  json out = json::array();
  std::vector<Outcome> outcomes;
  for (const auto& s : scores) {
    out.push_back(filter::to_json(s));
    Outcome o;
    o.key = std::string(to_string(s.frame_kind));
    o.status = "scored";
    o.detail = filter::to_json(s);
    o.wall_time = elapsed;
    outcomes.push_back(std::move(o));
  }
  const fs::path out_dir = args.out.empty() ? parent_or_dot(args.automatic) : parent_or_dot(args.out);
  AuditLog audit = open_audit(config, out_dir);
  if (!args.out.empty()) {
    write_text(args.out, out.dump(2) + "\n");
    summary.outputs.push_back(args.out);
  }
  summary.notes.push_back(out.dump());
  finish(summary, audit, outcomes);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_ground(const PipelineConfig& config, const GroundArgs& args) {
  StageSummary summary;
  summary.stage = "ground";
  const auto entries = kept_entries(args.manifest);
  auto vlm = backends::make_vlm(config.backend(backends::BackendKind::Vlm));
  auto detector = backends::make_detector(config.backend(backends::BackendKind::Detector));
  const auto prompts = prompts_for(config, args.prompts);
  ensure_dir(args.out);
  AuditLog audit = open_audit(config, args.out);

  std::vector<Outcome> outcomes(entries.size());
  parallel_for(entries.size(), config.workers, [&](std::size_t i) {
    const auto& entry = entries[i];
    outcomes[i] = guarded(entry.triplet.key, [&](Outcome& o) {
      const auto frame = load_frame(args.manifest, entry.triplet, FrameKind::Initial);
      const auto& action = entry.triplet.annotation.action_text;
      auto categorized = grounding::categorize_objects(action, frame, *vlm, prompts,
                                                       {config.flags.auto_append_hands});
      auto objects = categorized.objects;
      auto grounded = grounding::ground_masks(objects, frame, *detector, config.detection_threshold);

      json refine = nullptr;
      if (objects.location.size() > 1) {
        std::map<std::string, double> scores;
        for (const auto& m : grounded.masks) {
          if (m.category != grounding::Category::Location) continue;
          auto [it, inserted] = scores.emplace(m.name, m.score);
          if (!inserted) it->second = std::max(it->second, m.score);
        }
        const auto refined =
            grounding::refine_location(objects, frame, *vlm, prompts, &categorized.conversation, scores);
        objects = refined.objects;
        std::erase_if(grounded.masks, [&](const grounding::GroundedMask& m) {
          return m.category == grounding::Category::Location && m.name != objects.location.front();
        });
        refine = {{"kept", objects.location.front()}, {"flagged", refined.flagged}, {"note", refined.note}};
      }

      const auto plan = grounding::build_mask_plan(objects, grounded.masks, frame.image);
      const json extra{{"key", entry.triplet.key},
                       {"warnings", categorized.warnings},
                       {"undetected", grounded.dropped},
                       {"location_refinement", refine}};
      grounding::save_mask_plan(args.out / entry.triplet.key, objects, grounded.masks, plan, extra);
      o.status = "grounded";
      o.detail = {{"masks", grounded.masks.size()},
                  {"undetected", grounded.dropped},
                  {"fallback", plan.fallback_applied},
                  {"relocations", plan.relocations.size()},
                  {"notes", plan.notes},
                  {"warnings", categorized.warnings}};
      if (!refine.is_null()) o.detail["location_refinement"] = refine;
    });
  });
  summary.outputs.push_back(args.out);
  finish(summary, audit, outcomes);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_generate(const PipelineConfig& config, const GenerateArgs& args) {
  StageSummary summary;
  summary.stage = "generate";
  const auto targets = parse_targets(args.target);
  const auto entries = kept_entries(args.manifest);
  const auto& descriptor = config.backend(backends::BackendKind::Inpainter);
  auto inpainter = backends::make_inpainter(descriptor);
  const std::uint64_t seed = args.seed.value_or(config.seed);
  const std::string backend_tag = descriptor.endpoint + (descriptor.model_tag.empty() ? "" : "#" + descriptor.model_tag);
  ensure_dir(args.out);
  AuditLog audit = open_audit(config, args.out);
  generation::GenerateOptions options;
  options.full_frame_fallback = config.flags.full_frame_fallback;

  std::vector<Outcome> outcomes(entries.size());
  parallel_for(entries.size(), config.workers, [&](std::size_t i) {
    const auto& entry = entries[i];
    outcomes[i] = guarded(entry.triplet.key, [&](Outcome& o) {
      const auto frame = load_frame(args.manifest, entry.triplet, FrameKind::Initial);
      const auto stored = grounding::load_mask_plan(args.masks / entry.triplet.key);
      json per_target = json::object();
      for (auto target : targets) {
        generation::GenerationRequest request{frame.image, entry.triplet.annotation.action_text, stored.plan, target,
                                              seed, backend_tag};
        const auto result = generation::generate(request, *inpainter, options);
        const std::string stem = entry.triplet.key + "_" + std::string(generation::to_string(target));
        write_png(args.out / (stem + ".png"), result.frame_out);
        auto sidecar = generation::result_sidecar(request, result);
        sidecar["key"] = entry.triplet.key;
        sidecar["masks_dir"] = relative_path(args.masks / entry.triplet.key, args.out);
        write_text(args.out / (stem + ".json"), sidecar.dump(2) + "\n");
        per_target[std::string(generation::to_string(target))] = {
            {"stages", result.stages_run.size()}, {"flags", result.flags}, {"wall_time", result.wall_time}};
      }
      o.status = "generated";
      o.detail = {{"seed", seed}, {"targets", per_target}};
    });
  });
  summary.outputs.push_back(args.out);
  finish(summary, audit, outcomes);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_evaluate(const PipelineConfig& config, const EvaluateArgs& args) {
  StageSummary summary;
  summary.stage = "evaluate";
  const auto target = generation::target_from_string(args.target);
  const std::string target_name(generation::to_string(target));
  const auto entries = kept_entries(args.gt);

  if (!args.copy_input_baseline) {
    if (!fs::is_directory(args.generated)) {
      throw Error(ErrorCode::MissingInput, "generated directory " + args.generated.string() + " not found");
    }
    std::set<std::string> expected;
    for (const auto& e : entries) expected.insert(e.triplet.key);
    std::set<std::string> found;
    const std::string suffix = "_" + target_name + ".png";
    for (const auto& f : fs::directory_iterator(args.generated)) {
      const auto name = f.path().filename().string();
      if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        found.insert(name.substr(0, name.size() - suffix.size()));
      }
    }
    if (found != expected) {
      std::size_t missing = 0, extra = 0;
      for (const auto& k : expected) missing += found.count(k) ? 0 : 1;
      for (const auto& k : found) extra += expected.count(k) ? 0 : 1;
      throw Error(ErrorCode::AlignmentMismatch,
                  std::to_string(expected.size()) + " ground-truth triplets vs " + std::to_string(found.size()) +
                      " generated " + target_name + " frames (" + std::to_string(missing) + " missing, " +
                      std::to_string(extra) + " unmatched)");
    }
  }

  auto embedder = backends::make_embedder(config.backend(backends::BackendKind::Embedder));
  metrics::MClipOptions mclip;
  mclip.region = config.flags.mclip_crop ? metrics::MaskedRegion::Crop : metrics::MaskedRegion::ZeroOutside;

  const fs::path out_dir = parent_or_dot(args.out.empty() ? args.gt : args.out);
  ensure_dir(out_dir);
  AuditLog audit = open_audit(config, out_dir);

  const auto n = entries.size();
  std::vector<std::optional<metrics::PairScore>> scores(n);
  std::vector<Image> gt_images(n), generated_images(n);
  std::vector<Outcome> outcomes(n);
  parallel_for(n, config.workers, [&](std::size_t i) {
    const auto& entry = entries[i];
    outcomes[i] = guarded(entry.triplet.key, [&](Outcome& o) {
      metrics::PairInput pair;
      pair.key = entry.triplet.key;
      pair.f_in = load_frame(args.gt, entry.triplet, FrameKind::Initial).image;
      pair.ground_truth = load_frame(args.gt, entry.triplet,
                                     target == generation::Target::Action ? FrameKind::Action : FrameKind::Final)
                              .image;
      pair.generated = args.copy_input_baseline
                           ? pair.f_in
                           : read_image(args.generated / (entry.triplet.key + "_" + target_name + ".png"));
      if (args.masks.empty()) {
        pair.mask = Mask::full(pair.f_in.width(), pair.f_in.height());
      } else {
        const auto mask_path = args.masks / entry.triplet.key / mask_file_for(target);
        if (!fs::exists(mask_path)) {
          throw Error(ErrorCode::MissingPlan, "no mask plan for triplet " + entry.triplet.key);
        }
        pair.mask = read_mask_png(mask_path);
      }
      auto s = metrics::score_pair(pair, *embedder, mclip);
      o.status = "scored";
      o.detail = {{"clip", s.clip}, {"m_clip", s.m_clip}, {"d_clip", s.d_clip}, {"ssim", s.ssim}};
      o.detail["psnr"] = std::isinf(s.psnr) ? json("inf") : json(s.psnr);
      gt_images[i] = std::move(pair.ground_truth);
      generated_images[i] = std::move(pair.generated);
      scores[i] = std::move(s);
    });
  });

  std::vector<metrics::PairScore> scored;
  std::vector<Image> gt_set, gen_set;
  for (std::size_t i = 0; i < n; ++i) {
    if (!scores[i]) continue;
    scored.push_back(*scores[i]);
    gt_set.push_back(std::move(gt_images[i]));
    gen_set.push_back(std::move(generated_images[i]));
  }
  finish(summary, audit, outcomes);
  if (scored.empty()) return summary;

  std::optional<metrics::FidResult> fid;
  if (scored.size() >= 2) fid = metrics::fid(gt_set, gen_set, *embedder);
  const std::string method = args.copy_input_baseline ? "copy-input" : config.method;
  const auto report = metrics::report(scored, fid, std::string(ingest::to_string(entries.front().triplet.annotation.dataset)),
                                      target_name, method);
  const auto table = metrics::to_table(report);
  if (!args.out.empty()) {
    write_text(args.out, metrics::to_json(report).dump(2) + "\n");
    summary.outputs.push_back(args.out);
  }
  if (!args.table.empty()) {
    write_text(args.table, table);
    summary.outputs.push_back(args.table);
  }
  summary.notes.push_back(table);
  return summary;
}

// ---------------------------------------------------------------------------

StageSummary run_finetune_prep(const PipelineConfig& config, const FinetunePrepArgs& args) {
  StageSummary summary;
  summary.stage = "finetune-prep";
  const auto target = generation::target_from_string(args.target);
  const auto entries = kept_entries(args.manifest);
  const auto job_dir = parent_or_dot(args.out);
  ensure_dir(job_dir);

  std::vector<ingest::ActionTriplet> triplets;
  std::map<std::string, const ingest::ManifestEntry*> by_key;
  for (const auto& e : entries) {
    auto t = e.triplet;
    // Frame paths in the job resolve from the job file's directory.
    auto fp = rebase(e, args.manifest, args.out).triplet.frame_paths;
    t.frame_paths = fp;
    triplets.push_back(std::move(t));
    by_key[e.triplet.key] = &e;
  }
  const auto split = ingest::split_dataset(triplets, config.split_ratio, config.split_seed);

  std::map<std::string, generation::PlanRef> plans;
  for (const auto& t : split.train) {
    const auto dir = args.masks / t.key;
    if (!fs::exists(dir / "plan.json")) continue;
    const bool relocated = fs::exists(dir / "relocated.png");
    plans[t.key] = {relocated ? relative_path(dir / "relocated.png", job_dir) : t.frame_paths.initial,
                    relative_path(dir / "action_union.png", job_dir), relative_path(dir / "final_stage.png", job_dir)};
  }
  const auto start = std::chrono::steady_clock::now();
  const auto spec = generation::finetune_prepare(split, plans, target,
                                                 std::string(ingest::to_string(entries.front().triplet.annotation.dataset)),
                                                 config.epochs, config.aux_loss_weight);
  json job = generation::to_json(spec);
  json train_keys = json::array(), test_keys = json::array();
  for (const auto& t : split.train) train_keys.push_back(t.key);
  for (const auto& t : split.test) test_keys.push_back(t.key);
  job["split"] = {{"ratio", split.ratio}, {"seed", split.seed}, {"train", train_keys}, {"test", test_keys}};
  write_text(args.out, job.dump(2) + "\n");
  summary.outputs.push_back(args.out);

  if (!args.test_manifest.empty()) {
    std::vector<ingest::ManifestEntry> held_out;
    for (const auto& t : split.test) held_out.push_back(rebase(*by_key.at(t.key), args.manifest, args.test_manifest));
    ingest::write_manifest(args.test_manifest, held_out);
    summary.outputs.push_back(args.test_manifest);
  }

  AuditLog audit = open_audit(config, job_dir);
  const double elapsed = seconds_since(start);
  std::vector<Outcome> outcomes;
  std::set<std::string> train_set;
  for (const auto& t : split.train) train_set.insert(t.key);
  for (const auto& e : entries) {
    Outcome o;
    o.key = e.triplet.key;
    o.status = "prepared";
    o.detail = {{"split", train_set.count(e.triplet.key) ? "train" : "test"}, {"target", args.target}};
    o.wall_time = elapsed;
    outcomes.push_back(std::move(o));
  }
  finish(summary, audit, outcomes);
  return summary;
}

}  // namespace egogen::pipeline
