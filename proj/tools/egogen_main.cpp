// SPDX-License-Identifier: Apache-2.0
// Command-line entry point for the pipeline stages.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "egogen/core/error.hpp"
#include "egogen/pipeline/config.hpp"
#include "egogen/pipeline/stages.hpp"

namespace {

using namespace egogen;
using namespace egogen::pipeline;

struct Globals {
  std::string config;
  int workers = 0;
  std::string backend;
  std::string audit;
};

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig config = g.config.empty() ? PipelineConfig{} : load_config(g.config);
  apply_env_overrides(config);
  apply_backend_mode(config, g.backend);
  if (g.workers > 0) config.workers = g.workers;
  if (!g.audit.empty()) config.audit_log = g.audit;
  config.validate();
  return config;
}

int report(const StageSummary& s) {
  for (const auto& n : s.notes) std::cerr << n << (n.empty() || n.back() != '\n' ? "\n" : "");
  std::cerr << s.stage << ": " << s.succeeded << " ok, " << s.failed << " failed";
  for (const auto& o : s.outputs) std::cerr << "\n  wrote " << o.string();
  std::cerr << "\n";
  if (s.first_error) std::cerr << "first failure: " << s.first_message << "\n";
  return s.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Egocentric action-frame generation pipeline"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--workers", g.workers, "worker threads per stage")->check(CLI::PositiveNumber);
  app.add_option("--backend", g.backend, "force every backend to mock or remote")
      ->check(CLI::IsMember({"mock", "remote"}));
  app.add_option("--audit", g.audit, "audit log path (default: audit.jsonl beside the stage output)");

  CurateArgs curate;
  auto* c = app.add_subcommand("curate", "parse annotations and extract frame triplets");
  c->add_option("--dataset", curate.dataset, "ego4d | egtea | ek100 | custom")->required();
  c->add_option("--annotations", curate.annotations)->required();
  c->add_option("--videos", curate.videos)->required();
  c->add_option("--strategy", curate.strategy)->check(CLI::IsMember({"paper", "lego", "keyframes"}));
  c->add_option("--out", curate.out, "output manifest (JSONL)")->required();

  FilterArgs filt;
  std::optional<double> threshold;
  auto* f = app.add_subcommand("filter", "keep triplets with visible hands and objects");
  f->add_option("--manifest", filt.manifest)->required();
  f->add_option("--out", filt.out)->required();
  f->add_option("--threshold", threshold, "detection score cutoff (default 0.3)");

  ScoreCurationArgs sc;
  auto* s = app.add_subcommand("score-curation", "compare selected frames with a manual benchmark");
  s->add_option("--auto", sc.automatic)->required();
  s->add_option("--manual", sc.manual)->required();
  s->add_option("--out", sc.out, "curation report (JSON)");

  GroundArgs ground;
  auto* gr = app.add_subcommand("ground", "categorize objects and build inpainting masks");
  gr->add_option("--manifest", ground.manifest)->required();
  gr->add_option("--out", ground.out)->required();
  gr->add_option("--prompts", ground.prompts, "prompt template directory");

  GenerateArgs gen;
  std::optional<std::uint64_t> seed;
  auto* ge = app.add_subcommand("generate", "inpaint action and/or final frames");
  ge->add_option("--manifest", gen.manifest)->required();
  ge->add_option("--masks", gen.masks)->required();
  ge->add_option("--target", gen.target)->check(CLI::IsMember({"action", "final", "both"}));
  ge->add_option("--seed", seed);
  ge->add_option("--out", gen.out)->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "score generated frames against ground truth");
  e->add_option("--generated", ev.generated);
  e->add_option("--gt", ev.gt, "ground-truth manifest")->required();
  e->add_option("--masks", ev.masks);
  e->add_option("--target", ev.target)->check(CLI::IsMember({"action", "final"}));
  e->add_option("--out", ev.out, "report JSON");
  e->add_option("--table", ev.table, "report text table");
  e->add_flag("--copy-input-baseline", ev.copy_input_baseline, "score the initial frame as the output");

  FinetunePrepArgs ft;
  auto* fp = app.add_subcommand("finetune-prep", "write a training job for one target frame");
  fp->add_option("--manifest", ft.manifest)->required();
  fp->add_option("--masks", ft.masks)->required();
  fp->add_option("--target", ft.target)->check(CLI::IsMember({"action", "final"}));
  fp->add_option("--out", ft.out, "job JSON")->required();
  fp->add_option("--test-manifest", ft.test_manifest, "write held-out triplets here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig config = resolve_config(g);
    if (*c) return report(run_curate(config, curate));
    if (*f) {
      filt.threshold = threshold;
      return report(run_filter(config, filt));
    }
    if (*s) return report(run_score_curation(config, sc));
    if (*gr) return report(run_ground(config, ground));
    if (*ge) {
      gen.seed = seed;
      return report(run_generate(config, gen));
    }
    if (*e) {
      if (ev.generated.empty() && !ev.copy_input_baseline) {
        throw Error(ErrorCode::ConfigInvalid, "--generated is required unless --copy-input-baseline is set");
      }
      return report(run_evaluate(config, ev));
    }
    if (*fp) return report(run_finetune_prep(config, ft));
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 5;
  }
  return 5;
}
