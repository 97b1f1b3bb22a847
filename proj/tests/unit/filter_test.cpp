// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>
#include <random>

#include "egogen/backends/mock.hpp"
#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/filter/curation.hpp"
#include "egogen/filter/filter.hpp"
#include "egogen/grounding/prompts.hpp"
#include "egogen/ingest/timestamps.hpp"
#include "support.hpp"

using namespace egogen;
using namespace egogen::filter;
using egogen::backends::ChatRequest;
using nlohmann::json;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

class FixedVlm final : public backends::VisionLanguageBackend {
 public:
  explicit FixedVlm(std::string reply) : reply_(std::move(reply)) {}
  std::string chat(const ChatRequest&) override { return reply_; }

 private:
  std::string reply_;
};

// Detections per frame id; records every frame it is asked about.
class TableDetector final : public backends::DetectionBackend {
 public:
  std::map<std::string, std::vector<DetectionResult>> table;
  std::vector<std::string> queried;
  bool fail = false;

  std::vector<DetectionResult> detect_segment(const Frame& frame, const std::vector<std::string>& labels) override {
    if (labels.empty()) throw Error(ErrorCode::PreconditionViolation, "labels");
    if (fail) throw Error(ErrorCode::BackendUnavailable, "down");
    queried.push_back(frame.id);
    std::vector<DetectionResult> out;
    for (const auto& d : table[frame.id]) {
      if (std::find(labels.begin(), labels.end(), d.label) != labels.end()) out.push_back(d);
    }
    return out;
  }
};

// Embeddings chosen per frame id.
class TableEmbedder final : public backends::EmbeddingBackend {
 public:
  std::map<std::string, backends::Vector> table;
  backends::Vector embed(const Frame& frame) override { return backends::normalized(table.at(frame.id)); }
  backends::Vector features(const Frame& frame) override { return table.at(frame.id); }
};

DetectionResult det(std::string label, double score) { return {std::move(label), score, {1, 1, 9, 9}}; }

Frame frame(std::string id) { return Frame{std::move(id), Image(16, 16, 3)}; }

ingest::ActionTriplet triplet() {
  ingest::ActionAnnotation a;
  a.video_id = "v";
  a.action_text = "cut tomato";
  a.t_start = 1;
  a.t_end = 2;
  return ingest::make_triplet(a, ingest::SelectionStrategy::PaperDefault, "v_0000");
}

const grounding::PromptSet& prompts() {
  static const auto p = grounding::PromptSet::builtin();
  return p;
}

}  // namespace

TEST(Identify, ListPassThroughAndProse) {
  FixedVlm list("carrot, knife, cutting board");
  EXPECT_EQ(identify_objects("cut carrot", frame("f"), list, prompts()),
            (std::vector<std::string>{"carrot", "knife", "cutting board"}));
  FixedVlm dup("Tomato\n- tomato\n- Knife");
  EXPECT_EQ(identify_objects("cut tomato", frame("f"), dup, prompts()),
            (std::vector<std::string>{"tomato", "knife"}));
  FixedVlm prose("I think the person in this picture is probably preparing some kind of meal.");
  EXPECT_EQ(code_of([&] { identify_objects("cut tomato", frame("f"), prose, prompts()); }),
            ErrorCode::MalformedBackendReply);
  FixedVlm none("none");
  EXPECT_TRUE(identify_objects("cut tomato", frame("f"), none, prompts()).empty());
}

TEST(Detect, ThresholdIsInclusiveAndConfigurable) {
  TableDetector d;
  d.table["f"] = {det("knife", 0.29), det("knife", 0.31)};
  const auto kept = detect(frame("f"), {"knife"}, d);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept[0].score, 0.31);
  d.table["g"] = {det("a", 0.1), det("a", 0.9), det("a", 0.3), det("a", 0.25), det("a", 0.5)};
  EXPECT_EQ(detect(frame("g"), {"a"}, d).size(), 3u);
  EXPECT_EQ(detect(frame("g"), {"a"}, d, 0.6).size(), 1u);
  EXPECT_EQ(code_of([&] { detect(frame("f"), {}, d); }), ErrorCode::PreconditionViolation);
}

TEST(FilterTriplet, DocumentedCases) {
  FixedVlm vlm("tomato, knife");
  struct Case {
    std::vector<DetectionResult> initial, action;
    bool kept;
    std::vector<std::string> reasons;
  };
  const std::vector<Case> cases{
      {{det("hand", 0.6)}, {det("hand", 0.5)}, true, {}},
      {{det("tomato", 0.8)}, {}, false, {kNoHandsInAction}},
      {{}, {det("hand", 0.5)}, false, {kNoObjectsOrHandsInInitial}},
      {{}, {}, false, {kNoObjectsOrHandsInInitial, kNoHandsInAction}},
      {{det("spoon", 0.9)}, {det("hand", 0.9)}, false, {kNoObjectsOrHandsInInitial}},
  };
  for (const auto& c : cases) {
    TableDetector d;
    d.table["in"] = c.initial;
    d.table["act"] = c.action;
    const auto decision = filter_triplet(triplet(), frame("in"), frame("act"), vlm, d, prompts());
    EXPECT_EQ(decision.kept, c.kept);
    EXPECT_EQ(decision.reasons, c.reasons);
    EXPECT_EQ(decision.kept, decision.reasons.empty());
    EXPECT_EQ(decision.verdict, c.kept ? Verdict::Kept : Verdict::Rejected);
    for (const auto& id : d.queried) EXPECT_NE(id, "fin");
  }
}

TEST(FilterTriplet, BackendFailureIsIndeterminate) {
  FixedVlm vlm("tomato");
  TableDetector d;
  d.fail = true;
  const auto decision = filter_triplet(triplet(), frame("in"), frame("act"), vlm, d, prompts());
  EXPECT_EQ(decision.verdict, Verdict::Indeterminate);
  EXPECT_FALSE(decision.kept);
  EXPECT_EQ(decision.reasons, std::vector<std::string>{kIndeterminate});
  EXPECT_NE(decision.error.find("BackendUnavailable"), std::string::npos);
  EXPECT_EQ(decision_fields(decision).at("verdict"), "indeterminate");
}

TEST(FilterTriplet, MatchesBruteForceRuleAndIsMonotone) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> score(0, 1);
  const std::vector<std::string> labels{"hand", "tomato", "knife", "spoon"};
  FixedVlm vlm("tomato, knife");
  for (int trial = 0; trial < 300; ++trial) {
    TableDetector d;
    for (const char* id : {"in", "act"}) {
      const int n = static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) d.table[id].push_back(det(labels[rng() % labels.size()], score(rng)));
    }
    int previous = 2;
    for (int step = 0; step <= 20; ++step) {
      FilterConfig cfg;
      cfg.threshold = cfg.hand_threshold = step / 20.0;
      const auto decision = filter_triplet(triplet(), frame("in"), frame("act"), vlm, d, prompts(), cfg);
      auto has = [&](const char* id, bool hand) {
        for (const auto& x : d.table[id]) {
          const bool is_hand = x.label == "hand";
          if (x.score >= cfg.threshold && (hand ? is_hand : (!is_hand && x.label != "spoon"))) return true;
        }
        return false;
      };
      const bool expected = (has("in", true) || has("in", false)) && has("act", true);
      EXPECT_EQ(decision.kept, expected);
      EXPECT_LE(static_cast<int>(decision.kept), previous);
      previous = decision.kept;
    }
  }
}

TEST(DecisionJson, DetectionsRoundTrip) {
  DetectionResult d = det("knife", 0.42);
  d.frame_ref = FrameKind::Action;
  d.clamped = true;
  const auto back = detection_from_json(detection_to_json(d));
  EXPECT_EQ(back.label, "knife");
  EXPECT_DOUBLE_EQ(back.score, 0.42);
  EXPECT_EQ(back.bbox, d.bbox);
  EXPECT_EQ(back.frame_ref, FrameKind::Action);
}

TEST(Curation, IdenticalAndOrthogonal) {
  TableEmbedder emb;
  emb.table = {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {2, 0}}};
  CurationSample same{{frame("a"), frame("b"), frame("c")}, {frame("a"), frame("b"), frame("c")}};
  const auto s = score_curation({same, same}, emb);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& k : s) {
    EXPECT_NEAR(k.mean_clip, 100, 1e-9);
    EXPECT_EQ(k.quantile_ge_80, 1.0);
    EXPECT_EQ(k.n, 2u);
  }
  CurationSample ortho{{frame("a"), frame("a"), frame("a")}, {frame("b"), frame("b"), frame("b")}};
  for (const auto& k : score_curation({ortho}, emb)) {
    EXPECT_NEAR(k.mean_clip, 0, 1e-12);
    EXPECT_EQ(k.quantile_ge_80, 0.0);
  }
  EXPECT_EQ(code_of([&] { score_curation({}, emb); }), ErrorCode::EmptyInput);
}

TEST(Curation, SelfScoreWithMockEmbedder) {
  std::mt19937_64 rng(22);
  backends::ProjectionEmbedder emb;
  std::vector<CurationSample> samples;
  for (int i = 0; i < 10; ++i) {
    CurationSample s;
    for (int k = 0; k < 3; ++k) {
      s.automatic[k] = Frame{"x", egogen::testing::random_image(24, 24, 3, rng)};
      s.manual[k] = s.automatic[k];
    }
    samples.push_back(s);
  }
  for (const auto& k : score_curation(samples, emb)) {
    EXPECT_NEAR(k.mean_clip, 100, 1e-9);
    EXPECT_EQ(k.quantile_ge_80, 1.0);
    EXPECT_LE(k.mean_clip, 100 + 1e-9);
  }
}

TEST(Curation, AlignmentByKey) {
  EXPECT_EQ(alignment_key("v", "cut tomato", 1.0), alignment_key("v", "cut tomato", 1.0004));
  EXPECT_NE(alignment_key("v", "cut tomato", 1.0), alignment_key("v", "cut tomato", 1.002));
  egogen::testing::TempDir dir;
  ingest::ManifestEntry e{triplet()};
  e.triplet.frame_paths = {"i.png", "a.png", "f.png"};
  for (const char* f : {"i.png", "a.png", "f.png"}) write_png(dir / f, Image(4, 4, 3));
  BenchmarkRecord other{"w", "cut tomato", 1.0, {"i.png", "a.png", "f.png"}};
  EXPECT_EQ(code_of([&] { align_benchmark(dir / "m.jsonl", {e}, dir / "b.jsonl", {other}); }),
            ErrorCode::AlignmentMismatch);
  BenchmarkRecord match{"v", "cut tomato", 1.0, {"i.png", "a.png", "f.png"}};
  EXPECT_EQ(align_benchmark(dir / "m.jsonl", {e}, dir / "b.jsonl", {other, match}).size(), 1u);
}
