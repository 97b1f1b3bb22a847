// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>
#include <opencv2/videoio.hpp>

#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/ingest/manifest.hpp"
#include "egogen/ingest/parsers.hpp"
#include "egogen/ingest/split.hpp"
#include "egogen/ingest/timestamps.hpp"
#include "egogen/ingest/video.hpp"
#include "support.hpp"

using namespace egogen;
using namespace egogen::ingest;
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

ActionAnnotation annotation(double ts, double tf, std::string text = "cut tomato") {
  ActionAnnotation a;
  a.video_id = "v";
  a.action_text = std::move(text);
  a.t_start = ts;
  a.t_end = tf;
  return a;
}

std::vector<ActionTriplet> triplets(std::size_t n) {
  std::vector<ActionTriplet> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make_triplet(annotation(1, 2), SelectionStrategy::PaperDefault, "t" + std::to_string(i)));
  }
  return out;
}

// Frames whose pixels encode their own index.
class CountingVideo final : public VideoSource {
 public:
  CountingVideo(double fps, std::int64_t count) : fps_(fps), count_(count) {}
  double fps() const override { return fps_; }
  std::int64_t frame_count() const override { return count_; }
  Image decode(std::int64_t index) override {
    if (index < 0 || index >= count_) throw Error(ErrorCode::TimestampOutOfRange, "index");
    return Image(4, 4, 3, static_cast<std::uint8_t>(index % 256));
  }

 private:
  double fps_;
  std::int64_t count_;
};

}  // namespace

TEST(Timestamps, PaperDefaultExamples) {
  const auto a = select_timestamps(annotation(10, 20), SelectionStrategy::PaperDefault);
  EXPECT_DOUBLE_EQ(a.initial, 10);
  EXPECT_DOUBLE_EQ(a.action, 15);
  EXPECT_DOUBLE_EQ(a.final, 19);
  EXPECT_FALSE(a.final_flagged);
  const auto b = select_timestamps(annotation(3.2, 7.8), SelectionStrategy::PaperDefault);
  EXPECT_NEAR(b.initial, 3.2, 1e-12);
  EXPECT_NEAR(b.action, 5.5, 1e-12);
  EXPECT_NEAR(b.final, 0.1 * 3.2 + 0.9 * 7.8, 1e-12);
  EXPECT_NEAR(b.final, 7.34, 1e-12);
}

TEST(Timestamps, LegoClampsAndFlagsFinal) {
  const auto t = select_timestamps(annotation(0, 0.1), SelectionStrategy::LegoStyle);
  EXPECT_EQ(t.initial, 0.0);
  EXPECT_NEAR(t.action, 0.06, 1e-12);
  EXPECT_NEAR(t.final, 0.09, 1e-12);
  EXPECT_TRUE(t.final_flagged);
  const auto u = select_timestamps(annotation(10, 20), SelectionStrategy::LegoStyle);
  EXPECT_DOUBLE_EQ(u.initial, 9.75);
  EXPECT_DOUBLE_EQ(u.action, 16);
  const auto trip = make_triplet(annotation(10, 20), SelectionStrategy::LegoStyle, "k");
  EXPECT_EQ(trip.flags, std::vector<std::string>{"FINAL_FROM_DEFAULT_RULE"});
}

TEST(Timestamps, KeyframesPassThroughOrFail) {
  auto a = annotation(10, 20);
  EXPECT_EQ(code_of([&] { select_timestamps(a, SelectionStrategy::AnnotatedKeyframes); }),
            ErrorCode::MissingKeyframes);
  a.keyframes = Keyframes{11, 14, 18};
  const auto t = select_timestamps(a, SelectionStrategy::AnnotatedKeyframes);
  EXPECT_EQ(t.initial, 11);
  EXPECT_EQ(t.action, 14);
  EXPECT_EQ(t.final, 18);
}

TEST(Timestamps, NegativeDurationRejected) {
  EXPECT_EQ(code_of([&] { select_timestamps(annotation(5, 5), SelectionStrategy::PaperDefault); }),
            ErrorCode::NegativeDuration);
  EXPECT_EQ(code_of([&] { select_timestamps(annotation(5, 4), SelectionStrategy::LegoStyle); }),
            ErrorCode::NegativeDuration);
}

TEST(Timestamps, PaperDefaultOffsetsProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> start(0, 3600), len(0.01, 120);
  for (int i = 0; i < 2000; ++i) {
    const double ts = start(rng), d = len(rng);
    const auto a = annotation(ts, ts + d);
    const auto t = select_timestamps(a, SelectionStrategy::PaperDefault);
    const double span = a.t_end - a.t_start;
    EXPECT_NEAR(t.action - t.initial, span / 2, 1e-9);
    EXPECT_NEAR(t.final - t.initial, 0.9 * span, 1e-9);
    EXPECT_LE(t.initial, t.action);
    EXPECT_LE(t.action, t.final);
    const auto again = select_timestamps(a, SelectionStrategy::PaperDefault);
    EXPECT_EQ(t.final, again.final);
    for (auto s : {SelectionStrategy::PaperDefault, SelectionStrategy::LegoStyle}) {
      EXPECT_NO_THROW(make_triplet(a, s, "k").validate());
    }
  }
}

TEST(Video, NearestFrameMatchesBruteForce) {
  const double fps = 30;
  const std::int64_t count = 900;
  const auto idx = nearest_frame_index(15.01, fps, count);
  EXPECT_TRUE(idx == 450 || idx == 451);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(0, count / fps);
  for (int i = 0; i < 3000; ++i) {
    const double q = t(rng);
    std::int64_t best = 0;
    for (std::int64_t k = 1; k < count; ++k) {
      if (std::abs(k / fps - q) < std::abs(best / fps - q)) best = k;
    }
    EXPECT_EQ(nearest_frame_index(q, fps, count), best) << q;
  }
  EXPECT_EQ(nearest_frame_index(15.01, fps, count), 450);
}

TEST(Video, OutOfRangeTimestamps) {
  EXPECT_EQ(code_of([] { nearest_frame_index(-0.1, 30, 300); }), ErrorCode::TimestampOutOfRange);
  EXPECT_EQ(code_of([] { nearest_frame_index(10.5, 30, 300); }), ErrorCode::TimestampOutOfRange);
  EXPECT_EQ(nearest_frame_index(10.0, 30, 300), 299);
}

TEST(Video, ExtractWritesThreeFramesAndRecordsTimes) {
  egogen::testing::TempDir dir;
  CountingVideo video(10, 100);
  auto trip = make_triplet(annotation(1.02, 5.0), SelectionStrategy::PaperDefault, "v_0000");
  const auto out = extract_frames(trip, video, dir / "frames", dir.path());
  ASSERT_TRUE(out.frame_times);
  EXPECT_NEAR((*out.frame_times)[0], 1.0, 1e-12);
  EXPECT_NEAR((*out.frame_times)[1], 3.0, 1e-12);
  EXPECT_NEAR((*out.frame_times)[2], 4.6, 1e-12);
  EXPECT_EQ(out.frame_paths.initial, "frames/v_0000_initial.png");
  EXPECT_EQ(read_image(dir.path() / out.frame_paths.action).at(0, 0), 30);
  EXPECT_EQ(read_image(dir.path() / out.frame_paths.final).at(0, 0), 46);
}

TEST(Video, ExtractBeyondEndWritesNothing) {
  egogen::testing::TempDir dir;
  CountingVideo video(10, 40);
  auto trip = make_triplet(annotation(1, 6), SelectionStrategy::PaperDefault, "v_0001");
  EXPECT_EQ(code_of([&] { extract_frames(trip, video, dir / "frames", dir.path()); }),
            ErrorCode::TimestampOutOfRange);
  EXPECT_FALSE(std::filesystem::exists(dir / "frames/v_0001_initial.png"));
}

TEST(Video, FrameDirectoryAndMissingVideo) {
  egogen::testing::TempDir dir;
  std::filesystem::create_directories(dir / "vid");
  std::ofstream(dir / "vid/video.json") << R"({"fps": 4})";
  for (int i = 0; i < 3; ++i) write_png(dir / ("vid/00000" + std::to_string(i) + ".png"), Image(5, 3, 3, i * 10));
  auto video = open_video(dir.path(), "vid");
  EXPECT_EQ(video->fps(), 4);
  EXPECT_EQ(video->frame_count(), 3);
  EXPECT_DOUBLE_EQ(video->duration(), 0.75);
  EXPECT_EQ(video->decode(2).at(0, 0), 20);
  EXPECT_EQ(code_of([&] { open_video(dir.path(), "nope"); }), ErrorCode::MissingInput);
}

TEST(Video, OpenCvContainer) {
  egogen::testing::TempDir dir;
  const auto file = dir / "clip.avi";
  cv::VideoWriter writer(file.string(), cv::VideoWriter::fourcc('M', 'J', 'P', 'G'), 10, cv::Size(32, 24));
  if (!writer.isOpened()) GTEST_SKIP() << "no MJPG encoder available";
  for (int i = 0; i < 20; ++i) writer.write(cv::Mat(24, 32, CV_8UC3, cv::Scalar(i * 12, i * 12, i * 12)));
  writer.release();
  auto video = open_video(dir.path(), "clip");
  EXPECT_NEAR(video->fps(), 10, 1e-6);
  EXPECT_EQ(video->frame_count(), 20);
  const Image f = video->decode(10);
  EXPECT_EQ(f.width(), 32);
  EXPECT_NEAR(f.at(16, 12), 120, 6);
}

TEST(Parsers, EgteaFixtureSkipsMalformedRows) {
  const auto r = parse_annotations(egogen::testing::source_dir() / "tests/data/egtea_10rows.csv", DatasetTag::EGTEA);
  EXPECT_EQ(r.annotations.size(), 8u);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_EQ(r.skip_reasons.size(), 2u);
  const auto& first = r.annotations.front();
  EXPECT_EQ(first.video_id, "P01-R01");
  EXPECT_EQ(first.action_text, "Cut tomato");
  EXPECT_DOUBLE_EQ(first.t_start, 1.0);
  EXPECT_DOUBLE_EQ(first.t_end, 2.5);
  EXPECT_EQ(first.dataset, DatasetTag::EGTEA);
  EXPECT_EQ(first.metadata.at("Verb Label"), "1");
}

TEST(Parsers, EmptyFileIsSchemaMismatch) {
  for (auto tag : {DatasetTag::EGTEA, DatasetTag::EK100, DatasetTag::Ego4D, DatasetTag::Custom}) {
    EXPECT_EQ(code_of([&] { parse_annotations_text("", tag); }), ErrorCode::SchemaMismatch);
  }
  egogen::testing::TempDir dir;
  EXPECT_EQ(code_of([&] { parse_annotations(dir / "absent.csv", DatasetTag::EGTEA); }), ErrorCode::MissingInput);
}

TEST(Parsers, Ek100ClockTimes) {
  EXPECT_NEAR(parse_clock("00:01:02.50"), 62.5, 1e-12);
  EXPECT_NEAR(parse_clock("01:00:00.00"), 3600, 1e-12);
  const std::string csv =
      "narration_id,participant_id,video_id,narration_timestamp,start_timestamp,stop_timestamp,start_frame,"
      "stop_frame,narration,verb,verb_class,noun,noun_class\n"
      "P01_01_0,P01,P01_01,00:00:01.089,00:00:00.14,00:00:03.37,8,202,open door,open,3,door,3\n"
      "P01_01_1,P01,P01_01,00:00:02.629,00:00:04.37,00:00:06.17,262,370,turn on light,turn-on,6,light,114\n";
  const auto r = parse_annotations_text(csv, DatasetTag::EK100);
  ASSERT_EQ(r.annotations.size(), 2u);
  EXPECT_EQ(r.annotations[1].video_id, "P01_01");
  EXPECT_EQ(r.annotations[1].action_text, "turn on light");
  EXPECT_NEAR(r.annotations[1].t_start, 4.37, 1e-9);
  EXPECT_NEAR(r.annotations[1].t_end, 6.17, 1e-9);
  EXPECT_EQ(r.annotations[1].metadata.at("noun"), "light");
}

TEST(Parsers, Ego4dCriticalFramesBecomeKeyframes) {
  const json root{{"videos",
                   {{{"video_uid", "abc"},
                     {"fps", 30},
                     {"annotated_intervals",
                      {{{"narrated_actions",
                         {{{"narration_text", "#C C cuts the tomato"},
                           {"start_sec", 10.0},
                           {"end_sec", 14.0},
                           {"critical_frames", {{"pre_frame", 310}, {"pnr_frame", 360}, {"post_frame", 410}}}},
                          {{"narration_text", "#C C drops it"},
                           {"start_sec", 20.0},
                           {"end_sec", 21.0},
                           {"is_valid_action", false}}}}}}}}}}};
  const auto r = parse_annotations_text(root.dump(), DatasetTag::Ego4D);
  ASSERT_EQ(r.annotations.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
  const auto& a = r.annotations[0];
  EXPECT_EQ(a.video_id, "abc");
  EXPECT_EQ(a.action_text, "cuts the tomato");
  ASSERT_TRUE(a.keyframes);
  EXPECT_NEAR(a.keyframes->pre, 310.0 / 30, 1e-12);
  EXPECT_NEAR(a.keyframes->pnr, 12.0, 1e-12);
  EXPECT_NEAR(a.keyframes->post, 410.0 / 30, 1e-12);
}

TEST(Parsers, CustomJsonLines) {
  const std::string text =
      R"({"video_id":"a","action_text":"pour water","t_start":1,"t_end":3})"
      "\n"
      R"({"video_id":"b","action_text":"","t_start":1,"t_end":3})"
      "\n"
      R"({"video_id":"c","action_text":"lift lid","t_start":2,"t_end":4,"keyframes":{"pre":2,"pnr":3,"post":4}})"
      "\n";
  const auto r = parse_annotations_text(text, DatasetTag::Custom);
  ASSERT_EQ(r.annotations.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_TRUE(r.annotations[1].keyframes);
}

TEST(Split, ExampleSizes) {
  const auto s = split_dataset(triplets(10), 0.8, 1);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  const auto again = split_dataset(triplets(10), 0.8, 1);
  for (std::size_t i = 0; i < s.train.size(); ++i) EXPECT_EQ(s.train[i].key, again.train[i].key);
  const auto big = split_dataset(triplets(3000), 0.8, 5);
  EXPECT_EQ(big.train.size(), 2400u);
  EXPECT_EQ(big.test.size(), 600u);
}

TEST(Split, PartitionPropertyAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + seed * 7 % 61;
    const auto input = triplets(n);
    const double ratio = 0.1 + 0.8 * static_cast<double>(seed % 9) / 8.0;
    const auto s = split_dataset(input, ratio, seed);
    std::set<std::string> train, test;
    for (const auto& t : s.train) train.insert(t.key);
    for (const auto& t : s.test) test.insert(t.key);
    EXPECT_EQ(train.size() + test.size(), n);
    for (const auto& k : train) EXPECT_FALSE(test.count(k));
    EXPECT_LE(std::abs(static_cast<double>(train.size()) - ratio * n), 1.0);
    auto reversed = input;
    std::reverse(reversed.begin(), reversed.end());
    std::set<std::string> train2;
    for (const auto& t : split_dataset(reversed, ratio, seed).train) train2.insert(t.key);
    EXPECT_EQ(train, train2);
  }
}

TEST(Split, Errors) {
  EXPECT_EQ(code_of([] { split_dataset({}, 0.8, 1); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { split_dataset(triplets(3), 1.0, 1); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { split_dataset(triplets(3), 0.0, 1); }), ErrorCode::ConfigInvalid);
}

TEST(Manifest, RoundTripPreservesExtraFields) {
  egogen::testing::TempDir dir;
  auto a = annotation(3.2, 7.8);
  a.dataset = DatasetTag::EGTEA;
  a.metadata["Verb Label"] = "1";
  ManifestEntry e{make_triplet(a, SelectionStrategy::PaperDefault, "v_0000")};
  e.triplet.frame_paths = {"frames/a.png", "frames/b.png", "frames/c.png"};
  e.triplet.frame_times = std::array<double, 3>{3.2, 5.5, 7.3};
  e.extra["kept"] = true;
  write_manifest(dir / "m.jsonl", {e, e});
  const auto back = read_manifest(dir / "m.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(to_json(back[0]), to_json(e));
  const json j = to_json(e.triplet);
  for (const char* k : {"video_id", "action_text", "t_start", "t_end", "t_initial", "t_action", "t_final",
                        "frame_paths", "selection_strategy", "dataset_tag"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(resolve_frame_path(dir / "m.jsonl", "frames/a.png"), dir / "frames/a.png");
  std::ofstream(dir / "bad.jsonl") << "{\"video_id\": 3}\n";
  EXPECT_EQ(code_of([&] { read_manifest(dir / "bad.jsonl"); }), ErrorCode::SchemaMismatch);
  EXPECT_EQ(code_of([&] { read_manifest(dir / "none.jsonl"); }), ErrorCode::MissingInput);
}
