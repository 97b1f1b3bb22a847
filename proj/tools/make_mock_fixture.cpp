// SPDX-License-Identifier: Apache-2.0
// Writes the bundled five-triplet mock fixture: synthetic frame-directory
// videos, EGTEA-style annotations, VLM and detector fixtures, a small manual
// benchmark and a pipeline config. Output is deterministic.
//
//   make_mock_fixture <out_dir>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/core/image.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/ingest/video.hpp"
#include "egogen/pipeline/stages.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using egogen::BBox;
using egogen::Image;

namespace {

constexpr int kWidth = 96;
constexpr int kHeight = 72;
constexpr double kFps = 5.0;
constexpr int kFrames = 40;

struct Rgb {
  int r, g, b;
};

struct Item {
  std::string label;
  BBox box;
  Rgb colour;
  bool ellipse = false;
  double score = 0.5;  ///< detector confidence
};

struct Scene {
  std::string video_id;
  std::string action;
  int start_ms = 0;
  int end_ms = 0;
  Rgb background;
  std::function<std::vector<Item>(double)> items;  ///< what is visible at time t
  std::vector<std::string> replies;                ///< VLM turns
};

void paint(Image& img, const Item& item) {
  const auto r = item.box.to_pixels(img.width(), img.height());
  const double cx = item.box.center_x(), cy = item.box.center_y();
  const double rx = 0.5 * (item.box.x_max - item.box.x_min), ry = 0.5 * (item.box.y_max - item.box.y_min);
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      if (item.ellipse) {
        const double nx = (x + 0.5 - cx) / rx, ny = (y + 0.5 - cy) / ry;
        if (nx * nx + ny * ny > 1.0) continue;
      }
      // A light diagonal texture keeps embeddings of different frames apart.
      const int shade = ((x + 2 * y) % 7) * 3;
      img.at(x, y, 0) = static_cast<std::uint8_t>(std::min(255, item.colour.r + shade));
      img.at(x, y, 1) = static_cast<std::uint8_t>(std::min(255, item.colour.g + shade));
      img.at(x, y, 2) = static_cast<std::uint8_t>(std::min(255, item.colour.b + shade));
    }
  }
}

Image render(const Scene& scene, double t) {
  Image img(kWidth, kHeight, 3);
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>(scene.background.r + y / 3);
      img.at(x, y, 1) = static_cast<std::uint8_t>(scene.background.g + x / 4);
      img.at(x, y, 2) = static_cast<std::uint8_t>(scene.background.b);
    }
  }
  for (const auto& item : scene.items(t)) paint(img, item);
  return img;
}

Item hand_at(double x, double y, double score) {
  return {"hand", {x, y, x + 16, y + 12}, {224, 172, 140}, true, score};
}

std::vector<Scene> scenes() {
  std::vector<Scene> s;
  // Core away from its location: relocation onto the board.
  s.push_back({"kitchen_01", "cut tomato", 1000, 6000, {40, 60, 70},
               [](double t) {
                 std::vector<Item> v{{"cutting board", {8, 38, 58, 66}, {150, 100, 60}, false, 0.74},
                                     {"tomato", {68, 14, 86, 32}, {210, 40, 30}, true, 0.82},
                                     {"knife", {60, 46, 90, 51}, {180, 180, 190}, false, t < 3 ? 0.55 : 0.29}};
                 v.push_back(hand_at(40 + 6 * t, 20, t < 3 ? 0.61 : 0.66));
                 return v;
               },
               {"tomato, cutting board, knife", "Core: tomato\nLocation: cutting board\nFunctional: knife, hand"}});
  // Two candidate locations: the third turn narrows them to one.
  s.push_back({"kitchen_02", "place cup", 500, 4500, {70, 50, 40},
               [](double t) {
                 std::vector<Item> v{{"table", {0, 44, 96, 72}, {120, 90, 70}, false, 0.45},
                                     {"tray", {50, 48, 86, 64}, {200, 200, 210}, false, 0.58},
                                     {"cup", {12, 20, 26, 36}, {60, 120, 200}, true, 0.77}};
                 v.push_back(hand_at(20 + 4 * t, 10, 0.7));
                 return v;
               },
               {"cup, tray, table", "Core: cup\nLocation: tray, table\nFunctional: hand", "tray"}});
  // No hand before the action starts, so the first inpainting step is skipped.
  s.push_back({"kitchen_03", "take plate", 2000, 7000, {50, 70, 50},
               [](double t) {
                 std::vector<Item> v{{"plate", {30, 30, 62, 50}, {235, 235, 225}, true, 0.69}};
                 if (t >= 3.0) v.push_back(hand_at(36, 26, 0.64));
                 return v;
               },
               {"plate", "Core: plate\nLocation: none\nFunctional: none"}});
  // Functional and core objects, no location.
  s.push_back({"kitchen_04", "stir soup", 1500, 5500, {60, 40, 60},
               [](double t) {
                 std::vector<Item> v{{"soup", {24, 30, 64, 56}, {200, 120, 40}, true, 0.71},
                                     {"spoon", {50 - 2 * t, 18, 58 - 2 * t, 44}, {170, 170, 170}, false, 0.48}};
                 v.push_back(hand_at(52 - 2 * t, 8, 0.62));
                 return v;
               },
               {"soup, spoon", "Core: soup\nLocation: none\nFunctional: spoon, hand"}});
  // The hand leaves before the action frame: rejected by the filter.
  s.push_back({"kitchen_05", "open drawer", 1000, 5000, {45, 45, 75},
               [](double t) {
                 std::vector<Item> v{{"drawer", {20, 40, 76, 66}, {110, 80, 50}, false, 0.66}};
                 if (t < 2.0) v.push_back(hand_at(30, 28, 0.59));
                 return v;
               },
               {"drawer", "Core: drawer\nLocation: none\nFunctional: hand"}});
  return s;
}

json detections_at(const Scene& scene, double t) {
  json list = json::array();
  for (const auto& item : scene.items(t)) {
    list.push_back({{"label", item.label},
                    {"score", item.score},
                    {"bbox", {item.box.x_min, item.box.y_min, item.box.x_max, item.box.y_max}},
                    {"mask", item.ellipse ? "ellipse" : "box"}});
  }
  return list;
}

void write(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_mock_fixture <out_dir>\n";
    return 2;
  }
  const fs::path out = argv[1];
  const auto all = scenes();

  std::string csv = "Clip Prefix (Unique);Video Session;Starting Time (ms);Ending Time (ms);Action Label;Verb Label;Noun Label(s)\n";
  json vlm{{"strict", true}, {"replies", json::object()}};
  json detector{{"frames", json::object()}};
  std::string bench;

  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& scene = all[i];
    const fs::path vdir = out / "videos" / scene.video_id;
    fs::create_directories(vdir);
    write(vdir / "video.json", json{{"fps", kFps}}.dump() + "\n");
    for (int f = 0; f < kFrames; ++f) {
      char name[32];
      std::snprintf(name, sizeof name, "%06d.png", f);
      egogen::write_png(vdir / name, render(scene, f / kFps));
    }

    csv += scene.video_id + "-" + std::to_string(scene.start_ms) + ";" + scene.video_id + ";" +
           std::to_string(scene.start_ms) + ";" + std::to_string(scene.end_ms) + ";" + scene.action + ";" +
           scene.action.substr(0, scene.action.find(' ')) + ";" + scene.action.substr(scene.action.find(' ') + 1) +
           "\n";
    vlm["replies"][scene.action] = scene.replies;

    // Detector answers for the two frames the filter and grounding look at,
    // keyed by the extracted frame's file stem.
    const double ts = scene.start_ms / 1000.0, tf = scene.end_ms / 1000.0;
    const std::string key = egogen::pipeline::triplet_key(scene.video_id, i);
    const double times[3] = {ts, 0.5 * (ts + tf), 0.1 * ts + 0.9 * tf};
    const char* kinds[3] = {"initial", "action", "final"};
    json frame_paths;
    for (int k = 0; k < 3; ++k) {
      const auto idx = egogen::ingest::nearest_frame_index(times[k], kFps, kFrames);
      const double frame_t = idx / kFps;
      if (k < 2) detector["frames"][key + "_" + kinds[k]] = detections_at(scene, frame_t);
      // The manual benchmark picks the neighbouring frame.
      const std::string rel = "frames/" + scene.video_id + "_" + kinds[k] + ".png";
      egogen::write_png(out / "benchmark" / rel, render(scene, (idx + 1) / kFps));
      frame_paths[kinds[k]] = rel;
    }
    if (i < 4) {
      bench += json{{"video_id", scene.video_id},
                    {"action_text", scene.action},
                    {"t_start", ts},
                    {"frame_paths", frame_paths}}
                   .dump() +
               "\n";
    }
  }

  write(out / "annotations" / "action_labels.csv", csv);
  write(out / "vlm.json", vlm.dump(2) + "\n");
  write(out / "detector.json", detector.dump(2) + "\n");
  write(out / "benchmark" / "bench.jsonl", bench);
  const json config{{"detection_threshold", 0.3},
                    {"similarity_threshold", 80},
                    {"seed", 7},
                    {"split", {{"ratio", 0.8}, {"seed", 3}}},
                    {"finetune", {{"epochs", 5}, {"aux_loss_weight", nullptr}}},
                    {"flags", {{"auto_append_hands", true}, {"mclip_crop", true}, {"full_frame_fallback", true}}},
                    {"backends",
                     {{"vlm", {{"endpoint", "mock"}, {"fixture", "vlm.json"}}},
                      {"detector", {{"endpoint", "mock"}, {"fixture", "detector.json"}}},
                      {"inpainter", {{"endpoint", "mock"}, {"model_tag", "checkerboard"}}},
                      {"embedder", {{"endpoint", "mock"}, {"model_tag", "dim=64"}}}}}};
  write(out / "config.json", config.dump(2) + "\n");
  std::cout << "wrote fixture to " << out.string() << "\n";
  return 0;
}
