// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "egogen/backends/mock.hpp"
#include "egogen/core/error.hpp"
#include "egogen/metrics/metrics.hpp"
#include "egogen/metrics/report.hpp"
#include "support.hpp"

using namespace egogen;
using namespace egogen::metrics;
using egogen::backends::Vector;

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

class TableEmbedder final : public backends::EmbeddingBackend {
 public:
  std::map<int, Vector> by_first_pixel;
  Vector embed(const Frame& f) override { return backends::normalized(by_first_pixel.at(f.image.at(0, 0))); }
  Vector features(const Frame& f) override { return by_first_pixel.at(f.image.at(0, 0)); }
};

// Unbiased sample moments, computed the slow way.
void moments(const std::vector<Vector>& xs, Vector& mean, std::vector<Vector>& cov) {
  const std::size_t n = xs.size(), d = xs[0].size();
  mean.assign(d, 0);
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < d; ++i) mean[i] += x[i] / static_cast<double>(n);
  }
  cov.assign(d, Vector(d, 0));
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) cov[i][j] += (x[i] - mean[i]) * (x[j] - mean[j]) / static_cast<double>(n - 1);
    }
  }
}

double closed_form_fid_2d(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  Vector ma, mb;
  std::vector<Vector> sa, sb;
  moments(a, ma, sa);
  moments(b, mb, sb);
  const double m00 = sa[0][0] * sb[0][0] + sa[0][1] * sb[1][0];
  const double m01 = sa[0][0] * sb[0][1] + sa[0][1] * sb[1][1];
  const double m10 = sa[1][0] * sb[0][0] + sa[1][1] * sb[1][0];
  const double m11 = sa[1][0] * sb[0][1] + sa[1][1] * sb[1][1];
  const double tr_sqrt = std::sqrt(m00 + m11 + 2 * std::sqrt(m00 * m11 - m01 * m10));
  const double dist = (ma[0] - mb[0]) * (ma[0] - mb[0]) + (ma[1] - mb[1]) * (ma[1] - mb[1]);
  return dist + sa[0][0] + sa[1][1] + sb[0][0] + sb[1][1] - 2 * tr_sqrt;
}

std::vector<Vector> gaussian_2d(std::mt19937_64& rng, std::size_t n, double mx, double my, double sx, double sy,
                                double rho) {
  std::normal_distribution<double> z;
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = z(rng), v = z(rng);
    out.push_back({mx + sx * u, my + sy * (rho * u + std::sqrt(1 - rho * rho) * v)});
  }
  return out;
}

PairScore pair(std::string key, double clip, double m, double d, double p, double s) {
  PairScore ps;
  ps.key = std::move(key);
  ps.clip = clip;
  ps.m_clip = m;
  ps.d_clip = d;
  ps.psnr = p;
  ps.ssim = s;
  return ps;
}

}  // namespace

TEST(Psnr, DocumentedValues) {
  const Image black = egogen::testing::constant_image(8, 8, 3, 0);
  const Image white = egogen::testing::constant_image(8, 8, 3, 255);
  EXPECT_TRUE(std::isinf(psnr(black, black)));
  EXPECT_NEAR(psnr(black, white), 0.0, 1e-12);
  Image a = egogen::testing::constant_image(2, 2, 1, 128);
  Image b = a;
  b.at(1, 1) = 129;
  EXPECT_NEAR(psnr(a, b), 10 * std::log10(255.0 * 255.0 / 0.25), 1e-12);
  EXPECT_EQ(code_of([&] { psnr(a, Image(3, 3, 1)); }), ErrorCode::DimensionMismatch);
}

TEST(Ssim, IdenticalConstantAndNoise) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 5; ++i) {
    const Image img = egogen::testing::random_image(40, 30, 3, rng);
    EXPECT_NEAR(ssim(img, img), 100.0, 1e-9);
  }
  const double c1 = (0.01 * 255) * (0.01 * 255);
  for (auto [x, y] : {std::pair{100, 120}, std::pair{0, 255}, std::pair{50, 51}}) {
    const Image a = egogen::testing::constant_image(32, 32, 1, static_cast<std::uint8_t>(x));
    const Image b = egogen::testing::constant_image(32, 32, 1, static_cast<std::uint8_t>(y));
    const double expected = 100.0 * (2.0 * x * y + c1) / (1.0 * x * x + 1.0 * y * y + c1);
    EXPECT_NEAR(ssim(a, b), expected, 1e-9);
  }
  const Image n1 = egogen::testing::random_image(96, 96, 1, rng);
  const Image n2 = egogen::testing::random_image(96, 96, 1, rng);
  EXPECT_NEAR(ssim(n1, n2), 0.0, 5.0);
  EXPECT_EQ(code_of([&] { ssim(n1, Image(4, 4, 1)); }), ErrorCode::DimensionMismatch);
}

TEST(Ssim, SymmetricAndBounded) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 20; ++i) {
    const Image a = egogen::testing::random_image(24, 20, 3, rng);
    Image b = a;
    for (auto& v : b.pixels()) v = static_cast<std::uint8_t>(std::clamp<int>(v + static_cast<int>(rng() % 41) - 20, 0, 255));
    EXPECT_DOUBLE_EQ(ssim(a, b), ssim(b, a));
    EXPECT_DOUBLE_EQ(psnr(a, b), psnr(b, a));
    EXPECT_LE(ssim(a, b), 100.0);
    EXPECT_GE(ssim(a, b), -100.0);
    EXPECT_GT(psnr(a, b), 0.0);
  }
  // Small images shrink the window rather than failing.
  const Image tiny = egogen::testing::random_image(5, 4, 3, rng);
  EXPECT_NEAR(ssim(tiny, tiny), 100.0, 1e-9);
}

TEST(Fid, SelfMeanShiftAndClosedForm) {
  std::mt19937_64 rng(53);
  const auto x = gaussian_2d(rng, 400, 0, 0, 1, 2, 0.3);
  EXPECT_LT(fid_from_features(x, x).value, 1e-6);
  auto shifted = x;
  for (auto& v : shifted) {
    v[0] += 3;
    v[1] -= 4;
  }
  EXPECT_NEAR(fid_from_features(x, shifted).value, 25.0, 1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = gaussian_2d(rng, 50 + trial, 0.5, -1, 1.3, 0.7, 0.4);
    const auto b = gaussian_2d(rng, 80, 1.0, 0.2, 0.9, 1.6, -0.2);
    const auto r = fid_from_features(a, b);
    EXPECT_FALSE(r.regularized);
    EXPECT_NEAR(r.value, closed_form_fid_2d(a, b), 1e-9);
  }
}

TEST(Fid, SingularCovarianceIsRegularized) {
  std::vector<Vector> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back({static_cast<double>(i), 2.0 * i, 0.0});
    b.push_back({static_cast<double>(i) + 1, 2.0 * i, 0.0});
  }
  const auto r = fid_from_features(a, b);
  EXPECT_TRUE(r.regularized);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_NEAR(r.value, 1.0, 1e-3);
  EXPECT_EQ(code_of([&] { fid_from_features({a[0]}, b); }), ErrorCode::PreconditionViolation);
}

TEST(Fid, OverImagesUsesFeatures) {
  std::mt19937_64 rng(54);
  backends::ProjectionEmbedder emb(8, 4);
  std::vector<Image> xs;
  for (int i = 0; i < 12; ++i) xs.push_back(egogen::testing::random_image(16, 16, 3, rng));
  EXPECT_LT(fid(xs, xs, emb).value, 1e-6);
}

TEST(Clip, SelfAndOrthogonal) {
  TableEmbedder emb;
  emb.by_first_pixel = {{1, {1, 0}}, {2, {0, 3}}};
  const Image a = egogen::testing::constant_image(4, 4, 3, 1), b = egogen::testing::constant_image(4, 4, 3, 2);
  EXPECT_NEAR(clip_score(a, a, emb), 100, 1e-12);
  EXPECT_NEAR(clip_score(a, b, emb), 0, 1e-12);
}

TEST(MClip, LocalityFullFrameAndFallback) {
  std::mt19937_64 rng(55);
  backends::ProjectionEmbedder emb;
  const Image a = egogen::testing::random_image(40, 30, 3, rng);
  Image b = egogen::testing::random_image(40, 30, 3, rng);
  const Mask mask = rect_mask(40, 30, {10, 8, 26, 20});
  for (int y = 8; y < 20; ++y) {
    for (int x = 10; x < 26; ++x) {
      for (int c = 0; c < 3; ++c) b.at(x, y, c) = a.at(x, y, c);
    }
  }
  EXPECT_NEAR(m_clip(a, b, mask, emb).score, 100, 1e-9);
  EXPECT_NEAR(m_clip(a, b, mask, emb, {MaskedRegion::ZeroOutside, true}).score, 100, 1e-9);
  EXPECT_LT(clip_score(a, b, emb), 99);
  EXPECT_EQ(m_clip(a, b, Mask::full(40, 30), emb).score, clip_score(a, b, emb));
  const auto fb = m_clip(a, b, Mask(40, 30), emb);
  EXPECT_TRUE(fb.fell_back);
  EXPECT_EQ(fb.score, clip_score(a, b, emb));
  EXPECT_EQ(code_of([&] { m_clip(a, b, Mask(40, 30), emb, {MaskedRegion::Crop, false}); }), ErrorCode::EmptyMask);
}

TEST(DClip, ExactValues) {
  EXPECT_NEAR(d_clip_from_cosines(0.9, 0.72), 20.0, 1e-12);
  EXPECT_EQ(d_clip_from_cosines(0.6, 0.6), 0.0);
  EXPECT_NEAR(d_clip_from_cosines(0.5, 0.6), -20.0, 1e-12);
  EXPECT_EQ(code_of([] { d_clip_from_cosines(0.0, 0.5); }), ErrorCode::ZeroReferenceSimilarity);
  std::mt19937_64 rng(56);
  backends::ProjectionEmbedder emb;
  const Image f_in = egogen::testing::random_image(20, 20, 3, rng);
  const Image gt = egogen::testing::random_image(20, 20, 3, rng);
  EXPECT_EQ(d_clip(f_in, gt, gt, emb), 0.0);
}

TEST(Report, MeansAndCounts) {
  const auto one = report({pair("a", 80, 60, 10, 20, 70)}, std::nullopt, "egtea", "action", "m");
  EXPECT_EQ(one.n_pairs, 1u);
  EXPECT_EQ(one.clip, 80);
  EXPECT_EQ(one.m_clip, 60);
  EXPECT_EQ(one.d_clip, 10);
  EXPECT_EQ(one.psnr, 20);
  EXPECT_EQ(one.ssim, 70);
  const auto two = report({pair("a", 80, 60, 10, 20, 70), pair("b", 90, 40, -2, 30, 50)}, FidResult{12.5, false},
                          "egtea", "action", "m");
  EXPECT_DOUBLE_EQ(two.clip, 85);
  EXPECT_DOUBLE_EQ(two.m_clip, 50);
  EXPECT_DOUBLE_EQ(two.d_clip, 4);
  EXPECT_DOUBLE_EQ(two.psnr, 25);
  EXPECT_DOUBLE_EQ(two.ssim, 60);
  EXPECT_EQ(code_of([] { report({}, std::nullopt, "d", "action", "m"); }), ErrorCode::EmptyInput);
}

TEST(Report, InfinitePsnrIsCountedNotAveraged) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = report({pair("a", 1, 1, 1, inf, 1), pair("b", 1, 1, 1, 30, 1)}, std::nullopt, "d", "final", "m");
  EXPECT_EQ(r.n_psnr_infinite, 1u);
  EXPECT_EQ(r.psnr, 30);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("raw").at("pairs")[0].at("psnr"), "inf");
}

TEST(Report, PermutationInvariant) {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> u(-100, 100);
  std::vector<PairScore> ps;
  for (int i = 0; i < 650; ++i) ps.push_back(pair(std::to_string(i), u(rng), u(rng), u(rng), u(rng) + 200, u(rng)));
  const auto base = report(ps, std::nullopt, "egtea", "action", "m");
  EXPECT_EQ(base.n_pairs, 650u);
  std::shuffle(ps.begin(), ps.end(), rng);
  const auto shuffled = report(ps, std::nullopt, "egtea", "action", "m");
  EXPECT_NEAR(shuffled.clip, base.clip, 1e-9);
  EXPECT_NEAR(shuffled.m_clip, base.m_clip, 1e-9);
  EXPECT_NEAR(shuffled.d_clip, base.d_clip, 1e-9);
  EXPECT_NEAR(shuffled.psnr, base.psnr, 1e-9);
  EXPECT_NEAR(shuffled.ssim, base.ssim, 1e-9);
}

TEST(Report, JsonAndTableLayout) {
  const auto r = report({pair("a", 80, 60, 10, 20, 70), pair("b", 90, 40, -2, 30, 50)}, FidResult{12.5, true},
                        "egtea", "action", "egogen");
  const auto j = to_json(r);
  for (const char* k : {"dataset", "target", "method", "metrics", "n_pairs"}) EXPECT_TRUE(j.contains(k)) << k;
  for (const char* k : {"clip", "m_clip", "d_clip", "fid", "psnr", "ssim"}) EXPECT_TRUE(j.at("metrics").contains(k)) << k;
  EXPECT_EQ(j.at("metrics").at("fid"), 12.5);
  EXPECT_EQ(j.at("raw").at("fid_regularized"), true);
  const std::string table = to_table(r);
  const auto pos = [&](const char* s) { return table.find(s); };
  EXPECT_LT(pos("CLIP ↑"), pos("M-CLIP ↑"));
  EXPECT_LT(pos("M-CLIP ↑"), pos("D-CLIP ↓"));
  EXPECT_LT(pos("D-CLIP ↓"), pos("FID ↓"));
  EXPECT_LT(pos("FID ↓"), pos("PSNR ↑"));
  EXPECT_LT(pos("PSNR ↑"), pos("SSIM ↑"));
}

TEST(ScorePair, UsesGroundTruthAndInput) {
  std::mt19937_64 rng(58);
  backends::ProjectionEmbedder emb;
  metrics::PairInput in{"k", egogen::testing::random_image(20, 20, 3, rng), egogen::testing::random_image(20, 20, 3, rng),
                        Image(), rect_mask(20, 20, {2, 2, 10, 10})};
  in.generated = in.ground_truth;
  const auto s = score_pair(in, emb);
  EXPECT_NEAR(s.clip, 100, 1e-9);
  EXPECT_NEAR(s.m_clip, 100, 1e-9);
  EXPECT_EQ(s.d_clip, 0.0);
  EXPECT_TRUE(std::isinf(s.psnr));
  EXPECT_NEAR(s.ssim, 100, 1e-9);
}
