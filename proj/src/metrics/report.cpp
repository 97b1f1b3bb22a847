// SPDX-License-Identifier: Apache-2.0
#include "egogen/metrics/report.hpp"

#include <cmath>
#include <cstdio>

#include "egogen/core/error.hpp"

namespace egogen::metrics {

PairScore score_pair(const PairInput& pair, backends::EmbeddingBackend& embedder, const MClipOptions& options) {
  PairScore s;
  s.key = pair.key;
  const auto e_in = embedder.embed(Frame{"input", pair.f_in});
  const auto e_gt = embedder.embed(Frame{"reference", pair.ground_truth});
  const auto e_gen = embedder.embed(Frame{"generated", pair.generated});
  s.clip_cosine = backends::cosine(e_gt, e_gen);
  s.clip = 100.0 * s.clip_cosine;
  const auto masked = m_clip(pair.ground_truth, pair.generated, pair.mask, embedder, options);
  s.m_clip = masked.score;
  s.m_clip_fell_back = masked.fell_back;
  s.reference_cosine = backends::cosine(e_in, e_gt);
  s.generated_cosine = backends::cosine(e_in, e_gen);
  s.d_clip = d_clip_from_cosines(s.reference_cosine, s.generated_cosine);
  s.psnr = psnr(pair.ground_truth, pair.generated);
  s.ssim = ssim(pair.ground_truth, pair.generated);
  return s;
}

MetricReport report(const std::vector<PairScore>& pairs, std::optional<FidResult> fid, const std::string& dataset,
                    const std::string& target, const std::string& method) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no scored pairs to report");
  MetricReport r;
  r.dataset = dataset;
  r.target = target;
  r.method = method;
  r.fid = fid;
  r.n_pairs = pairs.size();
  r.pairs = pairs;
  double psnr_sum = 0;
  std::size_t psnr_n = 0;
  for (const auto& p : pairs) {
    r.clip += p.clip;
    r.m_clip += p.m_clip;
    r.d_clip += p.d_clip;
    r.ssim += p.ssim;
    if (std::isfinite(p.psnr)) {
      psnr_sum += p.psnr;
      ++psnr_n;
    } else {
      ++r.n_psnr_infinite;
    }
  }
  const double n = static_cast<double>(pairs.size());
  r.clip /= n;
  r.m_clip /= n;
  r.d_clip /= n;
  r.ssim /= n;
  r.psnr = psnr_n ? psnr_sum / static_cast<double>(psnr_n) : std::numeric_limits<double>::infinity();
  return r;
}

namespace {

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string fmt2(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"key", p.key},
                     {"clip", p.clip},
                     {"m_clip", p.m_clip},
                     {"d_clip", p.d_clip},
                     {"psnr", number_or_inf(p.psnr)},
                     {"ssim", p.ssim},
                     {"clip_cosine", p.clip_cosine},
                     {"reference_cosine", p.reference_cosine},
                     {"generated_cosine", p.generated_cosine},
                     {"m_clip_fell_back", p.m_clip_fell_back}});
  }
  nlohmann::json fid = nullptr;
  if (r.fid) fid = r.fid->value;
  return {{"dataset", r.dataset},
          {"target", r.target},
          {"method", r.method},
          {"metrics",
           {{"clip", r.clip},
            {"m_clip", r.m_clip},
            {"d_clip", r.d_clip},
            {"fid", fid},
            {"psnr", number_or_inf(r.psnr)},
            {"ssim", r.ssim}}},
          {"n_pairs", r.n_pairs},
          {"raw",
           {{"fid_regularized", r.fid ? r.fid->regularized : false},
            {"n_psnr_infinite", r.n_psnr_infinite},
            {"pairs", pairs}}}};
}

std::string to_table(const MetricReport& r) {
  const std::string fid = r.fid ? fmt2(r.fid->value) : "n/a";
  std::string out = "| Dataset | Target | Method | CLIP ↑ | M-CLIP ↑ | D-CLIP ↓ | FID ↓ | PSNR ↑ | SSIM ↑ | N |\n";
  out += "|---|---|---|---|---|---|---|---|---|---|\n";
  out += "| " + r.dataset + " | " + r.target + " | " + r.method + " | " + fmt2(r.clip) + " | " + fmt2(r.m_clip) +
         " | " + fmt2(r.d_clip) + " | " + fid + " | " + fmt2(r.psnr) + " | " + fmt2(r.ssim) + " | " +
         std::to_string(r.n_pairs) + " |\n";
  return out;
}

}  // namespace egogen::metrics
