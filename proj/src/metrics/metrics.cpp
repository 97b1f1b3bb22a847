// SPDX-License-Identifier: Apache-2.0
#include "egogen/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "egogen/core/error.hpp"

namespace egogen::metrics {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": images differ in shape");
}

Image zero_outside(const Image& image, const Mask& mask) {
  Image out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (mask.get(x, y)) continue;
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = 0;
    }
  }
  return out;
}

}  // namespace

double clip_score(const Image& a, const Image& b, backends::EmbeddingBackend& embedder) {
  return 100.0 * backends::cosine(embedder.embed(Frame{"a", a}), embedder.embed(Frame{"b", b}));
}

MClipValue m_clip(const Image& a, const Image& b, const Mask& mask_union, backends::EmbeddingBackend& embedder,
                  const MClipOptions& options) {
  require_same_shape(a, b, "m_clip");
  if (!mask_union.matches(a)) throw Error(ErrorCode::DimensionMismatch, "m_clip: mask does not match images");
  const auto bounds = mask_union.bounds();
  if (!bounds) {
    if (!options.empty_falls_back) throw Error(ErrorCode::EmptyMask, "m_clip: mask is empty");
    return {clip_score(a, b, embedder), true};
  }
  if (options.region == MaskedRegion::Crop) {
    const bool whole = bounds->x0 == 0 && bounds->y0 == 0 && bounds->x1 == a.width() && bounds->y1 == a.height();
    if (whole) return {clip_score(a, b, embedder), false};
    return {clip_score(crop(a, *bounds), crop(b, *bounds), embedder), false};
  }
  return {clip_score(zero_outside(a, mask_union), zero_outside(b, mask_union), embedder), false};
}

double d_clip_from_cosines(double cos_reference, double cos_generated) {
  if (cos_reference == 0.0) {
    throw Error(ErrorCode::ZeroReferenceSimilarity, "reference similarity is zero");
  }
  return 100.0 * (cos_reference - cos_generated) / cos_reference;
}

double d_clip(const Image& f_in, const Image& reference, const Image& generated,
              backends::EmbeddingBackend& embedder) {
  const auto e_in = embedder.embed(Frame{"input", f_in});
  const double cos_ref = backends::cosine(e_in, embedder.embed(Frame{"reference", reference}));
  const double cos_gen = backends::cosine(e_in, embedder.embed(Frame{"generated", generated}));
  return d_clip_from_cosines(cos_ref, cos_gen);
}

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  if (pa.empty()) throw Error(ErrorCode::EmptyInput, "psnr: empty image");
  double sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sum += d * d;
  }
  if (sum == 0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(pa.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  const int w = a.width();
  const int h = a.height();
  if (w == 0 || h == 0) throw Error(ErrorCode::EmptyInput, "ssim: empty image");
  int size = std::min({11, w, h});
  if (size % 2 == 0) --size;
  const int half = size / 2;
  std::vector<double> kernel(static_cast<std::size_t>(size));
  double ksum = 0;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    kernel[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * 1.5 * 1.5));
    ksum += kernel[static_cast<std::size_t>(i)];
  }
  for (auto& k : kernel) k /= ksum;

  constexpr double L = 255.0;
  constexpr double C1 = (0.01 * L) * (0.01 * L);
  constexpr double C2 = (0.03 * L) * (0.03 * L);
  const int out_w = w - size + 1;
  const int out_h = h - size + 1;
  double total = 0;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
        for (int j = 0; j < size; ++j) {
          for (int i = 0; i < size; ++i) {
            const double wgt = kernel[static_cast<std::size_t>(j)] * kernel[static_cast<std::size_t>(i)];
            const double va = a.at(x + i, y + j, c);
            const double vb = b.at(x + i, y + j, c);
            ma += wgt * va;
            mb += wgt * vb;
            saa += wgt * va * va;
            sbb += wgt * vb * vb;
            sab += wgt * va * vb;
          }
        }
        const double var_a = saa - ma * ma;
        const double var_b = sbb - mb * mb;
        const double cov = sab - ma * mb;
        total += ((2 * ma * mb + C1) * (2 * cov + C2)) / ((ma * ma + mb * mb + C1) * (var_a + var_b + C2));
      }
    }
  }
  return 100.0 * total / (static_cast<double>(out_w) * out_h * a.channels());
}

namespace {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Moments moments(const std::vector<backends::Vector>& rows, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (row.size() != dim) throw Error(ErrorCode::DimensionMismatch, "fid: inconsistent feature dimension");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  Moments out;
  out.mean = m.colwise().mean().transpose();
  const Eigen::MatrixXd centered = m.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * centered / static_cast<double>(n - 1);
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd vals = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().transpose();
}

bool singular(const Eigen::MatrixXd& cov, double epsilon) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  const auto& vals = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(vals.maxCoeff()));
  return vals.minCoeff() <= epsilon * scale;
}

}  // namespace

FidResult fid_from_features(const std::vector<backends::Vector>& a, const std::vector<backends::Vector>& b,
                            double epsilon) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::PreconditionViolation, "fid needs at least two samples per set");
  }
  const std::size_t dim = a.front().size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "fid: empty feature vectors");
  Moments ma = moments(a, dim);
  Moments mb = moments(b, dim);

  FidResult result;
  if (singular(ma.cov, epsilon) || singular(mb.cov, epsilon)) {
    const auto eye = Eigen::MatrixXd::Identity(ma.cov.rows(), ma.cov.cols());
    ma.cov += epsilon * eye;
    mb.cov += epsilon * eye;
    result.regularized = true;
  }
  // tr sqrt(A B) = tr sqrt(A^1/2 B A^1/2), which stays symmetric.
  const Eigen::MatrixXd root_a = psd_sqrt(ma.cov);
  const Eigen::MatrixXd inner = root_a * mb.cov * root_a;
  const Eigen::MatrixXd sym = 0.5 * (inner + inner.transpose());
  const double tr_cross = psd_sqrt(sym).trace();
  const double value = (ma.mean - mb.mean).squaredNorm() + ma.cov.trace() + mb.cov.trace() - 2.0 * tr_cross;
  result.value = std::max(0.0, value);
  return result;
}

FidResult fid(const std::vector<Image>& a, const std::vector<Image>& b, backends::EmbeddingBackend& features,
              double epsilon) {
  std::vector<backends::Vector> fa, fb;
  fa.reserve(a.size());
  fb.reserve(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) fa.push_back(features.features(Frame{"a" + std::to_string(i), a[i]}));
  for (std::size_t i = 0; i < b.size(); ++i) fb.push_back(features.features(Frame{"b" + std::to_string(i), b[i]}));
  return fid_from_features(fa, fb, epsilon);
}

}  // namespace egogen::metrics
