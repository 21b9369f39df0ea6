#include "waveq/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "waveq/error.hpp"

namespace waveq {

namespace {

void require_same_dims(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

}  // namespace

double mse(const Image& a, const Image& b) {
  require_same_dims(a, b);
  auto pa = a.pixels();
  auto pb = b.pixels();
  // Squared 8-bit differences sum exactly in 64-bit integers.
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = static_cast<int>(pa[i]) - static_cast<int>(pb[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(pa.size());
}

double psnr_from_mse(double mse, double peak) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const Image& a, const Image& b) { return psnr_from_mse(mse(a, b)); }

double ssim_window(std::span<const double> p, std::span<const double> q,
                   const SsimConstants& consts) {
  if (p.size() != q.size() || p.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "SSIM windows differ in size");
  }
  const auto n = static_cast<double>(p.size());
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
  }
  const double mp = sp / n;
  const double mq = sq / n;
  double vp = 0.0, vq = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dp = p[i] - mp;
    const double dq = q[i] - mq;
    vp += dp * dp;
    vq += dq * dq;
    cov += dp * dq;
  }
  vp /= n;
  vq /= n;
  cov /= n;
  const double c1 = consts.c1();
  const double c2 = consts.c2();
  return ((2.0 * mp * mq + c1) * (2.0 * cov + c2)) /
         ((mp * mp + mq * mq + c1) * (vp + vq + c2));
}

double mssim(const Image& a, const Image& b, const MssimOptions& options) {
  require_same_dims(a, b);
  const std::size_t win = options.window;
  const std::size_t stride = options.stride;
  if (win == 0 || stride == 0) {
    throw Error(ErrorCode::kInvalidParams, "window and stride must be positive");
  }
  if (a.width() < win || a.height() < win) {
    throw Error(ErrorCode::kTooSmall, "image smaller than the " + std::to_string(win) + "x" +
                                          std::to_string(win) + " SSIM window");
  }
  std::vector<double> p(win * win);
  std::vector<double> q(win * win);
  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t r = 0; r + win <= a.height(); r += stride) {
    for (std::size_t c = 0; c + win <= a.width(); c += stride) {
      for (std::size_t i = 0; i < win; ++i) {
        for (std::size_t j = 0; j < win; ++j) {
          p[i * win + j] = a.at(r + i, c + j);
          q[i * win + j] = b.at(r + i, c + j);
        }
      }
      total += ssim_window(p, q, options.constants);
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

QualityReport evaluate(const Image& a, const Image& b, const MssimOptions& options) {
  QualityReport report;
  report.mse = mse(a, b);
  report.psnr_db = psnr_from_mse(report.mse);
  report.mssim = mssim(a, b, options);
  return report;
}

}  // namespace waveq
