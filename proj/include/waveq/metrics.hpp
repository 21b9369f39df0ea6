#pragma once

#include <cstddef>
#include <span>

#include "waveq/image.hpp"

namespace waveq {

struct SsimConstants {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
  // When set, k1 and k2 enter the formula directly as the stabilizers, on
  // intensities normalized to [0, 1]. On the 8-bit scale that is k * L^2
  // rather than the usual (k * L)^2.
  bool raw = false;

  double c1() const { return stabilizer(k1); }
  double c2() const { return stabilizer(k2); }

 private:
  double stabilizer(double k) const {
    return raw ? k * dynamic_range * dynamic_range : (k * dynamic_range) * (k * dynamic_range);
  }
};

struct MssimOptions {
  SsimConstants constants;
  std::size_t window = 8;
  // window == stride tiles the image without overlap; stride 1 slides.
  std::size_t stride = 8;
};

struct QualityReport {
  double mse = 0.0;
  double psnr_db = 0.0;  // +inf when mse == 0
  double mssim = 1.0;
};

/// Throws DimensionMismatch.
double mse(const Image& a, const Image& b);

/// 10 log10(peak^2 / mse) with peak 255; +inf for identical images.
double psnr(const Image& a, const Image& b);
double psnr_from_mse(double mse, double peak = 255.0);

/// SSIM of two equally sized windows using population moments.
/// Throws DimensionMismatch.
double ssim_window(std::span<const double> p, std::span<const double> q,
                   const SsimConstants& consts = {});

/// Mean SSIM over a row-major grid of windows; trailing partial windows are
/// dropped. Window sums are accumulated in a fixed order. Throws
/// DimensionMismatch and TooSmall.
double mssim(const Image& a, const Image& b, const MssimOptions& options = {});

QualityReport evaluate(const Image& a, const Image& b, const MssimOptions& options = {});

}  // namespace waveq
