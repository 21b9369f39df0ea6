#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "waveq/image.hpp"
#include "waveq/wavelet.hpp"

namespace waveq {

struct QuantParams {
  int n = 2;          // number of quantized values; even, >= 2
  double k1 = 1.0;    // spread below the running threshold
  double k2 = 1.0;    // spread above the running threshold
  double eps = 0.001; // gap separating consecutive thresholds

  friend bool operator==(const QuantParams&, const QuantParams&) = default;
};

/// Throws InvalidParams unless n is even and >= 2, eps > 0, k1, k2 >= 0 and
/// all values finite.
void validate(const QuantParams& p);

// Which value stands in for the coefficients of an interior bin [t1, T1].
//  kBinCentroid:   mean of the coefficients inside the bin itself.
//  kHalfRangeMean: the mean used to place the bin, taken over the whole
//                  remaining half-range [a, T1] (or [T2, b]).
// Tail bins use their own mean under both rules.
enum class ReconRule : std::uint8_t { kBinCentroid, kHalfRangeMean };

struct Bin {
  double lo;
  double hi;
  double recon;

  friend bool operator==(const Bin&, const Bin&) = default;
};

// Bins sorted ascending, pairwise disjoint, lo <= recon <= hi.
struct Codebook {
  std::vector<Bin> bins;

  std::size_t size() const noexcept { return bins.size(); }
  friend bool operator==(const Codebook&, const Codebook&) = default;
};

struct QuantizedSubband {
  Codebook codebook;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> indices;  // row-major, each < codebook.size()

  friend bool operator==(const QuantizedSubband&, const QuantizedSubband&) = default;
};

struct QuantizedLevel {
  QuantizedSubband lh;
  QuantizedSubband hl;
  QuantizedSubband hh;

  friend bool operator==(const QuantizedLevel&, const QuantizedLevel&) = default;
};

// LL is held at f32 precision, the width the container stores it at.
struct QuantizedPyramid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t levels = 0;
  WaveletId wavelet = WaveletId::kDb9;
  QuantParams params;
  Matrix ll;
  std::vector<QuantizedLevel> subbands;  // [0] is the finest level

  friend bool operator==(const QuantizedPyramid&, const QuantizedPyramid&) = default;
};

/// Mean of the values inside the closed range [lo, hi]. Throws EmptyRange.
double weighted_mean(std::span<const double> values, double lo, double hi);

/// Population standard deviation of the values inside [lo, hi]. Throws EmptyRange.
double weighted_std(std::span<const double> values, double lo, double hi);

/// Recursive mean/sigma codebook for one detail subband.
///
/// Starting from the global mean, each round splits off one bin on either
/// side: the bin below reaches from mean-k1*sigma of the remaining lower
/// range up to the current lower threshold, and symmetrically above. After
/// (n-2)/2 rounds the two remaining tails become the outermost bins. Each new
/// threshold is pushed eps past the previous bin edge. Thresholds are clamped
/// into [min, max] (snapping to the extreme when within eps of it, so the
/// extreme value cannot fall into a gap) and bins that hold no value are
/// dropped, so the result has
/// at most n bins. When every value is equal the result is the single bin
/// [v, v].
///
/// Throws EmptyInput for an empty span and InvalidParams for bad `p`.
Codebook build_codebook(std::span<const double> values, const QuantParams& p,
                        ReconRule rule = ReconRule::kBinCentroid);

/// Index of the bin that holds `v`. Values between bins go to the bin with the
/// nearer edge (ties to the lower bin); values outside the codebook go to the
/// first or last bin.
std::uint32_t bin_index(const Codebook& c, double v);

/// Throws InvalidParams on an empty codebook.
QuantizedSubband apply_codebook(const Matrix& m, const Codebook& c);

Matrix dequantize(const QuantizedSubband& q);

/// Copies LL and gives every detail subband its own codebook built from its
/// own coefficients.
QuantizedPyramid quantize_pyramid(const Pyramid& p, const QuantParams& params,
                                  ReconRule rule = ReconRule::kBinCentroid);

Pyramid dequantize_pyramid(const QuantizedPyramid& qp);

// Scalar baselines. sign(0) is taken as +1.

/// q = sign(y) * floor(|y| / step). Throws NonPositiveStep.
std::int64_t uniform_quantize(double y, double step);

/// q = 0 when |y| < -nz*step, else sign(y) * floor((|y| + nz*step) / step).
/// nz <= 0 widens the zero bin. Throws NonPositiveStep.
std::int64_t deadzone_quantize(double y, double step, double nz);

/// sign(q) * (|q| + r) * step for q != 0, else 0. Throws NonPositiveStep.
double uniform_dequantize(std::int64_t q, double step, double r = 0.5);

}  // namespace waveq
