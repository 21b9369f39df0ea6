#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "waveq/image.hpp"

namespace waveq {

// Numeric values are persisted in the container header; never renumber.
enum class WaveletId : std::uint8_t {
  kHaar = 0,
  kDb9 = 1,
  kCdf97 = 2,
};

// How a filter bank treats the signal boundary.
//  kPeriodic:  circular convolution. Used by the orthogonal wavelets, where it
//              keeps the non-expansive transform exactly orthonormal.
//  kSymmetric: whole-sample symmetric extension (x[-i] = x[i]). Used by the
//              odd-length symmetric biorthogonal filters (CDF 9/7).
enum class Extension { kPeriodic, kSymmetric };

struct WaveletSpec {
  WaveletId id;
  std::string name;
  Extension extension;
  bool orthogonal;
  std::vector<double> analysis_lowpass;
  std::vector<double> analysis_highpass;
  std::vector<double> synthesis_lowpass;
  std::vector<double> synthesis_highpass;
};

const WaveletSpec& wavelet(WaveletId id);
/// Accepts "haar", "db9" and "cdf97". Throws UnknownWavelet.
const WaveletSpec& wavelet_by_name(std::string_view name);
/// Throws UnknownWavelet for ids outside the enum.
const WaveletSpec& wavelet_by_code(std::uint8_t code);
std::span<const WaveletId> all_wavelets();

struct Analysis1D {
  std::vector<double> approx;
  std::vector<double> detail;
};

/// One analysis stage. Odd-length signals are extended by repeating the last
/// sample, so both outputs have ceil(len/2) entries. Throws SignalTooShort
/// for len < 2.
Analysis1D analyze_1d(std::span<const double> signal, const WaveletSpec& w);

/// Inverse of analyze_1d. `out_len` (default 2 * approx.size()) crops the
/// result back to an odd original length. Throws LengthMismatch.
std::vector<double> synthesize_1d(std::span<const double> approx, std::span<const double> detail,
                                  const WaveletSpec& w, std::size_t out_len = 0);

// Orientation:
//   ll  lowpass along rows and columns
//   lh  highpass along rows (horizontal differences), lowpass along columns
//   hl  lowpass along rows, highpass along columns (vertical differences)
//   hh  highpass in both directions
struct SubbandSet {
  Matrix ll;
  Matrix lh;
  Matrix hl;
  Matrix hh;
};

/// Separable single-level transform: rows first, then columns. Every subband
/// is ceil(rows/2) x ceil(cols/2). Throws TooSmall when either side is < 2.
SubbandSet dwt2(const Matrix& m, const WaveletSpec& w);

/// Throws DimensionMismatch when the subbands do not share one shape or the
/// shape is not ceil-half of out_rows x out_cols.
Matrix idwt2(const SubbandSet& s, const WaveletSpec& w, std::size_t out_rows,
             std::size_t out_cols);

struct DetailLevel {
  Matrix lh;
  Matrix hl;
  Matrix hh;

  friend bool operator==(const DetailLevel&, const DetailLevel&) = default;
};

struct Pyramid {
  std::size_t levels = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  WaveletId wavelet = WaveletId::kDb9;
  Matrix ll;
  // details[0] is the finest level (the first dwt2 applied).
  std::vector<DetailLevel> details;
};

/// Shape of the subbands produced at `level` (1-based) from rows x cols.
std::pair<std::size_t, std::size_t> subband_dims(std::size_t rows, std::size_t cols,
                                                 std::size_t level);

/// True when rows x cols admits `levels` halvings (every intermediate side >= 2).
bool admits_levels(std::size_t rows, std::size_t cols, std::size_t levels);

/// Throws TooManyLevels when the dimensions cannot be halved `levels` times.
Pyramid decompose(const Matrix& m, std::size_t levels, const WaveletSpec& w);

/// Throws DimensionMismatch on inconsistent pyramids or a wavelet that differs
/// from the one recorded in `p`.
Matrix reconstruct(const Pyramid& p, const WaveletSpec& w);
Matrix reconstruct(const Pyramid& p);

}  // namespace waveq
