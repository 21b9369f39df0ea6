#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "waveq/quantizer.hpp"

namespace waveq {

// Container layout, version 1. All integers little-endian.
//
//   "WQ01"  u16 version  u32 rows  u32 cols  u8 levels  u8 wavelet-id
//   u16 n  f64 k1  f64 k2  f64 eps
//   LL:  u32 rows  u32 cols  f32[rows*cols] row-major
//   for level 1 (finest) .. levels, for subband LH, HL, HH:
//     u16 bin_count  bin_count x (f64 lo, f64 hi, f64 recon)
//     indices at ceil(log2(bin_count)) bits each, LSB-first, padded to a byte
//
// Subband shapes are not stored; they follow from rows, cols and the level.
inline constexpr std::uint16_t kContainerVersion = 1;

/// Bits per index for a codebook of `bin_count` bins (0 for a single bin).
unsigned index_bits(std::size_t bin_count);

std::vector<std::uint8_t> encode(const QuantizedPyramid& qp);

/// Throws BadMagic, VersionUnsupported or CorruptPayload (with the byte
/// offset). Never reads outside `bytes`.
QuantizedPyramid decode(std::span<const std::uint8_t> bytes);

/// Shannon entropy of the empirical index distribution, bits per coefficient.
double entropy_estimate(const QuantizedSubband& q);

struct SubbandSize {
  std::size_t level;  // 1-based
  char orientation[3];
  std::size_t bins;
  double entropy_bits_per_coeff;
};

struct SizeReport {
  std::size_t container_bytes = 0;
  std::vector<SubbandSize> subbands;
  // Container bytes with every index map replaced by its entropy bound.
  std::size_t estimated_entropy_coded_bytes = 0;
};

SizeReport size_report(const QuantizedPyramid& qp);

}  // namespace waveq
