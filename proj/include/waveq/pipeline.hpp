#pragma once

#include <cstddef>

#include "waveq/image.hpp"
#include "waveq/quantizer.hpp"
#include "waveq/wavelet.hpp"

namespace waveq {

struct CompressOptions {
  std::size_t levels = 3;
  WaveletId wavelet = WaveletId::kDb9;
  QuantParams params;
  ReconRule rule = ReconRule::kBinCentroid;
};

// Image -> DWT pyramid -> per-subband codebooks.
QuantizedPyramid compress(const Image& img, const CompressOptions& options);

// Dequantize, inverse DWT, round and clamp to 8 bits.
Image decompress(const QuantizedPyramid& qp);

}  // namespace waveq
