#include "waveq/pipeline.hpp"

namespace waveq {

QuantizedPyramid compress(const Image& img, const CompressOptions& options) {
  validate(options.params);
  const Pyramid p = decompose(to_matrix(img), options.levels, wavelet(options.wavelet));
  return quantize_pyramid(p, options.params, options.rule);
}

Image decompress(const QuantizedPyramid& qp) {
  return from_matrix(reconstruct(dequantize_pyramid(qp)));
}

}  // namespace waveq
