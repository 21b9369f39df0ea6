#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracle.hpp"
#include "waveq/codec.hpp"
#include "waveq/error.hpp"
#include "waveq/pipeline.hpp"

using namespace waveq;

namespace {

ErrorCode decode_error(std::span<const std::uint8_t> bytes, std::size_t* offset = nullptr) {
  try {
    decode(bytes);
  } catch (const Error& e) {
    if (offset && e.offset()) *offset = *e.offset();
    return e.code();
  }
  return ErrorCode::kIo;  // decoded fine
}

QuantizedPyramid constant_pyramid() {
  CompressOptions o;
  o.params.n = 4;
  return compress(Image(16, 16, std::uint8_t{77}), o);
}

QuantizedSubband with_indices(std::vector<std::uint32_t> idx, std::size_t bins) {
  QuantizedSubband q;
  for (std::size_t i = 0; i < bins; ++i) q.codebook.bins.push_back({double(2 * i), double(2 * i + 1), double(2 * i)});
  q.rows = 1;
  q.cols = idx.size();
  q.indices = std::move(idx);
  return q;
}

}  // namespace

TEST(IndexBits, CeilLog2) {
  EXPECT_EQ(index_bits(1), 0u);
  EXPECT_EQ(index_bits(2), 1u);
  EXPECT_EQ(index_bits(3), 2u);
  EXPECT_EQ(index_bits(4), 2u);
  EXPECT_EQ(index_bits(5), 3u);
  EXPECT_EQ(index_bits(10), 4u);
}

TEST(Encode, HeaderLayout) {
  const QuantizedPyramid qp = constant_pyramid();
  const auto bytes = encode(qp);
  ASSERT_GT(bytes.size(), 48u);
  EXPECT_EQ(std::memcmp(bytes.data(), "WQ01", 4), 0);
  EXPECT_EQ(bytes[4] | bytes[5] << 8, 1);                 // version
  EXPECT_EQ(bytes[6] | bytes[7] << 8, 16);                // rows
  EXPECT_EQ(bytes[10] | bytes[11] << 8, 16);              // cols
  EXPECT_EQ(bytes[14], 3);                                // levels
  EXPECT_EQ(bytes[15], static_cast<int>(WaveletId::kDb9));
  EXPECT_EQ(bytes[16] | bytes[17] << 8, 4);               // n
  double k1;
  std::memcpy(&k1, bytes.data() + 18, 8);
  EXPECT_EQ(k1, 1.0);
  EXPECT_EQ(bytes[42] | bytes[43] << 8, 2);               // LL rows
}

TEST(Encode, Deterministic) {
  const QuantizedPyramid qp = constant_pyramid();
  EXPECT_EQ(encode(qp), encode(qp));
}

TEST(RoundTrip, ConstantPyramid) {
  const QuantizedPyramid qp = constant_pyramid();
  // Single-bin subbands carry no index bits.
  for (const auto& level : qp.subbands) EXPECT_EQ(level.lh.codebook.size(), 1u);
  EXPECT_EQ(decode(encode(qp)), qp);
}

TEST(RoundTrip, RandomImagePyramid) {
  std::mt19937_64 g(64);
  for (WaveletId w : all_wavelets()) {
    CompressOptions o;
    o.params.n = 6;
    o.wavelet = w;
    const QuantizedPyramid qp = compress(oracle::random_image(g, 64, 64), o);
    EXPECT_EQ(decode(encode(qp)), qp);
  }
}

TEST(RoundTrip, RandomStructures) {
  std::mt19937_64 g(99);
  for (int i = 0; i < 200; ++i) {
    const QuantizedPyramid qp = oracle::random_quantized_pyramid(g);
    ASSERT_EQ(decode(encode(qp)), qp) << "case " << i;
  }
}

TEST(Decode, BadMagic) {
  auto bytes = encode(constant_pyramid());
  bytes[0] ^= 0x01;
  std::size_t offset = 99;
  EXPECT_EQ(decode_error(bytes, &offset), ErrorCode::kBadMagic);
  EXPECT_EQ(offset, 0u);
}

TEST(Decode, UnsupportedVersion) {
  auto bytes = encode(constant_pyramid());
  bytes[4] = 2;
  EXPECT_EQ(decode_error(bytes), ErrorCode::kVersionUnsupported);
}

TEST(Decode, EveryTruncationIsCorruptPayload) {
  std::mt19937_64 g(5);
  CompressOptions o;
  o.levels = 2;
  o.params.n = 6;
  const auto bytes = encode(compress(oracle::random_image(g, 20, 13), o));
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    std::size_t offset = 0;
    ASSERT_EQ(decode_error(std::span(bytes.data(), len), &offset), ErrorCode::kCorruptPayload)
        << "prefix " << len;
    EXPECT_LE(offset, len);
  }
}

TEST(Decode, TrailingBytes) {
  auto bytes = encode(constant_pyramid());
  bytes.push_back(0);
  EXPECT_EQ(decode_error(bytes), ErrorCode::kCorruptPayload);
}

TEST(Decode, RejectsOutOfRangeIndexAndPadding) {
  // One 1x3 subband level is not a valid pyramid, so patch bytes of a real
  // container instead: 2x2 image, one level, 3-bin codebooks.
  QuantizedPyramid qp;
  qp.rows = 2;
  qp.cols = 2;
  qp.levels = 1;
  qp.wavelet = WaveletId::kHaar;
  qp.params.n = 4;
  qp.ll = Matrix(1, 1, 5.0);
  const auto sb = with_indices({2}, 3);
  qp.subbands.push_back({sb, sb, sb});
  auto bytes = encode(qp);
  ASSERT_EQ(decode(bytes), qp);
  // Last byte holds the HH index (2 bits, value 2).
  auto bad_index = bytes;
  bad_index.back() = 0x03;
  EXPECT_EQ(decode_error(bad_index), ErrorCode::kCorruptPayload);
  auto bad_padding = bytes;
  bad_padding.back() |= 0x80;
  EXPECT_EQ(decode_error(bad_padding), ErrorCode::kCorruptPayload);
}

TEST(Decode, HugeDeclaredSizeFailsCleanly) {
  auto bytes = encode(constant_pyramid());
  bytes[6] = bytes[7] = bytes[8] = bytes[9] = 0xFF;
  EXPECT_EQ(decode_error(bytes), ErrorCode::kCorruptPayload);
}

TEST(Decode, ByteFlipFuzzNeverCrashes) {
  std::mt19937_64 g(2024);
  std::vector<std::vector<std::uint8_t>> seeds;
  for (int i = 0; i < 8; ++i) seeds.push_back(encode(oracle::random_quantized_pyramid(g)));
  for (int i = 0; i < 2000; ++i) {
    auto bytes = seeds[g() % seeds.size()];
    const int flips = 1 + int(g() % 4);
    for (int f = 0; f < flips; ++f) bytes[g() % bytes.size()] ^= std::uint8_t(1u << (g() % 8));
    if (g() % 2) bytes.resize(g() % (bytes.size() + 1));
    try {
      const QuantizedPyramid qp = decode(bytes);
      EXPECT_EQ(encode(qp), bytes);
    } catch (const Error&) {
    }
  }
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy_estimate(with_indices({1, 1, 1, 1}, 2)), 0.0);
  EXPECT_DOUBLE_EQ(entropy_estimate(with_indices({0, 1, 0, 1}, 2)), 1.0);
  EXPECT_DOUBLE_EQ(entropy_estimate(with_indices({0, 1, 2, 3, 3, 2, 1, 0}, 4)), 2.0);
  EXPECT_LT(entropy_estimate(with_indices({0, 0, 0, 1}, 2)), 1.0);
}

TEST(Entropy, BoundedByIndexWidth) {
  std::mt19937_64 g(31);
  for (int i = 0; i < 50; ++i) {
    const std::size_t bins = 1 + g() % 10;
    std::vector<std::uint32_t> idx(1 + g() % 200);
    for (auto& v : idx) v = std::uint32_t(g() % bins);
    const double h = entropy_estimate(with_indices(idx, bins));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(double(bins)) + 1e-12);
  }
}

TEST(SizeReport, ConstantImage) {
  const QuantizedPyramid qp = constant_pyramid();
  const SizeReport r = size_report(qp);
  EXPECT_EQ(r.container_bytes, encode(qp).size());
  ASSERT_EQ(r.subbands.size(), 9u);
  for (const auto& s : r.subbands) EXPECT_EQ(s.entropy_bits_per_coeff, 0.0);
  EXPECT_EQ(r.estimated_entropy_coded_bytes, r.container_bytes);
  EXPECT_EQ(std::string(r.subbands[4].orientation), "HL");
  EXPECT_EQ(r.subbands[4].level, 2u);
}

TEST(SizeReport, EstimateNeverExceedsContainer) {
  std::mt19937_64 g(17);
  CompressOptions o;
  o.params.n = 10;
  const QuantizedPyramid qp = compress(oracle::random_image(g, 64, 64), o);
  const SizeReport r = size_report(qp);
  EXPECT_LE(r.estimated_entropy_coded_bytes, r.container_bytes);
  for (const auto& s : r.subbands) {
    EXPECT_LE(s.entropy_bits_per_coeff, std::log2(double(s.bins)) + 1e-12);
  }
}
