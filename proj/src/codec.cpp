#include "waveq/codec.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "waveq/error.hpp"

namespace waveq {

namespace {

constexpr std::uint8_t kMagic[4] = {'W', 'Q', '0', '1'};
// Bounds on what decode will allocate for a header it has not yet verified.
constexpr std::size_t kMaxSide = 1u << 20;
constexpr std::size_t kMaxPixels = 1u << 26;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  void indices(std::span<const std::uint32_t> idx, unsigned width) {
    if (width == 0) return;
    std::uint64_t acc = 0;
    unsigned filled = 0;
    for (std::uint32_t v : idx) {
      acc |= static_cast<std::uint64_t>(v) << filled;
      filled += width;
      while (filled >= 8) {
        out_.push_back(static_cast<std::uint8_t>(acc & 0xFF));
        acc >>= 8;
        filled -= 8;
      }
    }
    if (filled > 0) out_.push_back(static_cast<std::uint8_t>(acc & 0xFF));
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kCorruptPayload, what, pos_);
  }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw Error(ErrorCode::kCorruptPayload, what, at);
  }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) fail(std::string("truncated ") + what);
  }

  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get(1, what)); }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(get(4, what)); }
  float f32(const char* what) { return std::bit_cast<float>(static_cast<std::uint32_t>(get(4, what))); }
  double f64(const char* what) { return std::bit_cast<double>(get(8, what)); }

  void indices(std::vector<std::uint32_t>& out, std::size_t count, unsigned width,
               std::size_t bin_count) {
    if (width == 0) {
      out.assign(count, 0);
      return;
    }
    const std::size_t nbytes = (count * width + 7) / 8;
    need(nbytes, "index map");
    out.resize(count);
    const std::size_t start = pos_;
    std::uint64_t acc = 0;
    unsigned filled = 0;
    std::size_t next = start;
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    for (std::size_t i = 0; i < count; ++i) {
      while (filled < width) {
        acc |= static_cast<std::uint64_t>(bytes_[next++]) << filled;
        filled += 8;
      }
      const auto v = static_cast<std::uint32_t>(acc & mask);
      acc >>= width;
      filled -= width;
      if (v >= bin_count) fail_at("index exceeds bin count", start + (i * width) / 8);
      out[i] = v;
    }
    if (acc != 0) fail_at("non-zero index padding", start + nbytes - 1);
    pos_ = start + nbytes;
  }

 private:
  std::uint64_t get(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void encode_subband(Writer& w, const QuantizedSubband& q) {
  const std::size_t bins = q.codebook.size();
  if (bins == 0 || bins > 0xFFFF) {
    throw Error(ErrorCode::kInvalidParams, "codebook size " + std::to_string(bins) +
                                               " does not fit the container");
  }
  w.u16(static_cast<std::uint16_t>(bins));
  for (const Bin& b : q.codebook.bins) {
    w.f64(b.lo);
    w.f64(b.hi);
    w.f64(b.recon);
  }
  w.indices(q.indices, index_bits(bins));
}

QuantizedSubband decode_subband(Reader& r, std::size_t rows, std::size_t cols, int n) {
  QuantizedSubband q;
  q.rows = rows;
  q.cols = cols;
  const std::size_t at = r.pos();
  const std::size_t bins = r.u16("bin count");
  if (bins == 0 || bins > static_cast<std::size_t>(n)) {
    r.fail_at("bin count " + std::to_string(bins) + " outside [1, n]", at);
  }
  r.need(bins * 24, "codebook");
  q.codebook.bins.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const std::size_t bin_at = r.pos();
    Bin b;
    b.lo = r.f64("bin lo");
    b.hi = r.f64("bin hi");
    b.recon = r.f64("bin recon");
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !std::isfinite(b.recon) ||
        !(b.lo <= b.recon && b.recon <= b.hi)) {
      r.fail_at("malformed bin", bin_at);
    }
    if (i > 0 && !(q.codebook.bins.back().hi < b.lo)) r.fail_at("bins overlap or unsorted", bin_at);
    q.codebook.bins.push_back(b);
  }
  r.indices(q.indices, rows * cols, index_bits(bins), bins);
  return q;
}

}  // namespace

unsigned index_bits(std::size_t bin_count) {
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < bin_count) ++bits;
  return bits;
}

std::vector<std::uint8_t> encode(const QuantizedPyramid& qp) {
  if (qp.levels == 0 || qp.levels > 0xFF || qp.subbands.size() != qp.levels ||
      qp.rows > 0xFFFFFFFFu || qp.cols > 0xFFFFFFFFu || qp.params.n > 0xFFFF || qp.params.n < 0) {
    throw Error(ErrorCode::kInvalidParams, "quantized pyramid does not fit the container");
  }
  Writer w;
  w.bytes(kMagic);
  w.u16(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(qp.rows));
  w.u32(static_cast<std::uint32_t>(qp.cols));
  w.u8(static_cast<std::uint8_t>(qp.levels));
  w.u8(static_cast<std::uint8_t>(qp.wavelet));
  w.u16(static_cast<std::uint16_t>(qp.params.n));
  w.f64(qp.params.k1);
  w.f64(qp.params.k2);
  w.f64(qp.params.eps);
  w.u32(static_cast<std::uint32_t>(qp.ll.rows()));
  w.u32(static_cast<std::uint32_t>(qp.ll.cols()));
  for (double v : qp.ll.values()) w.f32(static_cast<float>(v));
  for (const QuantizedLevel& level : qp.subbands) {
    encode_subband(w, level.lh);
    encode_subband(w, level.hl);
    encode_subband(w, level.hh);
  }
  return w.take();
}

QuantizedPyramid decode(std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (i >= bytes.size()) {
      throw Error(ErrorCode::kCorruptPayload, "truncated magic", i);
    }
    if (bytes[i] != kMagic[i]) throw Error(ErrorCode::kBadMagic, "not a WQ01 container", i);
  }
  Reader r(bytes, 4);
  const auto version = r.u16("version");
  if (version != kContainerVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "container version " + std::to_string(version), 4);
  }
  QuantizedPyramid qp;
  const std::size_t dims_at = r.pos();
  qp.rows = r.u32("rows");
  qp.cols = r.u32("cols");
  qp.levels = r.u8("levels");
  if (qp.rows == 0 || qp.cols == 0 || qp.rows > kMaxSide || qp.cols > kMaxSide ||
      qp.rows * qp.cols > kMaxPixels ||
      qp.levels == 0 || !admits_levels(qp.rows, qp.cols, qp.levels)) {
    r.fail_at("dimensions or level count out of range", dims_at);
  }
  const std::size_t wavelet_at = r.pos();
  const auto wavelet_code = r.u8("wavelet id");
  if (wavelet_code > static_cast<std::uint8_t>(WaveletId::kCdf97)) {
    r.fail_at("unknown wavelet id " + std::to_string(wavelet_code), wavelet_at);
  }
  qp.wavelet = static_cast<WaveletId>(wavelet_code);
  const std::size_t params_at = r.pos();
  qp.params.n = r.u16("n");
  qp.params.k1 = r.f64("k1");
  qp.params.k2 = r.f64("k2");
  qp.params.eps = r.f64("eps");
  try {
    validate(qp.params);
  } catch (const Error& e) {
    r.fail_at(e.what(), params_at);
  }

  const auto [ll_rows, ll_cols] = subband_dims(qp.rows, qp.cols, qp.levels);
  const std::size_t ll_at = r.pos();
  if (r.u32("LL rows") != ll_rows || r.u32("LL cols") != ll_cols) {
    r.fail_at("LL shape disagrees with the header", ll_at);
  }
  r.need(ll_rows * ll_cols * 4, "LL block");
  std::vector<double> ll(ll_rows * ll_cols);
  for (double& v : ll) {
    const std::size_t at = r.pos();
    v = r.f32("LL value");
    if (!std::isfinite(v)) r.fail_at("non-finite LL value", at);
  }
  qp.ll = Matrix(ll_rows, ll_cols, std::move(ll));

  qp.subbands.reserve(qp.levels);
  for (std::size_t level = 1; level <= qp.levels; ++level) {
    const auto [rows, cols] = subband_dims(qp.rows, qp.cols, level);
    QuantizedLevel q;
    q.lh = decode_subband(r, rows, cols, qp.params.n);
    q.hl = decode_subband(r, rows, cols, qp.params.n);
    q.hh = decode_subband(r, rows, cols, qp.params.n);
    qp.subbands.push_back(std::move(q));
  }
  if (r.remaining() != 0) r.fail("trailing bytes after last subband");
  return qp;
}

double entropy_estimate(const QuantizedSubband& q) {
  if (q.indices.empty()) return 0.0;
  std::vector<std::size_t> counts(q.codebook.size(), 0);
  for (std::uint32_t i : q.indices) {
    if (i >= counts.size()) counts.resize(i + 1, 0);
    ++counts[i];
  }
  const auto total = static_cast<double>(q.indices.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / total;
    h -= f * std::log2(f);
  }
  // -0.0 for a single symbol.
  return h <= 0.0 ? 0.0 : h;
}

SizeReport size_report(const QuantizedPyramid& qp) {
  SizeReport report;
  report.container_bytes = encode(qp).size();
  std::size_t packed = 0;
  double entropy_bits = 0.0;
  static constexpr const char* kNames[3] = {"LH", "HL", "HH"};
  for (std::size_t level = 0; level < qp.subbands.size(); ++level) {
    const QuantizedLevel& l = qp.subbands[level];
    const QuantizedSubband* bands[3] = {&l.lh, &l.hl, &l.hh};
    for (int b = 0; b < 3; ++b) {
      const QuantizedSubband& q = *bands[b];
      const double h = entropy_estimate(q);
      SubbandSize s{level + 1, {kNames[b][0], kNames[b][1], '\0'}, q.codebook.size(), h};
      report.subbands.push_back(s);
      packed += (q.indices.size() * index_bits(q.codebook.size()) + 7) / 8;
      entropy_bits += h * static_cast<double>(q.indices.size());
    }
  }
  report.estimated_entropy_coded_bytes =
      report.container_bytes - packed + static_cast<std::size_t>(std::ceil(entropy_bits / 8.0));
  return report;
}

}  // namespace waveq
