#include "waveq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "waveq/error.hpp"

namespace waveq {

void validate(const QuantParams& p) {
  if (p.n < 2 || p.n % 2 != 0) {
    throw Error(ErrorCode::kInvalidParams, "n must be even and >= 2 (got " + std::to_string(p.n) + ")");
  }
  if (!std::isfinite(p.eps) || p.eps <= 0.0) {
    throw Error(ErrorCode::kInvalidParams, "eps must be positive");
  }
  if (!std::isfinite(p.k1) || !std::isfinite(p.k2) || p.k1 < 0.0 || p.k2 < 0.0) {
    throw Error(ErrorCode::kInvalidParams, "k1 and k2 must be finite and non-negative");
  }
}

double weighted_mean(std::span<const double> values, double lo, double hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v >= lo && v <= hi) {
      sum += v;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kEmptyRange, "no value in range");
  return sum / static_cast<double>(count);
}

double weighted_std(std::span<const double> values, double lo, double hi) {
  const double mean = weighted_mean(values, lo, hi);
  double sq = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v >= lo && v <= hi) {
      sq += (v - mean) * (v - mean);
      ++count;
    }
  }
  return std::sqrt(sq / static_cast<double>(count));
}

namespace {

struct RangeStats {
  std::size_t count;
  double mean;
  double stddev;
};

// Statistics over a closed value range of an ascending-sorted sample.
class SortedSample {
 public:
  explicit SortedSample(std::span<const double> values) : v_(values.begin(), values.end()) {
    std::sort(v_.begin(), v_.end());
  }

  double min() const { return v_.front(); }
  double max() const { return v_.back(); }

  std::optional<RangeStats> stats(double lo, double hi) const {
    if (!(lo <= hi)) return std::nullopt;
    const auto first = std::lower_bound(v_.begin(), v_.end(), lo);
    const auto last = std::upper_bound(first, v_.end(), hi);
    if (first == last) return std::nullopt;
    const auto count = static_cast<std::size_t>(last - first);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) sum += *it;
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (auto it = first; it != last; ++it) sq += (*it - mean) * (*it - mean);
    return RangeStats{count, mean, std::sqrt(sq / static_cast<double>(count))};
  }

 private:
  std::vector<double> v_;
};

std::optional<Bin> make_bin(const SortedSample& s, double lo, double hi,
                            std::optional<double> recon = std::nullopt) {
  const auto st = s.stats(lo, hi);
  if (!st) return std::nullopt;
  // The quotient can land an ulp outside its own range.
  const double r = std::clamp(recon.value_or(st->mean), lo, hi);
  return Bin{lo, hi, r};
}

}  // namespace

Codebook build_codebook(std::span<const double> values, const QuantParams& p, ReconRule rule) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no coefficients to quantize");
  validate(p);
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "coefficient is not finite");
  }

  const SortedSample sample(values);
  const double a = sample.min();
  const double b = sample.max();
  if (a == b) return Codebook{{Bin{a, a, a}}};

  const double mu = sample.stats(a, b)->mean;
  double lower_edge = mu;          // T1
  double upper_edge = mu + p.eps;  // T2

  std::vector<Bin> lower;  // innermost first
  std::vector<Bin> upper;
  const int rounds = (p.n - 2) / 2;
  for (int round = 0; round < rounds; ++round) {
    if (const auto below = sample.stats(a, lower_edge)) {
      double t1 = std::max(a, below->mean - p.k1 * below->stddev);
      // Within eps of the minimum the outer tail would be empty and the
      // minimum stranded in the gap; the bin takes the rest of the side.
      if (t1 - p.eps < a) t1 = a;
      std::optional<double> recon;
      if (rule == ReconRule::kHalfRangeMean) recon = below->mean;
      if (auto bin = make_bin(sample, t1, lower_edge, recon)) lower.push_back(*bin);
      lower_edge = t1 - p.eps;
    }
    if (const auto above = sample.stats(upper_edge, b)) {
      double t2 = std::min(b, above->mean + p.k2 * above->stddev);
      if (t2 + p.eps > b) t2 = b;
      std::optional<double> recon;
      if (rule == ReconRule::kHalfRangeMean) recon = above->mean;
      if (auto bin = make_bin(sample, upper_edge, t2, recon)) upper.push_back(*bin);
      upper_edge = t2 + p.eps;
    }
  }
  if (auto tail = make_bin(sample, a, lower_edge)) lower.push_back(*tail);
  if (auto tail = make_bin(sample, upper_edge, b)) upper.push_back(*tail);

  Codebook c;
  c.bins.reserve(lower.size() + upper.size());
  c.bins.insert(c.bins.end(), lower.rbegin(), lower.rend());
  c.bins.insert(c.bins.end(), upper.begin(), upper.end());
  return c;
}

std::uint32_t bin_index(const Codebook& c, double v) {
  const auto& bins = c.bins;
  const auto it = std::lower_bound(bins.begin(), bins.end(), v,
                                   [](const Bin& bin, double x) { return bin.hi < x; });
  if (it == bins.end()) return static_cast<std::uint32_t>(bins.size() - 1);
  const auto i = static_cast<std::uint32_t>(it - bins.begin());
  if (it->lo <= v || i == 0) return i;
  // v sits in the gap between bins[i-1].hi and bins[i].lo.
  const double below = v - bins[i - 1].hi;
  const double above = it->lo - v;
  return above < below ? i : i - 1;
}

QuantizedSubband apply_codebook(const Matrix& m, const Codebook& c) {
  if (c.bins.empty()) throw Error(ErrorCode::kInvalidParams, "empty codebook");
  QuantizedSubband q{c, m.rows(), m.cols(), {}};
  q.indices.reserve(m.size());
  for (double v : m.values()) q.indices.push_back(bin_index(c, v));
  return q;
}

Matrix dequantize(const QuantizedSubband& q) {
  Matrix m(q.rows, q.cols);
  auto out = m.values();
  for (std::size_t i = 0; i < q.indices.size(); ++i) out[i] = q.codebook.bins[q.indices[i]].recon;
  return m;
}

namespace {

QuantizedSubband quantize_subband(const Matrix& m, const QuantParams& params, ReconRule rule) {
  return apply_codebook(m, build_codebook(m.values(), params, rule));
}

}  // namespace

QuantizedPyramid quantize_pyramid(const Pyramid& p, const QuantParams& params, ReconRule rule) {
  validate(params);
  if (p.details.size() != p.levels) {
    throw Error(ErrorCode::kDimensionMismatch, "pyramid detail count differs from its level count");
  }
  QuantizedPyramid qp;
  qp.rows = p.rows;
  qp.cols = p.cols;
  qp.levels = p.levels;
  qp.wavelet = p.wavelet;
  qp.params = params;
  qp.ll = p.ll;
  for (double& v : qp.ll.values()) v = static_cast<double>(static_cast<float>(v));
  qp.subbands.reserve(p.levels);
  for (const DetailLevel& d : p.details) {
    qp.subbands.push_back({quantize_subband(d.lh, params, rule), quantize_subband(d.hl, params, rule),
                           quantize_subband(d.hh, params, rule)});
  }
  return qp;
}

Pyramid dequantize_pyramid(const QuantizedPyramid& qp) {
  Pyramid p;
  p.levels = qp.levels;
  p.rows = qp.rows;
  p.cols = qp.cols;
  p.wavelet = qp.wavelet;
  p.ll = qp.ll;
  p.details.reserve(qp.subbands.size());
  for (const QuantizedLevel& q : qp.subbands) {
    p.details.push_back({dequantize(q.lh), dequantize(q.hl), dequantize(q.hh)});
  }
  return p;
}

namespace {

void require_positive_step(double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::kNonPositiveStep, "quantizer step must be > 0");
}

double sign_of(double y) { return y < 0.0 ? -1.0 : 1.0; }

}  // namespace

std::int64_t uniform_quantize(double y, double step) {
  require_positive_step(step);
  return static_cast<std::int64_t>(sign_of(y) * std::floor(std::abs(y) / step));
}

std::int64_t deadzone_quantize(double y, double step, double nz) {
  require_positive_step(step);
  if (std::abs(y) < -nz * step) return 0;
  return static_cast<std::int64_t>(sign_of(y) * std::floor((std::abs(y) + nz * step) / step));
}

double uniform_dequantize(std::int64_t q, double step, double r) {
  require_positive_step(step);
  if (q == 0) return 0.0;
  const double mag = (static_cast<double>(q < 0 ? -q : q) + r) * step;
  return q < 0 ? -mag : mag;
}

}  // namespace waveq
