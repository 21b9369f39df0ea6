#include "waveq/wavelet.hpp"

#include <string>

#include "waveq/error.hpp"

namespace waveq {

namespace {

// Whole-sample symmetric reflection of index i into [0, n). Handles filters
// longer than the signal by folding repeatedly (period 2n - 2).
std::size_t fold_symmetric(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * n - 2);
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  i %= len;
  if (i < 0) i += len;
  return static_cast<std::size_t>(i);
}

// `x` has even length; approx/detail have length x.size() / 2.
void analyze_even(std::span<const double> x, const WaveletSpec& w, std::span<double> approx,
                  std::span<double> detail) {
  const std::size_t n = x.size();
  const auto& lo = w.analysis_lowpass;
  const auto& hi = w.analysis_highpass;
  const std::size_t half = n / 2;

  if (w.extension == Extension::kPeriodic) {
    for (std::size_t k = 0; k < half; ++k) {
      double a = 0.0;
      double d = 0.0;
      for (std::size_t j = 0; j < lo.size(); ++j) {
        const double v = x[(2 * k + j) % n];
        a += lo[j] * v;
        d += hi[j] * v;
      }
      approx[k] = a;
      detail[k] = d;
    }
    return;
  }

  // Symmetric filters centered on even (lowpass) and odd (highpass) samples.
  const auto lo_c = static_cast<std::ptrdiff_t>(lo.size() / 2);
  const auto hi_c = static_cast<std::ptrdiff_t>(hi.size() / 2);
  for (std::size_t k = 0; k < half; ++k) {
    const auto even = static_cast<std::ptrdiff_t>(2 * k);
    double a = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      a += lo[j] * x[fold_symmetric(even + static_cast<std::ptrdiff_t>(j) - lo_c, n)];
    }
    double d = 0.0;
    for (std::size_t j = 0; j < hi.size(); ++j) {
      d += hi[j] * x[fold_symmetric(even + 1 + static_cast<std::ptrdiff_t>(j) - hi_c, n)];
    }
    approx[k] = a;
    detail[k] = d;
  }
}

// Writes 2 * approx.size() samples into `out`.
void synthesize_even(std::span<const double> approx, std::span<const double> detail,
                     const WaveletSpec& w, std::span<double> out) {
  const std::size_t n = 2 * approx.size();
  const auto& lo = w.synthesis_lowpass;
  const auto& hi = w.synthesis_highpass;

  if (w.extension == Extension::kPeriodic) {
    // Transpose of the periodic analysis: gather every (k, j) with
    // (2k + j) mod n == i. Tap order is fixed, so sums are reproducible.
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < lo.size(); ++j) {
        const std::size_t m = wrap(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j), n);
        if (m % 2 != 0) continue;
        acc += lo[j] * approx[m / 2] + hi[j] * detail[m / 2];
      }
      out[i] = acc;
    }
    return;
  }

  // Zero-interleaved subbands stay whole-sample symmetric about 0 and n-1,
  // so the upsampled sequences can be reflected like the input was.
  auto upsampled_low = [&](std::size_t m) { return m % 2 == 0 ? approx[m / 2] : 0.0; };
  auto upsampled_high = [&](std::size_t m) { return m % 2 == 1 ? detail[m / 2] : 0.0; };
  const auto lo_c = static_cast<std::ptrdiff_t>(lo.size() / 2);
  const auto hi_c = static_cast<std::ptrdiff_t>(hi.size() / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto base = static_cast<std::ptrdiff_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      acc += lo[j] * upsampled_low(fold_symmetric(base + static_cast<std::ptrdiff_t>(j) - lo_c, n));
    }
    for (std::size_t j = 0; j < hi.size(); ++j) {
      acc += hi[j] * upsampled_high(fold_symmetric(base + static_cast<std::ptrdiff_t>(j) - hi_c, n));
    }
    out[i] = acc;
  }
}

// Reusable scratch for one 1-D pass over rows or columns.
struct LineBuffers {
  std::vector<double> in;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> out;

  explicit LineBuffers(std::size_t len)
      : in(len + (len % 2)), lo((len + 1) / 2), hi((len + 1) / 2), out(len + (len % 2)) {}
};

void analyze_line(LineBuffers& buf, std::size_t len, const WaveletSpec& w) {
  if (len % 2 != 0) buf.in[len] = buf.in[len - 1];
  analyze_even(buf.in, w, buf.lo, buf.hi);
}

bool same_shape(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

std::string shape(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace

Analysis1D analyze_1d(std::span<const double> signal, const WaveletSpec& w) {
  if (signal.size() < 2) {
    throw Error(ErrorCode::kSignalTooShort,
                "signal length " + std::to_string(signal.size()) + " < 2");
  }
  LineBuffers buf(signal.size());
  std::copy(signal.begin(), signal.end(), buf.in.begin());
  analyze_line(buf, signal.size(), w);
  return {std::move(buf.lo), std::move(buf.hi)};
}

std::vector<double> synthesize_1d(std::span<const double> approx, std::span<const double> detail,
                                  const WaveletSpec& w, std::size_t out_len) {
  if (approx.size() != detail.size()) {
    throw Error(ErrorCode::kLengthMismatch, "approx has " + std::to_string(approx.size()) +
                                                " samples, detail has " +
                                                std::to_string(detail.size()));
  }
  const std::size_t full = 2 * approx.size();
  if (out_len == 0) out_len = full;
  if (out_len != full && out_len + 1 != full) {
    throw Error(ErrorCode::kLengthMismatch,
                "output length " + std::to_string(out_len) + " incompatible with " +
                    std::to_string(approx.size()) + " coefficients per band");
  }
  std::vector<double> out(full);
  if (full > 0) synthesize_even(approx, detail, w, out);
  out.resize(out_len);
  return out;
}

SubbandSet dwt2(const Matrix& m, const WaveletSpec& w) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::kTooSmall, "dwt2 needs at least 2x2, got " + shape(rows, cols));
  }
  const std::size_t hr = (rows + 1) / 2;
  const std::size_t hc = (cols + 1) / 2;

  // Horizontal pass: each row splits into lowpass and highpass halves.
  Matrix row_lo(rows, hc);
  Matrix row_hi(rows, hc);
  {
    LineBuffers buf(cols);
    for (std::size_t r = 0; r < rows; ++r) {
      auto src = m.row(r);
      std::copy(src.begin(), src.end(), buf.in.begin());
      analyze_line(buf, cols, w);
      std::copy(buf.lo.begin(), buf.lo.end(), row_lo.row(r).begin());
      std::copy(buf.hi.begin(), buf.hi.end(), row_hi.row(r).begin());
    }
  }

  SubbandSet out{Matrix(hr, hc), Matrix(hr, hc), Matrix(hr, hc), Matrix(hr, hc)};
  LineBuffers buf(rows);
  auto vertical = [&](const Matrix& src, Matrix& low, Matrix& high) {
    for (std::size_t c = 0; c < hc; ++c) {
      for (std::size_t r = 0; r < rows; ++r) buf.in[r] = src.at(r, c);
      analyze_line(buf, rows, w);
      for (std::size_t r = 0; r < hr; ++r) {
        low.at(r, c) = buf.lo[r];
        high.at(r, c) = buf.hi[r];
      }
    }
  };
  vertical(row_lo, out.ll, out.hl);
  vertical(row_hi, out.lh, out.hh);
  return out;
}

Matrix idwt2(const SubbandSet& s, const WaveletSpec& w, std::size_t out_rows,
             std::size_t out_cols) {
  if (!same_shape(s.ll, s.lh) || !same_shape(s.ll, s.hl) || !same_shape(s.ll, s.hh)) {
    throw Error(ErrorCode::kDimensionMismatch, "subbands differ in shape");
  }
  const std::size_t hr = (out_rows + 1) / 2;
  const std::size_t hc = (out_cols + 1) / 2;
  if (out_rows < 2 || out_cols < 2 || s.ll.rows() != hr || s.ll.cols() != hc) {
    throw Error(ErrorCode::kDimensionMismatch, "subbands " + shape(s.ll.rows(), s.ll.cols()) +
                                                   " cannot rebuild " +
                                                   shape(out_rows, out_cols));
  }

  // Vertical synthesis back to full height, still split horizontally.
  Matrix row_lo(out_rows, hc);
  Matrix row_hi(out_rows, hc);
  {
    const std::size_t full = 2 * hr;
    std::vector<double> lo(hr), hi(hr), line(full);
    auto vertical = [&](const Matrix& low, const Matrix& high, Matrix& dst) {
      for (std::size_t c = 0; c < hc; ++c) {
        for (std::size_t r = 0; r < hr; ++r) {
          lo[r] = low.at(r, c);
          hi[r] = high.at(r, c);
        }
        synthesize_even(lo, hi, w, line);
        for (std::size_t r = 0; r < out_rows; ++r) dst.at(r, c) = line[r];
      }
    };
    vertical(s.ll, s.hl, row_lo);
    vertical(s.lh, s.hh, row_hi);
  }

  Matrix out(out_rows, out_cols);
  std::vector<double> line(2 * hc);
  for (std::size_t r = 0; r < out_rows; ++r) {
    synthesize_even(row_lo.row(r), row_hi.row(r), w, line);
    std::copy(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(out_cols),
              out.row(r).begin());
  }
  return out;
}

std::pair<std::size_t, std::size_t> subband_dims(std::size_t rows, std::size_t cols,
                                                 std::size_t level) {
  for (std::size_t i = 0; i < level; ++i) {
    rows = (rows + 1) / 2;
    cols = (cols + 1) / 2;
  }
  return {rows, cols};
}

bool admits_levels(std::size_t rows, std::size_t cols, std::size_t levels) {
  for (std::size_t i = 0; i < levels; ++i) {
    if (rows < 2 || cols < 2) return false;
    rows = (rows + 1) / 2;
    cols = (cols + 1) / 2;
  }
  return true;
}

Pyramid decompose(const Matrix& m, std::size_t levels, const WaveletSpec& w) {
  if (levels == 0 || !admits_levels(m.rows(), m.cols(), levels)) {
    throw Error(ErrorCode::kTooManyLevels, shape(m.rows(), m.cols()) + " does not admit " +
                                               std::to_string(levels) + " level(s)");
  }
  Pyramid p;
  p.levels = levels;
  p.rows = m.rows();
  p.cols = m.cols();
  p.wavelet = w.id;
  p.details.reserve(levels);
  Matrix current = m;
  for (std::size_t level = 0; level < levels; ++level) {
    SubbandSet s = dwt2(current, w);
    p.details.push_back({std::move(s.lh), std::move(s.hl), std::move(s.hh)});
    current = std::move(s.ll);
  }
  p.ll = std::move(current);
  return p;
}

Matrix reconstruct(const Pyramid& p, const WaveletSpec& w) {
  if (w.id != p.wavelet) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pyramid was built with wavelet " + wavelet(p.wavelet).name + ", not " + w.name);
  }
  if (p.levels == 0 || p.details.size() != p.levels ||
      !admits_levels(p.rows, p.cols, p.levels)) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent pyramid levels");
  }
  Matrix current = p.ll;
  for (std::size_t level = p.levels; level-- > 0;) {
    const auto [rows, cols] = subband_dims(p.rows, p.cols, level);
    const DetailLevel& d = p.details[level];
    current = idwt2(SubbandSet{std::move(current), d.lh, d.hl, d.hh}, w, rows, cols);
  }
  return current;
}

Matrix reconstruct(const Pyramid& p) { return reconstruct(p, wavelet(p.wavelet)); }

}  // namespace waveq
