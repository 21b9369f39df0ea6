#include "waveq/image.hpp"

#include <cmath>
#include <string>

#include "waveq/error.hpp"

namespace waveq {

Image::Image(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pixel count " + std::to_string(pixels_.size()) + " != " +
                    std::to_string(width_) + "x" + std::to_string(height_));
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "value count " + std::to_string(values_.size()) + " != " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal token. Values beyond `limit` are reported as-is up to
  // the limit + 1 so the caller can tell "too big" from "malformed".
  std::uint64_t read_uint(const char* what, ErrorCode code, std::uint64_t limit) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > limit) value = limit + 1;
      ++pos_;
    }
    if (pos_ == start) {
      throw Error(code, std::string("expected ") + what, start);
    }
    if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw Error(code, std::string("unexpected byte after ") + what, pos_);
    }
    return value;
  }

  std::uint8_t peek() const { return bytes_[pos_]; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr std::uint64_t kMaxDimension = 1u << 30;

}  // namespace

Image load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw Error(ErrorCode::kMalformedHeader, "missing P5/P2 magic", 0);
  }
  const bool binary = bytes[1] == '5';
  HeaderReader reader(bytes.subspan(0));
  reader.advance();
  reader.advance();
  if (reader.remaining() == 0 || (!is_space(reader.peek()) && reader.peek() != '#')) {
    throw Error(ErrorCode::kMalformedHeader, "expected whitespace after magic", reader.pos());
  }

  const std::size_t width_at = reader.pos();
  const auto width = reader.read_uint("width", ErrorCode::kMalformedHeader, kMaxDimension);
  const auto height = reader.read_uint("height", ErrorCode::kMalformedHeader, kMaxDimension);
  if (width == 0 || height == 0 || width > kMaxDimension || height > kMaxDimension) {
    throw Error(ErrorCode::kMalformedHeader, "image dimensions out of range", width_at);
  }
  reader.skip_space_and_comments();
  const std::size_t maxval_at = reader.pos();
  const auto maxval = reader.read_uint("maxval", ErrorCode::kMalformedHeader, 65535);
  if (maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::kMalformedHeader, "maxval out of range", maxval_at);
  }
  if (maxval > 255) {
    throw Error(ErrorCode::kUnsupportedMaxval,
                "maxval " + std::to_string(maxval) + " needs 16-bit samples", maxval_at);
  }

  const std::uint64_t count = width * height;

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.remaining() == 0) {
      throw Error(ErrorCode::kTruncatedRaster, "header ends before raster", reader.pos());
    }
    reader.advance();
    const std::size_t raster_at = reader.pos();
    if (reader.remaining() < count) {
      throw Error(ErrorCode::kTruncatedRaster,
                  "raster has " + std::to_string(reader.remaining()) + " of " +
                      std::to_string(count) + " bytes",
                  bytes.size());
    }
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(raster_at),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(raster_at + count));
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (pixels[i] > maxval) {
        throw Error(ErrorCode::kMalformedHeader, "sample exceeds maxval", raster_at + i);
      }
    }
    return Image(width, height, std::move(pixels));
  }

  // ASCII samples need at least one digit each, separated by whitespace.
  if ((reader.remaining() + 1) / 2 < count) {
    throw Error(ErrorCode::kTruncatedRaster, "too few bytes for ASCII raster", bytes.size());
  }
  std::vector<std::uint8_t> pixels;
  pixels.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    reader.skip_space_and_comments();
    if (reader.remaining() == 0) {
      throw Error(ErrorCode::kTruncatedRaster,
                  "raster has " + std::to_string(i) + " of " + std::to_string(count) + " samples",
                  reader.pos());
    }
    const std::size_t at = reader.pos();
    const auto v = reader.read_uint("sample", ErrorCode::kMalformedHeader, 65535);
    if (v > maxval) {
      throw Error(ErrorCode::kMalformedHeader, "sample exceeds maxval", at);
    }
    pixels.push_back(static_cast<std::uint8_t>(v));
  }
  return Image(width, height, std::move(pixels));
}

std::vector<std::uint8_t> save_pgm(const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

Matrix to_matrix(const Image& img) {
  Matrix m(img.height(), img.width());
  auto src = img.pixels();
  auto dst = m.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return m;
}

Image from_matrix(const Matrix& m) {
  Image img(m.cols(), m.rows());
  auto src = m.values();
  auto dst = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "entry " + std::to_string(i) + " is not finite");
    }
    // std::round is half away from zero.
    const double r = std::round(v);
    dst[i] = static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
  }
  return img;
}

}  // namespace waveq
