#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace waveq {

// 8-bit grayscale raster, row-major.
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Real-valued row-major matrix; carrier for wavelet coefficients.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }
  double& at(std::size_t row, std::size_t col) { return values_[row * cols_ + col]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Parses a binary (P5) or ASCII (P2) PGM with maxval <= 255. Header comments
/// are accepted. Throws Error with MalformedHeader, UnsupportedMaxval or
/// TruncatedRaster, each carrying the offending byte offset.
Image load_pgm(std::span<const std::uint8_t> bytes);

/// Serializes to binary P5 with maxval 255.
std::vector<std::uint8_t> save_pgm(const Image& img);

Matrix to_matrix(const Image& img);

/// Rounds half away from zero, then clamps to [0, 255]. Throws NonFiniteValue.
Image from_matrix(const Matrix& m);

}  // namespace waveq
