// Filter tables for the shipped wavelets.

#include <array>
#include <cmath>

#include "waveq/error.hpp"
#include "waveq/wavelet.hpp"

namespace waveq {

namespace {

// Daubechies orthogonal wavelet with 9 vanishing moments, 18 taps, in the
// order of Daubechies' published scaling-filter table. Normalized to sum sqrt(2).
constexpr std::array<double, 18> kDb9Scaling = {
    0.038077947363878345,   0.24383467461259034,    0.6048231236901112,
    0.6572880780513005,     0.13319738582500756,    -0.2932737832791749,
    -0.09684078322297646,   0.14854074933810638,    0.03072568147933338,
    -0.06763282906132997,   0.00025094711483145197, 0.022361662123679096,
    -0.004723204757751397,  -0.00428150368246343,   0.0018476468830562265,
    0.00023038576352319597, -0.0002519631889427101, 3.93473203162716e-05,
};

// CDF 9/7 (the JPEG 2000 irreversible pair), centered, each sums to sqrt(2).
// Obtained by spectral factorization of 1 + 4y + 10y^2 + 20y^3: the 9-tap
// filter carries the complex root pair, the 7-tap filter the real root.
constexpr std::array<double, 9> kCdf97Lowpass9 = {
    0.037828455506995461393,  -0.023849465019380001913, -0.11062440441842340885,
    0.37740285561265376411,   0.85269867900940341931,   0.37740285561265376411,
    -0.11062440441842340885,  -0.023849465019380001913, 0.037828455506995461393,
};
constexpr std::array<double, 7> kCdf97Lowpass7 = {
    -0.064538882628938438637, -0.040689417609558436724, 0.41809227322221220084,
    0.78848561640566439785,   0.41809227322221220084,   -0.040689417609558436724,
    -0.064538882628938438637,
};

template <std::size_t N>
std::vector<double> to_vector(const std::array<double, N>& a) {
  return {a.begin(), a.end()};
}

// Quadrature mirror: hi[j] = (-1)^j lo[L-1-j].
std::vector<double> mirror(const std::vector<double>& lo) {
  std::vector<double> hi(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j) {
    const double v = lo[lo.size() - 1 - j];
    hi[j] = (j % 2 == 0) ? v : -v;
  }
  return hi;
}

// Alternating-sign modulation of a centered symmetric filter.
std::vector<double> modulate(const std::vector<double>& f, int first_sign) {
  std::vector<double> out(f.size());
  int sign = first_sign;
  for (std::size_t j = 0; j < f.size(); ++j, sign = -sign) out[j] = sign * f[j];
  return out;
}

WaveletSpec make_orthogonal(WaveletId id, std::string name, std::vector<double> lo) {
  auto hi = mirror(lo);
  return WaveletSpec{id, std::move(name), Extension::kPeriodic, true, lo, hi, lo, hi};
}

WaveletSpec make_cdf97() {
  const auto lo9 = to_vector(kCdf97Lowpass9);
  const auto lo7 = to_vector(kCdf97Lowpass7);
  return WaveletSpec{WaveletId::kCdf97, "cdf97", Extension::kSymmetric, false,
                     lo9, modulate(lo7, +1), lo7, modulate(lo9, -1)};
}

const std::array<WaveletSpec, 3>& registry() {
  static const std::array<WaveletSpec, 3> specs = {
      make_orthogonal(WaveletId::kHaar, "haar", {M_SQRT1_2, M_SQRT1_2}),
      make_orthogonal(WaveletId::kDb9, "db9", to_vector(kDb9Scaling)),
      make_cdf97(),
  };
  return specs;
}

constexpr std::array<WaveletId, 3> kAll = {WaveletId::kHaar, WaveletId::kDb9,
                                           WaveletId::kCdf97};

}  // namespace

const WaveletSpec& wavelet(WaveletId id) {
  return wavelet_by_code(static_cast<std::uint8_t>(id));
}

const WaveletSpec& wavelet_by_code(std::uint8_t code) {
  const auto& specs = registry();
  if (code >= specs.size()) {
    throw Error(ErrorCode::kUnknownWavelet, "wavelet id " + std::to_string(code));
  }
  return specs[code];
}

const WaveletSpec& wavelet_by_name(std::string_view name) {
  for (const auto& spec : registry()) {
    if (spec.name == name) return spec;
  }
  throw Error(ErrorCode::kUnknownWavelet, "unknown wavelet '" + std::string(name) + "'");
}

std::span<const WaveletId> all_wavelets() { return kAll; }

}  // namespace waveq
