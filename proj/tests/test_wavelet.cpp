#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "waveq/error.hpp"
#include "waveq/wavelet.hpp"

using namespace waveq;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double energy(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0, [](double s, double x) { return s + x * x; });
}

double pyramid_energy(const Pyramid& p) {
  double e = energy(p.ll.values());
  for (const auto& d : p.details) e += energy(d.lh.values()) + energy(d.hl.values()) + energy(d.hh.values());
  return e;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

class EachWavelet : public ::testing::TestWithParam<WaveletId> {};

}  // namespace

TEST(Filters, OrthogonalLowpassSumsToSqrt2) {
  for (WaveletId id : {WaveletId::kHaar, WaveletId::kDb9}) {
    const auto& w = wavelet(id);
    EXPECT_TRUE(w.orthogonal);
    const double s = std::accumulate(w.analysis_lowpass.begin(), w.analysis_lowpass.end(), 0.0);
    EXPECT_NEAR(s, std::sqrt(2.0), 1e-12) << w.name;
    EXPECT_NEAR(energy(w.analysis_lowpass), 1.0, 1e-12) << w.name;
  }
  EXPECT_EQ(wavelet(WaveletId::kDb9).analysis_lowpass.size(), 18u);
}

TEST(Filters, Db9ShiftOrthogonality) {
  const auto& h = wavelet(WaveletId::kDb9).analysis_lowpass;
  for (std::size_t shift = 2; shift < h.size(); shift += 2) {
    double dot = 0;
    for (std::size_t i = 0; i + shift < h.size(); ++i) dot += h[i] * h[i + shift];
    EXPECT_NEAR(dot, 0.0, 1e-12) << shift;
  }
}

TEST(Filters, Cdf97Lengths) {
  const auto& w = wavelet(WaveletId::kCdf97);
  EXPECT_FALSE(w.orthogonal);
  EXPECT_EQ(w.analysis_lowpass.size(), 9u);
  EXPECT_EQ(w.analysis_highpass.size(), 7u);
  const double s = std::accumulate(w.analysis_lowpass.begin(), w.analysis_lowpass.end(), 0.0);
  EXPECT_NEAR(s, std::sqrt(2.0), 1e-12);
}

TEST(Lookup, NamesAndCodes) {
  EXPECT_EQ(wavelet_by_name("db9").id, WaveletId::kDb9);
  EXPECT_EQ(wavelet_by_name("haar").id, WaveletId::kHaar);
  EXPECT_EQ(wavelet_by_name("cdf97").id, WaveletId::kCdf97);
  EXPECT_EQ(wavelet_by_code(2).id, WaveletId::kCdf97);
  EXPECT_EQ(code_of([] { wavelet_by_name("db4"); }), ErrorCode::kUnknownWavelet);
  EXPECT_EQ(code_of([] { wavelet_by_code(3); }), ErrorCode::kUnknownWavelet);
}

TEST(Analyze1D, HaarConstant) {
  const std::vector<double> x = {5.0, 5.0};
  const auto r = analyze_1d(x, wavelet(WaveletId::kHaar));
  ASSERT_EQ(r.approx.size(), 1u);
  EXPECT_NEAR(r.approx[0], 5.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.detail[0], 0.0, 1e-12);
}

TEST(Analyze1D, HaarOneThree) {
  const std::vector<double> x = {1.0, 3.0};
  const auto r = analyze_1d(x, wavelet(WaveletId::kHaar));
  EXPECT_NEAR(r.approx[0], 2.8284271247461903, 1e-12);
  EXPECT_NEAR(r.detail[0], -1.4142135623730951, 1e-12);
}

TEST(Analyze1D, TooShort) {
  const std::vector<double> one = {1.0};
  EXPECT_EQ(code_of([&] { analyze_1d(one, wavelet(WaveletId::kDb9)); }),
            ErrorCode::kSignalTooShort);
}

TEST(Synthesize1D, LengthMismatch) {
  const std::vector<double> a = {1, 2}, d = {1};
  EXPECT_EQ(code_of([&] { synthesize_1d(a, d, wavelet(WaveletId::kDb9)); }),
            ErrorCode::kLengthMismatch);
}

TEST_P(EachWavelet, OneDimensionalShapesAndPerfectReconstruction) {
  const auto& w = wavelet(GetParam());
  const std::vector<double> ramp = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto r = analyze_1d(ramp, w);
  EXPECT_EQ(r.approx.size(), 4u);
  EXPECT_EQ(r.detail.size(), 4u);
  EXPECT_LT(max_abs_diff(synthesize_1d(r.approx, r.detail, w), ramp), 1e-9);

  std::mt19937_64 g(11);
  for (std::size_t len = 2; len <= 41; ++len) {
    std::vector<double> x(len);
    for (double& v : x) v = oracle::unit_uniform(g) * 200 - 100;
    const auto s = analyze_1d(x, w);
    EXPECT_EQ(s.approx.size(), (len + 1) / 2);
    const auto y = synthesize_1d(s.approx, s.detail, w, len);
    ASSERT_EQ(y.size(), len);
    EXPECT_LT(max_abs_diff(x, y), 1e-9) << w.name << " len " << len;
  }
}

TEST_P(EachWavelet, ZeroInZeroOut) {
  const auto& w = wavelet(GetParam());
  const std::vector<double> z(6, 0.0);
  for (double v : synthesize_1d(z, z, w)) EXPECT_EQ(v, 0.0);
  const SubbandSet s{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
  const Matrix back = idwt2(s, w, 8, 8);
  for (double v : back.values()) EXPECT_EQ(v, 0.0);
}

TEST_P(EachWavelet, ConstantImageHasNoDetail) {
  const auto& w = wavelet(GetParam());
  const Matrix m(8, 8, 37.0);
  const auto s = dwt2(m, w);
  for (const Matrix* d : {&s.lh, &s.hl, &s.hh}) {
    for (double v : d->values()) EXPECT_NEAR(v, 0.0, 1e-12);
  }
  const Pyramid p = decompose(Matrix(16, 12, 3.5), 3, w);
  for (const auto& d : p.details) {
    for (const Matrix* b : {&d.lh, &d.hl, &d.hh}) {
      for (double v : b->values()) EXPECT_NEAR(v, 0.0, 1e-12);
    }
  }
  // LL-only reconstruction of a constant image.
  SubbandSet ll_only{s.ll, Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
  EXPECT_LT(max_abs_diff(idwt2(ll_only, w, 8, 8).values(), m.values()), 1e-9);
}

TEST_P(EachWavelet, TwoDimensionalPerfectReconstruction) {
  const auto& w = wavelet(GetParam());
  std::mt19937_64 g(3);
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{8, 8}, {9, 14}, {2, 2}, {31, 5}}) {
    const Matrix m = oracle::random_matrix(g, r, c);
    const auto s = dwt2(m, w);
    EXPECT_EQ(s.ll.rows(), (r + 1) / 2);
    EXPECT_EQ(s.hh.cols(), (c + 1) / 2);
    EXPECT_LT(max_abs_diff(idwt2(s, w, r, c).values(), m.values()), 1e-9);
  }
}

TEST_P(EachWavelet, PyramidPerfectReconstructionAndLinearity) {
  const auto& w = wavelet(GetParam());
  std::mt19937_64 g(5);
  for (std::size_t levels = 1; levels <= 3; ++levels) {
    const Matrix m1 = oracle::random_matrix(g, 64, 64);
    const Matrix m2 = oracle::random_matrix(g, 64, 64);
    const Pyramid p1 = decompose(m1, levels, w);
    EXPECT_EQ(p1.details.size(), levels);
    EXPECT_LT(max_abs_diff(reconstruct(p1, w).values(), m1.values()), 1e-8);

    Matrix mix(64, 64);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = 2.5 * m1.values()[i] + m2.values()[i];
    const Pyramid pm = decompose(mix, levels, w);
    const Pyramid p2 = decompose(m2, levels, w);
    auto check = [](const Matrix& got, const Matrix& a, const Matrix& b) {
      for (std::size_t i = 0; i < got.size(); ++i) {
        ASSERT_NEAR(got.values()[i], 2.5 * a.values()[i] + b.values()[i], 1e-9);
      }
    };
    check(pm.ll, p1.ll, p2.ll);
    for (std::size_t l = 0; l < levels; ++l) {
      check(pm.details[l].lh, p1.details[l].lh, p2.details[l].lh);
      check(pm.details[l].hl, p1.details[l].hl, p2.details[l].hl);
      check(pm.details[l].hh, p1.details[l].hh, p2.details[l].hh);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, EachWavelet,
                         ::testing::Values(WaveletId::kHaar, WaveletId::kDb9, WaveletId::kCdf97),
                         [](const auto& info) { return wavelet(info.param).name; });

TEST(Parseval, OrthogonalWaveletsPreserveEnergy) {
  std::mt19937_64 g(9);
  for (WaveletId id : {WaveletId::kHaar, WaveletId::kDb9}) {
    for (std::size_t levels = 1; levels <= 3; ++levels) {
      const Matrix m = oracle::random_matrix(g, 64, 64);
      const double e = energy(m.values());
      EXPECT_LT(std::abs(pyramid_energy(decompose(m, levels, wavelet(id))) - e) / e, 1e-9);
    }
  }
}

TEST(Dwt2, HaarConstant) {
  const auto s = dwt2(Matrix(8, 8, 4.0), wavelet(WaveletId::kHaar));
  for (double v : s.ll.values()) EXPECT_NEAR(v, 8.0, 1e-12);
}

TEST(Dwt2, OrientationConvention) {
  // Columns alternate 0/1: a horizontal difference shows up in LH only.
  Matrix stripes(8, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) stripes.at(r, c) = double(c % 2);
  }
  const auto s = dwt2(stripes, wavelet(WaveletId::kHaar));
  EXPECT_GT(energy(s.lh.values()), 1.0);
  EXPECT_NEAR(energy(s.hl.values()), 0.0, 1e-12);
  EXPECT_NEAR(energy(s.hh.values()), 0.0, 1e-12);
}

TEST(Dwt2, TooSmall) {
  EXPECT_EQ(code_of([] { dwt2(Matrix(1, 8), wavelet(WaveletId::kHaar)); }), ErrorCode::kTooSmall);
}

TEST(Idwt2, DimensionMismatch) {
  const SubbandSet s{Matrix(4, 4), Matrix(4, 4), Matrix(4, 3), Matrix(4, 4)};
  EXPECT_EQ(code_of([&] { idwt2(s, wavelet(WaveletId::kHaar), 8, 8); }),
            ErrorCode::kDimensionMismatch);
  const SubbandSet t{Matrix(4, 4), Matrix(4, 4), Matrix(4, 4), Matrix(4, 4)};
  EXPECT_EQ(code_of([&] { idwt2(t, wavelet(WaveletId::kHaar), 10, 8); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Decompose, ThreeLevelShapes) {
  const Pyramid p = decompose(Matrix(512, 512, 1.0), 3, wavelet(WaveletId::kDb9));
  EXPECT_EQ(p.details[0].lh.rows(), 256u);
  EXPECT_EQ(p.details[1].hl.rows(), 128u);
  EXPECT_EQ(p.details[2].hh.cols(), 64u);
  EXPECT_EQ(p.ll.rows(), 64u);
  EXPECT_EQ(p.ll.cols(), 64u);
  EXPECT_EQ(subband_dims(512, 512, 3), (std::pair<std::size_t, std::size_t>{64, 64}));
  EXPECT_EQ(subband_dims(9, 5, 2), (std::pair<std::size_t, std::size_t>{3, 2}));
}

TEST(Decompose, OneLevelEqualsDwt2) {
  std::mt19937_64 g(1);
  const Matrix m = oracle::random_matrix(g, 16, 10);
  const auto& w = wavelet(WaveletId::kCdf97);
  const Pyramid p = decompose(m, 1, w);
  const auto s = dwt2(m, w);
  EXPECT_EQ(p.ll, s.ll);
  EXPECT_EQ(p.details[0].lh, s.lh);
  EXPECT_EQ(p.details[0].hl, s.hl);
  EXPECT_EQ(p.details[0].hh, s.hh);
}

TEST(Decompose, TooManyLevels) {
  EXPECT_FALSE(admits_levels(4, 4, 3));
  EXPECT_TRUE(admits_levels(4, 4, 2));
  EXPECT_EQ(code_of([] { decompose(Matrix(4, 4), 3, wavelet(WaveletId::kHaar)); }),
            ErrorCode::kTooManyLevels);
  EXPECT_EQ(code_of([] { decompose(Matrix(8, 8), 0, wavelet(WaveletId::kHaar)); }),
            ErrorCode::kTooManyLevels);
}

TEST(Reconstruct, RejectsInconsistentPyramid) {
  Pyramid p = decompose(Matrix(16, 16, 1.0), 2, wavelet(WaveletId::kHaar));
  EXPECT_EQ(code_of([&] { reconstruct(p, wavelet(WaveletId::kDb9)); }),
            ErrorCode::kDimensionMismatch);
  p.details.pop_back();
  EXPECT_EQ(code_of([&] { reconstruct(p); }), ErrorCode::kDimensionMismatch);
}

TEST(Determinism, RepeatedTransformsAreBitIdentical) {
  std::mt19937_64 g(21);
  const Matrix m = oracle::random_matrix(g, 33, 47);
  const auto& w = wavelet(WaveletId::kDb9);
  EXPECT_EQ(reconstruct(decompose(m, 3, w)), reconstruct(decompose(m, 3, w)));
}
