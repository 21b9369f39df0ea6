#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "waveq/image.hpp"
#include "waveq/metrics.hpp"
#include "waveq/quantizer.hpp"
#include "waveq/wavelet.hpp"

namespace waveq {

// Published reference point for one (image, n) cell of the DB9 experiment.
struct ReferenceEntry {
  std::string_view image;
  int n;
  double psnr_db;
  double mssim;
};

std::span<const ReferenceEntry> reference_table();
std::optional<ReferenceEntry> reference_for(std::string_view image, int n);

/// Maps a file path onto a reference image name ("lenna", "baboon",
/// "pepper", "house") when the stem is a known alias, else returns the
/// lower-cased stem.
std::string canonical_image_name(std::string_view path);

std::string_view to_string(ReconRule rule);
/// Accepts "centroid" and "half-range". Throws InvalidParams.
ReconRule recon_rule_from_string(std::string_view name);

struct BenchConfig {
  std::size_t levels = 3;
  WaveletId wavelet = WaveletId::kDb9;
  double k1 = 1.0;
  double k2 = 1.0;
  ReconRule rule = ReconRule::kBinCentroid;

  std::string label() const;
};

struct BenchOptions {
  std::vector<int> ns = {2, 4, 6, 8, 10};
  std::vector<std::size_t> levels = {3};
  std::vector<WaveletId> wavelets = {WaveletId::kDb9};
  std::vector<std::pair<double, double>> ks = {{1.0, 1.0}};
  std::vector<ReconRule> rules = {ReconRule::kBinCentroid};
  double eps = 0.001;
  // Both constant readings are always computed; `ssim.raw` picks the one
  // shown in the summary.
  SsimConstants ssim;
  bool sliding_mssim = true;
  bool compare_reference = false;
  unsigned threads = 1;
};

struct BenchInput {
  std::string name;
  std::optional<Image> image;
  std::string load_error;  // set when image is empty
};

struct BenchRow {
  std::string image;
  int n = 0;
  BenchConfig config;
  double psnr_db = 0.0;
  double mssim = 0.0;          // scaled constants, tiled windows
  double mssim_sliding = 0.0;  // scaled constants, stride 1
  double mssim_raw = 0.0;      // literal constants, tiled windows
  std::size_t container_bytes = 0;
  std::size_t entropy_estimate_bytes = 0;
  std::optional<double> reference_psnr_db;
  std::optional<double> reference_mssim;
  std::string error;
};

/// Runs compress -> encode -> decode -> decompress -> evaluate for every
/// image x config x n cell. Cells run on up to `threads` workers; each cell
/// is computed single-threaded, and rows come back in input order (image,
/// wavelet, levels, k, rule, n) regardless of scheduling. Images that failed
/// to load yield one error row.
std::vector<BenchRow> run_bench(std::span<const BenchInput> inputs, const BenchOptions& options);

/// Fixed-header CSV.
std::string bench_csv(std::span<const BenchRow> rows);

/// Human-readable table, one line per row.
std::string bench_summary(std::span<const BenchRow> rows, bool raw_mssim = false);

struct ReferenceFit {
  std::string image;
  BenchConfig config;
  bool raw_mssim = false;
  std::size_t cells = 0;         // rows with a reference value
  double total_abs_dpsnr = 0.0;  // sum over n of |psnr - reference|
  double max_abs_dpsnr = 0.0;
  double max_abs_dmssim = 0.0;

  bool within(double psnr_tol, double mssim_tol) const {
    return max_abs_dpsnr <= psnr_tol && max_abs_dmssim <= mssim_tol;
  }
};

/// One fit per (image, config) that has reference data, best first within
/// each image (smallest total |dPSNR|). MSSIM deltas use the chosen reading.
std::vector<ReferenceFit> fit_reference(std::span<const BenchRow> rows, bool raw_mssim = false);

/// Thread count from WAVEQ_THREADS, defaulting to the hardware concurrency.
unsigned threads_from_env();

}  // namespace waveq
