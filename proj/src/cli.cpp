#include "waveq/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "waveq/bench.hpp"
#include "waveq/codec.hpp"
#include "waveq/error.hpp"
#include "waveq/metrics.hpp"
#include "waveq/pipeline.hpp"

namespace waveq {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (f.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return bytes;
}

namespace {

// Validation failures on flag values map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void check_n(int n) {
  if (n < 2 || n % 2 != 0) throw UsageError("n must be even and ≥ 2");
}

Image load_image(const std::string& path) { return load_pgm(read_file(path)); }

json size_report_json(const SizeReport& report) {
  json subbands = json::array();
  for (const SubbandSize& s : report.subbands) {
    subbands.push_back({{"level", s.level},
                        {"band", std::string(s.orientation)},
                        {"bins", s.bins},
                        {"entropy_bits_per_coeff", s.entropy_bits_per_coeff}});
  }
  return {{"container_bytes", report.container_bytes},
          {"estimated_entropy_coded_bytes", report.estimated_entropy_coded_bytes},
          {"subbands", subbands}};
}

struct CompressArgs {
  std::string input;
  std::string output;
  int n = 2;
  std::size_t levels = 3;
  std::string wavelet = "db9";
  double k1 = 1.0;
  double k2 = 1.0;
  double eps = 0.001;
  std::string recon = "centroid";
};

int cmd_compress(const CompressArgs& a, std::ostream& out) {
  check_n(a.n);
  CompressOptions options;
  options.levels = a.levels;
  options.wavelet = wavelet_by_name(a.wavelet).id;
  options.params = QuantParams{a.n, a.k1, a.k2, a.eps};
  options.rule = recon_rule_from_string(a.recon);
  try {
    validate(options.params);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const Image img = load_image(a.input);
  const QuantizedPyramid qp = compress(img, options);
  const auto bytes = encode(qp);
  write_file_atomic(a.output, bytes);
  out << size_report_json(size_report(qp)).dump() << '\n';
  return kExitOk;
}

int cmd_decompress(const std::string& input, const std::string& output, std::ostream&) {
  const QuantizedPyramid qp = decode(read_file(input));
  write_file_atomic(output, save_pgm(decompress(qp)));
  return kExitOk;
}

int cmd_evaluate(const std::string& original, const std::string& reconstructed, bool raw_constants,
                 std::ostream& out) {
  MssimOptions options;
  options.constants.raw = raw_constants;
  const QualityReport r = evaluate(load_image(original), load_image(reconstructed), options);
  const json report = {{"mse", r.mse}, {"psnr_db", number_or_inf(r.psnr_db)}, {"mssim", r.mssim}};
  out << report.dump() << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> images;
  std::vector<int> ns = {2, 4, 6, 8, 10};
  std::vector<std::size_t> levels = {3};
  std::vector<std::string> wavelets = {"db9"};
  std::vector<double> ks;
  std::vector<double> k1s = {1.0};
  std::vector<double> k2s = {1.0};
  std::vector<std::string> recon = {"centroid"};
  double eps = 0.001;
  bool raw_constants = false;
  bool compare = false;
  std::string out = "bench.csv";
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  BenchOptions options;
  for (int n : a.ns) check_n(n);
  options.ns = a.ns;
  options.levels = a.levels;
  options.wavelets.clear();
  for (const auto& w : a.wavelets) options.wavelets.push_back(wavelet_by_name(w).id);
  options.ks.clear();
  if (!a.ks.empty()) {
    for (double k : a.ks) options.ks.emplace_back(k, k);
  } else {
    for (double k1 : a.k1s) {
      for (double k2 : a.k2s) options.ks.emplace_back(k1, k2);
    }
  }
  options.rules.clear();
  for (const auto& r : a.recon) options.rules.push_back(recon_rule_from_string(r));
  options.eps = a.eps;
  options.ssim.raw = a.raw_constants;
  options.compare_reference = a.compare;
  options.threads = threads_from_env();
  for (const auto& [k1, k2] : options.ks) {
    try {
      validate(QuantParams{2, k1, k2, options.eps});
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<BenchInput> inputs;
  for (const auto& path : a.images) {
    BenchInput in;
    in.name = canonical_image_name(path);
    try {
      in.image = load_image(path);
    } catch (const std::exception& e) {
      in.load_error = e.what();
    }
    inputs.push_back(std::move(in));
  }

  const auto rows = run_bench(inputs, options);
  const std::string csv = bench_csv(rows);
  write_file_atomic(a.out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  out << bench_summary(rows, a.raw_constants);

  if (a.compare) {
    const auto fits = fit_reference(rows, a.raw_constants);
    std::string last;
    for (const ReferenceFit& f : fits) {
      if (f.image == last) continue;  // best fit per image comes first
      last = f.image;
      char line[512];
      std::snprintf(line, sizeof line,
                    "best fit %s: %s  sum|dPSNR|=%.4f max|dPSNR|=%.4f max|dMSSIM|=%.6f%s\n",
                    f.image.c_str(), f.config.label().c_str(), f.total_abs_dpsnr, f.max_abs_dpsnr,
                    f.max_abs_dmssim, f.within(2.0, 0.01) ? "" : "  (outside 2 dB / 0.01)");
      out << line;
    }
    if (fits.empty()) out << "no rows matched a reference image\n";
  }

  const bool all_failed =
      std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return !r.error.empty(); });
  return all_failed ? kExitFailure : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wavelet image compression with mean/sigma non-uniform detail quantization",
               "waveq"};
  app.require_subcommand(1);

  CompressArgs compress_args;
  auto* compress = app.add_subcommand("compress", "Compress a PGM into a WQ01 container");
  compress->add_option("input", compress_args.input, "Input PGM")->required();
  compress->add_option("output", compress_args.output, "Output container")->required();
  compress->add_option("--n", compress_args.n, "Number of quantized values per detail subband");
  compress->add_option("--levels", compress_args.levels, "Decomposition levels")
      ->check(CLI::Range(1, 3));
  compress->add_option("--wavelet", compress_args.wavelet)
      ->check(CLI::IsMember({"db9", "cdf97", "haar"}));
  compress->add_option("--k1", compress_args.k1, "Spread below the running threshold");
  compress->add_option("--k2", compress_args.k2, "Spread above the running threshold");
  compress->add_option("--eps", compress_args.eps, "Threshold offset");
  compress->add_option("--recon", compress_args.recon, "Interior bin value: centroid|half-range")
      ->check(CLI::IsMember({"centroid", "half-range"}));

  std::string dec_in, dec_out;
  auto* decompress_cmd = app.add_subcommand("decompress", "Rebuild a PGM from a container");
  decompress_cmd->add_option("input", dec_in, "Input container")->required();
  decompress_cmd->add_option("output", dec_out, "Output PGM")->required();

  std::string eval_a, eval_b;
  bool eval_raw = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Report MSE, PSNR and MSSIM");
  evaluate_cmd->add_option("original", eval_a)->required();
  evaluate_cmd->add_option("reconstructed", eval_b)->required();
  evaluate_cmd->add_flag("--ssim-raw-constants", eval_raw, "Use K1, K2 as the stabilizers on [0,1] intensities");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Sweep n and settings over a set of images");
  bench->add_option("images", bench_args.images, "Input PGMs")->required();
  bench->add_option("--n", bench_args.ns, "Values of n to sweep");
  bench->add_option("--levels", bench_args.levels)->check(CLI::Range(1, 3));
  bench->add_option("--wavelet", bench_args.wavelets)
      ->check(CLI::IsMember({"db9", "cdf97", "haar"}));
  bench->add_option("--k", bench_args.ks, "Symmetric spread values (k1 = k2)");
  bench->add_option("--k1", bench_args.k1s);
  bench->add_option("--k2", bench_args.k2s);
  bench->add_option("--eps", bench_args.eps);
  bench->add_option("--recon", bench_args.recon, "centroid and/or half-range")
      ->check(CLI::IsMember({"centroid", "half-range"}));
  bench->add_flag("--ssim-raw-constants", bench_args.raw_constants,
                  "Summarize and fit with the literal-constant MSSIM");
  bench->add_flag("--compare-paper", bench_args.compare,
                  "Attach published DB9 reference values and report the best configuration");
  bench->add_option("--out", bench_args.out, "CSV output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compress) return cmd_compress(compress_args, out);
    if (*decompress_cmd) return cmd_decompress(dec_in, dec_out, out);
    if (*evaluate_cmd) return cmd_evaluate(eval_a, eval_b, eval_raw, out);
    if (*bench) return cmd_bench(bench_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace waveq
