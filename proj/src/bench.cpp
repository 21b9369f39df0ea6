#include "waveq/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "waveq/codec.hpp"
#include "waveq/error.hpp"
#include "waveq/pipeline.hpp"

namespace waveq {

namespace {

// 512x512 gray-level USC-SIPI images, DB9 wavelet.
constexpr std::array<ReferenceEntry, 20> kReference = {{
    {"lenna", 2, 37.7780645697, 0.9982142147},
    {"lenna", 4, 41.8874641847, 0.9992823393},
    {"lenna", 6, 43.8590907980, 0.9994968461},
    {"lenna", 8, 44.2931530130, 0.9995311420},
    {"lenna", 10, 44.3489820362, 0.9995364013},
    {"baboon", 2, 26.8132232589, 0.9595975231},
    {"baboon", 4, 31.5997241598, 0.9869355763},
    {"baboon", 6, 32.9223693072, 0.9905018802},
    {"baboon", 8, 33.0622299131, 0.9908045725},
    {"baboon", 10, 33.0762467334, 0.9908358964},
    {"pepper", 2, 35.1261558539, 0.9968488432},
    {"pepper", 4, 38.0511064803, 0.9982568820},
    {"pepper", 6, 40.6144660901, 0.9990231546},
    {"pepper", 8, 40.9936699886, 0.9991423921},
    {"pepper", 10, 41.0082447784, 0.9991441908},
    {"house", 2, 31.9886146645, 0.9904885967},
    {"house", 4, 35.7235201624, 0.9951268912},
    {"house", 6, 38.2730683421, 0.9975855578},
    {"house", 8, 38.4299731739, 0.9976918850},
    {"house", 10, 38.4349224964, 0.9976960112},
}};

struct Alias {
  std::string_view alias;
  std::string_view name;
};

constexpr std::array<Alias, 9> kAliases = {{
    {"lenna", "lenna"},
    {"lena", "lenna"},
    {"baboon", "baboon"},
    {"mandrill", "baboon"},
    {"pepper", "pepper"},
    {"peppers", "pepper"},
    {"house", "house"},
    {"4.1.05", "house"},
    {"4.2.07", "pepper"},
}};

std::string format_double(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string format_k(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Cell {
  std::size_t input;
  BenchConfig config;
  int n;
};

BenchRow run_cell(const BenchInput& input, const Cell& cell, const BenchOptions& options) {
  BenchRow row;
  row.image = input.name;
  row.n = cell.n;
  row.config = cell.config;
  if (options.compare_reference) {
    if (const auto ref = reference_for(input.name, cell.n)) {
      row.reference_psnr_db = ref->psnr_db;
      row.reference_mssim = ref->mssim;
    }
  }
  try {
    CompressOptions co;
    co.levels = cell.config.levels;
    co.wavelet = cell.config.wavelet;
    co.params = QuantParams{cell.n, cell.config.k1, cell.config.k2, options.eps};
    co.rule = cell.config.rule;
    const QuantizedPyramid qp = compress(*input.image, co);
    const auto bytes = encode(qp);
    const SizeReport size = size_report(qp);
    const Image restored = decompress(decode(bytes));

    MssimOptions tiled;
    tiled.constants = options.ssim;
    tiled.constants.raw = false;
    row.psnr_db = psnr(*input.image, restored);
    row.mssim = mssim(*input.image, restored, tiled);
    if (options.sliding_mssim) {
      MssimOptions sliding = tiled;
      sliding.stride = 1;
      row.mssim_sliding = mssim(*input.image, restored, sliding);
    }
    MssimOptions raw = tiled;
    raw.constants.raw = true;
    row.mssim_raw = mssim(*input.image, restored, raw);
    row.container_bytes = bytes.size();
    row.entropy_estimate_bytes = size.estimated_entropy_coded_bytes;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::span<const ReferenceEntry> reference_table() { return kReference; }

std::optional<ReferenceEntry> reference_for(std::string_view image, int n) {
  for (const auto& e : kReference) {
    if (e.image == image && e.n == n) return e;
  }
  return std::nullopt;
}

std::string canonical_image_name(std::string_view path) {
  std::string stem = std::filesystem::path(std::string(path)).stem().string();
  std::transform(stem.begin(), stem.end(), stem.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& a : kAliases) {
    if (stem == a.alias) return std::string(a.name);
  }
  return stem;
}

std::string_view to_string(ReconRule rule) {
  return rule == ReconRule::kBinCentroid ? "centroid" : "half-range";
}

ReconRule recon_rule_from_string(std::string_view name) {
  if (name == "centroid") return ReconRule::kBinCentroid;
  if (name == "half-range") return ReconRule::kHalfRangeMean;
  throw Error(ErrorCode::kInvalidParams, "unknown reconstruction rule '" + std::string(name) + "'");
}

std::string BenchConfig::label() const {
  return waveq::wavelet(wavelet).name + " levels=" + std::to_string(levels) + " k1=" +
         format_k(k1) + " k2=" + format_k(k2) + " recon=" + std::string(to_string(rule));
}

unsigned threads_from_env() {
  if (const char* env = std::getenv("WAVEQ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<BenchRow> run_bench(std::span<const BenchInput> inputs, const BenchOptions& options) {
  // Rows are laid out in their final order before any work starts.
  std::vector<BenchRow> rows;
  std::vector<std::optional<Cell>> cells;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].image) {
      BenchRow failed;
      failed.image = inputs[i].name;
      failed.error = inputs[i].load_error.empty() ? "image not loaded" : inputs[i].load_error;
      rows.push_back(std::move(failed));
      cells.push_back(std::nullopt);
      continue;
    }
    for (WaveletId w : options.wavelets) {
      for (std::size_t levels : options.levels) {
        for (const auto& [k1, k2] : options.ks) {
          for (ReconRule rule : options.rules) {
            for (int n : options.ns) {
              cells.push_back(Cell{i, BenchConfig{levels, w, k1, k2, rule}, n});
              rows.emplace_back();
            }
          }
        }
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      if (cells[i]) rows[i] = run_cell(inputs[cells[i]->input], *cells[i], options);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << "image,n,levels,wavelet,k1,k2,recon,psnr_db,mssim,mssim_sliding,mssim_raw,"
         "container_bytes,entropy_estimate_bytes,reference_psnr_db,reference_mssim,error\n";
  for (const BenchRow& r : rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    out << r.image << ',';
    if (r.n == 0) {
      out << ",,,,,,,,,,,,,,\"" << error << "\"\n";
      continue;
    }
    out << r.n << ',' << r.config.levels << ',' << wavelet(r.config.wavelet).name << ','
        << format_k(r.config.k1) << ',' << format_k(r.config.k2) << ',' << to_string(r.config.rule)
        << ',';
    if (r.error.empty()) {
      out << format_double(r.psnr_db, 10) << ',' << format_double(r.mssim, 10) << ','
          << format_double(r.mssim_sliding, 10) << ',' << format_double(r.mssim_raw, 10) << ','
          << r.container_bytes << ',' << r.entropy_estimate_bytes << ',';
    } else {
      out << ",,,,,,";
    }
    out << (r.reference_psnr_db ? format_double(*r.reference_psnr_db, 10) : "") << ','
        << (r.reference_mssim ? format_double(*r.reference_mssim, 10) : "") << ','
        << (error.empty() ? "" : "\"" + error + "\"") << '\n';
  }
  return out.str();
}

std::string bench_summary(std::span<const BenchRow> rows, bool raw_mssim) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %3s %-42s %10s %9s %10s %10s\n", "image", "n", "config",
                "PSNR(dB)", raw_mssim ? "MSSIM(raw)" : "MSSIM", "bytes", "ref PSNR");
  out << line;
  for (const BenchRow& r : rows) {
    if (!r.error.empty()) {
      out << r.image << " n=" << r.n << " error: " << r.error << '\n';
      continue;
    }
    const std::string ref = r.reference_psnr_db ? format_double(*r.reference_psnr_db, 4) : "-";
    std::snprintf(line, sizeof line, "%-10s %3d %-42s %10s %9.6f %10zu %10s\n", r.image.c_str(),
                  r.n, r.config.label().c_str(), format_double(r.psnr_db, 4).c_str(),
                  raw_mssim ? r.mssim_raw : r.mssim,
                  r.container_bytes, ref.c_str());
    out << line;
  }
  return out.str();
}

std::vector<ReferenceFit> fit_reference(std::span<const BenchRow> rows, bool raw_mssim) {
  std::map<std::pair<std::string, std::string>, ReferenceFit> fits;
  std::vector<std::pair<std::string, std::string>> order;
  for (const BenchRow& r : rows) {
    if (!r.error.empty() || !r.reference_psnr_db || !r.reference_mssim) continue;
    const auto key = std::make_pair(r.image, r.config.label());
    auto [it, inserted] = fits.try_emplace(key);
    if (inserted) {
      it->second.image = r.image;
      it->second.config = r.config;
      it->second.raw_mssim = raw_mssim;
      order.push_back(key);
    }
    ReferenceFit& f = it->second;
    const double dp = std::abs(r.psnr_db - *r.reference_psnr_db);
    const double dm = std::abs((raw_mssim ? r.mssim_raw : r.mssim) - *r.reference_mssim);
    ++f.cells;
    f.total_abs_dpsnr += dp;
    f.max_abs_dpsnr = std::max(f.max_abs_dpsnr, dp);
    f.max_abs_dmssim = std::max(f.max_abs_dmssim, dm);
  }
  std::vector<ReferenceFit> out;
  for (const auto& key : order) out.push_back(fits[key]);
  std::stable_sort(out.begin(), out.end(), [](const ReferenceFit& a, const ReferenceFit& b) {
    if (a.image != b.image) return a.image < b.image;
    return a.total_abs_dpsnr < b.total_abs_dpsnr;
  });
  return out;
}

}  // namespace waveq
