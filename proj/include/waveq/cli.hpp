#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace waveq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `waveq` tool. `args` excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file. Throws Error(kIo).
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Throws Error(kIo).
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace waveq
