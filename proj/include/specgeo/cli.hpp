#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace specgeo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

// Every flag may also come from the environment as SPECGEO_<FLAG>, e.g.
// SPECGEO_PREC=512. Command-line values win.
struct Config {
  unsigned bits = 256;
  std::optional<double> tol;
  std::size_t samples = 200;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> cache;
  std::string format;  // csv | svg | json; empty means plain text
  std::uint64_t seed = 0;
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specgeo
