#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aspectlens {

// Input or state that breaks a documented contract. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All randomness in the library goes through this engine. Uniform draws are
// derived from raw 64-bit output so streams are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n);
  // Index drawn proportional to non-negative weights; weights must not all be 0.
  std::size_t categorical(std::span<const double> weights);
  // Gamma(shape, 1) via Marsaglia-Tsang; used for Dirichlet draws.
  double gamma(double shape);
  std::vector<double> dirichlet(std::span<const double> alpha);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Mix two values into a new seed (splitmix64 finaliser).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Splits non-empty, non-comment ('#') lines of a tab separated file.
// Each returned record carries its 1-based line number.
struct TsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<TsvRecord> read_tsv(const std::filesystem::path& path);
// One entry per non-empty, non-comment line, trimmed.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(std::string_view s);

// Fixed-precision decimal rendering used by every CSV/text report.
std::string format_fixed(double v, int digits);

}  // namespace aspectlens
