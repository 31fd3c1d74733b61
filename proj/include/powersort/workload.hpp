// Seeded benchmark inputs: input sizes, key profiles and presortedness.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "powersort/core.hpp"

namespace powersort {

/// Every random key word is drawn uniformly from [kKeyMin, kKeyMax].
inline constexpr std::uint32_t kKeyMin = 100;
inline constexpr std::uint32_t kKeyMax = 1'000'000'000;

inline constexpr std::size_t kBlobWords = 30;
using Blob = std::array<std::uint32_t, kBlobWords>;

enum class Profile {
  kInt,         // 32-bit integer keys
  kPtr,         // pointers to blobs whose first 29 words are zero
  kBlobRandom,  // blobs of 30 random words, compared lexicographically
  kBlobZero,    // blobs whose first 29 words are zero
};

inline constexpr Profile kAllProfiles[] = {Profile::kInt, Profile::kPtr, Profile::kBlobRandom,
                                           Profile::kBlobZero};

std::string_view profile_name(Profile p);
std::optional<Profile> parse_profile(std::string_view name);

/// Compares blob pointers by the blobs they point to.
struct DerefLess {
  bool operator()(const Blob* a, const Blob* b) const { return *a < *b; }
};

using IntItem = SortItem<std::uint32_t>;
using PtrItem = SortItem<const Blob*>;
using BlobItem = SortItem<Blob>;

/// Words per element for a profile, as sorted (key plus origin tag).
std::size_t profile_words(Profile p);

struct WorkloadSpec {
  Profile profile = Profile::kInt;
  std::uint64_t N = 1;
  std::uint64_t S = 2;
  std::uint64_t seed = 0;
};

/// "profile:N:S:seed".
std::string to_string(const WorkloadSpec& spec);
/// Inverse of to_string. Throws std::invalid_argument on malformed input.
WorkloadSpec parse_workload(std::string_view text);

/// MT19937-64 with explicitly defined derived distributions, so a seed yields
/// the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [lo, hi] by rejection sampling.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  /// Uniform on [0, 1) with 53 random bits.
  double unit();
  /// Failures before the first success, success probability p in (0, 1].
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
};

/// Uniform on [ceil(9N/10), N].
std::size_t draw_length(std::uint64_t N, Rng& rng);

std::uint32_t draw_key_word(Rng& rng);

/// Generated input. Pointer profiles keep their blobs in `storage`.
template <typename Key>
struct Instance {
  std::vector<SortItem<Key>> items;
  std::vector<Blob> storage;
};

Instance<std::uint32_t> generate_int(std::size_t n, Rng& rng);
Instance<Blob> generate_blob(std::size_t n, Rng& rng, bool zero_prefix);
Instance<const Blob*> generate_ptr(std::size_t n, Rng& rng);

/// Cuts `items` left to right into blocks of length 1 + Geometric(1/S) and
/// stably sorts each block. Returns the block lengths.
template <typename Item, typename Less>
std::vector<std::size_t> inject_presortedness(std::span<Item> items, std::uint64_t S, Rng& rng,
                                              Less less) {
  if (S < 2) throw std::invalid_argument("inject_presortedness: S must be at least 2");
  std::vector<std::size_t> blocks;
  const double p = 1.0 / static_cast<double>(S);
  std::size_t pos = 0;
  while (pos < items.size()) {
    const std::uint64_t draw = rng.geometric(p);
    const std::size_t len =
        static_cast<std::size_t>(std::min<std::uint64_t>(draw + 1, items.size() - pos));
    std::stable_sort(items.begin() + pos, items.begin() + pos + len, less);
    blocks.push_back(len);
    pos += len;
  }
  return blocks;
}

}  // namespace powersort
