#include "powersort/workload.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace powersort {

std::string_view profile_name(Profile p) {
  switch (p) {
    case Profile::kInt: return "int";
    case Profile::kPtr: return "ptr";
    case Profile::kBlobRandom: return "blob-random";
    case Profile::kBlobZero: return "blob-zero";
  }
  return "?";
}

std::optional<Profile> parse_profile(std::string_view name) {
  for (Profile p : kAllProfiles) {
    if (profile_name(p) == name) return p;
  }
  return std::nullopt;
}

std::size_t profile_words(Profile p) {
  switch (p) {
    case Profile::kInt: return payload_words_v<IntItem>;
    case Profile::kPtr: return payload_words_v<PtrItem>;
    case Profile::kBlobRandom:
    case Profile::kBlobZero: return payload_words_v<BlobItem>;
  }
  return 0;
}

std::string to_string(const WorkloadSpec& spec) {
  return std::string(profile_name(spec.profile)) + ":" + std::to_string(spec.N) + ":" +
         std::to_string(spec.S) + ":" + std::to_string(spec.seed);
}

namespace {

std::uint64_t parse_u64(std::string_view field, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw std::invalid_argument(std::string("workload spec: bad ") + what);
  }
  return v;
}

}  // namespace

WorkloadSpec parse_workload(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = text.find(':', start);
    fields.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (fields.size() != 4) throw std::invalid_argument("workload spec: expected profile:N:S:seed");
  WorkloadSpec spec;
  auto profile = parse_profile(fields[0]);
  if (!profile) throw std::invalid_argument("workload spec: unknown profile");
  spec.profile = *profile;
  spec.N = parse_u64(fields[1], "N");
  spec.S = parse_u64(fields[2], "S");
  spec.seed = parse_u64(fields[3], "seed");
  if (spec.N < 1) throw std::invalid_argument("workload spec: N must be positive");
  if (spec.S < 2) throw std::invalid_argument("workload spec: S must be at least 2");
  return spec;
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return next();
  const std::uint64_t range = span + 1;
  // Largest multiple of range that fits, so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + x % range;
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Rng::geometric: p outside (0, 1]");
  if (p == 1.0) return 0;
  // Inversion: floor(ln U / ln(1 - p)) with U in (0, 1].
  const double u = 1.0 - unit();
  const double g = std::floor(std::log(u) / std::log1p(-p));
  if (g >= 1.8e19) return std::numeric_limits<std::uint64_t>::max() - 1;
  return static_cast<std::uint64_t>(g);
}

std::size_t draw_length(std::uint64_t N, Rng& rng) {
  if (N < 1) throw std::invalid_argument("draw_length: N must be positive");
  const std::uint64_t lo = (9 * N + 9) / 10;
  return static_cast<std::size_t>(rng.uniform(lo, N));
}

std::uint32_t draw_key_word(Rng& rng) {
  return static_cast<std::uint32_t>(rng.uniform(kKeyMin, kKeyMax));
}

Instance<std::uint32_t> generate_int(std::size_t n, Rng& rng) {
  Instance<std::uint32_t> inst;
  inst.items.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.items[i] = {draw_key_word(rng), static_cast<std::uint32_t>(i)};
  }
  return inst;
}

Instance<Blob> generate_blob(std::size_t n, Rng& rng, bool zero_prefix) {
  Instance<Blob> inst;
  inst.items.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Blob& b = inst.items[i].key;
    b.fill(0);
    for (std::size_t w = zero_prefix ? kBlobWords - 1 : 0; w < kBlobWords; ++w) {
      b[w] = draw_key_word(rng);
    }
    inst.items[i].origin = static_cast<std::uint32_t>(i);
  }
  return inst;
}

Instance<const Blob*> generate_ptr(std::size_t n, Rng& rng) {
  Instance<const Blob*> inst;
  inst.storage.resize(n);
  inst.items.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.storage[i].fill(0);
    inst.storage[i][kBlobWords - 1] = draw_key_word(rng);
    inst.items[i] = {&inst.storage[i], static_cast<std::uint32_t>(i)};
  }
  return inst;
}

}  // namespace powersort
