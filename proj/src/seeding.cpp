#include "colhyp/seeding.hpp"

namespace colhyp {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t level,
                          std::uint64_t sample) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ (level * 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (sample * 0x8cb92ba72f3d8dd7ULL));
  return h;
}

std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace colhyp
