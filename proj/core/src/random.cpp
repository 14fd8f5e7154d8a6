#include "psauction/random.hpp"

namespace psauction {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

inline std::pair<std::uint64_t, std::uint64_t> philox2x64(std::uint64_t c0,
                                                          std::uint64_t c1,
                                                          std::uint64_t key) {
  for (int r = 0; r < 10; ++r) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxM) * c0;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kWeyl;
  }
  return {c0, c1};
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t RandomStream::next_u64() {
  ++draws_;
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  auto [a, b] = philox2x64(counter_++, stream_id_, seed_);
  spare_ = b;
  have_spare_ = true;
  return a;
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

RandomStream RandomStream::derive(std::uint64_t child_id) const {
  return RandomStream(seed_, splitmix64(stream_id_ * kWeyl + ~child_id) ^ child_id);
}

}  // namespace psauction
