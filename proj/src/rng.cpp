#include "paris/rng.hpp"

namespace paris {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t time_index,
                     std::uint64_t particle_index, Channel channel) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ (time_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  k = mix64(k ^ (particle_index * 0xaef17502108ef2d9ULL + 0x3c6ef372fe94f82bULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(channel) * 0xdb4f0b9175ae2165ULL));
  key_ = k;
}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  // 53 random mantissa bits, shifted by half an ulp so 0 is excluded.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return gauss_(*this); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + tag * kGolden);
}

}  // namespace paris
