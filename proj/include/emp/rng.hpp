#pragma once

#include <cstdint>
#include <random>

namespace emp {

using RngEngine = std::mt19937_64;

/// Stream purposes; each node owns one stream per purpose.
enum class StreamKind : std::uint64_t
{
  kMobility = 1,
  kNoise = 2,
  kProtocol = 3,
  kChannel = 4,
  kTraffic = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent sub-stream for (run seed, owner, purpose). Adding owners does
/// not perturb the streams of existing ones.
inline RngEngine make_stream(std::uint64_t seed, std::uint64_t owner, StreamKind kind)
{
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (owner * 0xD1B54A32D192ED03ULL));
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return RngEngine{h};
}

}  // namespace emp
