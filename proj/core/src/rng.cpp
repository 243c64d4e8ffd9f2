#include "snslab/rng.hpp"

#include <cmath>
#include <numbers>

namespace snslab::rng {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t key = mix64(seed + kGolden * (stream + 1));
    const std::uint64_t first = mix64(key ^ mix64(counter + kGolden));
    return mix64(first + key * 0xD6E8FEB86659FD93ULL);
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t b = bits(seed, stream, counter) >> 11;
    return (static_cast<double>(b) + 0.5) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform(seed, stream, 2 * counter);
    const double u2 = uniform(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace snslab::rng
