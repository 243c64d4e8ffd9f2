#pragma once

#include <cstdint>

namespace snslab::rng {

// Well-known stream ids. Everything random in the lab is a pure function of
// (seed, stream, counter), so draws never depend on evaluation order.
enum Stream : std::uint64_t {
    kWienerIncrements = 0,
    kOuStationary = 1,
    kTrialFields = 2,
    kEnsembleBase = 1u << 20,  // + member index
};

/// 64 random bits for (seed, stream, counter).
std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform in the open interval (0, 1).
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Standard normal via Box-Muller over the counter pair (2c, 2c+1).
double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Counter for a signed grid index (two's complement reinterpretation).
inline std::uint64_t counter_of(std::int64_t index) {
    return static_cast<std::uint64_t>(index);
}

/// Sequential reader over one stream.
class StreamCursor {
public:
    StreamCursor(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
        : seed_(seed), stream_(stream), counter_(start) {}

    double uniform() { return rng::uniform(seed_, stream_, counter_++); }
    double normal() { return rng::normal(seed_, stream_, counter_++); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

}  // namespace snslab::rng
