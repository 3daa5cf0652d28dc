#include "gpucb/rng.hpp"

#include <cmath>
#include <numbers>

namespace gpucb {

namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, Stream stream, std::uint64_t counter) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(counter),
                      static_cast<std::uint32_t>(counter >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

NormalStream::NormalStream(std::uint64_t seed, Stream stream, std::uint64_t counter)
    : engine_(keyed_engine(seed, stream, counter)) {}

double NormalStream::uniform() {
    // 53 random bits mapped to (0, 1].
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double NormalStream::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double counter_normal(std::uint64_t seed, Stream stream, std::uint64_t counter) {
    NormalStream normal(seed, stream, counter);
    return normal();
}

}  // namespace gpucb
