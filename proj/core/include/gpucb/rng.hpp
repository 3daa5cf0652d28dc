#pragma once

#include <cstdint>
#include <random>

namespace gpucb {

/// Named, independent random streams. Changing the seed of one stream never alters
/// the draws of another.
enum class Stream : std::uint32_t {
    Environment = 0x454e5631,  // sampled ground truth
    Observation = 0x4f425331,  // per-round observation noise
    Rkhs = 0x524b4831,         // random RKHS centers and coefficients
};

/// Standard normal draws from a std::mt19937_64 keyed by (seed, stream, counter).
///
/// The engine is seeded through std::seed_seq and the normal transform is a fixed
/// Box-Muller on 53-bit uniforms, so sequences are reproducible across standard
/// library implementations (std::normal_distribution is not).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, Stream stream, std::uint64_t counter = 0);

    double operator()();
    double uniform();  // in (0, 1]

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// One standard-normal value for a (seed, stream, counter) triple; counter-based, so it
/// does not depend on how many draws came before.
double counter_normal(std::uint64_t seed, Stream stream, std::uint64_t counter);

}  // namespace gpucb
