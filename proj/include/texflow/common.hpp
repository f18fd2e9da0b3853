#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace texflow {

/// A trajectory left the fixture's domain (e.g. hit a puncture guard).
/// Raised instead of letting NaNs propagate.
class DomainEscape : public std::runtime_error {
public:
    explicit DomainEscape(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration or malformed config file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violation in a library call.
class InvalidArgument : public std::runtime_error {
public:
    explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

using Rng = std::mt19937_64;

// splitmix64 step, used to derive independent seed streams from one seed.
inline std::uint64_t mix_seed(std::uint64_t s) {
    s += 0x9E3779B97F4A7C15ULL;
    s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ULL;
    s = (s ^ (s >> 27)) * 0x94D049BB133111EBULL;
    return s ^ (s >> 31);
}

/// Deterministic sub-stream k of a base seed.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(mix_seed(seed + 0x100000001B3ULL * stream));
}

/// Serialize a double with 17 significant digits (round-trip exact).
std::string fp17(double x);

}  // namespace texflow
