#pragma once

#include "voltpath/types.h"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace voltpath::sim {

/// Identifies one simulation work unit. Each unit owns an independent
/// random stream so results never depend on scheduling.
struct StreamPath {
    std::string scenario;
    int year = 0;
    std::string state;
    VehicleClass vclass = VehicleClass::LDV;
    int month = 1;

    std::string to_string() const;
};

/// Mersenne Twister seeded from (seed, path) through a splitmix64 finalizer.
class SeededRng {
public:
    using result_type = std::uint64_t;

    explicit SeededRng(std::uint64_t seed);
    SeededRng(std::uint64_t seed, const StreamPath& path);
    SeededRng(std::uint64_t seed, std::string_view path);

    static std::uint64_t derive(std::uint64_t seed, std::string_view path);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n > 0, by rejection (no modulo bias).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Marsaglia polar method on uniform01, so draws do not depend on the
    /// standard library's distribution implementation.
    double standard_normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace voltpath::sim
