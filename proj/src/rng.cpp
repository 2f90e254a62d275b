#include "voltpath/rng.h"

#include <cmath>

namespace voltpath::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

std::string StreamPath::to_string() const
{
    return scenario + '/' + std::to_string(year) + '/' + state + '/'
        + std::string(to_token(vclass)) + '/' + std::to_string(month);
}

SeededRng::SeededRng(std::uint64_t seed)
    : engine_(splitmix64(seed))
{
}

SeededRng::SeededRng(std::uint64_t seed, const StreamPath& path)
    : SeededRng(seed, path.to_string())
{
}

SeededRng::SeededRng(std::uint64_t seed, std::string_view path)
    : engine_(derive(seed, path))
{
}

std::uint64_t SeededRng::derive(std::uint64_t seed, std::string_view path)
{
    return splitmix64(splitmix64(seed) ^ fnv1a(path));
}

std::uint64_t SeededRng::uniform_index(std::uint64_t n)
{
    // Largest multiple of n that fits, so every residue is equally likely.
    const std::uint64_t limit = max() - (max() % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > limit) {
        x = engine_();
    }
    return x % n;
}

double SeededRng::standard_normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

} // namespace voltpath::sim
