#include "cpboot/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpboot {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : key_(splitmix64(seed)) {
    std::uint64_t s = key_;
    bool all_zero = true;
    for (auto& word : state_) {
        s = splitmix64(s);
        word = s;
        all_zero = all_zero && word == 0;
    }
    if (all_zero) {
        state_[0] = 0x9e3779b97f4a7c15ULL;  // xoshiro state must not be all zero
    }
}

RngStream RngStream::derive(std::string_view role, std::uint64_t index) const {
    const std::uint64_t mixed = splitmix64(splitmix64(key_ ^ fnv1a64(role)) ^ index);
    return RngStream(mixed);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256** (Blackman & Vigna)
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_index(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("RngStream::next_index: bound must be nonzero");
    }
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::next_normal(double mean, double stddev) {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cpboot
