#pragma once

// Deterministic, platform-independent randomness. Every stream is keyed by a
// 64-bit root seed plus integer coordinates (selector id, replication, step),
// so replication loops can be reordered or parallelized without changing any
// drawn value. std::random distributions are avoided on purpose: their output
// is implementation-defined and would break the byte-identical-output contract.

#include <cstdint>

namespace sublaw {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds coordinates into a derived key; order-sensitive.
inline std::uint64_t derive_key(std::uint64_t root) { return splitmix64(root); }

template <typename... Rest>
std::uint64_t derive_key(std::uint64_t root, std::uint64_t first, Rest... rest) {
    return derive_key(splitmix64(root ^ (first + 0x632be59bd9b4e019ULL)), rest...);
}

// Counter-based stream: draw i is splitmix64(key + i), independent of the
// number of draws taken elsewhere.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    // Uniform in [0,1), 53 mantissa bits, bit-exact across platforms.
    double next_uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace sublaw
