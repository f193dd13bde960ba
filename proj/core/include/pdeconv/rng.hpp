#pragma once

#include <cstdint>
#include <random>

namespace pdeconv {

namespace detail {
// SplitMix64 finalizer; used to derive well-separated substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

namespace stream_role {
inline constexpr std::uint64_t generic = 0;
inline constexpr std::uint64_t processes = 1;
inline constexpr std::uint64_t errors = 2;
inline constexpr std::uint64_t split = 3;
} // namespace stream_role

/// Deterministic random stream. Substreams are derived from a root seed plus
/// (replicate, role), so replication-parallel runs reproduce serial results
/// bit for bit. All floating draws are built from uniform01() only, keeping
/// the sequence independent of the standard library's distribution details.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(detail::mix64(seed)) {}

    static Rng substream(std::uint64_t root, std::uint64_t replicate, std::uint64_t role) {
        std::uint64_t s = detail::mix64(root ^ detail::mix64(replicate + 1));
        s = detail::mix64(s ^ detail::mix64(role + 0x51ed2701a3c0ULL));
        return Rng(s);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace pdeconv
