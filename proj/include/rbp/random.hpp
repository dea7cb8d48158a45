#pragma once

#include <cstdint>
#include <random>

namespace rbp
{

//! SplitMix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

//! Child seed number c of a parent seed.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t c) noexcept
{
    return mix64(seed + (c + 1) * 0x9e3779b97f4a7c15ull);
}

//! Seed of replication rep in grid cell cell.
constexpr std::uint64_t
derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep) noexcept
{
    return split_seed(split_seed(master, cell), rep);
}

//---------------------------------------------------------------------------//
/*!
 * Bit-reproducible random stream.
 *
 * The engine is mt19937_64, whose output sequence is fixed by the C++
 * standard. Every variate is derived from raw 64-bit words with the
 * algorithms below, never from std:: distributions (whose algorithms are
 * implementation-defined).
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    //! Uniform on [0, 1) with 53 random bits
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    //! Uniform integer in [0, n) by rejection (n > 0)
    std::uint64_t uniform_index(std::uint64_t n);

    //! Standard normal by the Marsaglia polar method; pairs are cached
    double normal();

    //! Poisson(mean): inversion for mean <= 30, else Hormann's PTRS
    std::int64_t poisson(double mean);

  private:
    std::mt19937_64 engine_;
    double cached_normal_{0};
    bool has_cached_{false};
};

}  // namespace rbp
