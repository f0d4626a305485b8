#pragma once

#include <cstdint>
#include <random>
#include <iterator>
#include <utility>
#include <string_view>

namespace trirec {

/// Derives an independent seed for a named randomness stream, so fold
/// assignment, initialisation and shuffling never share a sequence.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

/// mt19937_64 plus distribution helpers whose output is fully specified
/// (std:: distributions are implementation-defined), which keeps runs
/// bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform in [0, bound), bound > 0, without modulo bias.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller.
    double normal();

    /// Fisher-Yates over any random-access range.
    template <typename Range>
    void shuffle(Range& values)
    {
        using std::swap;
        for (std::size_t i = std::size(values); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace trirec
