#pragma once

#include <cmath>
#include <cstdint>

namespace evt {

// Counter-based generator: output i of stream s under seed k is
// splitmix64(splitmix64(k ^ golden*s) + i). Stateless apart from the
// counter, so any (seed, stream, index) triple reproduces bit-identically
// on every platform; distinct streams are decorrelated by the seed mix.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))), counter_(0) {}

    std::uint64_t next_u64() { return mix(key_ + ++counter_); }

    // Uniform on (0, 1): 53 random bits, half-open interval shifted off 0.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_double()); }

    // Child generator for an indexed sub-task (dataset, fold, restart...).
    CounterRng substream(std::uint64_t index) const {
        CounterRng r(0);
        r.key_ = mix(key_ ^ mix(0xd1b54a32d192ed03ULL + index));
        r.counter_ = 0;
        return r;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace evt
