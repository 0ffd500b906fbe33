#pragma once

#include <cstdint>
#include <initializer_list>

namespace anypath {

// splitmix64 finalizer; full-period 64-bit mixer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based deterministic random stream. A stream is identified by the
/// key components it was constructed from; draws advance an internal counter,
/// so two streams built from the same components yield the same sequence
/// regardless of what any other stream did in between.
class RngStream {
public:
    explicit RngStream(std::initializer_list<std::uint64_t> keys) {
        std::uint64_t s = 0x6a09e667f3bcc909ULL;
        for (std::uint64_t k : keys)
            s = mix64(s ^ k);
        state_ = s;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// True with probability p; consumes exactly one draw.
    bool next_bernoulli(double p) { return next_unit() < p; }

    double next_normal();
    double next_gamma(double shape);
    double next_beta(double alpha, double beta);

private:
    std::uint64_t state_;
};

/// Key of a simulation slot. Mints independent substreams for the different
/// random consumers inside one slot (one per transmitting node, plus policy
/// coin flips), keeping parallel epochs reproducible independent of
/// scheduling.
struct SlotKey {
    std::uint64_t seed = 0;
    std::uint64_t epoch = 0;
    std::uint64_t slot = 0;

    enum Purpose : std::uint64_t {
        kProbe = 1,
        kRoute = 2,
        kPolicy = 3,
        kThompson = 4,
    };

    RngStream stream(Purpose purpose, std::uint64_t node = 0) const {
        return RngStream{seed, epoch, slot, static_cast<std::uint64_t>(purpose), node};
    }
};

} // namespace anypath
