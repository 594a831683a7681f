#pragma once

// Counter-based random streams (Philox4x32-10).
//
// A stream is identified by (seed, stream); the n-th output of a stream is a
// pure function of (seed, stream, n), so parallel work can be split into
// blocks with independent substreams and reproduce bit-for-bit regardless of
// how the blocks are scheduled.

#include <array>
#include <cstdint>

namespace rwa {

struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    // Independent child stream; deterministic in (seed, stream, index).
    RngState substream(std::uint64_t index) const noexcept;

    friend bool operator==(const RngState&, const RngState&) = default;
};

class Rng {
public:
    explicit Rng(RngState state) noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on the open interval (0, 1); 53-bit resolution.
    double uniform() noexcept;
    // Standard exponential, -log(U).
    double exponential() noexcept;
    // Standard normal (Box–Muller, both variates used).
    double normal() noexcept;
    // Gamma(shape, 1); Marsaglia–Tsang for shape >= 1, boosted for shape < 1.
    double gamma(double shape) noexcept;

    RngState state() const noexcept { return origin_; }

private:
    void refill() noexcept;

    RngState origin_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int available_ = 0;  // 32-bit words left in block_
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rwa
