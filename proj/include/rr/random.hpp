#pragma once

#include <array>
#include <cstdint>

namespace rr {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The
/// stream is a pure function of (key, counter), so path p of a Monte Carlo
/// run can be regenerated without touching paths 0..p-1.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Next uniform in the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal via Box-Muller (both outputs used).
    double normal() noexcept;

    static Block round10(Block ctr, std::array<std::uint32_t, 2> key) noexcept;

private:
    std::array<std::uint32_t, 2> key_;
    Block counter_{};
    Block buffer_{};
    int used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rr
