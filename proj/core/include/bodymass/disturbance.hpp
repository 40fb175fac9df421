#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "bodymass/energy_model.hpp"

namespace bodymass {

/// Relative input disturbances, Forbes-ratio uncertainty and additive weight
/// noise. Each channel multiplies a uniform [0, 1) draw:
///   EI'    = EI (1 + ei_coeff u0)
///   delta' = delta (1 - delta_coeff u1)
///   r'     = r (1 + r_coeff u2)
///   bm'    = bm + bm_noise_kg u3
struct DisturbanceSpec {
    double ei_coeff = 0.0;
    double delta_coeff = 0.0;
    double r_coeff = 0.0;
    double bm_noise_kg = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
    [[nodiscard]] bool any() const noexcept {
        return ei_coeff != 0.0 || delta_coeff != 0.0 || r_coeff != 0.0 || bm_noise_kg != 0.0;
    }
};

/// One day's uniform draws, in channel order (EI, delta, r, bm).
struct DisturbanceDraw {
    double ei = 0.0;
    double delta = 0.0;
    double r = 0.0;
    double bm = 0.0;
};

/// Four independent std::mt19937_64 streams, one per channel. Channel k is
/// seeded with splitmix64(seed + k); a draw is the top 53 bits of one engine
/// output scaled to [0, 1). Both std::mt19937_64 and the conversion are fully
/// specified, so sequences are identical across platforms and standard
/// libraries.
class DisturbanceStreams {
public:
    explicit DisturbanceStreams(std::uint64_t seed);

    /// Draw the next day's values; every channel advances exactly once.
    DisturbanceDraw next_day();

private:
    std::array<std::mt19937_64, 4> engines_;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;
[[nodiscard]] double to_unit_interval(std::uint64_t bits) noexcept;

/// Apply the input channels (EI, delta) to a nominal input; results are
/// clamped at >= 0.
[[nodiscard]] ControlInput apply_disturbances(const ControlInput& nominal,
                                              const DisturbanceSpec& spec,
                                              const DisturbanceDraw& draw);

} // namespace bodymass
