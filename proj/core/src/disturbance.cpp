#include "bodymass/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bodymass {

void DisturbanceSpec::validate() const {
    for (double v : {ei_coeff, delta_coeff, r_coeff, bm_noise_kg}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("disturbance amplitudes must be finite and >= 0");
        }
    }
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double to_unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

DisturbanceStreams::DisturbanceStreams(std::uint64_t seed) {
    for (std::size_t k = 0; k < engines_.size(); ++k) {
        engines_[k].seed(splitmix64(seed + k));
    }
}

DisturbanceDraw DisturbanceStreams::next_day() {
    DisturbanceDraw d;
    d.ei = to_unit_interval(engines_[0]());
    d.delta = to_unit_interval(engines_[1]());
    d.r = to_unit_interval(engines_[2]());
    d.bm = to_unit_interval(engines_[3]());
    return d;
}

ControlInput apply_disturbances(const ControlInput& nominal, const DisturbanceSpec& spec,
                                const DisturbanceDraw& draw) {
    ControlInput out;
    out.ei_kcal = std::max(0.0, nominal.ei_kcal * (1.0 + spec.ei_coeff * draw.ei));
    out.delta = std::max(0.0, nominal.delta * (1.0 - spec.delta_coeff * draw.delta));
    return out;
}

} // namespace bodymass
