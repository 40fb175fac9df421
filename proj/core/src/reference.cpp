#include "bodymass/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace bodymass {

void ReferenceSpec::validate() const {
    if (horizon_days < 2) throw std::invalid_argument("reference horizon must be >= 2 days");
    if (!std::isfinite(y0) || !std::isfinite(s0) || !std::isfinite(yt) || !std::isfinite(st)) {
        throw std::invalid_argument("reference values must be finite");
    }
}

ReferenceSample eval_reference(const ReferenceSpec& spec, double t) {
    if (t < 0.0) throw std::domain_error("eval_reference: t must be >= 0");
    if (spec.setpoint) return {spec.yt, 0.0};

    const double h = static_cast<double>(spec.horizon_days);
    if (t >= h) return {spec.yt, 0.0};

    const double s = t / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    const double y = h00 * spec.y0 + h10 * h * spec.s0 + h01 * spec.yt + h11 * h * spec.st;

    // d/dt = (1/h) d/ds
    const double d00 = 6.0 * s2 - 6.0 * s;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = -6.0 * s2 + 6.0 * s;
    const double d11 = 3.0 * s2 - 2.0 * s;
    const double ydot = (d00 * spec.y0 + d01 * spec.yt) / h + d10 * spec.s0 + d11 * spec.st;
    return {y, ydot};
}

} // namespace bodymass
