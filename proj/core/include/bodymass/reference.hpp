#pragma once

namespace bodymass {

/// Desired output trajectory: a cubic Hermite segment from (y0, s0) at t = 0 to
/// (yT, sT) at t = horizon_days, held at (yT, 0) afterwards. With `setpoint`
/// set, the reference is the constant yT.
struct ReferenceSpec {
    double y0 = 100.0;
    double s0 = -0.05;
    double yt = 70.0;
    double st = 0.0;
    int horizon_days = 300;
    bool setpoint = false;

    void validate() const;
};

struct ReferenceSample {
    double y_d = 0.0;
    double y_d_dot = 0.0;
};

[[nodiscard]] ReferenceSample eval_reference(const ReferenceSpec& spec, double t);

} // namespace bodymass
