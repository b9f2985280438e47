#include "quedyn/pulse.hpp"

#include <cmath>
#include <numbers>

namespace quedyn {

double pulse_envelope(const LaserPulse& pulse, double t) {
    double u = t - pulse.t_p;
    if (std::abs(u) > pulse.sigma) return 0.0;
    double c = std::cos(std::numbers::pi * u / (2.0 * pulse.sigma));
    return std::sin(pulse.omega * u) * c * c;
}

Eigen::Vector3d pulse_field(const LaserPulse& pulse, double t) {
    return pulse.f0 * pulse_envelope(pulse, t);
}

}  // namespace quedyn
