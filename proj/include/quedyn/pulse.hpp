#pragma once

#include <Eigen/Dense>

namespace quedyn {

/// F(t) = f0 * sin(omega (t - t_p)) cos^2(pi (t - t_p) / (2 sigma)) inside
/// |t - t_p| <= sigma and exactly zero outside.
struct LaserPulse {
    Eigen::Vector3d f0 = Eigen::Vector3d::Zero();
    double omega = 0.0;
    double t_p = 0.0;
    double sigma = 1.0;
};

/// Scalar envelope shared by all field components; zero outside the window.
double pulse_envelope(const LaserPulse& pulse, double t);

Eigen::Vector3d pulse_field(const LaserPulse& pulse, double t);

}  // namespace quedyn
