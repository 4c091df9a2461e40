#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace circletrack {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// Wraps a finite radian value into (-pi, pi].
inline double wrap_radians(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("wrap_radians: non-finite input");
    }
    double r = std::remainder(x, kTwoPi);  // lands in [-pi, pi]
    if (r <= -std::numbers::pi) {
        r += kTwoPi;
    }
    return r;
}

/// An angle in radians, wrapped to (-pi, pi] on every construction and
/// arithmetic operation.
class Angle {
public:
    Angle() : value_(0.0) {}
    explicit Angle(double radians) : value_(wrap_radians(radians)) {}

    double radians() const { return value_; }

    friend Angle operator+(Angle a, Angle b) { return Angle(a.value_ + b.value_); }
    friend Angle operator-(Angle a, Angle b) { return Angle(a.value_ - b.value_); }

    friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

private:
    double value_;
};

inline Angle wrap_angle(double radians) { return Angle(radians); }

/// Signed difference a - b wrapped into (-pi, pi].
inline double signed_difference(Angle a, Angle b) {
    return wrap_radians(a.radians() - b.radians());
}

/// Shorter-arc distance between two angles, in [0, pi].
inline double geodesic_distance(Angle a, Angle b) {
    double d = std::fabs(a.radians() - b.radians());
    return std::min(d, kTwoPi - d);
}

}  // namespace circletrack
