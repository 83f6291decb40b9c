#include "clockforge/time.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace clockforge {

ClockTime::ClockTime(int hour, int minute) : hour_(hour), minute_(minute) {
    if (hour < 0 || hour > 11) {
        throw RangeError("hour out of range [0, 11]: " + std::to_string(hour));
    }
    if (minute < 0 || minute > 59) {
        throw RangeError("minute out of range [0, 59]: " + std::to_string(minute));
    }
}

TimeClass::TimeClass(int index) : index_(index) {
    if (index < 0 || index >= kMinutesPerCycle) {
        throw RangeError("time class out of range [0, 720): " + std::to_string(index));
    }
}

HandAngles::HandAngles(double hour, double minute)
    : hour_angle(wrap_degrees(hour)), minute_angle(wrap_degrees(minute)) {}

double wrap_degrees(double degrees) noexcept {
    double r = std::fmod(degrees, 360.0);
    if (r < 0.0) r += 360.0;
    // fmod of a tiny negative can round back up to exactly 360
    if (r >= 360.0) r -= 360.0;
    return r;
}

double angle_difference(double to, double from) noexcept {
    double d = wrap_degrees(to - from);
    return d > 180.0 ? d - 360.0 : d;
}

TimeClass encode_time(const ClockTime& t) noexcept {
    return TimeClass(t.hour() * 60 + t.minute());
}

ClockTime decode_class(TimeClass c) noexcept {
    return ClockTime(c.index() / 60, c.index() % 60);
}

HandAngles hand_angles(const ClockTime& t) noexcept {
    return HandAngles(30.0 * t.hour() + 0.5 * t.minute(), 6.0 * t.minute());
}

TimeClass decode_hands(double hour_angle, double minute_angle) noexcept {
    const int minute = positive_mod(std::llround(wrap_degrees(minute_angle) / 6.0), 60);
    const double hour_base = wrap_degrees(hour_angle) - 0.5 * minute;
    const int hour = positive_mod(std::llround(hour_base / 30.0), 12);
    return TimeClass(hour * 60 + minute);
}

std::array<TimeClass, 2> angles_to_time(const HandAngles& a) noexcept {
    return {decode_hands(a.hour_angle, a.minute_angle),
            decode_hands(a.minute_angle, a.hour_angle)};
}

int circular_distance(TimeClass a, TimeClass b) noexcept {
    const int d = std::abs(a.index() - b.index());
    return d < kMinutesPerCycle - d ? d : kMinutesPerCycle - d;
}

std::string to_string(const ClockTime& t) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%d:%02d", t.hour(), t.minute());
    return buf;
}

}  // namespace clockforge
