#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace clockforge {

inline constexpr int kMinutesPerCycle = 720;

class RangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Wall time on a 12-hour dial, minute resolution.
class ClockTime {
public:
    ClockTime() = default;
    ClockTime(int hour, int minute);

    [[nodiscard]] int hour() const noexcept { return hour_; }
    [[nodiscard]] int minute() const noexcept { return minute_; }

    friend bool operator==(const ClockTime&, const ClockTime&) = default;

private:
    int hour_ = 0;
    int minute_ = 0;
};

/// One of the 720 minute classes, hour * 60 + minute.
class TimeClass {
public:
    TimeClass() = default;
    explicit TimeClass(int index);

    [[nodiscard]] int index() const noexcept { return index_; }

    friend bool operator==(const TimeClass&, const TimeClass&) = default;
    friend auto operator<=>(const TimeClass&, const TimeClass&) = default;

private:
    int index_ = 0;
};

/// Hand directions in degrees, clockwise from the 12 mark, reduced to [0, 360).
struct HandAngles {
    double hour_angle = 0.0;
    double minute_angle = 0.0;

    HandAngles() = default;
    HandAngles(double hour, double minute);
};

// Reduces any finite angle into [0, 360).
double wrap_degrees(double degrees) noexcept;

// Signed smallest rotation from `from` to `to`, in (-180, 180].
double angle_difference(double to, double from) noexcept;

// Integer modulo that always lands in [0, m).
constexpr int positive_mod(long long value, int m) noexcept {
    const long long r = value % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

TimeClass encode_time(const ClockTime& t) noexcept;
ClockTime decode_class(TimeClass c) noexcept;

HandAngles hand_angles(const ClockTime& t) noexcept;

/// Reads a time off two hand directions. Index 0 treats the angles as given
/// (hour, minute); index 1 is the swapped-hands interpretation.
std::array<TimeClass, 2> angles_to_time(const HandAngles& a) noexcept;

// Decodes one (hour hand, minute hand) assignment without the swap.
TimeClass decode_hands(double hour_angle, double minute_angle) noexcept;

/// Minutes between two classes on the 720-minute cycle, in [0, 360].
int circular_distance(TimeClass a, TimeClass b) noexcept;

std::string to_string(const ClockTime& t);

}  // namespace clockforge
