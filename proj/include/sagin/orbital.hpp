#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sagin {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct PhysicalConstants {
    double gravitational_constant = 6.67430e-11;  // m^3 kg^-1 s^-2
    double earth_mass = 3.986004418e14 / 6.67430e-11;  // kg, chosen so G*M = 3.986004418e14
    double earth_radius = 6.371e6;  // m

    double mu() const { return gravitational_constant * earth_mass; }
};

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    double dot(const Position3D& o) const { return x * o.x + y * o.y + z * o.z; }
    Position3D operator-(const Position3D& o) const { return {x - o.x, y - o.y, z - o.z}; }
    bool operator==(const Position3D&) const = default;
};

/// Circular-orbit element set. Angles in radians, altitude in metres.
struct OrbitalElements {
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee_init = 0.0;
    double altitude = 5.0e5;
    double true_anomaly = 0.0;

    double orbital_radius(const PhysicalConstants& c) const { return altitude + c.earth_radius; }
};

/// Kepler period of a circular orbit of radius `radius` (m), in seconds.
/// Throws std::domain_error unless radius is finite and exceeds the Earth radius.
double orbital_period(double radius, const PhysicalConstants& c = {});

/// Mean motion 2*pi/period in rad/s.
double angular_velocity(double radius, const PhysicalConstants& c = {});

void validate(const OrbitalElements& e, const PhysicalConstants& c = {});

/// Position at continuous time `seconds` since epoch. The argument of perigee
/// advances as omega_init + (seconds * angular_velocity mod 2*pi).
Position3D satellite_position_at(const OrbitalElements& e, double seconds,
                                 const PhysicalConstants& c = {});

/// Position at slot `t`.
Position3D satellite_position(const OrbitalElements& e, std::int64_t t, double slot_duration,
                              const PhysicalConstants& c = {});

/// Elevation (rad) of `target` above the local horizontal plane at `observer`,
/// with the local vertical taken as the geocentric radial direction.
double elevation_angle(const Position3D& observer, const Position3D& target);

/// Indices of satellites with elevation >= min_elevation, ascending.
std::vector<int> visible_set(std::span<const Position3D> satellites, const Position3D& hap,
                             double min_elevation);

/// Tracks the selected satellite sequence and the handover count.
class HandoverLedger {
public:
    /// Records l_t; increments the count iff it differs from the previous
    /// selection. The first selection is not a handover.
    void record_selection(int satellite);

    std::optional<int> current() const { return current_; }
    std::int64_t handover_count() const { return count_; }
    const std::vector<int>& history() const { return history_; }
    void clear();

private:
    std::optional<int> current_;
    std::int64_t count_ = 0;
    std::vector<int> history_;
};

struct ConstellationDefaults {
    int num_satellites = 10;
    double min_altitude = 5.0e5;
    double max_altitude = 1.8e6;
    std::uint64_t seed = 1;
};

/// Default LEO constellation: altitudes evenly spaced over [min, max],
/// inclinations cycling through equatorial, mid-inclination and near-polar
/// bands, node and phase drawn so that the satellites pass near the sub-HAP
/// point (on the +x axis) during an episode.
std::vector<OrbitalElements> default_constellation(const ConstellationDefaults& d);

}  // namespace sagin
