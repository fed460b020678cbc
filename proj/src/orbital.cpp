#include "sagin/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sagin/rng.hpp"

namespace sagin {

double Position3D::norm() const { return std::sqrt(x * x + y * y + z * z); }

double orbital_period(double radius, const PhysicalConstants& c) {
    if (!std::isfinite(radius) || radius <= 0.0 || radius <= c.earth_radius) {
        throw std::domain_error("orbital_period: radius must be finite and above the Earth radius");
    }
    return kTwoPi * std::sqrt(radius * radius * radius / c.mu());
}

double angular_velocity(double radius, const PhysicalConstants& c) {
    return kTwoPi / orbital_period(radius, c);
}

void validate(const OrbitalElements& e, const PhysicalConstants& c) {
    const bool finite = std::isfinite(e.inclination) && std::isfinite(e.raan) &&
                        std::isfinite(e.arg_perigee_init) && std::isfinite(e.altitude) &&
                        std::isfinite(e.true_anomaly);
    if (!finite) throw std::domain_error("orbital elements must be finite");
    if (e.altitude <= 0.0) throw std::domain_error("satellite altitude must be positive");
    (void)c;
}

Position3D satellite_position_at(const OrbitalElements& e, double seconds,
                                 const PhysicalConstants& c) {
    const double radius = e.orbital_radius(c);
    const double omega = e.arg_perigee_init + std::fmod(seconds * angular_velocity(radius, c), kTwoPi);
    const double u = omega + e.true_anomaly;
    const double cu = std::cos(u), su = std::sin(u);
    const double co = std::cos(e.raan), so = std::sin(e.raan);
    const double ci = std::cos(e.inclination), si = std::sin(e.inclination);
    return {radius * (cu * co - su * ci * so),
            radius * (cu * so + su * ci * co),
            radius * (su * si)};
}

Position3D satellite_position(const OrbitalElements& e, std::int64_t t, double slot_duration,
                              const PhysicalConstants& c) {
    return satellite_position_at(e, static_cast<double>(t) * slot_duration, c);
}

double elevation_angle(const Position3D& observer, const Position3D& target) {
    const Position3D los = target - observer;
    const double range = los.norm();
    const double r = observer.norm();
    if (range == 0.0 || r == 0.0) return kPi / 2.0;
    const double s = std::clamp(los.dot(observer) / (range * r), -1.0, 1.0);
    return std::asin(s);
}

std::vector<int> visible_set(std::span<const Position3D> satellites, const Position3D& hap,
                             double min_elevation) {
    std::vector<int> out;
    for (std::size_t i = 0; i < satellites.size(); ++i) {
        if (elevation_angle(hap, satellites[i]) >= min_elevation) out.push_back(static_cast<int>(i));
    }
    return out;
}

void HandoverLedger::record_selection(int satellite) {
    if (current_ && *current_ != satellite) ++count_;
    current_ = satellite;
    history_.push_back(satellite);
}

void HandoverLedger::clear() {
    current_.reset();
    count_ = 0;
    history_.clear();
}

std::vector<OrbitalElements> default_constellation(const ConstellationDefaults& d) {
    struct Band {
        double lo, hi;
    };
    // equatorial, mid-inclination, near-polar (degrees)
    static constexpr Band bands[] = {{0.0, 5.0}, {45.0, 60.0}, {80.0, 95.0}};

    Rng rng = Rng::derive(d.seed, 0x0c0457ULL);
    std::vector<OrbitalElements> sats;
    sats.reserve(static_cast<std::size_t>(d.num_satellites));
    for (int i = 0; i < d.num_satellites; ++i) {
        OrbitalElements e;
        const double frac = d.num_satellites > 1 ? static_cast<double>(i) / (d.num_satellites - 1) : 0.0;
        e.altitude = d.min_altitude + frac * (d.max_altitude - d.min_altitude);
        const Band& b = bands[i % 3];
        e.inclination = deg_to_rad(rng.uniform(b.lo, b.hi));
        e.raan = deg_to_rad(rng.uniform(-8.0, 8.0));
        e.arg_perigee_init = 0.0;
        e.true_anomaly = deg_to_rad(rng.uniform(-25.0, 15.0));
        sats.push_back(e);
    }
    return sats;
}

}  // namespace sagin
