#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sagin {

using Age = std::int64_t;

/// Satellite-side recursion: reset to 0 on generation, otherwise age by one slot.
inline Age step_satellite_aoi(Age theta, bool generated) { return generated ? 0 : theta + 1; }

/// HAP-side recursion. `theta_snapshot` is the satellite AoI `delay` slots ago.
inline Age step_hap_aoi(Age delta, bool served, Age theta_snapshot, Age delay) {
    return served ? theta_snapshot + delay : delta + 1;
}

/// User-side recursion. `delta_snapshot` is the HAP AoI `delay` slots ago.
inline Age step_user_aoi(Age user_age, bool delivered, Age delta_snapshot, Age delay) {
    return delivered ? delta_snapshot + delay : user_age + 1;
}

/// Whole slots needed to move `bits` at `rate` bits/s: ceil(bits / (rate * slot)).
/// An empty batch takes 0 slots. Returns nullopt (no transfer possible) when
/// the batch is nonempty and the rate is not positive.
std::optional<Age> transfer_delay(double bits, double rate, double slot_duration);

/// What happened in one slot, as seen by the AoI recursions.
struct SlotEvents {
    std::vector<bool> generated;             // per satellite
    std::optional<int> served;               // l_t when z_HAP = 1
    Age hap_delay = 0;                       // T_i for the served satellite
    std::vector<Age> user_delay;             // T_j per user
    std::vector<std::vector<int>> delivered; // per user: source satellites delivered this slot
};

/// Three-layer AoI state with full history. Index 0 of each history is the
/// initial (all-zero) state; index t is the state after slot t.
class AoiLedger {
public:
    AoiLedger() = default;
    AoiLedger(int num_satellites, int num_users);

    void reset(int num_satellites, int num_users);
    /// Applies one slot of the recursions and appends to the history.
    void advance(const SlotEvents& ev);

    int num_satellites() const { return ns_; }
    int num_users() const { return nu_; }
    /// Number of completed slots.
    std::int64_t slots() const { return static_cast<std::int64_t>(theta_.size()) - 1; }

    /// Values at history index t (0 <= t <= slots()). Negative indices clamp to 0.
    Age theta(std::int64_t t, int i) const;
    Age delta(std::int64_t t, int i) const;
    Age user(std::int64_t t, int i, int j) const;

    std::span<const Age> theta_now() const { return theta_.back(); }
    std::span<const Age> delta_now() const { return delta_.back(); }
    /// Row-major [satellite][user].
    std::span<const Age> user_now() const { return user_.back(); }

    /// Mean over users of the user-side AoI for satellite i at history index t.
    double user_mean(std::int64_t t, int i) const;
    /// Sum over satellites of user_mean(t, i).
    double aoi_sum(std::int64_t t) const;

private:
    static std::size_t clamp_index(std::int64_t t, std::size_t size);

    int ns_ = 0;
    int nu_ = 0;
    std::vector<std::vector<Age>> theta_;
    std::vector<std::vector<Age>> delta_;
    std::vector<std::vector<Age>> user_;
};

/// Time-average objective: mean over slots of the per-slot AoI sums.
/// Throws std::invalid_argument on an empty trace.
double objective_f1(std::span<const double> per_slot_aoi_sum);
double objective_f1(const AoiLedger& ledger);

}  // namespace sagin
