#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sagin/aoi.hpp"
#include "sagin/channel.hpp"
#include "sagin/hap_queue.hpp"
#include "sagin/orbital.hpp"
#include "sagin/power_alloc.hpp"
#include "sagin/rng.hpp"

namespace sagin {

enum class HandoverPenalty { Cumulative, Indicator };

struct RewardWeights {
    double rho1 = 0.0;  // AoI
    double rho2 = 0.0;  // handovers
    double rho3 = 0.0;  // sum rate
};

struct SimConfig {
    int num_satellites = 10;
    int num_users = 10;
    std::int64_t episode_length = 500;
    double slot_duration = 1.0;

    PhysicalConstants constants;
    /// Explicit constellation; when empty a default one is generated from
    /// `constellation_seed` with `num_satellites` entries.
    std::vector<OrbitalElements> constellation;
    std::uint64_t constellation_seed = 1;
    double min_altitude = 5.0e5;
    double max_altitude = 1.8e6;

    double hap_altitude = 20000.0;
    double user_area_side = 1000.0;

    FsoLinkParams fso;
    RfLinkParams rf;

    std::size_t queue_capacity = 100;
    SchedulingPolicy scheduling = SchedulingPolicy::Fifo;
    std::int64_t ttl = 50;

    double p_gen = 0.3;
    double packet_bits = 1.0e7;
    double packet_bits_spread = 0.5;  // sizes uniform in mean*(1 +- spread)

    /// Unset weights resolve to 1/(N_S * 100), 0.1 and 1/(N_U * B_j).
    std::optional<double> rho1, rho2, rho3;
    HandoverPenalty handover_penalty = HandoverPenalty::Cumulative;

    double min_elevation = deg_to_rad(10.0);
    double power_rate_tolerance = 0.0;  // <= 0 selects the solver default
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const SimConfig& c);
RewardWeights resolved_reward_weights(const SimConfig& c);
/// The constellation the environment will fly for this config.
std::vector<OrbitalElements> resolved_constellation(const SimConfig& c);

struct EnvState {
    std::int64_t t = 0;
    std::vector<Position3D> satellite_positions;
    std::vector<Position3D> user_positions;
    std::vector<Age> theta;
    std::vector<Age> delta;
    std::vector<Age> user_aoi;  // row-major [satellite][user]
    std::vector<bool> visible;
    std::optional<int> previous_selection;
};

struct FieldSpec {
    std::string name;
    std::vector<int> shape;
    std::string unit;
};

/// Layout of flatten(): field order, shapes and units.
std::vector<FieldSpec> state_schema(int num_satellites, int num_users);
/// Fixed-order numeric vector. previous_selection is -1 when unset.
std::vector<double> flatten(const EnvState& s);

struct RewardComponents {
    double aoi = 0.0;       // -rho1 * sum_i Delta_i
    double handover = 0.0;  // -rho2 * N_t (or the per-slot indicator)
    double rate = 0.0;      // rho3 * sum_j R_j
};

struct StepInfo {
    int requested_action = -1;
    bool action_valid = true;
    std::optional<int> selection;
    std::int64_t handover_count = 0;
    bool handover_event = false;
    bool z_hap = false;
    double fso_snr = 0.0;
    std::size_t queue_length = 0;
    std::size_t dropped = 0;
    std::size_t delivered = 0;
    std::vector<double> rates;
    std::vector<double> powers;
    double min_rate = 0.0;
    double aoi_sum = 0.0;
    double rate_sum = 0.0;
};

struct StepOutcome {
    double reward = 0.0;
    RewardComponents components;
    EnvState next_state;
    bool done = false;
    StepInfo info;
};

/// Satellite keep-latest buffer entry: the freshest untransferred update.
struct PendingUpdate {
    std::int64_t gen_time = 0;
    double size_bits = 0.0;
};

/// Per-episode packet and update counters.
struct FlowCounters {
    std::uint64_t updates_generated = 0;
    std::uint64_t updates_transferred = 0;
    std::uint64_t updates_superseded = 0;
};

/// Snapshot handed to selection policies.
struct PolicyView {
    std::vector<int> visible;
    std::vector<Age> theta;
    std::vector<Age> delta;
    std::vector<bool> pending;
    std::size_t queue_length = 0;
    int num_users = 0;
    std::optional<int> current;
};

/// Action value that asks the environment to keep the current selection.
inline constexpr int kHoldAction = -1;

class Environment {
public:
    explicit Environment(SimConfig config);

    /// Starts a new episode. Without a seed the config seed is used.
    const EnvState& reset(std::optional<std::uint64_t> seed = std::nullopt);

    /// Runs one slot with satellite `action` (or kHoldAction). An in-range
    /// action outside the visible set is replaced by the current selection and
    /// flagged in the info. Throws std::out_of_range for indices outside
    /// [-1, N_S) and std::logic_error before reset or after the episode ends;
    /// in both cases the environment is left unchanged.
    StepOutcome step(int action);

    const SimConfig& config() const { return config_; }
    const EnvState& state() const { return state_; }
    bool started() const { return started_; }
    bool done() const { return started_ && t_ >= config_.episode_length; }
    std::int64_t t() const { return t_; }
    std::uint64_t episode_seed() const { return seed_; }

    const std::vector<OrbitalElements>& constellation() const { return constellation_; }
    const Position3D& hap_position() const { return hap_; }
    const AoiLedger& aoi() const { return ledger_; }
    const HandoverLedger& handovers() const { return handover_; }
    const BufferQueue& queue() const { return queue_; }
    const std::vector<SlotEvents>& event_log() const { return events_; }
    const FlowCounters& flow() const { return flow_; }
    const std::vector<std::optional<PendingUpdate>>& pending() const { return pending_; }
    const RewardWeights& reward_weights() const { return weights_; }

    std::vector<int> visible_now() const;
    PolicyView policy_view() const;

private:
    void refresh_state();

    SimConfig config_;
    RewardWeights weights_;
    std::vector<OrbitalElements> constellation_;
    Position3D hap_;
    std::vector<double> rf_large_scale_;

    bool started_ = false;
    std::uint64_t seed_ = 0;
    std::int64_t t_ = 0;
    std::uint64_t next_packet_id_ = 0;

    EnvState state_;
    AoiLedger ledger_;
    HandoverLedger handover_;
    BufferQueue queue_;
    std::vector<std::optional<PendingUpdate>> pending_;
    std::vector<SlotEvents> events_;
    FlowCounters flow_;

    std::vector<Rng> gen_rng_;
    Rng fso_rng_;
    std::vector<Rng> rf_rng_;
    std::vector<Rng> sched_rng_;
};

struct ObjectiveReport {
    double f1 = 0.0;
    std::int64_t f2 = 0;
};

/// f1 from the AoI ledger, f2 = final handover count.
ObjectiveReport objective_report(const Environment& env);

}  // namespace sagin
