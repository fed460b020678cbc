#include "sagin/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sagin {

namespace {

enum Stream : std::uint64_t {
    kGeneration = 1,
    kFso = 2,
    kRf = 3,
    kScheduler = 4,
    kUsers = 5,
};

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("config: " + what);
}

}  // namespace

void validate(const SimConfig& c) {
    require(c.num_satellites >= 1, "num_satellites must be >= 1");
    require(c.num_users >= 1, "num_users must be >= 1");
    require(c.episode_length >= 1, "episode_length must be >= 1");
    require(c.slot_duration > 0.0 && std::isfinite(c.slot_duration), "slot_duration must be positive");
    require(c.constants.gravitational_constant > 0.0 && c.constants.earth_mass > 0.0 &&
                c.constants.earth_radius > 0.0,
            "physical constants must be positive");
    require(c.constellation.empty() || static_cast<int>(c.constellation.size()) == c.num_satellites,
            "constellation size must equal num_satellites");
    for (const auto& e : c.constellation) validate(e, c.constants);
    require(c.min_altitude > 0.0 && c.min_altitude <= c.max_altitude, "need 0 < min_altitude <= max_altitude");
    require(c.hap_altitude > 0.0, "hap_altitude must be positive");
    require(c.user_area_side >= 0.0, "user_area_side must be >= 0");
    require(c.queue_capacity >= 1, "queue_capacity must be >= 1");
    require(c.ttl >= 0, "ttl must be >= 0");
    require(c.p_gen >= 0.0 && c.p_gen <= 1.0, "p_gen must lie in [0, 1]");
    require(c.packet_bits > 0.0, "packet_bits must be positive");
    require(c.packet_bits_spread >= 0.0 && c.packet_bits_spread < 1.0, "packet_bits_spread must lie in [0, 1)");
    require(c.min_elevation >= 0.0 && c.min_elevation < kPi / 2.0, "min_elevation must lie in [0, 90) degrees");
    for (const auto& w : {c.rho1, c.rho2, c.rho3}) require(!w || *w >= 0.0, "reward weights must be >= 0");
    validate(c.fso);
    validate(c.rf, c.num_users);
}

RewardWeights resolved_reward_weights(const SimConfig& c) {
    constexpr double kAoiCap = 100.0;
    RewardWeights w;
    w.rho1 = c.rho1.value_or(1.0 / (c.num_satellites * kAoiCap));
    w.rho2 = c.rho2.value_or(0.1);
    w.rho3 = c.rho3.value_or(1.0 / (c.num_users * c.rf.bandwidth));
    return w;
}

std::vector<OrbitalElements> resolved_constellation(const SimConfig& c) {
    if (!c.constellation.empty()) return c.constellation;
    ConstellationDefaults d;
    d.num_satellites = c.num_satellites;
    d.min_altitude = c.min_altitude;
    d.max_altitude = c.max_altitude;
    d.seed = c.constellation_seed;
    return default_constellation(d);
}

std::vector<FieldSpec> state_schema(int ns, int nu) {
    return {
        {"satellite_positions", {ns, 3}, "m"},
        {"user_positions", {nu, 3}, "m"},
        {"theta", {ns}, "slots"},
        {"delta", {ns}, "slots"},
        {"user_aoi", {ns, nu}, "slots"},
        {"visible", {ns}, "bool"},
        {"previous_selection", {1}, "index (-1 = none)"},
    };
}

std::vector<double> flatten(const EnvState& s) {
    std::vector<double> v;
    v.reserve(s.satellite_positions.size() * 3 + s.user_positions.size() * 3 + s.theta.size() * 3 +
              s.user_aoi.size() + 1);
    for (const auto& p : s.satellite_positions) v.insert(v.end(), {p.x, p.y, p.z});
    for (const auto& p : s.user_positions) v.insert(v.end(), {p.x, p.y, p.z});
    for (Age a : s.theta) v.push_back(static_cast<double>(a));
    for (Age a : s.delta) v.push_back(static_cast<double>(a));
    for (Age a : s.user_aoi) v.push_back(static_cast<double>(a));
    for (bool b : s.visible) v.push_back(b ? 1.0 : 0.0);
    v.push_back(s.previous_selection ? static_cast<double>(*s.previous_selection) : -1.0);
    return v;
}

Environment::Environment(SimConfig config)
    : config_(std::move(config)), queue_(std::max<std::size_t>(config_.queue_capacity, 1)) {
    validate(config_);
    weights_ = resolved_reward_weights(config_);
    constellation_ = resolved_constellation(config_);
    hap_ = {config_.constants.earth_radius + config_.hap_altitude, 0.0, 0.0};
}

const EnvState& Environment::reset(std::optional<std::uint64_t> seed) {
    const int ns = config_.num_satellites, nu = config_.num_users;
    seed_ = seed.value_or(config_.seed);
    t_ = 0;
    next_packet_id_ = 0;
    started_ = true;

    gen_rng_.clear();
    rf_rng_.clear();
    sched_rng_.clear();
    for (int i = 0; i < ns; ++i) gen_rng_.push_back(Rng::derive(seed_, kGeneration, i));
    fso_rng_ = Rng::derive(seed_, kFso);
    for (int j = 0; j < nu; ++j) {
        rf_rng_.push_back(Rng::derive(seed_, kRf, j));
        sched_rng_.push_back(Rng::derive(seed_, kScheduler, j));
    }

    // Users sit on the ground in a square centred under the HAP.
    Rng user_rng = Rng::derive(seed_, kUsers);
    const double half = 0.5 * config_.user_area_side;
    state_ = EnvState{};
    state_.user_positions.clear();
    rf_large_scale_.clear();
    for (int j = 0; j < nu; ++j) {
        const double y = user_rng.uniform(-half, half);
        const double z = user_rng.uniform(-half, half);
        Position3D u{config_.constants.earth_radius, y, z};
        state_.user_positions.push_back(u);
        rf_large_scale_.push_back(rf_large_scale(config_.rf, (hap_ - u).norm()));
    }

    ledger_.reset(ns, nu);
    handover_.clear();
    queue_ = BufferQueue(config_.queue_capacity);
    pending_.assign(static_cast<std::size_t>(ns), std::nullopt);
    events_.clear();
    flow_ = {};
    refresh_state();
    return state_;
}

void Environment::refresh_state() {
    state_.t = t_;
    state_.satellite_positions.clear();
    for (const auto& e : constellation_) {
        state_.satellite_positions.push_back(
            satellite_position(e, t_, config_.slot_duration, config_.constants));
    }
    const auto th = ledger_.theta_now(), de = ledger_.delta_now(), us = ledger_.user_now();
    state_.theta.assign(th.begin(), th.end());
    state_.delta.assign(de.begin(), de.end());
    state_.user_aoi.assign(us.begin(), us.end());
    state_.visible.assign(constellation_.size(), false);
    for (int i : visible_set(state_.satellite_positions, hap_, config_.min_elevation)) state_.visible[i] = true;
    state_.previous_selection = handover_.current();
}

std::vector<int> Environment::visible_now() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < state_.visible.size(); ++i) {
        if (state_.visible[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

PolicyView Environment::policy_view() const {
    PolicyView v;
    v.visible = visible_now();
    v.theta = state_.theta;
    v.delta = state_.delta;
    v.pending.resize(pending_.size());
    for (std::size_t i = 0; i < pending_.size(); ++i) v.pending[i] = pending_[i].has_value();
    v.queue_length = queue_.size();
    v.num_users = config_.num_users;
    v.current = handover_.current();
    return v;
}

StepOutcome Environment::step(int action) {
    if (!started_) throw std::logic_error("step before reset");
    if (done()) throw std::logic_error("episode finished; reset first");
    const int ns = config_.num_satellites, nu = config_.num_users;
    if (action < kHoldAction || action >= ns) {
        throw std::out_of_range("action " + std::to_string(action) + " outside [-1, " + std::to_string(ns) + ")");
    }

    const std::int64_t slot = t_ + 1;
    StepOutcome out;
    StepInfo& info = out.info;
    info.requested_action = action;

    // Action validation against the visible set; otherwise hold.
    std::optional<int> selection = handover_.current();
    if (action != kHoldAction) {
        if (state_.visible[action]) {
            selection = action;
        } else {
            info.action_valid = false;
        }
    }
    const bool link_up = selection && state_.visible[*selection];

    SlotEvents ev;
    ev.generated.assign(static_cast<std::size_t>(ns), false);
    ev.user_delay.assign(static_cast<std::size_t>(nu), 0);
    ev.delivered.assign(static_cast<std::size_t>(nu), {});

    // (1) status-update generation, keep-latest at the satellite.
    for (int i = 0; i < ns; ++i) {
        if (!gen_rng_[i].bernoulli(config_.p_gen)) continue;
        const double spread = config_.packet_bits_spread;
        const double bits = config_.packet_bits * gen_rng_[i].uniform(1.0 - spread, 1.0 + spread);
        ev.generated[i] = true;
        ++flow_.updates_generated;
        if (pending_[i]) ++flow_.updates_superseded;
        pending_[i] = PendingUpdate{slot, bits};
    }

    // (2) handover ledger.
    const std::int64_t handovers_before = handover_.handover_count();
    if (selection) handover_.record_selection(*selection);
    info.selection = selection;
    info.handover_count = handover_.handover_count();
    info.handover_event = info.handover_count != handovers_before;

    // (3) FSO hop and HAP ingress.
    const double h_egc = sample_fso_egc(config_.fso, fso_rng_);
    info.fso_snr = fso_snr(config_.fso, h_egc);
    info.z_hap = link_up && decode_indicator(info.fso_snr, config_.fso.snr_threshold);
    if (info.z_hap) {
        const int sel = *selection;
        const double fso_rate_bps = fso_rate(config_.fso, info.fso_snr);
        const auto& upd = pending_[sel];
        const double batch_bits = upd ? upd->size_bits * nu : 0.0;
        if (const auto delay = transfer_delay(batch_bits, fso_rate_bps, config_.slot_duration)) {
            ev.served = sel;
            ev.hap_delay = *delay;
            if (upd) {
                std::vector<Packet> batch;
                batch.reserve(static_cast<std::size_t>(nu));
                for (int j = 0; j < nu; ++j) {
                    Packet p;
                    p.id = next_packet_id_++;
                    p.source_satellite = sel;
                    p.dest_user = j;
                    p.gen_time = upd->gen_time;
                    p.size_bits = upd->size_bits;
                    p.deadline = upd->gen_time + config_.ttl;
                    batch.push_back(p);
                }
                info.dropped = queue_.enqueue_batch(std::move(batch), slot).size();
                ++flow_.updates_transferred;
                pending_[sel].reset();
            }
        }
    }

    // (4) RF hop: fading, max-min powers, per-user scheduling.
    PowerAllocProblem problem;
    problem.p_min = config_.rf.p_min;
    problem.p_max = config_.rf.p_max;
    problem.p_total = config_.rf.p_total;
    std::vector<double> gains(static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) {
        gains[j] = rf_large_scale_[j] * sample_nakagami(config_.rf.nakagami_m, rf_rng_[j]);
        problem.effective_gain.push_back(gains[j] * gains[j] / config_.rf.noise_power);
        problem.bandwidth.push_back(config_.rf.bandwidth);
    }
    const PowerAllocation alloc = solve_max_min(problem, config_.power_rate_tolerance);
    info.powers = alloc.powers;
    info.rates = alloc.rates;
    info.min_rate = alloc.min_rate;
    for (int j = 0; j < nu; ++j) {
        const double snr = rf_snr(alloc.powers[j], gains[j], config_.rf.noise_power);
        if (!decode_indicator(snr, config_.rf.snr_threshold)) continue;
        const double capacity = alloc.rates[j] * config_.slot_duration;
        auto sent = queue_.schedule_for_user(j, config_.scheduling, capacity, sched_rng_[j], slot);
        if (sent.empty()) continue;
        double bits = 0.0;
        auto& sources = ev.delivered[j];
        for (const auto& p : sent) {
            bits += p.size_bits;
            if (std::find(sources.begin(), sources.end(), p.source_satellite) == sources.end()) {
                sources.push_back(p.source_satellite);
            }
        }
        std::sort(sources.begin(), sources.end());
        ev.user_delay[j] = transfer_delay(bits, alloc.rates[j], config_.slot_duration).value_or(0);
        info.delivered += sent.size();
    }
    info.queue_length = queue_.size();

    // AoI recursions.
    ledger_.advance(ev);
    events_.push_back(std::move(ev));

    // (5) reward.
    info.aoi_sum = ledger_.aoi_sum(slot);
    info.rate_sum = 0.0;
    for (double r : alloc.rates) info.rate_sum += r;
    const double handover_measure = config_.handover_penalty == HandoverPenalty::Cumulative
                                        ? static_cast<double>(info.handover_count)
                                        : (info.handover_event ? 1.0 : 0.0);
    out.components.aoi = -weights_.rho1 * info.aoi_sum;
    out.components.handover = -weights_.rho2 * handover_measure;
    out.components.rate = weights_.rho3 * info.rate_sum;
    out.reward = out.components.aoi + out.components.handover + out.components.rate;

    // (6) advance time and geometry.
    t_ = slot;
    refresh_state();
    out.next_state = state_;
    out.done = done();
    return out;
}

ObjectiveReport objective_report(const Environment& env) {
    ObjectiveReport r;
    r.f1 = objective_f1(env.aoi());
    r.f2 = env.handovers().handover_count();
    return r;
}

}  // namespace sagin
