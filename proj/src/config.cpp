#include "sagin/config.hpp"

#include <fstream>
#include <set>

namespace sagin {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where(key) + ": wrong type");
        }
    }

    void get_optional(const char* key, std::optional<double>& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        if (it->is_null()) {
            out.reset();
        } else if (it->is_number()) {
            out = it->get<double>();
        } else {
            throw ConfigError(where(key) + ": expected a number or null");
        }
    }

    void get_degrees(const char* key, double& radians) {
        double deg = rad_to_deg(radians);
        get(key, deg);
        radians = deg_to_rad(deg);
    }

    bool has(const char* key) const { return j_.contains(key); }

    ObjectReader child(const char* key) {
        seen_.insert(key);
        return ObjectReader(j_.at(key), where(key));
    }

    const json& raw(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(where(it.key().c_str()) + ": unknown key");
        }
    }

    std::string where(const char* key = nullptr) const {
        std::string p = path_.empty() ? "config" : path_;
        if (key) p += std::string(".") + key;
        return p;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_fso(ObjectReader r, FsoLinkParams& p) {
    r.get("tx_gain_db", p.tx_gain_db);
    r.get("rx_gain_db", p.rx_gain_db);
    r.get("free_space_loss_db", p.free_space_loss_db);
    r.get("atmospheric_attenuation_db", p.atmospheric_attenuation_db);
    r.get("lens_loss_db", p.lens_loss_db);
    r.get("system_margin_db", p.system_margin_db);
    r.get("sat_tx_power_w", p.sat_tx_power);
    r.get("oe_conversion", p.oe_conversion);
    r.get("num_apertures", p.num_apertures);
    r.get("noise_power_w", p.noise_power);
    r.get("bandwidth_hz", p.bandwidth);
    r.get("snr_threshold", p.snr_threshold);
    r.get("gg_alpha", p.gg_alpha);
    r.get("gg_beta", p.gg_beta);
    r.finish();
}

void read_rf(ObjectReader r, RfLinkParams& p) {
    r.get("hap_tx_gain_db", p.hap_tx_gain_db);
    r.get("user_rx_gain_db", p.user_rx_gain_db);
    r.get("path_loss_exponent", p.path_loss_exponent);
    r.get("carrier_wavelength_m", p.carrier_wavelength);
    r.get("noise_power_w", p.noise_power);
    r.get("bandwidth_hz", p.bandwidth);
    r.get("nakagami_m", p.nakagami_m);
    r.get("snr_threshold", p.snr_threshold);
    r.get("p_min_w", p.p_min);
    r.get("p_max_w", p.p_max);
    r.get("p_total_w", p.p_total);
    r.finish();
}

OrbitalElements read_satellite(ObjectReader r) {
    OrbitalElements e;
    r.get("altitude_m", e.altitude);
    r.get_degrees("inclination_deg", e.inclination);
    r.get_degrees("raan_deg", e.raan);
    r.get_degrees("arg_perigee_deg", e.arg_perigee_init);
    r.get_degrees("true_anomaly_deg", e.true_anomaly);
    r.finish();
    return e;
}

json satellite_json(const OrbitalElements& e) {
    return {{"altitude_m", e.altitude},
            {"inclination_deg", rad_to_deg(e.inclination)},
            {"raan_deg", rad_to_deg(e.raan)},
            {"arg_perigee_deg", rad_to_deg(e.arg_perigee_init)},
            {"true_anomaly_deg", rad_to_deg(e.true_anomaly)}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig parse_run_config(const json& j) {
    RunConfig c;
    SimConfig& s = c.sim;
    ObjectReader r(j, "");
    r.get("num_satellites", s.num_satellites);
    r.get("num_users", s.num_users);
    r.get("episode_length", s.episode_length);
    r.get("slot_duration_s", s.slot_duration);
    r.get("seed", s.seed);
    r.get_degrees("min_elevation_deg", s.min_elevation);
    r.get("power_rate_tolerance", s.power_rate_tolerance);

    if (r.has("constants")) {
        auto k = r.child("constants");
        k.get("gravitational_constant", s.constants.gravitational_constant);
        k.get("earth_mass_kg", s.constants.earth_mass);
        k.get("earth_radius_m", s.constants.earth_radius);
        k.finish();
    }
    if (r.has("constellation")) {
        auto k = r.child("constellation");
        k.get("seed", s.constellation_seed);
        k.get("min_altitude_m", s.min_altitude);
        k.get("max_altitude_m", s.max_altitude);
        if (k.has("satellites")) {
            const json& list = k.raw("satellites");
            if (!list.is_array()) throw ConfigError("config.constellation.satellites: expected an array");
            s.constellation.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                s.constellation.push_back(
                    read_satellite(ObjectReader(list[i], "config.constellation.satellites[" + std::to_string(i) + "]")));
            }
        }
        k.finish();
    }
    if (r.has("hap")) {
        auto k = r.child("hap");
        k.get("altitude_m", s.hap_altitude);
        k.finish();
    }
    if (r.has("users")) {
        auto k = r.child("users");
        k.get("area_side_m", s.user_area_side);
        k.finish();
    }
    if (r.has("fso")) read_fso(r.child("fso"), s.fso);
    if (r.has("rf")) read_rf(r.child("rf"), s.rf);
    if (r.has("queue")) {
        auto k = r.child("queue");
        k.get("capacity", s.queue_capacity);
        std::string policy(to_string(s.scheduling));
        k.get("policy", policy);
        try {
            s.scheduling = parse_scheduling_policy(policy);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(k.where("policy") + ": " + e.what());
        }
        k.get("ttl_slots", s.ttl);
        k.finish();
    }
    if (r.has("traffic")) {
        auto k = r.child("traffic");
        k.get("p_gen", s.p_gen);
        k.get("packet_bits", s.packet_bits);
        k.get("packet_bits_spread", s.packet_bits_spread);
        k.finish();
    }
    if (r.has("reward")) {
        auto k = r.child("reward");
        k.get_optional("rho1", s.rho1);
        k.get_optional("rho2", s.rho2);
        k.get_optional("rho3", s.rho3);
        std::string mode = s.handover_penalty == HandoverPenalty::Cumulative ? "cumulative" : "indicator";
        k.get("handover_penalty", mode);
        if (mode == "cumulative") {
            s.handover_penalty = HandoverPenalty::Cumulative;
        } else if (mode == "indicator") {
            s.handover_penalty = HandoverPenalty::Indicator;
        } else {
            throw ConfigError(k.where("handover_penalty") + ": expected cumulative or indicator");
        }
        k.finish();
    }
    if (r.has("run")) {
        auto k = r.child("run");
        std::string policy(to_string(c.run.policy));
        k.get("policy", policy);
        try {
            c.run.policy = parse_policy_kind(policy);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(k.where("policy") + ": " + e.what());
        }
        k.get("episodes", c.run.episodes);
        k.get("seed", c.run.seed);
        k.get("out", c.run.out);
        k.get("bind", c.run.bind);
        k.finish();
        if (c.run.episodes < 1) throw ConfigError("config.run.episodes: must be >= 1");
    }
    if (r.has("ewg")) {
        auto k = r.child("ewg");
        k.get("w_aoi", c.ewg.aoi);
        k.get("w_buffer", c.ewg.buffer);
        k.get("w_handover", c.ewg.handover);
        k.finish();
        if (c.ewg.aoi < 0 || c.ewg.buffer < 0 || c.ewg.handover < 0) {
            throw ConfigError("config.ewg: weights must be >= 0");
        }
    }
    r.finish();

    try {
        validate(s);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

json to_json(const RunConfig& c) {
    const SimConfig& s = c.sim;
    json sats = json::array();
    for (const auto& e : s.constellation) sats.push_back(satellite_json(e));
    json constellation = {{"seed", s.constellation_seed},
                          {"min_altitude_m", s.min_altitude},
                          {"max_altitude_m", s.max_altitude}};
    if (!s.constellation.empty()) constellation["satellites"] = sats;
    return {
        {"num_satellites", s.num_satellites},
        {"num_users", s.num_users},
        {"episode_length", s.episode_length},
        {"slot_duration_s", s.slot_duration},
        {"seed", s.seed},
        {"min_elevation_deg", rad_to_deg(s.min_elevation)},
        {"power_rate_tolerance", s.power_rate_tolerance},
        {"constants",
         {{"gravitational_constant", s.constants.gravitational_constant},
          {"earth_mass_kg", s.constants.earth_mass},
          {"earth_radius_m", s.constants.earth_radius}}},
        {"constellation", constellation},
        {"hap", {{"altitude_m", s.hap_altitude}}},
        {"users", {{"area_side_m", s.user_area_side}}},
        {"fso",
         {{"tx_gain_db", s.fso.tx_gain_db},
          {"rx_gain_db", s.fso.rx_gain_db},
          {"free_space_loss_db", s.fso.free_space_loss_db},
          {"atmospheric_attenuation_db", s.fso.atmospheric_attenuation_db},
          {"lens_loss_db", s.fso.lens_loss_db},
          {"system_margin_db", s.fso.system_margin_db},
          {"sat_tx_power_w", s.fso.sat_tx_power},
          {"oe_conversion", s.fso.oe_conversion},
          {"num_apertures", s.fso.num_apertures},
          {"noise_power_w", s.fso.noise_power},
          {"bandwidth_hz", s.fso.bandwidth},
          {"snr_threshold", s.fso.snr_threshold},
          {"gg_alpha", s.fso.gg_alpha},
          {"gg_beta", s.fso.gg_beta}}},
        {"rf",
         {{"hap_tx_gain_db", s.rf.hap_tx_gain_db},
          {"user_rx_gain_db", s.rf.user_rx_gain_db},
          {"path_loss_exponent", s.rf.path_loss_exponent},
          {"carrier_wavelength_m", s.rf.carrier_wavelength},
          {"noise_power_w", s.rf.noise_power},
          {"bandwidth_hz", s.rf.bandwidth},
          {"nakagami_m", s.rf.nakagami_m},
          {"snr_threshold", s.rf.snr_threshold},
          {"p_min_w", s.rf.p_min},
          {"p_max_w", s.rf.p_max},
          {"p_total_w", s.rf.p_total}}},
        {"queue",
         {{"capacity", s.queue_capacity},
          {"policy", std::string(to_string(s.scheduling))},
          {"ttl_slots", s.ttl}}},
        {"traffic",
         {{"p_gen", s.p_gen}, {"packet_bits", s.packet_bits}, {"packet_bits_spread", s.packet_bits_spread}}},
        {"reward",
         {{"rho1", optional_json(s.rho1)},
          {"rho2", optional_json(s.rho2)},
          {"rho3", optional_json(s.rho3)},
          {"handover_penalty", s.handover_penalty == HandoverPenalty::Cumulative ? "cumulative" : "indicator"}}},
        {"run",
         {{"policy", std::string(to_string(c.run.policy))},
          {"episodes", c.run.episodes},
          {"seed", c.run.seed},
          {"out", c.run.out},
          {"bind", c.run.bind}}},
        {"ewg", {{"w_aoi", c.ewg.aoi}, {"w_buffer", c.ewg.buffer}, {"w_handover", c.ewg.handover}}},
    };
}

}  // namespace sagin
