#include "sagin/protocol.hpp"

namespace sagin::protocol {

using nlohmann::json;

std::string_view to_string(MessageType t) {
    switch (t) {
        case MessageType::Hello: return "hello";
        case MessageType::Reset: return "reset";
        case MessageType::Step: return "step";
        case MessageType::State: return "state";
        case MessageType::Outcome: return "outcome";
        case MessageType::Error: return "error";
    }
    return "error";
}

std::optional<MessageType> parse_message_type(std::string_view s) {
    for (auto t : {MessageType::Hello, MessageType::Reset, MessageType::Step, MessageType::State,
                   MessageType::Outcome, MessageType::Error}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

std::string serialize(const Message& m) {
    json j = {{"type", to_string(m.type)}, {"protocol_version", m.protocol_version}, {"payload", m.payload}};
    return j.dump();
}

Message parse(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("malformed message: ") + e.what());
    }
    if (!j.is_object()) throw ProtocolError("message must be a JSON object");
    const auto type = j.find("type");
    if (type == j.end() || !type->is_string()) throw ProtocolError("message.type must be a string");
    const auto parsed = parse_message_type(type->get<std::string>());
    if (!parsed) throw ProtocolError("unknown message type: " + type->get<std::string>());
    Message m;
    m.type = *parsed;
    const auto ver = j.find("protocol_version");
    if (ver == j.end() || !ver->is_string()) throw ProtocolError("message.protocol_version must be a string");
    m.protocol_version = ver->get<std::string>();
    if (const auto p = j.find("payload"); p != j.end()) {
        if (!p->is_object()) throw ProtocolError("message.payload must be an object");
        m.payload = *p;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "type" && it.key() != "protocol_version" && it.key() != "payload") {
            throw ProtocolError("unknown message field: " + it.key());
        }
    }
    return m;
}

Message make_error(std::string_view message) {
    Message m;
    m.type = MessageType::Error;
    m.payload = {{"message", message}};
    return m;
}

json schema_json(const SimConfig& c) {
    json fields = json::array();
    std::size_t offset = 0;
    for (const auto& f : state_schema(c.num_satellites, c.num_users)) {
        std::size_t n = 1;
        for (int d : f.shape) n *= static_cast<std::size_t>(d);
        fields.push_back({{"name", f.name}, {"shape", f.shape}, {"unit", f.unit}, {"offset", offset}});
        offset += n;
    }
    return {{"fields", fields},
            {"state_size", offset},
            {"num_satellites", c.num_satellites},
            {"num_users", c.num_users},
            {"episode_length", c.episode_length},
            {"slot_duration_s", c.slot_duration},
            {"action", {{"min", kHoldAction}, {"max", c.num_satellites - 1}, {"hold", kHoldAction}}}};
}

json state_json(const EnvState& s) {
    json visible = json::array();
    for (std::size_t i = 0; i < s.visible.size(); ++i) {
        if (s.visible[i]) visible.push_back(i);
    }
    return {{"t", s.t}, {"vector", flatten(s)}, {"visible", visible}};
}

namespace {

const json& field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ProtocolError(std::string("missing field: ") + key);
    return *it;
}

template <typename T>
T field_as(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception&) {
        throw ProtocolError(std::string("bad field type: ") + key);
    }
}

}  // namespace

EnvState state_from_json(const json& j, int ns, int nu) {
    const auto v = field_as<std::vector<double>>(j, "vector");
    const std::size_t expect = static_cast<std::size_t>(ns) * 3 + static_cast<std::size_t>(nu) * 3 +
                               static_cast<std::size_t>(ns) * 3 + static_cast<std::size_t>(ns) * nu + 1;
    if (v.size() != expect) throw ProtocolError("state vector has the wrong length");
    EnvState s;
    s.t = field_as<std::int64_t>(j, "t");
    std::size_t k = 0;
    for (int i = 0; i < ns; ++i, k += 3) s.satellite_positions.push_back({v[k], v[k + 1], v[k + 2]});
    for (int j2 = 0; j2 < nu; ++j2, k += 3) s.user_positions.push_back({v[k], v[k + 1], v[k + 2]});
    for (int i = 0; i < ns; ++i) s.theta.push_back(static_cast<Age>(v[k++]));
    for (int i = 0; i < ns; ++i) s.delta.push_back(static_cast<Age>(v[k++]));
    for (int i = 0; i < ns * nu; ++i) s.user_aoi.push_back(static_cast<Age>(v[k++]));
    for (int i = 0; i < ns; ++i) s.visible.push_back(v[k++] != 0.0);
    if (v[k] >= 0.0) s.previous_selection = static_cast<int>(v[k]);
    return s;
}

json outcome_json(const StepOutcome& o) {
    const StepInfo& in = o.info;
    return {{"reward", o.reward},
            {"components", {{"aoi", o.components.aoi}, {"handover", o.components.handover}, {"rate", o.components.rate}}},
            {"state", state_json(o.next_state)},
            {"done", o.done},
            {"info",
             {{"requested_action", in.requested_action},
              {"action_valid", in.action_valid},
              {"selection", in.selection ? json(*in.selection) : json(nullptr)},
              {"handover_count", in.handover_count},
              {"handover_event", in.handover_event},
              {"z_hap", in.z_hap},
              {"fso_snr", in.fso_snr},
              {"queue_length", in.queue_length},
              {"dropped", in.dropped},
              {"delivered", in.delivered},
              {"rates", in.rates},
              {"powers", in.powers},
              {"min_rate", in.min_rate},
              {"aoi_sum", in.aoi_sum},
              {"rate_sum", in.rate_sum}}}};
}

StepOutcome outcome_from_json(const json& j, int ns, int nu) {
    StepOutcome o;
    o.reward = field_as<double>(j, "reward");
    const json& c = field(j, "components");
    o.components.aoi = field_as<double>(c, "aoi");
    o.components.handover = field_as<double>(c, "handover");
    o.components.rate = field_as<double>(c, "rate");
    o.next_state = state_from_json(field(j, "state"), ns, nu);
    o.done = field_as<bool>(j, "done");
    const json& in = field(j, "info");
    StepInfo& i = o.info;
    i.requested_action = field_as<int>(in, "requested_action");
    i.action_valid = field_as<bool>(in, "action_valid");
    if (const json& sel = field(in, "selection"); !sel.is_null()) i.selection = field_as<int>(in, "selection");
    i.handover_count = field_as<std::int64_t>(in, "handover_count");
    i.handover_event = field_as<bool>(in, "handover_event");
    i.z_hap = field_as<bool>(in, "z_hap");
    i.fso_snr = field_as<double>(in, "fso_snr");
    i.queue_length = field_as<std::size_t>(in, "queue_length");
    i.dropped = field_as<std::size_t>(in, "dropped");
    i.delivered = field_as<std::size_t>(in, "delivered");
    i.rates = field_as<std::vector<double>>(in, "rates");
    i.powers = field_as<std::vector<double>>(in, "powers");
    i.min_rate = field_as<double>(in, "min_rate");
    i.aoi_sum = field_as<double>(in, "aoi_sum");
    i.rate_sum = field_as<double>(in, "rate_sum");
    return o;
}

Session::Session(SimConfig config) : env_(std::move(config)) {}

std::string Session::handle_line(std::string_view line) {
    Message reply;
    try {
        reply = handle(parse(line));
    } catch (const ProtocolError& e) {
        reply = make_error(e.what());
    }
    return serialize(reply);
}

Message Session::handle(const Message& m) {
    if (closed_) return make_error("session closed");
    if (m.protocol_version != kVersion) {
        closed_ = true;
        return make_error("protocol version mismatch: server speaks " + std::string(kVersion) + ", client sent " +
                          m.protocol_version);
    }
    try {
        switch (m.type) {
            case MessageType::Hello: return on_hello(m);
            case MessageType::Reset: return handshaken_ ? on_reset(m) : make_error("hello required first");
            case MessageType::Step: return handshaken_ ? on_step(m) : make_error("hello required first");
            case MessageType::State: return handshaken_ ? on_state() : make_error("hello required first");
            case MessageType::Outcome:
            case MessageType::Error: return make_error("unexpected message type from client");
        }
    } catch (const ProtocolError& e) {
        return make_error(e.what());
    }
    return make_error("unhandled message");
}

Message Session::on_hello(const Message&) {
    handshaken_ = true;
    Message r;
    r.type = MessageType::Hello;
    r.payload = {{"schema", schema_json(env_.config())}};
    return r;
}

Message Session::on_reset(const Message& m) {
    std::optional<std::uint64_t> seed;
    if (const auto it = m.payload.find("seed"); it != m.payload.end() && !it->is_null()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
            return make_error("reset.seed must be a non-negative integer");
        }
        seed = it->get<std::uint64_t>();
    }
    env_.reset(seed);
    return on_state();
}

Message Session::on_step(const Message& m) {
    const auto it = m.payload.find("action");
    if (it == m.payload.end()) return make_error("step.action is required");
    if (!it->is_number_integer()) return make_error("step.action must be an integer");
    if (!env_.started()) return make_error("reset required before step");
    if (env_.done()) return make_error("episode finished; send reset");
    const auto raw = it->get<std::int64_t>();
    if (raw < kHoldAction || raw >= env_.config().num_satellites) {
        return make_error("step.action " + std::to_string(raw) + " out of range");
    }
    Message r;
    r.type = MessageType::Outcome;
    r.payload = outcome_json(env_.step(static_cast<int>(raw)));
    return r;
}

Message Session::on_state() {
    if (!env_.started()) return make_error("reset required before state");
    Message r;
    r.type = MessageType::State;
    r.payload = state_json(env_.state());
    return r;
}

}  // namespace sagin::protocol
