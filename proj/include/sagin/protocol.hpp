#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sagin/env.hpp"

namespace sagin::protocol {

inline constexpr std::string_view kVersion = "1";

enum class MessageType { Hello, Reset, Step, State, Outcome, Error };

std::string_view to_string(MessageType t);
std::optional<MessageType> parse_message_type(std::string_view s);

/// One newline-delimited JSON message:
///   {"type": ..., "protocol_version": "1", "payload": {...}}
struct Message {
    MessageType type = MessageType::Hello;
    std::string protocol_version{kVersion};
    nlohmann::json payload = nlohmann::json::object();

    bool operator==(const Message& o) const {
        return type == o.type && protocol_version == o.protocol_version && payload == o.payload;
    }
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-line encoding without the trailing newline.
std::string serialize(const Message& m);
/// Throws ProtocolError on malformed input.
Message parse(std::string_view line);

Message make_error(std::string_view message);

nlohmann::json schema_json(const SimConfig& c);
nlohmann::json state_json(const EnvState& s);
nlohmann::json outcome_json(const StepOutcome& o);
/// Inverse of outcome_json. Throws ProtocolError on missing fields.
StepOutcome outcome_from_json(const nlohmann::json& j, int num_satellites, int num_users);
/// Inverse of state_json given the dimensions.
EnvState state_from_json(const nlohmann::json& j, int num_satellites, int num_users);

/// One client session owning one environment. Transport-agnostic: feed it
/// request lines, send back the returned response lines.
class Session {
public:
    explicit Session(SimConfig config);

    std::string handle_line(std::string_view line);
    Message handle(const Message& request);

    bool closed() const { return closed_; }
    bool handshaken() const { return handshaken_; }
    const Environment& environment() const { return env_; }

private:
    Message on_hello(const Message& m);
    Message on_reset(const Message& m);
    Message on_step(const Message& m);
    Message on_state();

    Environment env_;
    bool handshaken_ = false;
    bool closed_ = false;
};

}  // namespace sagin::protocol
