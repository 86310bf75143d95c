#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fmc/bridge/protocol.hpp"
#include "fmc/bridge/transport.hpp"
#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc::bridge {

struct RemoteStep {
    StateHandle handle;
    std::vector<double> observation;
    double reward = 0.0;
    bool dead = false;
};

struct ReleaseAck {
    bool ok = false;
    std::vector<std::string> warnings;
};

// Client side of one bridge session. Reads the server's hello on
// construction; throws HandshakeError on a protocol version mismatch and
// ProtocolError (with the offending line attached) on anything unparseable.
class BridgeSession {
public:
    explicit BridgeSession(std::unique_ptr<Transport> transport) : transport_(std::move(transport)) {
        const auto hello = read_message();
        if (hello.value("type", "") != "hello") {
            throw HandshakeError("bridge: expected hello, got: " + hello.dump());
        }
        const int version = hello.value("protocol_version", -1);
        if (version != kProtocolVersion) {
            throw HandshakeError("bridge: protocol version mismatch (server " + std::to_string(version) +
                                 ", client " + std::to_string(kProtocolVersion) + ")");
        }
        descriptor_ = hello.at("descriptor").get<EnvironmentDescriptor>();
    }

    const EnvironmentDescriptor& descriptor() const { return descriptor_; }

    std::pair<StateHandle, std::vector<double>> reset(std::uint64_t seed) {
        transport_->write_line(nlohmann::json{{"type", "reset"}, {"seed", seed}}.dump());
        const auto response = expect("reset_result");
        return {StateHandle{response.at("handle").get<std::string>()},
                response.at("observation").get<std::vector<double>>()};
    }

    RemoteStep step(const StateHandle& handle, const Action& action) {
        const auto id = next_id_++;
        transport_->write_line(step_request(id, handle, action).dump());
        return parse_step(expect("step_result", id), id);
    }

    // Pipelined stepping: all requests go out before any response is read.
    // Responses come back in request order on the session's single stream.
    std::vector<RemoteStep> step_pipelined(const std::vector<std::pair<StateHandle, Action>>& batch) {
        std::vector<std::int64_t> ids;
        ids.reserve(batch.size());
        for (const auto& [handle, action] : batch) {
            const auto id = next_id_++;
            ids.push_back(id);
            transport_->write_line(step_request(id, handle, action).dump());
        }
        std::vector<RemoteStep> out;
        out.reserve(batch.size());
        for (const auto id : ids) {
            out.push_back(parse_step(expect("step_result", id), id));
        }
        return out;
    }

    ReleaseAck release(const std::vector<StateHandle>& handles) {
        std::vector<std::string> tokens;
        tokens.reserve(handles.size());
        for (const auto& h : handles) tokens.push_back(h.token);
        transport_->write_line(nlohmann::json{{"type", "release"}, {"handles", tokens}}.dump());
        const auto response = expect("release_result");
        return {response.value("ok", false), response.value("warnings", std::vector<std::string>{})};
    }

private:
    nlohmann::json read_message() {
        const std::string line = transport_->read_line();
        auto message = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (message.is_discarded() || !message.is_object()) {
            throw ProtocolError("bridge: malformed server message", line);
        }
        return message;
    }

    nlohmann::json expect(const std::string& type, std::int64_t id = -1) {
        auto message = read_message();
        const auto got = message.value("type", "");
        if (got == "error") {
            const auto code = message.value("code", std::string{kCodeInternal});
            const auto text = message.value("message", std::string{});
            if (code == kCodeStaleHandle) throw StaleHandleError("bridge: " + text);
            throw RemoteError(code, text);
        }
        if (got != type) {
            throw ProtocolError("bridge: expected " + type, message.dump());
        }
        if (id >= 0 && message.value("id", std::int64_t{-1}) != id) {
            throw ProtocolError("bridge: response id mismatch", message.dump());
        }
        return message;
    }

    static nlohmann::json step_request(std::int64_t id, const StateHandle& handle, const Action& action) {
        return {{"type", "step"}, {"id", id}, {"handle", handle.token}, {"action", action}};
    }

    static RemoteStep parse_step(const nlohmann::json& response, std::int64_t /*id*/) {
        RemoteStep out;
        out.handle.token = response.at("handle").get<std::string>();
        out.observation = response.at("observation").get<std::vector<double>>();
        out.reward = response.at("reward").get<double>();
        out.dead = response.at("dead").get<bool>();
        return out;
    }

    std::unique_ptr<Transport> transport_;
    EnvironmentDescriptor descriptor_;
    std::int64_t next_id_ = 1;
};

inline std::shared_ptr<BridgeSession> bridge_connect(std::unique_ptr<Transport> transport) {
    return std::make_shared<BridgeSession>(std::move(transport));
}

// Adapts a bridge session to the Environment concept so any planner can run
// against a remote simulator unchanged. States are handle tokens. Observation,
// reward and dead flags replay exactly; only the token value differs between
// replays of the same transition, which no planner inspects. is_terminal is
// always false - the wire protocol carries no success-terminal signal, so
// bridged episode runs are bounded by step limits or death.
class RemoteEnvironment {
public:
    using State = StateHandle;

    explicit RemoteEnvironment(std::shared_ptr<BridgeSession> session) : session_(std::move(session)) {}

    Step<State> reset(std::uint64_t seed) const {
        auto [handle, observation] = session_->reset(seed);
        return {std::move(handle), std::move(observation), 0.0, false};
    }

    Step<State> step(const State& s, const Action& a) const {
        auto remote = session_->step(s, a);
        return {std::move(remote.handle), std::move(remote.observation), remote.reward, remote.dead};
    }

    bool is_terminal(const State&) const { return false; }

    const EnvironmentDescriptor& descriptor() const { return session_->descriptor(); }

    BridgeSession& session() const { return *session_; }

private:
    std::shared_ptr<BridgeSession> session_;
};

}  // namespace fmc::bridge
