#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fmc/bridge/protocol.hpp"
#include "fmc/bridge/transport.hpp"
#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc::bridge {

// Serves one in-process environment over the bridge protocol. States stay on
// this side of the wire; clients only ever see handle tokens.
template <Environment E>
class EnvServer {
public:
    explicit EnvServer(E env) : env_(std::move(env)) {}

    std::string hello_line() const { return hello_message(env_.descriptor()).dump(); }

    // Handles one request line and returns the response line.
    std::string handle_line(const std::string& line) {
        const auto request = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (request.is_discarded() || !request.is_object() || !request.contains("type")) {
            return error_message(kCodeMalformed, "not a JSON object with a type: " + line).dump();
        }
        const std::string type = request.value("type", "");
        try {
            if (type == "reset") return handle_reset(request).dump();
            if (type == "step") return handle_step(request).dump();
            if (type == "release") return handle_release(request).dump();
            return error_message(kCodeMalformed, "unknown message type '" + type + "'").dump();
        } catch (const ContractViolation& e) {
            return error_message(request.value("id", std::int64_t{0}), kCodeBadAction, e.what()).dump();
        } catch (const std::exception& e) {
            return error_message(request.value("id", std::int64_t{0}), kCodeInternal, e.what()).dump();
        }
    }

    // Blocking serve loop: hello first, then one response per request until
    // the peer disconnects.
    void serve(Transport& transport) {
        transport.write_line(hello_line());
        for (;;) {
            std::string line;
            try {
                line = transport.read_line();
            } catch (const ConnectionError&) {
                return;
            }
            transport.write_line(handle_line(line));
        }
    }

    std::size_t handles_held() const { return states_.size(); }

private:
    nlohmann::json handle_reset(const nlohmann::json& request) {
        const auto seed = request.value("seed", std::uint64_t{0});
        auto outcome = env_.reset(seed);
        const std::string token = issue_handle(std::move(outcome.state));
        return {{"type", "reset_result"}, {"handle", token}, {"observation", outcome.observation}};
    }

    nlohmann::json handle_step(const nlohmann::json& request) {
        const auto id = request.value("id", std::int64_t{0});
        if (!request.contains("handle") || !request.contains("action")) {
            return error_message(id, kCodeMalformed, "step requires handle and action");
        }
        const auto token = request.at("handle").get<std::string>();
        const auto it = states_.find(token);
        if (it == states_.end()) {
            return error_message(id, kCodeStaleHandle, "unknown handle '" + token + "'");
        }
        const Action action = request.at("action").get<Action>();
        if (!env_.descriptor().action_space.contains(action)) {
            return error_message(id, kCodeBadAction, "action out of space");
        }
        auto outcome = env_.step(it->second, action);
        const std::string next = issue_handle(std::move(outcome.state));
        return {{"type", "step_result"}, {"id", id},          {"handle", next},
                {"observation", outcome.observation},         {"reward", outcome.reward},
                {"dead", outcome.dead}};
    }

    nlohmann::json handle_release(const nlohmann::json& request) {
        std::vector<std::string> warnings;
        for (const auto& h : request.value("handles", std::vector<std::string>{})) {
            if (states_.erase(h) == 0) {
                warnings.push_back("handle '" + h + "' not held");
            }
        }
        return {{"type", "release_result"}, {"ok", true}, {"warnings", warnings}};
    }

    std::string issue_handle(typename E::State state) {
        std::string token = "h" + std::to_string(++next_handle_);
        states_.emplace(token, std::move(state));
        return token;
    }

    E env_;
    std::unordered_map<std::string, typename E::State> states_;
    std::uint64_t next_handle_ = 0;
};

// Transport that short-circuits straight into an in-process EnvServer;
// exercises the full encode/decode path without a process boundary.
template <typename Server>
class LoopbackTransport final : public Transport {
public:
    explicit LoopbackTransport(Server& server) : server_(server) { inbox_.push_back(server_.hello_line()); }

    void write_line(const std::string& line) override { inbox_.push_back(server_.handle_line(line)); }

    std::string read_line() override {
        if (inbox_.empty()) {
            throw ConnectionError("loopback transport: no pending response");
        }
        std::string line = std::move(inbox_.front());
        inbox_.pop_front();
        return line;
    }

private:
    Server& server_;
    std::deque<std::string> inbox_;
};

}  // namespace fmc::bridge
