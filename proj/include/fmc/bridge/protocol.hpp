#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "fmc/env.hpp"

// Wire protocol between a planner and an out-of-process simulator that
// supports state save/restore. Newline-delimited JSON, one message per line,
// snake_case keys. See docs/bridge_protocol.md for the versioned schema.
//
//   server -> client on connect:
//     {"type":"hello","protocol_version":1,"descriptor":{...}}
//   client -> server / server -> client:
//     {"type":"reset","seed":S}
//       -> {"type":"reset_result","handle":"h1","observation":[...]}
//     {"type":"step","id":K,"handle":"h1","action":{...}}
//       -> {"type":"step_result","id":K,"handle":"h2","observation":[...],
//           "reward":R,"dead":false}
//     {"type":"release","handles":["h1",...]}
//       -> {"type":"release_result","ok":true,"warnings":[...]}
//   any request may instead produce:
//     {"type":"error","id":K?,"code":"...","message":"..."}
//
// Handles are opaque tokens, never reused within a session; restoring
// through one is non-destructive, so the original handle stays valid until
// released.

namespace fmc::bridge {

inline constexpr int kProtocolVersion = 1;

// Error codes carried by error messages.
inline constexpr const char* kCodeStaleHandle = "stale_handle";
inline constexpr const char* kCodeBadAction = "bad_action";
inline constexpr const char* kCodeMalformed = "malformed";
inline constexpr const char* kCodeInternal = "internal";

// Opaque remote-state identifier.
struct StateHandle {
    std::string token;
    bool operator==(const StateHandle&) const = default;
};

inline nlohmann::json hello_message(const EnvironmentDescriptor& descriptor) {
    return {{"type", "hello"}, {"protocol_version", kProtocolVersion}, {"descriptor", descriptor}};
}

inline nlohmann::json error_message(const std::string& code, const std::string& message) {
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

inline nlohmann::json error_message(std::int64_t id, const std::string& code, const std::string& message) {
    return {{"type", "error"}, {"id", id}, {"code", code}, {"message", message}};
}

}  // namespace fmc::bridge
