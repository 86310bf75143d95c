#pragma once

#include <stdexcept>
#include <string>

namespace fmc {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
struct ContractViolation : Error {
    using Error::Error;
};

// Invalid planner or harness configuration (bad parameters, unknown
// environment/agent, mismatched seed lists).
struct ConfigError : Error {
    using Error::Error;
};

// reward_density over an all-zero slice.
struct DegenerateSliceError : Error {
    using Error::Error;
};

// An operation that only supports discrete action spaces was handed a
// continuous one.
struct UnsupportedSpaceError : Error {
    using Error::Error;
};

// Exhaustive enumeration would exceed the instance size limit.
struct SizeLimitError : Error {
    using Error::Error;
};

// Bridge errors. ProtocolError carries the offending line when one exists.
struct BridgeError : Error {
    using Error::Error;
};

struct ConnectionError : BridgeError {
    using BridgeError::BridgeError;
};

struct HandshakeError : BridgeError {
    using BridgeError::BridgeError;
};

struct ProtocolError : BridgeError {
    explicit ProtocolError(const std::string& what, std::string line = {})
        : BridgeError(line.empty() ? what : what + " [line: " + line + "]"),
          offending_line(std::move(line)) {}

    std::string offending_line;
};

struct StaleHandleError : BridgeError {
    using BridgeError::BridgeError;
};

struct RemoteError : BridgeError {
    RemoteError(std::string code_, const std::string& message)
        : BridgeError("remote error [" + code_ + "]: " + message), code(std::move(code_)) {}

    std::string code;
};

}  // namespace fmc
