#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "atp/embed.hpp"
#include "atp/gate.hpp"
#include "atp/key.hpp"

namespace httplib {
class Server;
}

namespace atp {

std::string tool_version();

// Immutable service configuration, loaded once at startup.
struct GateConfig {
    struct KeyEntry {
        AtpKey key;
        AuthMessage expected;
    };

    std::string host = "127.0.0.1";
    int port = 8750;
    double threshold = kDefaultBitErrorThreshold;
    std::size_t max_image_bytes = 16 * 1024 * 1024;
    std::map<std::string, KeyEntry> keys;
};

// JSON config: {"listen": "host:port", "threshold": ..., "max_image_bytes": ...,
//  "keys": {"id": {"secret_hex": "...", "p":..., "N":..., "L":..., "delta":...,
//                  "message_hex": "..."}}}
// ATP_LISTEN overrides the listen address.
GateConfig load_gate_config(const std::string& path);

// Registers /v1/verify, /v1/protect and /v1/healthz on `server`. The config
// must outlive the server; handlers share it read-only.
void attach_gate_routes(httplib::Server& server, const GateConfig& config);

// Serialization shared by the CLI and the HTTP service (stable field order).
std::string verify_report_json(const VerifyReport& report);
std::string request_verdict_json(const RequestVerdict& verdict);

}  // namespace atp
