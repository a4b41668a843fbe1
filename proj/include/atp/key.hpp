#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace atp {

// Secret material plus the embedding hyper-parameters derived from it:
// mask ratio p, block size N, message length L, and the quantization step
// delta in [0,1] coefficient units.
struct AtpKey {
    std::array<uint8_t, 32> secret{};
    double p = 0.5;
    int block = 16;
    int message_len = 32;
    double delta = 0.02;

    void validate() const;
};

// Key file: 32 raw bytes or 64 hex chars at `path`, with an optional JSON
// sidecar `path + ".json"` carrying {p, N, L, delta}. Missing sidecar
// fields fall back to the defaults above.
AtpKey load_key(const std::string& path);
void save_key(const AtpKey& key, const std::string& path, bool hex = true);

std::array<uint8_t, 32> parse_secret_hex(const std::string& hex);
std::string secret_to_hex(const std::array<uint8_t, 32>& secret);

}  // namespace atp
