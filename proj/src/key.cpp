#include "atp/key.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace atp {

void AtpKey::validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("key: p must be in (0,1)");
    if (block < 2) throw std::invalid_argument("key: block size must be >= 2");
    if (message_len < 1) throw std::invalid_argument("key: message length must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("key: delta must be > 0");
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::array<uint8_t, 32> parse_secret_hex(const std::string& hex) {
    std::string clean;
    for (char c : hex)
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    if (clean.size() != 64) throw std::runtime_error("key secret: expected 64 hex chars");
    std::array<uint8_t, 32> out{};
    for (int i = 0; i < 32; ++i) {
        int hi = hex_nibble(clean[2 * i]);
        int lo = hex_nibble(clean[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::runtime_error("key secret: invalid hex");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

std::string secret_to_hex(const std::array<uint8_t, 32>& secret) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (uint8_t b : secret) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

AtpKey load_key(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("key: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string raw = ss.str();

    AtpKey key;
    if (raw.size() == 32) {
        for (int i = 0; i < 32; ++i) key.secret[i] = static_cast<uint8_t>(raw[i]);
    } else {
        key.secret = parse_secret_hex(raw);
    }

    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json j = nlohmann::json::parse(side);
        key.p = j.value("p", key.p);
        key.block = j.value("N", key.block);
        key.message_len = j.value("L", key.message_len);
        key.delta = j.value("delta", key.delta);
    }
    key.validate();
    return key;
}

void save_key(const AtpKey& key, const std::string& path, bool hex) {
    key.validate();
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("key: cannot write " + path);
        if (hex) {
            out << secret_to_hex(key.secret) << "\n";
        } else {
            out.write(reinterpret_cast<const char*>(key.secret.data()), key.secret.size());
        }
    }
    nlohmann::ordered_json j;
    j["p"] = key.p;
    j["N"] = key.block;
    j["L"] = key.message_len;
    j["delta"] = key.delta;
    std::ofstream side(path + ".json", std::ios::trunc);
    if (!side) throw std::runtime_error("key: cannot write " + path + ".json");
    side << j.dump(2) << "\n";
}

}  // namespace atp
