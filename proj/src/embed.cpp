#include "atp/embed.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "atp/prf.hpp"

namespace atp {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("message: invalid hex digit");
}

// Snap c onto the lattice delta*(k + d) nearest to it.
double lattice_point(double c, double delta, double d) {
    return delta * (static_cast<double>(round_half_away(c / delta - d)) + d);
}

}  // namespace

AuthMessage AuthMessage::from_hex(const std::string& hex, int len) {
    if (len < 1) throw std::invalid_argument("message: length must be >= 1");
    std::size_t want = (static_cast<std::size_t>(len) + 3) / 4;
    if (hex.size() != want)
        throw std::invalid_argument("message: expected " + std::to_string(want) + " hex chars");
    AuthMessage msg;
    msg.bits.reserve(len);
    for (int k = 0; k < len; ++k) {
        int nib = hex_nibble(hex[k / 4]);
        msg.bits.push_back(static_cast<uint8_t>(nib >> (3 - k % 4) & 1));
    }
    return msg;
}

std::string AuthMessage::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    std::size_t n = (bits.size() + 3) / 4;
    for (std::size_t i = 0; i < n; ++i) {
        int nib = 0;
        for (int j = 0; j < 4; ++j) {
            std::size_t k = i * 4 + j;
            int b = k < bits.size() ? bits[k] : 0;
            nib = nib << 1 | b;
        }
        out.push_back(digits[nib]);
    }
    return out;
}

AuthMessage AuthMessage::random(uint64_t seed, int len) {
    std::mt19937_64 rng(seed);
    AuthMessage msg;
    msg.bits.reserve(len);
    for (int i = 0; i < len; ++i) msg.bits.push_back(static_cast<uint8_t>(rng() & 1));
    return msg;
}

double bit_error(const AuthMessage& a, const AuthMessage& b) {
    if (a.bits.size() != b.bits.size() || a.bits.empty())
        throw std::invalid_argument("bit_error: length mismatch");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) wrong += a.bits[i] != b.bits[i];
    return static_cast<double>(wrong) / static_cast<double>(a.bits.size());
}

EmbeddingPlan plan_embedding(const AtpKey& key, const BitMask& mask) {
    key.validate();
    EmbeddingPlan plan;
    plan.message_len = key.message_len;

    plan.positions.reserve(mask.count_ones());
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        if (mask.bits[i]) plan.positions.push_back(static_cast<uint32_t>(i));
    if (plan.positions.size() < static_cast<std::size_t>(key.message_len))
        throw std::invalid_argument("plan_embedding: fewer masked positions than message bits");

    // Keyed Fisher-Yates; the assignment is position-set dependent but
    // reproducible from (secret, mask).
    KeyStream perm(key.secret, "atp-perm");
    for (std::size_t i = plan.positions.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(perm.bounded(i + 1));
        std::swap(plan.positions[i], plan.positions[j]);
    }
    plan.per_bit = plan.positions.size() / static_cast<std::size_t>(key.message_len);

    // Per-position lattice offset bit, keyed by absolute position index so
    // it is independent of the mask and the shuffle.
    std::size_t total = mask.bits.size();
    std::vector<uint8_t> dither_all((total + 7) / 8);
    KeyStream dith(key.secret, "atp-dith");
    dith.fill(dither_all.data(), dither_all.size());
    plan.dither.resize(plan.positions.size());
    for (std::size_t i = 0; i < plan.positions.size(); ++i) {
        uint32_t pos = plan.positions[i];
        plan.dither[i] = dither_all[pos / 8] >> (pos % 8) & 1;
    }
    return plan;
}

CoeffTensor embed(const CoeffTensor& coeffs, const AuthMessage& msg,
                  const EmbeddingPlan& plan, const AtpKey& key) {
    if (msg.bits.size() != static_cast<std::size_t>(plan.message_len))
        throw std::invalid_argument("embed: message length does not match plan");
    if (!plan.positions.empty()) {
        uint32_t max_pos = *std::max_element(plan.positions.begin(), plan.positions.end());
        if (max_pos >= coeffs.size()) throw std::invalid_argument("embed: plan/shape mismatch");
    }
    const double delta = key.delta;
    CoeffTensor out = coeffs;
    for (int k = 0; k < plan.message_len; ++k) {
        double d_bit = msg.bits[k] * 0.5;
        for (std::size_t i = k * plan.per_bit; i < (k + 1) * plan.per_bit; ++i) {
            double d = plan.dither[i] ? (d_bit == 0.0 ? 0.5 : 0.0) : d_bit;
            out.data[plan.positions[i]] = lattice_point(coeffs.data[plan.positions[i]], delta, d);
        }
    }
    return out;
}

AuthMessage extract(const CoeffTensor& coeffs, const EmbeddingPlan& plan, const AtpKey& key) {
    if (!plan.positions.empty()) {
        uint32_t max_pos = *std::max_element(plan.positions.begin(), plan.positions.end());
        if (max_pos >= coeffs.size()) throw std::invalid_argument("extract: plan/shape mismatch");
    }
    const double delta = key.delta;
    AuthMessage msg;
    msg.bits.resize(plan.message_len);
    for (int k = 0; k < plan.message_len; ++k) {
        std::size_t ones = 0;
        for (std::size_t i = k * plan.per_bit; i < (k + 1) * plan.per_bit; ++i) {
            double c = coeffs.data[plan.positions[i]];
            double d0 = plan.dither[i] ? 0.5 : 0.0;  // lattice offset for bit 0
            double d1 = plan.dither[i] ? 0.0 : 0.5;  // lattice offset for bit 1
            double dist0 = std::fabs(c - lattice_point(c, delta, d0));
            double dist1 = std::fabs(c - lattice_point(c, delta, d1));
            ones += dist1 < dist0 ? 1 : 0;  // tie decodes as 0
        }
        msg.bits[k] = ones * 2 > plan.per_bit ? 1 : 0;  // tie breaks to 0
    }
    return msg;
}

}  // namespace atp
