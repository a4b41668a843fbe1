#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atp/key.hpp"
#include "atp/masking.hpp"
#include "atp/tensor.hpp"

namespace atp {

// Binary message of length L carried by the authorization perturbation.
struct AuthMessage {
    std::vector<uint8_t> bits;  // values in {0,1}

    std::size_t length() const { return bits.size(); }

    // Hex string, big-endian bit order within each nibble; `len` bits are
    // taken from ceil(len/4) hex digits.
    static AuthMessage from_hex(const std::string& hex, int len);
    std::string to_hex() const;

    static AuthMessage random(uint64_t seed, int len);
    bool operator==(const AuthMessage&) const = default;
};

// Hamming distance / L.
double bit_error(const AuthMessage& a, const AuthMessage& b);

// Keyed partition of the masked coefficient positions into L disjoint
// groups of equal size R = floor(|{M=1}|/L); remainder positions are left
// unembedded. dither[i] is the per-position lattice offset bit for
// positions[i].
struct EmbeddingPlan {
    int message_len = 0;
    std::size_t per_bit = 0;  // R
    std::vector<uint32_t> positions;  // first message_len * per_bit entries are used
    std::vector<uint8_t> dither;      // aligned with positions

    std::size_t used() const { return static_cast<std::size_t>(message_len) * per_bit; }
};

// Deterministic keyed shuffle of the masked positions. Throws if the mask
// holds fewer than L ones.
EmbeddingPlan plan_embedding(const AtpKey& key, const BitMask& mask);

// Quantization-index embedding: each assigned coefficient is snapped to the
// lattice delta*(round(c/delta - d) + d) with d = (dither + bit)/2 mod 1.
// Unassigned positions (mask 0 and remainder) are bit-identical to the
// input. |c' - c| <= delta/2 always.
CoeffTensor embed(const CoeffTensor& coeffs, const AuthMessage& msg,
                  const EmbeddingPlan& plan, const AtpKey& key);

// Nearest-lattice decode per coefficient, majority vote per message bit,
// ties to 0. Always returns L bits.
AuthMessage extract(const CoeffTensor& coeffs, const EmbeddingPlan& plan,
                    const AtpKey& key);

}  // namespace atp
