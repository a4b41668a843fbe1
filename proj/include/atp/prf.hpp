#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace atp {

// Deterministic keyed byte stream (ChaCha20). Each consumer picks its own
// 8-byte domain label so the mask, the position shuffle, and the dithers
// draw from independent streams of the same secret.
class KeyStream {
public:
    KeyStream(const std::array<uint8_t, 32>& key, const char domain[8]);

    void fill(uint8_t* out, std::size_t n);
    uint8_t u8();
    uint32_t u32();
    uint64_t u64();

    // Uniform double in [0,1) with 53 random bits.
    double unit_double();

    // Uniform integer in [0,n), rejection-sampled (n >= 1).
    uint64_t bounded(uint64_t n);

private:
    void refill();

    std::array<uint8_t, 32> key_;
    std::array<uint8_t, 8> nonce_;
    uint64_t block_counter_ = 0;
    std::array<uint8_t, 4096> buf_;
    std::size_t pos_ = 0;
    std::size_t avail_ = 0;
};

}  // namespace atp
