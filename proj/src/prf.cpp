#include "atp/prf.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace atp {

namespace {

void ensure_sodium() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
    });
}

}  // namespace

KeyStream::KeyStream(const std::array<uint8_t, 32>& key, const char domain[8]) : key_(key) {
    ensure_sodium();
    std::memcpy(nonce_.data(), domain, 8);
}

void KeyStream::refill() {
    buf_.fill(0);
    // ChaCha20 keystream, 64-byte blocks, explicit block counter so the
    // stream continues seamlessly across refills.
    crypto_stream_chacha20_xor_ic(buf_.data(), buf_.data(), buf_.size(), nonce_.data(),
                                  block_counter_, key_.data());
    block_counter_ += buf_.size() / 64;
    pos_ = 0;
    avail_ = buf_.size();
}

void KeyStream::fill(uint8_t* out, std::size_t n) {
    while (n > 0) {
        if (avail_ == 0) refill();
        std::size_t take = n < avail_ ? n : avail_;
        std::memcpy(out, buf_.data() + pos_, take);
        pos_ += take;
        avail_ -= take;
        out += take;
        n -= take;
    }
}

uint8_t KeyStream::u8() {
    uint8_t v;
    fill(&v, 1);
    return v;
}

uint32_t KeyStream::u32() {
    uint8_t b[4];
    fill(b, 4);
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

uint64_t KeyStream::u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | hi << 32;
}

double KeyStream::unit_double() {
    return static_cast<double>(u64() >> 11) * 0x1.0p-53;
}

uint64_t KeyStream::bounded(uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded: n must be >= 1");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        uint64_t v = u64();
        if (v < limit) return v % n;
    }
}

}  // namespace atp
