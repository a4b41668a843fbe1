#include "atp/masking.hpp"

#include "atp/prf.hpp"

namespace atp {

std::size_t BitMask::count_ones() const {
    std::size_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

BitMask derive_mask(const AtpKey& key, const Shape& shape) {
    // p = 0 and p = 1 are test-only boundaries; key files reject them.
    if (!(key.p >= 0.0 && key.p <= 1.0))
        throw std::invalid_argument("derive_mask: p must be in [0,1]");
    if (shape.height <= 0 || shape.width <= 0 || (shape.channels != 1 && shape.channels != 3))
        throw std::invalid_argument("derive_mask: bad shape");

    BitMask mask;
    mask.height = shape.height;
    mask.width = shape.width;
    mask.channels = shape.channels;
    mask.ratio_p = key.p;
    mask.bits.resize(shape.size());

    KeyStream stream(key.secret, "atp-mask");
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        mask.bits[i] = stream.unit_double() < key.p ? 1 : 0;
    return mask;
}

BitMask complement(const BitMask& mask) {
    BitMask out = mask;
    out.ratio_p = 1.0 - mask.ratio_p;
    for (uint8_t& b : out.bits) b = static_cast<uint8_t>(1 - b);
    return out;
}

CoeffTensor blend(const CoeffTensor& coeffs_auth, const CoeffTensor& coeffs_prot,
                  const BitMask& mask) {
    require_same_shape(coeffs_auth.shape(), coeffs_prot.shape(), "blend");
    require_same_shape(coeffs_auth.shape(), mask.shape(), "blend");
    CoeffTensor out = coeffs_prot;
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        if (mask.bits[i]) out.data[i] = coeffs_auth.data[i];
    return out;
}

}  // namespace atp
