#pragma once

#include <cstdint>
#include <vector>

#include "atp/key.hpp"
#include "atp/tensor.hpp"

namespace atp {

// Binary tensor over coefficient positions: 1 = authorization region,
// 0 = protection region. Same row-major layout as the tensors it masks.
struct BitMask {
    int height = 0;
    int width = 0;
    int channels = 0;
    double ratio_p = 0.0;
    std::vector<uint8_t> bits;

    Shape shape() const { return {height, width, channels}; }
    std::size_t size() const { return bits.size(); }
    std::size_t count_ones() const;
};

// Keyed Bernoulli(p) mask: a pure function of (secret, p, shape). The same
// key and shape always reproduce the same mask.
BitMask derive_mask(const AtpKey& key, const Shape& shape);

// Entry-wise 1 - M.
BitMask complement(const BitMask& mask);

// out = M (.) coeffs_auth + (1-M) (.) coeffs_prot
CoeffTensor blend(const CoeffTensor& coeffs_auth, const CoeffTensor& coeffs_prot,
                  const BitMask& mask);

}  // namespace atp
