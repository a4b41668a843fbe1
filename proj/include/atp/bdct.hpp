#pragma once

#include "atp/tensor.hpp"

namespace atp {

// Side length of the square blocks the image is split into before the
// per-block transform. 16 is the default used throughout the toolkit.
struct BlockSpec {
    int n = 16;
};

// Orthonormal 2-D DCT-II applied independently to each non-overlapping
// NxN block of each channel; blocks keep their spatial slots, so the
// coefficient tensor has the same shape as the image.
CoeffTensor bdct_forward(const ImageTensor& img, const BlockSpec& spec);

// Exact inverse of bdct_forward up to floating error. Output is NOT
// clamped to [0,1].
ImageTensor bdct_inverse(const CoeffTensor& coeffs, const BlockSpec& spec);

void require_divisible(const Shape& shape, int n, const char* what);

}  // namespace atp
