#pragma once

#include <cstdint>
#include <vector>

#include "atp/embed.hpp"
#include "atp/gate.hpp"
#include "atp/key.hpp"
#include "atp/pgd.hpp"

namespace atp {

struct ProtectParams {
    double epsilon = 0.05;
    double alpha = 0.005;
    int steps = 50;
    uint64_t seed = 0;  // seeds the surrogate objective
};

struct ProtectResult {
    ImageTensor image;  // un-clamped float output; clamp/quantize at save
    std::vector<double> loss_trace;
};

// Full pipeline: transform, embed the message into the mask-1 coefficients,
// run frequency-domain PGD on the mask-0 coefficients against `obj` (or a
// surrogate objective referencing the clean image when obj is null), and
// transform back.
ProtectResult protect_image(const ImageTensor& img, const AtpKey& key,
                            const AuthMessage& msg, const ProtectParams& params,
                            const ProtectionObjective* obj = nullptr);

}  // namespace atp
