#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atp/image_io.hpp"
#include "atp/key.hpp"
#include "atp/tensor.hpp"

namespace atp {

// One purification (tampering) operation a forgery attacker applies to
// strip the protection perturbation. Inputs are snapped to the 8-bit grid
// first: attackers operate on saved images, not float tensors.
struct PurifySpec {
    enum class Kind { Resize, Jpeg, GaussianBlur, GaussianNoise, FreqRound };
    enum class Region { All, MaskComplement };

    Kind kind = Kind::Jpeg;
    int resize_factor = 2;       // Resize: k in {1,2,4} (1 is a test-only boundary)
    int jpeg_quality = 50;       // Jpeg: 1..100
    double sigma = 1.0;          // GaussianBlur: 3x3 kernel from this sigma
    double noise_std = 0.05;     // GaussianNoise
    double round_step = 0.02;    // FreqRound: q
    Region region = Region::All; // FreqRound only
    int round_block = 16;        // FreqRound: attacker's block size N'
    uint64_t seed = 0;           // GaussianNoise draw

    static PurifySpec resize(int k);
    static PurifySpec jpeg(int quality);
    static PurifySpec blur(double sigma);
    static PurifySpec noise(double std, uint64_t seed = 0);
    static PurifySpec freq_round(double q, Region region = Region::All, int block = 16);

    void validate() const;
    std::string describe() const;
};

// Apply one purification. `key` is required only for
// FreqRound(region=MaskComplement). When `jpeg_bytes` is non-null the
// intermediate encoded stream is copied there for audit.
ImageTensor purify(const ImageTensor& img, const PurifySpec& spec,
                   const AtpKey* key = nullptr,
                   std::vector<uint8_t>* jpeg_bytes = nullptr);

// What the attacker assumes when mounting a frequency-rounding attack.
struct AttackerGuess {
    int block = 8;           // assumed block size (setting 1 uses a wrong one)
    double round_step = 0.1; // rounding step; sized to flatten the protection
};

// Frequency-rounding attacks with partial key knowledge:
//   setting 1: correct mask, wrong block size (guess.block != key.block)
//   setting 2: correct block size, mask unknown -> round every coefficient
//   setting 3: full key -> round only mask-0 coefficients at the true size
ImageTensor adaptive_attack(const ImageTensor& img, int setting, const AtpKey& true_key,
                            const AttackerGuess& guess = {});

// Shared primitives (deterministic, pinned conventions).
ImageTensor resize_bilinear(const ImageTensor& img, int out_h, int out_w);
ImageTensor gaussian_blur3(const ImageTensor& img, double sigma);

}  // namespace atp
