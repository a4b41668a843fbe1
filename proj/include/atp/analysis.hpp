#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atp/bdct.hpp"
#include "atp/embed.hpp"
#include "atp/key.hpp"
#include "atp/pipeline.hpp"
#include "atp/purify.hpp"
#include "atp/tensor.hpp"

namespace atp {

enum class Domain { Pixel, Frequency };

struct ChangeRateReport {
    Domain domain = Domain::Pixel;
    double rate = 0.0;       // changed entries / total entries
    double tolerance = 0.0;  // equality threshold used
};

// Fraction of entries that differ between two images. Pixel domain
// compares 8-bit-quantized values exactly; frequency domain compares
// coefficients with |delta| > tolerance.
ChangeRateReport change_rate(const ImageTensor& before, const ImageTensor& after,
                             Domain domain, const BlockSpec& spec,
                             double freq_tolerance = 1e-6);

// Per-(u,v) variance of coefficient differences across all blocks, channels
// and image pairs, normalized so the largest cell is 1. Returned row-major
// as an NxN map.
std::vector<double> spectral_variance_map(
    const std::vector<std::pair<ImageTensor, ImageTensor>>& pairs, const BlockSpec& spec);

// Mean of map cells whose u+v falls in the top / bottom quartile of the
// 0..2(N-1) diagonal range.
double band_mean(const std::vector<double>& map, int n, bool top_quartile);

struct SensitivityCurve {
    PurifySpec::Kind kind = PurifySpec::Kind::Jpeg;
    std::vector<double> grid;            // strictly monotone parameter values
    std::vector<double> mean_bit_error;  // per grid point, over the corpus
};

// For each grid point: purify every protected image and average the
// verification bit-error. Grid values map to the purification parameter
// (resize factor, JPEG quality, blur sigma, noise std, rounding step).
SensitivityCurve sensitivity_sweep(const std::vector<ImageTensor>& protected_corpus,
                                   const AtpKey& key, const AuthMessage& expected,
                                   PurifySpec::Kind kind, const std::vector<double>& grid,
                                   uint64_t noise_seed = 0);

struct ContainmentReport {
    double max_outside_improved = 0.0;
    double max_outside_baseline = 0.0;
    double frac_changed_inside_improved = 0.0;
    double frac_changed_inside_baseline = 0.0;
    double tolerance = 1e-9;
};

// One-step optimisation of a synthetic objective whose frequency-domain
// gradient is random inside the top-left region x region square and zero
// outside (step size 1, radius 1). Reports how far each algorithm's
// coefficient updates leak outside that square.
ContainmentReport pgd_containment_sim(int size = 512, int region = 128, uint64_t seed = 0,
                                      const BlockSpec& spec = {16});

struct RatioBlockTable {
    std::vector<double> p_grid;
    std::vector<int> n_grid;
    std::vector<double> mean_bit_error;  // row-major [p][N]
};

// Full protect -> 8-bit round trip -> verify, averaged over the corpus,
// for every (mask ratio, block size) pair.
RatioBlockTable ratio_block_sweep(const std::vector<ImageTensor>& corpus,
                                  const AtpKey& key_template,
                                  const std::vector<double>& p_grid,
                                  const std::vector<int>& n_grid,
                                  const ProtectParams& params, uint64_t msg_seed = 7);

}  // namespace atp
