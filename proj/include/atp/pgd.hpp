#pragma once

#include <functional>
#include <vector>

#include "atp/bdct.hpp"
#include "atp/masking.hpp"
#include "atp/tensor.hpp"

namespace atp {

// l-inf PGD settings. epsilon and alpha are in frequency-coefficient units;
// mask entries with value 1 mark the coefficients the gradient may update.
struct PgdConfig {
    double epsilon = 0.05;
    double alpha = 0.005;
    int steps = 50;
    BitMask mask;

    void validate() const;
};

// Differentiable objective the perturbation ascends. grad must match
// central finite differences of loss.
struct ProtectionObjective {
    std::function<double(const ImageTensor&)> loss;
    std::function<ImageTensor(const ImageTensor&)> grad;
};

// Frequency-domain PGD: sign step and epsilon-ball projection both applied
// to the coefficients, so positions with mask 0 keep their original
// coefficient bit-exactly at every iterate. Appends loss-before-step values
// plus a final loss to *trace when given.
ImageTensor improved_fd_pgd(const ImageTensor& img, const ProtectionObjective& obj,
                            const PgdConfig& cfg, const BlockSpec& spec,
                            std::vector<double>* trace = nullptr);

// Coefficient-space core of the above; exposed so callers can check the
// untouched positions bitwise.
CoeffTensor improved_fd_pgd_coeffs(const CoeffTensor& source, const ProtectionObjective& obj,
                                   const PgdConfig& cfg, const BlockSpec& spec,
                                   std::vector<double>* trace = nullptr);

// The plain frequency-masked PGD with sign and epsilon-ball in the pixel
// domain. Kept only to demonstrate how it leaks updates outside the mask.
ImageTensor baseline_fd_pgd(const ImageTensor& img, const ProtectionObjective& obj,
                            const PgdConfig& cfg, const BlockSpec& spec,
                            std::vector<double>* trace = nullptr);

// L(I) = ||phi(I) - phi(reference)||^2 for a fixed seeded two-layer random
// convolution feature map with tanh nonlinearity; gradient is analytic.
// Stands in for the (out-of-scope) generative-model losses and exercises
// the same code paths.
ProtectionObjective surrogate_objective(const ImageTensor& reference, uint64_t seed);

struct GradCheckReport {
    double max_rel_dev = 0.0;
    int worst_y = 0, worst_x = 0, worst_c = 0;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

// Central finite differences of obj.loss vs obj.grad at `samples` keyed
// coordinates of img.
GradCheckReport grad_check(const ProtectionObjective& obj, const ImageTensor& img,
                           int samples = 25, double h = 1e-4, uint64_t seed = 0);

}  // namespace atp
