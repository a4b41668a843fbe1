#include "atp/pipeline.hpp"

#include "atp/bdct.hpp"
#include "atp/masking.hpp"

namespace atp {

ProtectResult protect_image(const ImageTensor& img, const AtpKey& key, const AuthMessage& msg,
                            const ProtectParams& params, const ProtectionObjective* obj) {
    key.validate();
    BlockSpec spec{key.block};
    require_divisible(img.shape(), key.block, "protect");

    CoeffTensor coeffs = bdct_forward(img, spec);
    BitMask mask = derive_mask(key, img.shape());
    EmbeddingPlan plan = plan_embedding(key, mask);
    CoeffTensor embedded = embed(coeffs, msg, plan, key);

    PgdConfig cfg;
    cfg.epsilon = params.epsilon;
    cfg.alpha = params.alpha;
    cfg.steps = params.steps;
    cfg.mask = complement(mask);

    ProtectionObjective surrogate;
    if (!obj) {
        // The clean image is the feature reference, so the ascent starts
        // with a small nonzero loss from the embedding alone.
        surrogate = surrogate_objective(img, params.seed);
        obj = &surrogate;
    }

    ProtectResult result;
    CoeffTensor final_coeffs =
        improved_fd_pgd_coeffs(embedded, *obj, cfg, spec, &result.loss_trace);
    result.image = bdct_inverse(final_coeffs, spec);
    return result;
}

}  // namespace atp
