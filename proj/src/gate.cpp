#include "atp/gate.hpp"

#include "atp/bdct.hpp"

namespace atp {

VerifyReport verify_image(const ImageTensor& img, const AtpKey& key,
                          const AuthMessage& expected, double threshold) {
    key.validate();
    if (expected.bits.size() != static_cast<std::size_t>(key.message_len))
        throw std::invalid_argument("verify: expected message length does not match key");

    VerifyReport report;
    report.threshold = threshold;

    // Malformed submissions are unauthorized by policy, never an error an
    // attacker could exploit.
    if (img.height % key.block != 0 || img.width % key.block != 0) {
        report.bit_error = 1.0;
        report.authorized = false;
        report.reason = "dimensions not divisible by block size";
        return report;
    }

    BlockSpec spec{key.block};
    CoeffTensor coeffs = bdct_forward(img, spec);
    BitMask mask = derive_mask(key, img.shape());
    EmbeddingPlan plan = plan_embedding(key, mask);
    report.message_extracted = extract(coeffs, plan, key);
    report.bit_error = bit_error(report.message_extracted, expected);
    report.authorized = report.bit_error <= threshold;
    return report;
}

RequestVerdict verify_request(const std::vector<ImageTensor>& imgs, const AtpKey& key,
                              const AuthMessage& expected, double threshold) {
    if (imgs.empty()) throw std::invalid_argument("verify_request: empty image list");
    RequestVerdict verdict;
    verdict.accepted = true;
    for (const ImageTensor& img : imgs) {
        verdict.images.push_back(verify_image(img, key, expected, threshold));
        verdict.accepted = verdict.accepted && verdict.images.back().authorized;
    }
    return verdict;
}

double psr(const std::vector<RequestVerdict>& verdicts,
           const std::optional<std::vector<double>>& quality_scores,
           double quality_threshold) {
    if (verdicts.empty()) throw std::invalid_argument("psr: no verdicts");
    if (quality_scores && quality_scores->size() != verdicts.size())
        throw std::invalid_argument("psr: score/verdict length mismatch");
    std::size_t protected_count = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        bool rejected = !verdicts[i].accepted;
        bool low_quality = quality_scores && (*quality_scores)[i] < quality_threshold;
        protected_count += rejected || low_quality;
    }
    return static_cast<double>(protected_count) / static_cast<double>(verdicts.size());
}

}  // namespace atp
