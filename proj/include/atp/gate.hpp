#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atp/embed.hpp"
#include "atp/key.hpp"
#include "atp/tensor.hpp"

namespace atp {

inline constexpr double kDefaultBitErrorThreshold = 3.0 / 32.0;

struct VerifyReport {
    double bit_error = 1.0;
    double threshold = kDefaultBitErrorThreshold;
    bool authorized = false;
    AuthMessage message_extracted;
    std::string reason;  // non-empty when rejected by policy (bad dims, undecodable)
};

struct RequestVerdict {
    std::vector<VerifyReport> images;
    bool accepted = false;
};

// Extract the message and compare against `expected`. Never throws on
// attacker-controlled content: dimension mismatches come back unauthorized
// with a reason instead.
VerifyReport verify_image(const ImageTensor& img, const AtpKey& key,
                          const AuthMessage& expected,
                          double threshold = kDefaultBitErrorThreshold);

// A request is accepted only if every submitted image is authorized.
RequestVerdict verify_request(const std::vector<ImageTensor>& imgs, const AtpKey& key,
                              const AuthMessage& expected,
                              double threshold = kDefaultBitErrorThreshold);

// Fraction of requests that count as protected: rejected by the gate, or
// (when generation-quality scores are supplied) scored below the quality
// threshold.
double psr(const std::vector<RequestVerdict>& verdicts,
           const std::optional<std::vector<double>>& quality_scores = std::nullopt,
           double quality_threshold = 0.0);

}  // namespace atp
