#include "atp/pgd.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace atp {

void PgdConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("pgd: epsilon must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("pgd: alpha must be > 0");
    if (steps < 1) throw std::invalid_argument("pgd: steps must be >= 1");
}

namespace {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

ImageTensor check_grad_shape(ImageTensor g, const Shape& want) {
    if (!(g.shape() == want)) throw std::runtime_error("pgd: gradient shape mismatch");
    return g;
}

}  // namespace

CoeffTensor improved_fd_pgd_coeffs(const CoeffTensor& source, const ProtectionObjective& obj,
                                   const PgdConfig& cfg, const BlockSpec& spec,
                                   std::vector<double>* trace) {
    cfg.validate();
    require_same_shape(source.shape(), cfg.mask.shape(), "pgd");
    require_divisible(source.shape(), spec.n, "pgd");

    CoeffTensor current = source;
    for (int step = 0; step < cfg.steps; ++step) {
        ImageTensor img = bdct_inverse(current, spec);
        if (trace) trace->push_back(obj.loss(img));
        ImageTensor grad = check_grad_shape(obj.grad(img), source.shape());
        CoeffTensor grad_freq = bdct_forward(grad, spec);

        // Sign ascent and the epsilon-ball projection live entirely in the
        // coefficient domain; entries with mask 0 are never written, so they
        // stay bit-identical to the source at every iterate.
        for (std::size_t i = 0; i < current.data.size(); ++i) {
            if (!cfg.mask.bits[i]) continue;
            double moved = current.data[i] + cfg.alpha * sgn(grad_freq.data[i]);
            double lo = source.data[i] - cfg.epsilon;
            double hi = source.data[i] + cfg.epsilon;
            current.data[i] = moved < lo ? lo : (moved > hi ? hi : moved);
        }
    }
    if (trace) trace->push_back(obj.loss(bdct_inverse(current, spec)));
    return current;
}

ImageTensor improved_fd_pgd(const ImageTensor& img, const ProtectionObjective& obj,
                            const PgdConfig& cfg, const BlockSpec& spec,
                            std::vector<double>* trace) {
    CoeffTensor source = bdct_forward(img, spec);
    CoeffTensor result = improved_fd_pgd_coeffs(source, obj, cfg, spec, trace);
    return bdct_inverse(result, spec);
}

ImageTensor baseline_fd_pgd(const ImageTensor& img, const ProtectionObjective& obj,
                            const PgdConfig& cfg, const BlockSpec& spec,
                            std::vector<double>* trace) {
    cfg.validate();
    require_same_shape(img.shape(), cfg.mask.shape(), "pgd");
    require_divisible(img.shape(), spec.n, "pgd");

    ImageTensor current = img;
    for (int step = 0; step < cfg.steps; ++step) {
        if (trace) trace->push_back(obj.loss(current));
        ImageTensor grad = check_grad_shape(obj.grad(current), img.shape());
        CoeffTensor grad_freq = bdct_forward(grad, spec);
        for (std::size_t i = 0; i < grad_freq.data.size(); ++i)
            if (!cfg.mask.bits[i]) grad_freq.data[i] = 0.0;
        ImageTensor direction = bdct_inverse(grad_freq, spec);

        // Sign step and epsilon-ball both in the pixel domain; this is the
        // variant whose projection leaks outside the frequency mask.
        for (std::size_t i = 0; i < current.data.size(); ++i) {
            double moved = current.data[i] + cfg.alpha * sgn(direction.data[i]);
            double lo = img.data[i] - cfg.epsilon;
            double hi = img.data[i] + cfg.epsilon;
            current.data[i] = moved < lo ? lo : (moved > hi ? hi : moved);
        }
    }
    if (trace) trace->push_back(obj.loss(current));
    return current;
}

namespace {

// Fixed random two-layer convolutional feature map with analytic backprop.
// Channel widths are kept small; the gradient path, not the feature power,
// is what downstream consumers exercise.
struct ConvNet {
    static constexpr int kHidden = 4;
    static constexpr int kOut = 4;

    int in_channels;
    std::vector<double> k1;  // [kHidden][in][3][3]
    std::vector<double> k2;  // [kOut][kHidden][3][3]
    std::vector<double> ref_features;
    Shape ref_shape;

    ConvNet(const ImageTensor& reference, uint64_t seed) : in_channels(reference.channels) {
        std::mt19937_64 rng(seed);
        auto normal = [&rng]() {
            // Box-Muller; avoids the implementation-defined std distribution.
            double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
            double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        };
        k1.resize(static_cast<std::size_t>(kHidden) * in_channels * 9);
        double s1 = 1.0 / std::sqrt(in_channels * 9.0);
        for (double& w : k1) w = s1 * normal();
        k2.resize(static_cast<std::size_t>(kOut) * kHidden * 9);
        double s2 = 1.0 / std::sqrt(kHidden * 9.0);
        for (double& w : k2) w = s2 * normal();
        ref_shape = reference.shape();
        ref_features = features(reference).z2;
    }

    struct Activations {
        std::vector<double> z1;  // pre-nonlinearity hidden map
        std::vector<double> z2;  // output map
    };

    // Cross-correlation with zero padding, stride 1.
    static void conv(const std::vector<double>& in, int h, int w, int cin,
                     const std::vector<double>& kernel, int cout, std::vector<double>& out) {
        out.assign(static_cast<std::size_t>(h) * w * cout, 0.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int co = 0; co < cout; ++co) {
                    double s = 0;
                    for (int ci = 0; ci < cin; ++ci)
                        for (int dy = -1; dy <= 1; ++dy) {
                            int yy = y + dy;
                            if (yy < 0 || yy >= h) continue;
                            for (int dx = -1; dx <= 1; ++dx) {
                                int xx = x + dx;
                                if (xx < 0 || xx >= w) continue;
                                s += kernel[((static_cast<std::size_t>(co) * cin + ci) * 3 +
                                             (dy + 1)) *
                                                3 +
                                            (dx + 1)] *
                                     in[(static_cast<std::size_t>(yy) * w + xx) * cin + ci];
                            }
                        }
                    out[(static_cast<std::size_t>(y) * w + x) * cout + co] = s;
                }
    }

    // Adjoint of conv: scatter output-side deltas back through the kernel.
    static void conv_transpose(const std::vector<double>& delta, int h, int w, int cout,
                               const std::vector<double>& kernel, int cin,
                               std::vector<double>& out) {
        out.assign(static_cast<std::size_t>(h) * w * cin, 0.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int ci = 0; ci < cin; ++ci) {
                    double s = 0;
                    for (int co = 0; co < cout; ++co)
                        for (int dy = -1; dy <= 1; ++dy) {
                            int yy = y - dy;
                            if (yy < 0 || yy >= h) continue;
                            for (int dx = -1; dx <= 1; ++dx) {
                                int xx = x - dx;
                                if (xx < 0 || xx >= w) continue;
                                s += kernel[((static_cast<std::size_t>(co) * cin + ci) * 3 +
                                             (dy + 1)) *
                                                3 +
                                            (dx + 1)] *
                                     delta[(static_cast<std::size_t>(yy) * w + xx) * cout + co];
                            }
                        }
                    out[(static_cast<std::size_t>(y) * w + x) * cin + ci] = s;
                }
    }

    Activations features(const ImageTensor& img) const {
        Activations act;
        conv(img.data, img.height, img.width, in_channels, k1, kHidden, act.z1);
        std::vector<double> a1(act.z1.size());
        for (std::size_t i = 0; i < a1.size(); ++i) a1[i] = std::tanh(act.z1[i]);
        conv(a1, img.height, img.width, kHidden, k2, kOut, act.z2);
        return act;
    }

    double loss(const ImageTensor& img) const {
        if (!(img.shape() == ref_shape)) throw std::invalid_argument("surrogate: shape mismatch");
        Activations act = features(img);
        double sum = 0;
        for (std::size_t i = 0; i < act.z2.size(); ++i) {
            double d = act.z2[i] - ref_features[i];
            sum += d * d;
        }
        return sum;
    }

    ImageTensor grad(const ImageTensor& img) const {
        if (!(img.shape() == ref_shape)) throw std::invalid_argument("surrogate: shape mismatch");
        Activations act = features(img);
        std::vector<double> delta2(act.z2.size());
        for (std::size_t i = 0; i < delta2.size(); ++i)
            delta2[i] = 2.0 * (act.z2[i] - ref_features[i]);
        std::vector<double> delta_a1;
        conv_transpose(delta2, img.height, img.width, kOut, k2, kHidden, delta_a1);
        for (std::size_t i = 0; i < delta_a1.size(); ++i) {
            double t = std::tanh(act.z1[i]);
            delta_a1[i] *= 1.0 - t * t;
        }
        ImageTensor g(img.height, img.width, img.channels);
        conv_transpose(delta_a1, img.height, img.width, kHidden, k1, in_channels, g.data);
        return g;
    }
};

}  // namespace

ProtectionObjective surrogate_objective(const ImageTensor& reference, uint64_t seed) {
    auto net = std::make_shared<ConvNet>(reference, seed);
    ProtectionObjective obj;
    obj.loss = [net](const ImageTensor& img) { return net->loss(img); };
    obj.grad = [net](const ImageTensor& img) { return net->grad(img); };
    return obj;
}

GradCheckReport grad_check(const ProtectionObjective& obj, const ImageTensor& img, int samples,
                           double h, uint64_t seed) {
    ImageTensor analytic = obj.grad(img);

    std::vector<std::size_t> coords;
    if (samples <= 0 || static_cast<std::size_t>(samples) >= img.size()) {
        coords.resize(img.size());
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    } else {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < samples; ++i) coords.push_back(rng() % img.size());
    }

    std::vector<double> numeric(coords.size());
    double scale = 0.0;
    ImageTensor probe = img;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        std::size_t i = coords[k];
        double saved = probe.data[i];
        probe.data[i] = saved + h;
        double up = obj.loss(probe);
        probe.data[i] = saved - h;
        double down = obj.loss(probe);
        probe.data[i] = saved;
        numeric[k] = (up - down) / (2.0 * h);
        scale = std::max(scale, std::fabs(numeric[k]));
    }

    GradCheckReport report;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        std::size_t i = coords[k];
        double denom = std::max({std::fabs(numeric[k]), 1e-4 * scale, 1e-12});
        double rel = std::fabs(analytic.data[i] - numeric[k]) / denom;
        if (rel >= report.max_rel_dev) {
            report.max_rel_dev = rel;
            int c = static_cast<int>(i % img.channels);
            std::size_t yx = i / img.channels;
            report.worst_x = static_cast<int>(yx % img.width);
            report.worst_y = static_cast<int>(yx / img.width);
            report.worst_c = c;
            report.analytic_at_worst = analytic.data[i];
            report.numeric_at_worst = numeric[k];
        }
    }
    return report;
}

}  // namespace atp
