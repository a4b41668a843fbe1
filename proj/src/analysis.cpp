#include "atp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "atp/gate.hpp"
#include "atp/image_io.hpp"
#include "atp/masking.hpp"

namespace atp {

ChangeRateReport change_rate(const ImageTensor& before, const ImageTensor& after, Domain domain,
                             const BlockSpec& spec, double freq_tolerance) {
    require_same_shape(before.shape(), after.shape(), "change_rate");
    ChangeRateReport report;
    report.domain = domain;
    std::size_t changed = 0;
    if (domain == Domain::Pixel) {
        report.tolerance = 0.0;  // exact comparison on the 8-bit grid
        for (std::size_t i = 0; i < before.size(); ++i)
            changed += to_byte(before.data[i]) != to_byte(after.data[i]);
        report.rate = static_cast<double>(changed) / static_cast<double>(before.size());
    } else {
        report.tolerance = freq_tolerance;
        CoeffTensor cb = bdct_forward(before, spec);
        CoeffTensor ca = bdct_forward(after, spec);
        for (std::size_t i = 0; i < cb.size(); ++i)
            changed += std::fabs(ca.data[i] - cb.data[i]) > freq_tolerance;
        report.rate = static_cast<double>(changed) / static_cast<double>(cb.size());
    }
    return report;
}

std::vector<double> spectral_variance_map(
    const std::vector<std::pair<ImageTensor, ImageTensor>>& pairs, const BlockSpec& spec) {
    if (pairs.empty()) throw std::invalid_argument("spectral_variance_map: no pairs");
    const int n = spec.n;
    std::vector<double> sum(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(n) * n, 0);

    for (const auto& [before, after] : pairs) {
        require_same_shape(before.shape(), after.shape(), "spectral_variance_map");
        CoeffTensor cb = bdct_forward(before, spec);
        CoeffTensor ca = bdct_forward(after, spec);
        for (int y = 0; y < before.height; ++y)
            for (int x = 0; x < before.width; ++x)
                for (int c = 0; c < before.channels; ++c) {
                    double d = ca.at(y, x, c) - cb.at(y, x, c);
                    std::size_t cell = static_cast<std::size_t>(y % n) * n + x % n;
                    sum[cell] += d;
                    sumsq[cell] += d * d;
                    ++count[cell];
                }
    }

    std::vector<double> map(sum.size(), 0.0);
    double max_var = 0.0;
    for (std::size_t i = 0; i < map.size(); ++i) {
        double mean = sum[i] / count[i];
        map[i] = sumsq[i] / count[i] - mean * mean;
        max_var = std::max(max_var, map[i]);
    }
    if (max_var > 0.0)
        for (double& v : map) v /= max_var;
    return map;
}

double band_mean(const std::vector<double>& map, int n, bool top_quartile) {
    double lo_cut = 0.25 * (2 * n - 2);
    double hi_cut = 0.75 * (2 * n - 2);
    double sum = 0.0;
    std::size_t cnt = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            int diag = u + v;
            bool in_band = top_quartile ? diag >= hi_cut : diag <= lo_cut;
            if (in_band) {
                sum += map[static_cast<std::size_t>(u) * n + v];
                ++cnt;
            }
        }
    return sum / static_cast<double>(cnt);
}

SensitivityCurve sensitivity_sweep(const std::vector<ImageTensor>& protected_corpus,
                                   const AtpKey& key, const AuthMessage& expected,
                                   PurifySpec::Kind kind, const std::vector<double>& grid,
                                   uint64_t noise_seed) {
    if (protected_corpus.empty()) throw std::invalid_argument("sensitivity_sweep: empty corpus");
    if (grid.size() < 1) throw std::invalid_argument("sensitivity_sweep: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        bool up = grid[1] > grid[0];
        if ((up && grid[i] <= grid[i - 1]) || (!up && grid[i] >= grid[i - 1]))
            throw std::invalid_argument("sensitivity_sweep: grid must be strictly monotone");
    }

    SensitivityCurve curve;
    curve.kind = kind;
    curve.grid = grid;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < protected_corpus.size(); ++i) {
            PurifySpec spec;
            spec.kind = kind;
            switch (kind) {
                case PurifySpec::Kind::Resize:
                    spec.resize_factor = static_cast<int>(grid[j]);
                    break;
                case PurifySpec::Kind::Jpeg:
                    spec.jpeg_quality = static_cast<int>(grid[j]);
                    break;
                case PurifySpec::Kind::GaussianBlur:
                    spec.sigma = grid[j];
                    break;
                case PurifySpec::Kind::GaussianNoise:
                    spec.noise_std = grid[j];
                    spec.seed = noise_seed ^ (j * 0x9E3779B97F4A7C15ULL + i);
                    break;
                case PurifySpec::Kind::FreqRound:
                    spec.round_step = grid[j];
                    spec.round_block = key.block;
                    break;
            }
            ImageTensor purified = purify(protected_corpus[i], spec, &key);
            total += verify_image(purified, key, expected).bit_error;
        }
        curve.mean_bit_error.push_back(total / static_cast<double>(protected_corpus.size()));
    }
    return curve;
}

ContainmentReport pgd_containment_sim(int size, int region, uint64_t seed, const BlockSpec& spec) {
    if (size < spec.n || size % spec.n != 0)
        throw std::invalid_argument("containment sim: size must be a multiple of the block size");
    if (region < 1 || region > size)
        throw std::invalid_argument("containment sim: region must be in [1, size]");

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto normal = [&]() {
        double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };

    ImageTensor img(size, size, 1);
    for (double& v : img.data) v = uniform();

    // Random frequency-domain gradient confined to the top-left square.
    CoeffTensor grad_freq(size, size, 1);
    for (int y = 0; y < region; ++y)
        for (int x = 0; x < region; ++x) grad_freq.at(y, x, 0) = normal();
    ImageTensor grad_pixel = bdct_inverse(grad_freq, spec);

    ProtectionObjective obj;
    obj.loss = [grad_pixel](const ImageTensor& probe) {
        double s = 0;
        for (std::size_t i = 0; i < probe.size(); ++i) s += grad_pixel.data[i] * probe.data[i];
        return s;
    };
    obj.grad = [grad_pixel](const ImageTensor&) { return grad_pixel; };

    PgdConfig cfg;
    cfg.epsilon = 1.0;
    cfg.alpha = 1.0;
    cfg.steps = 1;
    cfg.mask.height = size;
    cfg.mask.width = size;
    cfg.mask.channels = 1;
    cfg.mask.bits.assign(static_cast<std::size_t>(size) * size, 0);
    for (int y = 0; y < region; ++y)
        for (int x = 0; x < region; ++x)
            cfg.mask.bits[static_cast<std::size_t>(y) * size + x] = 1;
    cfg.mask.ratio_p =
        static_cast<double>(region) * region / (static_cast<double>(size) * size);

    CoeffTensor before = bdct_forward(img, spec);
    CoeffTensor after_improved = bdct_forward(improved_fd_pgd(img, obj, cfg, spec), spec);
    CoeffTensor after_baseline = bdct_forward(baseline_fd_pgd(img, obj, cfg, spec), spec);

    ContainmentReport report;
    std::size_t inside_total = 0, inside_improved = 0, inside_baseline = 0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double di = std::fabs(after_improved.at(y, x, 0) - before.at(y, x, 0));
            double db = std::fabs(after_baseline.at(y, x, 0) - before.at(y, x, 0));
            if (y < region && x < region) {
                ++inside_total;
                inside_improved += di > report.tolerance;
                inside_baseline += db > report.tolerance;
            } else {
                report.max_outside_improved = std::max(report.max_outside_improved, di);
                report.max_outside_baseline = std::max(report.max_outside_baseline, db);
            }
        }
    report.frac_changed_inside_improved =
        static_cast<double>(inside_improved) / static_cast<double>(inside_total);
    report.frac_changed_inside_baseline =
        static_cast<double>(inside_baseline) / static_cast<double>(inside_total);
    return report;
}

RatioBlockTable ratio_block_sweep(const std::vector<ImageTensor>& corpus,
                                  const AtpKey& key_template, const std::vector<double>& p_grid,
                                  const std::vector<int>& n_grid, const ProtectParams& params,
                                  uint64_t msg_seed) {
    if (corpus.empty()) throw std::invalid_argument("ratio_block_sweep: empty corpus");
    for (double p : p_grid)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("ratio_block_sweep: p grid values must be in (0,1)");
    for (int n : n_grid)
        for (const ImageTensor& img : corpus)
            require_divisible(img.shape(), n, "ratio_block_sweep");

    RatioBlockTable table;
    table.p_grid = p_grid;
    table.n_grid = n_grid;
    AuthMessage msg = AuthMessage::random(msg_seed, key_template.message_len);
    for (double p : p_grid) {
        for (int n : n_grid) {
            AtpKey key = key_template;
            key.p = p;
            key.block = n;
            double total = 0.0;
            for (const ImageTensor& img : corpus) {
                ProtectResult res = protect_image(img, key, msg, params);
                ImageTensor saved = quantize8(res.image);  // 8-bit round trip
                total += verify_image(saved, key, msg).bit_error;
            }
            table.mean_bit_error.push_back(total / static_cast<double>(corpus.size()));
        }
    }
    return table;
}

}  // namespace atp
