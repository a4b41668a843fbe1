#include "atp/purify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "atp/bdct.hpp"
#include "atp/masking.hpp"

namespace atp {

PurifySpec PurifySpec::resize(int k) {
    PurifySpec s;
    s.kind = Kind::Resize;
    s.resize_factor = k;
    return s;
}
PurifySpec PurifySpec::jpeg(int quality) {
    PurifySpec s;
    s.kind = Kind::Jpeg;
    s.jpeg_quality = quality;
    return s;
}
PurifySpec PurifySpec::blur(double sigma) {
    PurifySpec s;
    s.kind = Kind::GaussianBlur;
    s.sigma = sigma;
    return s;
}
PurifySpec PurifySpec::noise(double std, uint64_t seed) {
    PurifySpec s;
    s.kind = Kind::GaussianNoise;
    s.noise_std = std;
    s.seed = seed;
    return s;
}
PurifySpec PurifySpec::freq_round(double q, Region region, int block) {
    PurifySpec s;
    s.kind = Kind::FreqRound;
    s.round_step = q;
    s.region = region;
    s.round_block = block;
    return s;
}

void PurifySpec::validate() const {
    switch (kind) {
        case Kind::Resize:
            if (resize_factor != 1 && resize_factor != 2 && resize_factor != 4)
                throw std::invalid_argument("purify: resize factor must be 1, 2 or 4");
            break;
        case Kind::Jpeg:
            if (jpeg_quality < 1 || jpeg_quality > 100)
                throw std::invalid_argument("purify: JPEG quality must be 1..100");
            break;
        case Kind::GaussianBlur:
            if (!(sigma > 0.0)) throw std::invalid_argument("purify: blur sigma must be > 0");
            break;
        case Kind::GaussianNoise:
            if (!(noise_std >= 0.0)) throw std::invalid_argument("purify: noise std must be >= 0");
            break;
        case Kind::FreqRound:
            if (!(round_step > 0.0)) throw std::invalid_argument("purify: round step must be > 0");
            if (round_block < 2) throw std::invalid_argument("purify: round block must be >= 2");
            break;
    }
}

std::string PurifySpec::describe() const {
    std::ostringstream ss;
    switch (kind) {
        case Kind::Resize: ss << "resize x" << resize_factor; break;
        case Kind::Jpeg: ss << "jpeg q" << jpeg_quality; break;
        case Kind::GaussianBlur: ss << "blur sigma " << sigma; break;
        case Kind::GaussianNoise: ss << "noise std " << noise_std; break;
        case Kind::FreqRound:
            ss << "freq-round q " << round_step << " N' " << round_block
               << (region == Region::MaskComplement ? " mask-complement" : " all");
            break;
    }
    return ss.str();
}

ImageTensor resize_bilinear(const ImageTensor& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw std::invalid_argument("resize: bad target size");
    ImageTensor out(out_h, out_w, img.channels);
    double sy = static_cast<double>(img.height) / out_h;
    double sx = static_cast<double>(img.width) / out_w;
    for (int y = 0; y < out_h; ++y) {
        // Pixel-center convention: sample (i + 0.5) * scale - 0.5.
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int y0c = y0 < 0 ? 0 : (y0 >= img.height ? img.height - 1 : y0);
        int y1c = y0 + 1 < 0 ? 0 : (y0 + 1 >= img.height ? img.height - 1 : y0 + 1);
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int x0c = x0 < 0 ? 0 : (x0 >= img.width ? img.width - 1 : x0);
            int x1c = x0 + 1 < 0 ? 0 : (x0 + 1 >= img.width ? img.width - 1 : x0 + 1);
            for (int c = 0; c < img.channels; ++c) {
                double top = (1 - wx) * img.at(y0c, x0c, c) + wx * img.at(y0c, x1c, c);
                double bot = (1 - wx) * img.at(y1c, x0c, c) + wx * img.at(y1c, x1c, c);
                out.at(y, x, c) = (1 - wy) * top + wy * bot;
            }
        }
    }
    return out;
}

ImageTensor gaussian_blur3(const ImageTensor& img, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("blur: sigma must be > 0");
    double w1 = std::exp(-1.0 / (2.0 * sigma * sigma));
    double norm = 1.0 + 2.0 * w1;
    double k0 = 1.0 / norm, k1 = w1 / norm;

    // reflect-101 border: index -1 -> 1, index n -> n-2
    auto reflect = [](int i, int n) { return i < 0 ? -i : (i >= n ? 2 * n - 2 - i : i); };

    ImageTensor tmp(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                tmp.at(y, x, c) = k1 * img.at(y, reflect(x - 1, img.width), c) +
                                  k0 * img.at(y, x, c) +
                                  k1 * img.at(y, reflect(x + 1, img.width), c);
    ImageTensor out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(y, x, c) = k1 * tmp.at(reflect(y - 1, img.height), x, c) +
                                  k0 * tmp.at(y, x, c) +
                                  k1 * tmp.at(reflect(y + 1, img.height), x, c);
    return out;
}

namespace {

ImageTensor freq_round_apply(const ImageTensor& img, const PurifySpec& spec, const AtpKey* key) {
    BlockSpec block{spec.round_block};
    require_divisible(img.shape(), block.n, "freq-round");
    CoeffTensor coeffs = bdct_forward(img, block);

    if (spec.region == PurifySpec::Region::MaskComplement) {
        if (!key)
            throw std::invalid_argument("freq-round: mask-complement region requires the key");
        BitMask mask = derive_mask(*key, img.shape());
        for (std::size_t i = 0; i < coeffs.data.size(); ++i)
            if (!mask.bits[i])
                coeffs.data[i] =
                    spec.round_step * static_cast<double>(round_half_away(coeffs.data[i] / spec.round_step));
    } else {
        for (double& c : coeffs.data)
            c = spec.round_step * static_cast<double>(round_half_away(c / spec.round_step));
    }
    return bdct_inverse(coeffs, block);
}

}  // namespace

ImageTensor purify(const ImageTensor& img, const PurifySpec& spec, const AtpKey* key,
                   std::vector<uint8_t>* jpeg_bytes) {
    spec.validate();
    // Attackers operate on saved images, so start from the 8-bit grid.
    ImageTensor input = quantize8(img);

    switch (spec.kind) {
        case PurifySpec::Kind::Resize: {
            int k = spec.resize_factor;
            if (img.height % k != 0 || img.width % k != 0)
                throw std::invalid_argument("purify: dimensions not divisible by resize factor");
            ImageTensor small = resize_bilinear(input, img.height / k, img.width / k);
            return clamped(resize_bilinear(small, img.height, img.width));
        }
        case PurifySpec::Kind::Jpeg: {
            std::vector<uint8_t> bytes = encode_jpeg(input, spec.jpeg_quality);
            if (jpeg_bytes) *jpeg_bytes = bytes;
            return decode_jpeg(bytes);
        }
        case PurifySpec::Kind::GaussianBlur:
            return clamped(gaussian_blur3(input, spec.sigma));
        case PurifySpec::Kind::GaussianNoise: {
            ImageTensor out = input;
            std::mt19937_64 rng(spec.seed);
            // Box-Muller, one draw per entry.
            for (double& v : out.data) {
                double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
                double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                double z = std::sqrt(-2.0 * std::log(u1)) *
                           std::cos(2.0 * std::numbers::pi * u2);
                v = clamp01(v + spec.noise_std * z);
            }
            return out;
        }
        case PurifySpec::Kind::FreqRound:
            return clamped(freq_round_apply(input, spec, key));
    }
    throw std::logic_error("purify: unreachable");
}

ImageTensor adaptive_attack(const ImageTensor& img, int setting, const AtpKey& true_key,
                            const AttackerGuess& guess) {
    if (!(guess.round_step > 0.0))
        throw std::invalid_argument("adaptive attack: rounding step must be > 0");
    switch (setting) {
        case 1: {
            // Mask known, block size guessed wrong.
            if (guess.block == true_key.block)
                throw std::invalid_argument(
                    "adaptive attack: setting 1 requires a wrong block size guess");
            PurifySpec spec = PurifySpec::freq_round(
                guess.round_step, PurifySpec::Region::MaskComplement, guess.block);
            return purify(img, spec, &true_key);
        }
        case 2: {
            // Block size known, mask unknown: round everything.
            PurifySpec spec = PurifySpec::freq_round(guess.round_step, PurifySpec::Region::All,
                                                     true_key.block);
            return purify(img, spec, nullptr);
        }
        case 3: {
            // Full key: round only the protection region.
            PurifySpec spec = PurifySpec::freq_round(
                guess.round_step, PurifySpec::Region::MaskComplement, true_key.block);
            return purify(img, spec, &true_key);
        }
        default:
            throw std::invalid_argument("adaptive attack: setting must be 1, 2 or 3");
    }
}

}  // namespace atp
