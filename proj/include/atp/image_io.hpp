#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atp/tensor.hpp"

namespace atp {

// Output codec. PNG is the canonical lossless interchange format; JPEG is
// only used by the purification simulators.
struct PixelCodec {
    enum class Format { Png, Jpeg };
    Format format = Format::Png;
    int jpeg_quality = 90;  // 1..100, ignored for PNG

    static PixelCodec png() { return {Format::Png, 0}; }
    static PixelCodec jpeg(int quality) { return {Format::Jpeg, quality}; }
};

// Snap every value to the 8-bit grid: round(v*255)/255, clamped to [0,1].
// Models the save/load boundary without touching the filesystem.
ImageTensor quantize8(const ImageTensor& img);

uint8_t to_byte(double v);

// Decode an 8-bit PNG or JPEG file. Values come back as byte/255 exactly.
// Throws std::runtime_error on I/O or decode failure, unsupported bit depth,
// or alpha channels.
ImageTensor load_image(const std::string& path);

void save_image(const ImageTensor& img, const PixelCodec& codec, const std::string& path);

// In-memory JPEG round trip used by the purification module. 4:2:0
// subsampling for RGB, baseline tables scaled by quality.
std::vector<uint8_t> encode_jpeg(const ImageTensor& img, int quality);
ImageTensor decode_jpeg(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_png(const ImageTensor& img);
ImageTensor decode_png(const std::vector<uint8_t>& bytes);

// Codec identifiers recorded in run manifests.
std::string png_codec_id();
std::string jpeg_codec_id();

}  // namespace atp
