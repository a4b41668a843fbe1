#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace atp {

struct Shape {
    int height = 0;
    int width = 0;
    int channels = 0;

    std::size_t size() const {
        return static_cast<std::size_t>(height) * width * channels;
    }
    bool operator==(const Shape&) const = default;
};

// Dense row-major (row, col, channel) tensor of doubles. Pixel values live
// in [0,1]; frequency coefficients use the same layout with block positions
// preserved.
template <typename Tag>
struct Tensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int h, int w, int c, double fill = 0.0)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, fill) {
        if (h <= 0 || w <= 0 || (c != 1 && c != 3))
            throw std::invalid_argument("tensor: bad dimensions");
    }

    Shape shape() const { return {height, width, channels}; }
    std::size_t size() const { return data.size(); }

    std::size_t index(int y, int x, int c) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    double& at(int y, int x, int c) { return data[index(y, x, c)]; }
    double at(int y, int x, int c) const { return data[index(y, x, c)]; }
};

struct PixelTag {};
struct CoeffTag {};

using ImageTensor = Tensor<PixelTag>;
using CoeffTensor = Tensor<CoeffTag>;

inline void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

// Round half away from zero, pinned across platforms.
inline long long round_half_away(double v) { return std::llround(v); }

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline ImageTensor clamped(const ImageTensor& img) {
    ImageTensor out = img;
    for (double& v : out.data) v = clamp01(v);
    return out;
}

}  // namespace atp
