#include "atp/bdct.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace atp {

void require_divisible(const Shape& shape, int n, const char* what) {
    if (n < 2) throw std::invalid_argument(std::string(what) + ": block size must be >= 2");
    if (shape.height % n != 0 || shape.width % n != 0)
        throw std::invalid_argument(std::string(what) + ": dimensions not divisible by block size");
}

namespace {

// basis[u*n + i] = alpha(u) * cos(pi*(2i+1)*u / 2n), the orthonormal DCT-II
// kernel; rows are orthonormal vectors.
std::vector<double> dct_basis(int n) {
    std::vector<double> basis(static_cast<std::size_t>(n) * n);
    const double pi = std::numbers::pi;
    for (int u = 0; u < n; ++u) {
        double alpha = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i)
            basis[static_cast<std::size_t>(u) * n + i] =
                alpha * std::cos(pi * (2 * i + 1) * u / (2.0 * n));
    }
    return basis;
}

template <typename SrcTag, typename DstTag, bool Forward>
Tensor<DstTag> transform(const Tensor<SrcTag>& src, int n) {
    require_divisible({src.height, src.width, src.channels}, n, "bdct");
    Tensor<DstTag> dst(src.height, src.width, src.channels);
    const std::vector<double> basis = dct_basis(n);
    const int bh = src.height / n, bw = src.width / n, nc = src.channels;

    std::vector<double> block(static_cast<std::size_t>(n) * n);
    std::vector<double> tmp(static_cast<std::size_t>(n) * n);
    std::vector<double> out(static_cast<std::size_t>(n) * n);

    for (int by = 0; by < bh; ++by) {
        for (int bx = 0; bx < bw; ++bx) {
            for (int c = 0; c < nc; ++c) {
                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x)
                        block[static_cast<std::size_t>(y) * n + x] =
                            src.at(by * n + y, bx * n + x, c);

                if constexpr (Forward) {
                    // C = B * X * B^T
                    for (int u = 0; u < n; ++u)
                        for (int j = 0; j < n; ++j) {
                            double s = 0;
                            for (int i = 0; i < n; ++i)
                                s += basis[static_cast<std::size_t>(u) * n + i] *
                                     block[static_cast<std::size_t>(i) * n + j];
                            tmp[static_cast<std::size_t>(u) * n + j] = s;
                        }
                    for (int u = 0; u < n; ++u)
                        for (int v = 0; v < n; ++v) {
                            double s = 0;
                            for (int j = 0; j < n; ++j)
                                s += tmp[static_cast<std::size_t>(u) * n + j] *
                                     basis[static_cast<std::size_t>(v) * n + j];
                            out[static_cast<std::size_t>(u) * n + v] = s;
                        }
                } else {
                    // X = B^T * C * B
                    for (int i = 0; i < n; ++i)
                        for (int v = 0; v < n; ++v) {
                            double s = 0;
                            for (int u = 0; u < n; ++u)
                                s += basis[static_cast<std::size_t>(u) * n + i] *
                                     block[static_cast<std::size_t>(u) * n + v];
                            tmp[static_cast<std::size_t>(i) * n + v] = s;
                        }
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            double s = 0;
                            for (int v = 0; v < n; ++v)
                                s += tmp[static_cast<std::size_t>(i) * n + v] *
                                     basis[static_cast<std::size_t>(v) * n + j];
                            out[static_cast<std::size_t>(i) * n + j] = s;
                        }
                }

                for (int y = 0; y < n; ++y)
                    for (int x = 0; x < n; ++x)
                        dst.at(by * n + y, bx * n + x, c) =
                            out[static_cast<std::size_t>(y) * n + x];
            }
        }
    }
    return dst;
}

}  // namespace

CoeffTensor bdct_forward(const ImageTensor& img, const BlockSpec& spec) {
    return transform<PixelTag, CoeffTag, true>(img, spec.n);
}

ImageTensor bdct_inverse(const CoeffTensor& coeffs, const BlockSpec& spec) {
    return transform<CoeffTag, PixelTag, false>(coeffs, spec.n);
}

}  // namespace atp
