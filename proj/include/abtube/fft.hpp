#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "abtube/errors.hpp"

namespace abtube {

using cplx = std::complex<double>;

/// Radix-2 in-place FFT for power-of-two lengths.
///
/// Forward transform: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n).
/// Inverse transform includes the 1/n factor, so inverse(forward(x)) == x up
/// to round-off (1/n is exact for power-of-two n). Twiddle factors are
/// tabulated once from std::polar, never recurred, so repeated transforms are
/// bit-reproducible and the unitarity defect stays at the eps*log2(n) level.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        if (n < 2 || !std::has_single_bit(n))
            throw config_error("FftPlan: length must be a power of two >= 2");
        log2n_ = static_cast<unsigned>(std::countr_zero(n));
        twiddle_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double angle = -2.0 * std::numbers::pi *
                                 static_cast<double>(j) / static_cast<double>(n);
            twiddle_[j] = std::polar(1.0, angle);
        }
        bitrev_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (unsigned b = 0; b < log2n_; ++b)
                r |= ((i >> b) & 1u) << (log2n_ - 1 - b);
            bitrev_[i] = r;
        }
    }

    std::size_t size() const { return n_; }

    void forward(cplx* data) const { transform(data, false); }

    void inverse(cplx* data) const {
        transform(data, true);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
    }

private:
    void transform(cplx* a, bool conjugate_twiddles) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = twiddle_[j * stride];
                    if (conjugate_twiddles) w = std::conj(w);
                    const cplx u = a[start + j];
                    const cplx v = a[start + j + half] * w;
                    a[start + j] = u + v;
                    a[start + j + half] = u - v;
                }
            }
        }
    }

    std::size_t n_;
    unsigned log2n_ = 0;
    std::vector<cplx> twiddle_;
    std::vector<std::size_t> bitrev_;
};

/// Square 2D FFT over row-major data: row pass, transpose, row pass,
/// transpose back, so both passes run over contiguous memory.
class FftPlan2d {
public:
    explicit FftPlan2d(std::size_t n) : n_(n), line_(n), scratch_(n * n) {}

    std::size_t size() const { return n_; }

    void forward(cplx* data) const { transform(data, false); }
    void inverse(cplx* data) const { transform(data, true); }

private:
    void transform(cplx* data, bool inv) const {
        apply_rows(data, inv);
        transpose(data);
        apply_rows(data, inv);
        transpose(data);
    }

    void apply_rows(cplx* data, bool inv) const {
        for (std::size_t r = 0; r < n_; ++r) {
            cplx* row = data + r * n_;
            if (inv)
                line_.inverse(row);
            else
                line_.forward(row);
        }
    }

    void transpose(cplx* data) const {
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c)
                scratch_[c * n_ + r] = data[r * n_ + c];
        std::copy(scratch_.begin(), scratch_.end(), data);
    }

    std::size_t n_;
    FftPlan line_;
    mutable std::vector<cplx> scratch_;
};

} // namespace abtube
