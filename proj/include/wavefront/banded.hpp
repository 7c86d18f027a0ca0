#ifndef WAVEFRONT_BANDED_HPP
#define WAVEFRONT_BANDED_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "wavefront/common.hpp"

// Band-storage LU with partial pivoting for the discretized wave operators:
// tridiagonal diffusion/advection plus convolution coupling within the kernel
// radius. Row i stores columns [i-kl, i+kl+ku] (the extra kl above the upper
// band absorbs pivoting fill).

namespace wavefront {

class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), stride_(2 * kl + ku + 1), data_(n * stride_, 0.0) {}

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    /// Entry (i, j); j must satisfy -kl <= j - i <= kl + ku.
    double& operator()(std::size_t i, std::size_t j) {
        return data_[i * stride_ + band_index(i, j)];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * stride_ + band_index(i, j)];
    }

    void clear() { std::fill(data_.begin(), data_.end(), 0.0); }

private:
    std::size_t band_index(std::size_t i, std::size_t j) const {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i) +
                                   static_cast<std::ptrdiff_t>(kl_);
        return static_cast<std::size_t>(off);
    }

    std::size_t n_, kl_, ku_, stride_;
    std::vector<double> data_;

    friend class BandedLU;
};

class BandedLU {
public:
    /// Factors A in place (A is consumed).
    explicit BandedLU(BandedMatrix A) : a_(std::move(A)), piv_(a_.n_) {
        const std::size_t n = a_.n_, kl = a_.kl_, ku = a_.ku_;
        for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t last_row = std::min(n - 1, k + kl);
            std::size_t p = k;
            double best = std::abs(a_(k, k));
            for (std::size_t r = k + 1; r <= last_row; ++r) {
                const double v = std::abs(a_(r, k));
                if (v > best) {
                    best = v;
                    p = r;
                }
            }
            if (!(best > 0.0))
                throw solve_error("banded LU: singular matrix at column " + std::to_string(k));
            piv_[k] = p;
            const std::size_t last_col = std::min(n - 1, k + kl + ku);
            if (p != k)
                for (std::size_t j = k; j <= last_col; ++j) std::swap(a_(k, j), a_(p, j));
            const double pivot = a_(k, k);
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                const double m = a_(i, k) / pivot;
                a_(i, k) = m;
                if (m != 0.0)
                    for (std::size_t j = k + 1; j <= last_col; ++j) a_(i, j) -= m * a_(k, j);
            }
        }
    }

    /// Solves A x = b in place.
    void solve(std::vector<double>& b) const {
        const std::size_t n = a_.n_, kl = a_.kl_, ku = a_.ku_;
        if (b.size() != n) throw param_error("banded solve: rhs size mismatch");
        for (std::size_t k = 0; k < n; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            const std::size_t last_row = std::min(n - 1, k + kl);
            for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= a_(i, k) * b[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            const std::size_t last_col = std::min(n - 1, k + kl + ku);
            double s = b[k];
            for (std::size_t j = k + 1; j <= last_col; ++j) s -= a_(k, j) * b[j];
            b[k] = s / a_(k, k);
        }
    }

    std::vector<double> solved(std::vector<double> b) const {
        solve(b);
        return b;
    }

private:
    BandedMatrix a_;
    std::vector<std::size_t> piv_;
};

}  // namespace wavefront

#endif
