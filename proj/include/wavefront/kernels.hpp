#ifndef WAVEFRONT_KERNELS_HPP
#define WAVEFRONT_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavefront/common.hpp"

// Kernel families J, their sigma-scalings J_sigma(x) = J(x/sigma)/sigma,
// moments, bilateral exponential transforms M(mu) = int J(s) e^{-mu s} ds,
// and the discrete convolution J_sigma * omega~ against a uniform-grid
// profile with constant extensions.

namespace wavefront {

inline constexpr double pi_v = 3.141592653589793238462643383279502884;

enum class KernelFamily { tophat, gaussian, laplace, tabulated };

inline const char* to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::tophat: return "tophat";
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::laplace: return "laplace";
        case KernelFamily::tabulated: return "tabulated";
    }
    return "?";
}

class KernelSpec {
public:
    static KernelSpec tophat() { return KernelSpec(KernelFamily::tophat); }
    static KernelSpec gaussian() { return KernelSpec(KernelFamily::gaussian); }
    static KernelSpec laplace() { return KernelSpec(KernelFamily::laplace); }

    /// Nonnegative samples on a uniform symmetric-or-not grid of offsets;
    /// renormalized at construction so the trapezoid mass is exactly 1.
    static KernelSpec tabulated(std::vector<double> offsets, std::vector<double> values) {
        KernelSpec k(KernelFamily::tabulated);
        if (offsets.size() != values.size() || offsets.size() < 3)
            throw param_error("tabulated kernel: need >= 3 matching (offset, density) samples");
        const double dx = offsets[1] - offsets[0];
        if (!(dx > 0)) throw param_error("tabulated kernel: offsets must be increasing");
        for (std::size_t i = 1; i < offsets.size(); ++i) {
            if (std::abs((offsets[i] - offsets[i - 1]) - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
                throw param_error("tabulated kernel: offsets must be uniform");
        }
        double mass = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= 0.0)) throw param_error("tabulated kernel: density must be nonnegative");
            mass += values[i] * ((i == 0 || i + 1 == values.size()) ? 0.5 : 1.0);
        }
        mass *= dx;
        if (!(mass > 0)) throw param_error("tabulated kernel: zero mass");
        for (auto& v : values) v /= mass;
        // Edge density that would carry noticeable mass past the data range.
        k.tail_warning_ = (values.front() + values.back()) * dx > 1e-8;
        k.tab_x_ = std::move(offsets);
        k.tab_v_ = std::move(values);
        k.tab_dx_ = dx;
        return k;
    }

    /// Two-column CSV (offset, density); an optional non-numeric header line is skipped.
    static KernelSpec from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw param_error("cannot open kernel CSV: " + path);
        std::vector<double> xs, vs;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            for (auto& ch : line)
                if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
            std::istringstream ls(line);
            double x, v;
            if (ls >> x >> v) {
                xs.push_back(x);
                vs.push_back(v);
            } else if (!xs.empty()) {
                throw param_error("kernel CSV: malformed line: " + line);
            }
            // non-numeric leading lines (header) are skipped
        }
        return tabulated(std::move(xs), std::move(vs));
    }

    KernelFamily family() const { return family_; }
    bool tail_warning() const { return tail_warning_; }

    /// Base (unscaled) density J(x).
    double density(double x) const {
        switch (family_) {
            case KernelFamily::tophat: return std::abs(x) <= 1.0 ? 0.5 : 0.0;
            case KernelFamily::gaussian: return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi_v);
            case KernelFamily::laplace: return 0.5 * std::exp(-std::abs(x));
            case KernelFamily::tabulated: return tab_density(x);
        }
        return 0.0;
    }

    /// CDF of the base kernel, int_{-inf}^x J.
    double cdf(double x) const {
        switch (family_) {
            case KernelFamily::tophat:
                return std::clamp(0.5 * (x + 1.0), 0.0, 1.0);
            case KernelFamily::gaussian:
                return 0.5 * std::erfc(-x / std::sqrt(2.0));
            case KernelFamily::laplace:
                return x < 0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
            case KernelFamily::tabulated:
                return tab_cdf(x);
        }
        return 0.0;
    }

    /// Mass outside [-R, R].
    double tail_mass(double R) const {
        if (R < 0) return 1.0;
        return std::max(0.0, 1.0 - (cdf(R) - cdf(-R)));
    }

    /// m_i = int |z|^i J(z) dz of the UNSCALED kernel; the scaled kernel
    /// J_sigma has moments sigma^i m_i.
    double moment(int order) const {
        if (order != 1 && order != 2) throw param_error("moment: order must be 1 or 2");
        switch (family_) {
            case KernelFamily::tophat:
                return order == 1 ? 0.5 : 1.0 / 3.0;
            case KernelFamily::gaussian:
                return order == 1 ? std::sqrt(2.0 / pi_v) : 1.0;
            case KernelFamily::laplace:
                return order == 1 ? 1.0 : 2.0;
            case KernelFamily::tabulated: {
                double s = 0.0;
                for (std::size_t i = 0; i < tab_x_.size(); ++i) {
                    const double w = (i == 0 || i + 1 == tab_x_.size()) ? 0.5 : 1.0;
                    s += w * std::pow(std::abs(tab_x_[i]), order) * tab_v_[i];
                }
                return s * tab_dx_;
            }
        }
        return 0.0;
    }

    /// M(mu) = int J(s) e^{-mu s} ds. Returns +inf above e^700 (overflow marker);
    /// throws for the laplace family at |mu| >= 1 where the integral diverges.
    double transform(double mu) const {
        if (family_ == KernelFamily::laplace && std::abs(mu) >= 1.0)
            throw solve_error("laplace transform divergent: |mu| >= 1 (mu = " + format_full(mu) + ")");
        return transform_or_inf(mu);
    }

    /// Same as transform() but maps divergence to +inf (used by root scans,
    /// where a divergent transform just means Phi = -inf).
    double transform_or_inf(double mu) const {
        switch (family_) {
            case KernelFamily::tophat: {
                const double a = std::abs(mu);
                if (a < 1e-8) return 1.0 + mu * mu / 6.0;
                if (a > 700.0) return kInf;
                return std::sinh(mu) / mu;
            }
            case KernelFamily::gaussian: {
                const double e = 0.5 * mu * mu;
                return e > 700.0 ? kInf : std::exp(e);
            }
            case KernelFamily::laplace:
                if (std::abs(mu) >= 1.0) return kInf;
                return 1.0 / (1.0 - mu * mu);
            case KernelFamily::tabulated: {
                double s = 0.0;
                for (std::size_t i = 0; i < tab_x_.size(); ++i) {
                    const double e = -mu * tab_x_[i];
                    if (e > 700.0) return kInf;
                    const double w = (i == 0 || i + 1 == tab_x_.size()) ? 0.5 : 1.0;
                    s += w * tab_v_[i] * std::exp(e);
                }
                return s * tab_dx_;
            }
        }
        return kInf;
    }

    /// Truncation radius for the base kernel: mass beyond it is < 1e-10.
    double truncation_radius() const {
        switch (family_) {
            case KernelFamily::tophat: return 1.0;
            case KernelFamily::gaussian: return 7.0;
            case KernelFamily::laplace: return 25.0;
            case KernelFamily::tabulated:
                return std::max(std::abs(tab_x_.front()), std::abs(tab_x_.back()));
        }
        return 1.0;
    }

    /// Smallest R0 with A * (mass outside [-R0, R0]) <= eps0. The scaled
    /// kernel then satisfies the same bound outside [-R0*sigma, R0*sigma].
    double tail_radius(double eps0, double A) const {
        if (!(eps0 > 0)) throw param_error("tail_radius: eps0 must be > 0");
        if (!(A > 0)) throw param_error("tail_radius: A must be > 0");
        auto ok = [&](double R) { return A * tail_mass(R) <= eps0; };
        double hi = truncation_radius();
        int guard = 0;
        while (!ok(hi)) {
            hi *= 2.0;
            if (++guard > 60) throw solve_error("tail_radius: tail does not decay");
        }
        return detail::bisect_threshold(0.0, hi, 1e-12 * (1.0 + hi), ok);
    }

private:
    explicit KernelSpec(KernelFamily f) : family_(f) {}

    double tab_density(double x) const {
        if (x <= tab_x_.front() || x >= tab_x_.back()) return 0.0;
        const double t = (x - tab_x_.front()) / tab_dx_;
        const auto i = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(i);
        return tab_v_[i] * (1.0 - frac) + tab_v_[i + 1] * frac;
    }

    // Exact integral of the piecewise-linear density.
    double tab_cdf(double x) const {
        if (x <= tab_x_.front()) return 0.0;
        if (x >= tab_x_.back()) return 1.0;
        const double t = (x - tab_x_.front()) / tab_dx_;
        auto i = static_cast<std::size_t>(t);
        if (i + 1 >= tab_x_.size()) i = tab_x_.size() - 2;
        double c = 0.0;
        for (std::size_t j = 0; j < i; ++j) c += 0.5 * (tab_v_[j] + tab_v_[j + 1]) * tab_dx_;
        const double frac = (x - tab_x_[i]) / tab_dx_;
        const double vmid = tab_v_[i] * (1.0 - frac) + tab_v_[i + 1] * frac;
        c += 0.5 * (tab_v_[i] + vmid) * (x - tab_x_[i]);
        return c;
    }

    KernelFamily family_;
    bool tail_warning_ = false;
    std::vector<double> tab_x_, tab_v_;
    double tab_dx_ = 0.0;
};

/// A function sampled on a uniform grid, plus the constant values it takes
/// beyond the two ends (the extension omega~; 0 on the left and A on the
/// right for the cutoff problem).
struct GridProfile {
    double x0 = 0.0;  // leftmost grid point
    double h = 1.0;   // spacing > 0
    std::vector<double> values;
    double left_ext = 0.0;
    double right_ext = 0.0;

    GridProfile() = default;
    GridProfile(double x0_, double h_, std::size_t n, double fill = 0.0)
        : x0(x0_), h(h_), values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
    double x_back() const { return x(values.size() - 1); }

    double extended(std::ptrdiff_t i) const {
        if (i < 0) return left_ext;
        if (i >= static_cast<std::ptrdiff_t>(values.size())) return right_ext;
        return values[static_cast<std::size_t>(i)];
    }

    /// Linear interpolation with constant extension.
    double at(double xq) const {
        const double t = (xq - x0) / h;
        if (t <= 0.0) return values.empty() ? left_ext : values.front();
        const auto n = static_cast<double>(values.size() - 1);
        if (t >= n) return values.back();
        const auto i = static_cast<std::size_t>(t);
        const double f = t - static_cast<double>(i);
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }

    /// 4-point Lagrange interpolation (falls back to linear near the ends).
    double at_cubic(double xq) const {
        const double t = (xq - x0) / h;
        if (t < 1.0 || t > static_cast<double>(values.size()) - 2.0 || values.size() < 4) return at(xq);
        const auto i = static_cast<std::size_t>(t);
        const double f = t - static_cast<double>(i);
        const double ym1 = values[i - 1], y0 = values[i], y1 = values[i + 1], y2 = values[i + 2];
        return y0 + 0.5 * f * (y1 - ym1 + f * (2.0 * ym1 - 5.0 * y0 + 4.0 * y1 - y2 + f * (3.0 * (y0 - y1) + y2 - ym1)));
    }

    /// Leftmost crossing x* with values(x*) = level for a nondecreasing profile
    /// (linear interpolation); NaN when the level is never bracketed.
    double crossing(double level) const {
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            const double u0 = values[i], u1 = values[i + 1];
            if ((u0 - level) * (u1 - level) <= 0.0 && u0 != u1)
                return x(i) + h * (level - u0) / (u1 - u0);
        }
        return kNaN;
    }
};

/// Discrete convolution weights for a fixed (kernel, sigma, h): exact per-cell
/// masses w_k = int_{(k-1/2)h}^{(k+1/2)h} J_sigma, renormalized to unit sum so
/// constants are reproduced exactly.
class ConvolutionPlan {
public:
    ConvolutionPlan(const KernelSpec& kernel, double sigma, double h) {
        if (!(sigma > 0)) throw param_error("convolution: sigma must be > 0");
        if (!(h > 0)) throw param_error("convolution: h must be > 0");
        if (!(h < sigma / 2.0))
            throw param_error("convolution: grid too coarse, need h < sigma/2 = " +
                              format_full(sigma / 2.0) + ", got h = " + format_full(h));
        const double R = kernel.truncation_radius() * sigma;
        half_width_ = static_cast<std::ptrdiff_t>(std::ceil(R / h + 0.5));
        weights_.resize(2 * half_width_ + 1);
        double sum = 0.0;
        for (std::ptrdiff_t k = -half_width_; k <= half_width_; ++k) {
            const double lo = (static_cast<double>(k) - 0.5) * h / sigma;
            const double hi = (static_cast<double>(k) + 0.5) * h / sigma;
            const double w = kernel.cdf(hi) - kernel.cdf(lo);
            weights_[static_cast<std::size_t>(k + half_width_)] = w;
            sum += w;
        }
        for (auto& w : weights_) w /= sum;
    }

    std::ptrdiff_t half_width() const { return half_width_; }

    /// Weight of offset k (grid steps), |k| <= half_width().
    double weight(std::ptrdiff_t k) const { return weights_[static_cast<std::size_t>(k + half_width_)]; }

    /// (J_sigma * omega~)(x_j) for every grid point of `in`; result on the
    /// same grid. The convolution of constant extensions is exact.
    void apply(const GridProfile& in, GridProfile& out) const {
        out.x0 = in.x0;
        out.h = in.h;
        out.left_ext = in.left_ext;
        out.right_ext = in.right_ext;
        out.values.resize(in.size());
        const auto n = static_cast<std::ptrdiff_t>(in.size());
        const std::ptrdiff_t K = half_width_;
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            double s = 0.0;
            if (j - K >= 0 && j + K < n) {
                const double* v = in.values.data() + (j - K);
                for (std::ptrdiff_t k = 0; k <= 2 * K; ++k) s += weights_[static_cast<std::size_t>(2 * K - k)] * v[k];
            } else {
                for (std::ptrdiff_t k = -K; k <= K; ++k)
                    s += weights_[static_cast<std::size_t>(k + K)] * in.extended(j - k);
            }
            out.values[static_cast<std::size_t>(j)] = s;
        }
    }

    GridProfile apply(const GridProfile& in) const {
        GridProfile out;
        apply(in, out);
        return out;
    }

private:
    std::ptrdiff_t half_width_ = 0;
    std::vector<double> weights_;
};

/// One-shot convolution; builds a plan internally. Solver loops should hold
/// a ConvolutionPlan instead.
inline GridProfile convolve(const GridProfile& profile, const KernelSpec& kernel, double sigma) {
    return ConvolutionPlan(kernel, sigma, profile.h).apply(profile);
}

}  // namespace wavefront

#endif
