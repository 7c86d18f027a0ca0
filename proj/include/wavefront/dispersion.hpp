#ifndef WAVEFRONT_DISPERSION_HPP
#define WAVEFRONT_DISPERSION_HPP

#include <cmath>
#include <optional>

#include "wavefront/core_model.hpp"
#include "wavefront/kernels.hpp"

// Characteristic functions of the linearizations,
//   Phi_1(c, sigma, lambda) = lambda^2 - c lambda - d - A^2 M(sigma lambda)
//   Phi_2(c, sigma, lambda) = lambda^2 - c lambda + d - A^2 M(sigma lambda)
// with M the bilateral exponential transform of the base kernel. Existence of
// their largest negative roots gates the sub/super-solution construction; the
// threshold speed c_*(sigma) is the smallest c for which both roots exist.

namespace wavefront {

struct DispersionRoot {
    double lambda = kNaN;  // largest negative root
    double eps = kNaN;     // margin with Phi(lambda - eps) > 0
};

struct DispersionResult {
    std::optional<DispersionRoot> root1;  // Phi_1
    std::optional<DispersionRoot> root2;  // Phi_2
    bool both_exist() const { return root1.has_value() && root2.has_value(); }
};

/// Roots of mu^2 - c mu + (2A - d) = 0; real and positive iff c > 2 sqrt(2A-d).
struct MuRoots {
    double mu1 = kNaN;  // smaller
    double mu2 = kNaN;  // larger
};

inline double phi(int i, double c, double sigma, double lambda, const ModelParams& model,
                  const KernelSpec& kernel) {
    if (i != 1 && i != 2) throw param_error("phi: i must be 1 or 2");
    const double A = model.A();
    const double M = kernel.transform(sigma * lambda);
    const double sd = (i == 1) ? -model.d : model.d;
    return lambda * lambda - c * lambda + sd - A * A * M;
}

namespace detail {

// Non-throwing variant: a divergent/overflowed transform means Phi = -inf.
inline double phi_or_neg_inf(int i, double c, double sigma, double lambda, const ModelParams& model,
                             const KernelSpec& kernel) {
    const double A = model.A();
    const double M = kernel.transform_or_inf(sigma * lambda);
    if (!std::isfinite(M)) return -kInf;
    const double sd = (i == 1) ? -model.d : model.d;
    return lambda * lambda - c * lambda + sd - A * A * M;
}

// Ladder of trial magnitudes: 1e-6 * 2^k, k = 0..60 (covers 1e-6 .. ~1e12).
inline constexpr int kLadderSize = 61;
inline double ladder(int k) { return -1e-6 * std::ldexp(1.0, k); }

}  // namespace detail

/// Largest negative root of Phi_i plus a verified margin eps with
/// Phi_i(lambda - eps) > 0. Scans lambda downward from 0^- on a log-spaced
/// ladder to bracket the first sign change (Phi_i(0) < 0 always), then
/// bisects. Absence (no sign change before the transform dominates) is a
/// value, not an error.
inline std::optional<DispersionRoot> largest_negative_root(int i, double c, double sigma,
                                                           const ModelParams& model,
                                                           const KernelSpec& kernel) {
    if (i != 1 && i != 2) throw param_error("largest_negative_root: i must be 1 or 2");
    auto f = [&](double lam) { return detail::phi_or_neg_inf(i, c, sigma, lam, model, kernel); };

    double prev_lam = 0.0;
    double prev_val = f(0.0);  // -d - A^2 or d - A^2, both < 0
    int k = 0;
    for (; k < detail::kLadderSize; ++k) {
        const double lam = detail::ladder(k);
        const double val = f(lam);
        if (val > 0.0) break;
        if (!std::isfinite(val)) return std::nullopt;  // transform dominates already
        prev_lam = lam;
        prev_val = val;
    }
    if (k == detail::kLadderSize) return std::nullopt;

    const double pos_lam = detail::ladder(k);
    const double root = detail::bisect_root(pos_lam, prev_lam, f(pos_lam), prev_val,
                                            1e-14 * (1.0 + std::abs(pos_lam)), f);

    // Margin: half the distance to the next sign structure below the root,
    // capped so that lambda - eps stays well conditioned for the
    // super-solution construction; verified and halved until Phi > 0.
    double eps = std::min(1.0, 0.5 * std::abs(root));
    for (int k2 = k; k2 < detail::kLadderSize; ++k2) {
        const double lam = detail::ladder(k2);
        if (lam >= root) continue;
        const double val = f(lam);
        if (!(val > 0.0)) {  // second sign change (or -inf)
            const double prev = (k2 > 0) ? std::max(detail::ladder(k2 - 1), root - 1e-6) : root;
            double second = lam;
            if (std::isfinite(val))
                second = detail::bisect_root(lam, prev, val, f(prev), 1e-12 * (1.0 + std::abs(lam)), f);
            eps = std::min(eps, 0.5 * (root - second));
            break;
        }
    }
    int guard = 0;
    while (!(f(root - eps) > 0.0)) {
        eps *= 0.5;
        if (++guard > 80) return std::nullopt;  // numerically tangent root; treat as absent
    }
    return DispersionRoot{root, eps};
}

inline DispersionResult dispersion_roots(double c, double sigma, const ModelParams& model,
                                         const KernelSpec& kernel) {
    DispersionResult r;
    r.root1 = largest_negative_root(1, c, sigma, model, kernel);
    r.root2 = largest_negative_root(2, c, sigma, model, kernel);
    return r;
}

inline constexpr double kCStarCeiling = 100.0;

/// Minimal c >= 0 such that both Phi_1 and Phi_2 admit negative roots, by
/// bisection (root existence is monotone in c since -c*lambda increases with
/// c for lambda < 0). Returns +inf when no root exists at c = 100.
inline double c_star(double sigma, const ModelParams& model, const KernelSpec& kernel) {
    if (!(sigma > 0)) throw param_error("c_star: sigma must be > 0");
    auto exists = [&](double c) { return dispersion_roots(c, sigma, model, kernel).both_exist(); };
    if (!exists(kCStarCeiling)) return kInf;
    return detail::bisect_threshold(0.0, kCStarCeiling, 1e-10, exists);
}

/// Speed threshold for the integral operator's kernel: c > 2 sqrt(2A - d).
inline double mu_threshold(const ModelParams& model) {
    return 2.0 * std::sqrt(2.0 * model.A() - model.d);
}

inline MuRoots mu_roots(double c, const ModelParams& model) {
    const double q = 2.0 * model.A() - model.d;
    const double disc = c * c - 4.0 * q;
    if (!(disc > 4.0 * q * 1e-14)) {  // relative guard absorbs threshold rounding
        const bool boundary = std::abs(disc) <= 4.0 * q * 1e-8;
        throw param_error("mu_roots: need c > 2*sqrt(2A-d) = " + format_full(mu_threshold(model)) +
                          ", got c = " + format_full(c) +
                          (boundary ? " (boundary case, double root mu = " + format_full(0.5 * c) + ")" : ""));
    }
    MuRoots r;
    r.mu2 = 0.5 * (c + std::sqrt(disc));
    r.mu1 = q / r.mu2;  // product form keeps the Vieta identity tight
    return r;
}

/// Positive root of mu^2 - c mu + 1 = 0 used by the sub-solution; the smaller
/// root (slowest growth) by default, the larger behind the flag.
inline double mu_sub(double c, bool larger_root = false) {
    const double disc = c * c - 4.0;
    if (!(disc > 0))
        throw param_error("mu_sub: need c > 2, got c = " + format_full(c));
    const double s = std::sqrt(disc);
    return larger_root ? 0.5 * (c + s) : 2.0 / (c + s);
}

}  // namespace wavefront

#endif
