#ifndef WAVEFRONT_CORE_MODEL_HPP
#define WAVEFRONT_CORE_MODEL_HPP

#include <cmath>
#include <string>

#include "wavefront/common.hpp"

// Model parameters, equilibria and the local reaction nonlinearity
// shared by every solver: u_t = u_xx + u^2 (1 - J_sigma * u) - d u.

namespace wavefront {

/// The three constant states 0 <= a < A of s^2(1-s) - d s = 0.
struct Equilibria {
    double zero = 0.0;
    double a = 0.0;
    double A = 1.0;
    // d >= 2/9 still yields real roots (up to d < 1/4) but leaves the range
    // covered by the existence results; solvers carry this as a marker.
    bool outside_theorem_range = false;
};

/// Roots of s^2(1-s) - d s = 0, i.e. a = (1-sqrt(1-4d))/2, A = (1+sqrt(1-4d))/2.
/// Requires 0 <= d < 1/4 so the roots are real and distinct from 1/2.
inline Equilibria equilibria(double d) {
    if (!(d >= 0.0)) throw param_error("equilibria: d must be >= 0, got " + format_full(d));
    if (!(d < 0.25)) throw param_error("equilibria: d must be < 1/4 (real roots), got " + format_full(d));
    const double s = std::sqrt(1.0 - 4.0 * d);
    Equilibria eq;
    eq.zero = 0.0;
    eq.a = 0.5 * (1.0 - s);
    eq.A = 0.5 * (1.0 + s);
    eq.outside_theorem_range = (d >= 2.0 / 9.0);
    return eq;
}

/// Local reaction u^2(1-u) - d u; equals u (u-a)(A-u) by the factorization
/// through the equilibria.
inline double reaction_local(double u, double d) {
    return u * u * (1.0 - u) - d * u;
}

enum class ConnectionMode {
    a_to_A,    // monotone wavefront between the two positive states
    zero_to_A  // semi-wavefront / wavefront from extinction
};

inline const char* to_string(ConnectionMode m) {
    return m == ConnectionMode::a_to_A ? "a_to_A" : "zero_to_A";
}

struct ModelParams {
    double d = 0.0;      // mortality
    double sigma = 1.0;  // kernel scale (> 0 for nonlocal runs; 0 marks the local limit)
    double d0 = kNaN;    // normalization level for zero_to_A runs (phase condition)

    Equilibria eq;

    ModelParams() : eq(equilibria(0.0)) {}
    ModelParams(double d_, double sigma_, double d0_ = kNaN)
        : d(d_), sigma(sigma_), d0(d0_), eq(equilibria(d_)) {
        if (!(sigma_ >= 0.0)) throw param_error("ModelParams: sigma must be >= 0");
    }

    double a() const { return eq.a; }
    double A() const { return eq.A; }
};

struct ValidationReport {
    bool pass = true;
    std::string first_violation;  // empty when pass
};

/// Checks the hypothesis set of the existence result for the requested
/// connection; report-only (never throws).
inline ValidationReport validate(const ModelParams& p, ConnectionMode mode) {
    ValidationReport r;
    auto fail = [&](const char* msg) {
        if (r.pass) {
            r.pass = false;
            r.first_violation = msg;
        }
    };
    if (!(p.d >= 0.0)) fail("d>=0 required");
    if (!(p.d < 2.0 / 9.0)) fail("d<2/9 required");
    if (!(p.sigma > 0.0)) fail("sigma>0 required");
    if (mode == ConnectionMode::zero_to_A) {
        if (!(p.d > 0.0)) fail("d>0 required");
        if (!(p.d0 > 0.0)) fail("d0>0 required");
        if (!(p.d0 < p.d)) fail("d0<d required");
    }
    return r;
}

}  // namespace wavefront

#endif
