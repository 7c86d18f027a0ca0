#ifndef WAVEFRONT_COMMON_HPP
#define WAVEFRONT_COMMON_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavefront {

// Invalid parameters / violated preconditions. CLI maps this to exit code 2.
class param_error : public std::invalid_argument {
public:
    explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure (non-convergence, internal consistency). CLI maps this to exit code 1.
class solve_error : public std::runtime_error {
public:
    explicit solve_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One named check with its measured value and the bound it was tested against.
struct BoundCheck {
    std::string name;
    bool pass = false;
    double measured = kNaN;
    double bound = kNaN;
};

struct BoundReport {
    std::vector<BoundCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const BoundCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    void add(std::string name, bool pass, double measured, double bound) {
        checks.push_back(BoundCheck{std::move(name), pass, measured, bound});
    }
};

// Full round-trip decimal formatting (17 significant digits) for CSV cells.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

inline std::string format_full(long long x) { return std::to_string(x); }

namespace detail {

// Bisection for a monotone predicate: smallest x in [lo, hi] with pred(x) true.
// pred(hi) must be true; pred is assumed monotone (false then true).
template <class Pred>
double bisect_threshold(double lo, double hi, double xtol, Pred&& pred) {
    if (pred(lo)) return lo;
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // exhausted double resolution
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Bisection for a root of f with f(lo), f(hi) of opposite sign.
template <class F>
double bisect_root(double lo, double hi, double flo, double fhi, double xtol, F&& f) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw solve_error("bisect_root: endpoints do not bracket a sign change");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace wavefront

#endif
