#ifndef WAVEFRONT_IO_HPP
#define WAVEFRONT_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavefront/bvp_solver.hpp"
#include "wavefront/monotone_solver.hpp"

// Deterministic file emission: CSV cells carry full round-trip precision
// (17 significant digits); JSON embeds the resolved configuration and the
// hypothesis-validation report. No timestamps anywhere — identical inputs
// must produce identical bytes.

namespace wavefront::io {

using nlohmann::json;

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) buf_ << ',';
            buf_ << header[i];
        }
        buf_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... cells) {
        if (sizeof...(cells) != cols_) throw param_error("CsvWriter: column count mismatch");
        std::size_t i = 0;
        (write_cell(cells, i++), ...);
        buf_ << '\n';
    }

    std::string str() const { return buf_.str(); }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw param_error("cannot write " + path);
        out << buf_.str();
    }

private:
    void write_cell(double v, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << format_full(v);
    }
    void write_cell(const std::string& s, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << s;
    }
    void write_cell(const char* s, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << s;
    }
    void write_cell(long long v, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << v;
    }
    void write_cell(std::size_t v, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << v;
    }
    void write_cell(int v, std::size_t i) {
        if (i) buf_ << ',';
        buf_ << v;
    }

    std::size_t cols_;
    std::ostringstream buf_;
};

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw param_error("cannot write " + path);
    out << text;
}

inline std::string profile_csv(const GridProfile& profile, const GridProfile& residual) {
    CsvWriter csv({"xi", "omega", "residual"});
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double x = profile.x(i);
        double r = kNaN;
        if (residual.size() > 0) {
            const double t = (x - residual.x0) / residual.h;
            const auto k = static_cast<std::ptrdiff_t>(std::llround(t));
            if (std::abs(t - static_cast<double>(k)) < 1e-6 && k >= 0 &&
                k < static_cast<std::ptrdiff_t>(residual.size()))
                r = residual.values[static_cast<std::size_t>(k)];
        }
        csv.row(x, profile.values[i], r);
    }
    return csv.str();
}

/// Parses a ladder spec: either "start:stop:step" (inclusive, auto direction)
/// or a comma-separated list of values.
inline std::vector<double> parse_ladder(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start, stop, step;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0.0)
            throw param_error("bad ladder spec '" + spec + "', expected start:stop:step");
        if ((stop - start) * step < 0.0) step = -step;
        const double span = std::abs(stop - start);
        const auto n = static_cast<std::size_t>(std::floor(span / std::abs(step) + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        std::string item;
        std::istringstream ss(spec);
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            out.push_back(v);
        }
    }
    if (out.empty()) throw param_error("empty ladder spec '" + spec + "'");
    return out;
}

inline json to_json(const BoundReport& rep) {
    json arr = json::array();
    for (const auto& c : rep.checks)
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"bound", c.bound}});
    return arr;
}

inline json to_json(const ValidationReport& v) {
    return {{"pass", v.pass}, {"first_violation", v.first_violation}};
}

inline json front_result_json(const FrontSolution& f) {
    json r = {
        {"c", f.c},
        {"residual_sup", f.residual_sup},
        {"left_limit", to_string(f.left_limit)},
        {"right_limit", to_string(f.right_limit)},
        {"iterations", f.iterations},
        {"converged", f.converged},
        {"last_delta", f.last_delta},
    };
    if (f.monotone) {
        const auto& m = *f.monotone;
        r["b"] = m.b;
        r["alpha"] = m.alpha;
        r["xi_minus"] = m.xi_minus;
        r["mu"] = m.mu;
        r["lambda1"] = m.lambda1;
        r["lambda2"] = m.lambda2;
        r["eps1"] = m.eps1;
        r["eps2"] = m.eps2;
        r["mu1"] = m.mu1;
        r["mu2"] = m.mu2;
        r["mu_b"] = m.mu_b;
        r["xi_b"] = m.xi_b;
        r["fixed_point_gap"] = m.fixed_point_gap;
        r["max_chain_violation"] = m.max_chain_violation;
        r["max_squeeze_violation"] = m.max_squeeze_violation;
        r["max_slope"] = m.max_slope;
        r["no_theorem_guarantee"] = m.no_theorem_guarantee;
    }
    if (f.semiwave) {
        const auto& s = *f.semiwave;
        json ladder = json::array();
        for (const auto& cell : s.ladder)
            ladder.push_back({{"eps", cell.eps},
                              {"L", cell.L},
                              {"h", cell.h},
                              {"c", cell.c},
                              {"newton_residual", cell.newton_residual},
                              {"bounds_pass", cell.bounds_pass}});
        r["ladder"] = ladder;
        r["d0"] = s.d0;
        r["delta_c_last"] = s.delta_c_last;
        r["delta_profile_last"] = s.delta_profile_last;
        r["stabilized"] = s.stabilized;
        r["c_lower_bound"] = s.c_lower_bound;
        r["c_upper_bound"] = s.c_upper_bound;
    }
    return r;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw param_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw param_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

/// Reads a profile CSV written by profile_csv(); the residual column (when
/// requested) is aligned with the returned grid, NaN where absent.
inline GridProfile read_profile_csv(const std::string& path,
                                    std::vector<double>* residual_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw param_error("cannot read " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, us, rs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        double x, u;
        if (ls >> x >> u) {
            xs.push_back(x);
            us.push_back(u);
            double r = kNaN;
            ls >> r;
            rs.push_back(r);
        }
    }
    if (xs.size() < 2) throw param_error("profile CSV too short: " + path);
    GridProfile p;
    p.x0 = xs.front();
    p.h = xs[1] - xs[0];
    p.values = std::move(us);
    p.left_ext = p.values.front();
    p.right_ext = p.values.back();
    if (residual_out) *residual_out = std::move(rs);
    return p;
}

}  // namespace wavefront::io

#endif
