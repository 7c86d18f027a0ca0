#include <doctest.h>

#include <random>

#include "wavefront/banded.hpp"

using namespace wavefront;

TEST_SUITE_BEGIN("banded");

namespace {

// dense reference solve with partial pivoting
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A[r][k]) > std::abs(A[p][k])) p = r;
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
    }
    return x;
}

}  // namespace

TEST_CASE("banded LU matches a dense solve on random banded systems") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(trial) * 2;
        const std::size_t kw = 1 + static_cast<std::size_t>(trial) % 4;
        BandedMatrix B(n, kw, kw);
        std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (std::max(i, j) - std::min(i, j) <= kw) {
                    const double v = U(gen) + (i == j ? 3.0 : 0.0);
                    B(i, j) = v;
                    D[i][j] = v;
                }
        std::vector<double> rhs(n);
        for (auto& v : rhs) v = U(gen);
        const std::vector<double> xd = dense_solve(D, rhs);
        const BandedLU lu(std::move(B));
        std::vector<double> xb = rhs;
        lu.solve(xb);
        for (std::size_t i = 0; i < n; ++i) CHECK(xb[i] == doctest::Approx(xd[i]).epsilon(1e-11));
    }
}

TEST_CASE("pivoting handles zero diagonals") {
    BandedMatrix B(3, 1, 1);
    B(0, 0) = 0.0;
    B(0, 1) = 1.0;
    B(1, 0) = 2.0;
    B(1, 1) = 1.0;
    B(1, 2) = 0.5;
    B(2, 1) = 1.0;
    B(2, 2) = 1.0;
    const BandedLU lu(std::move(B));
    std::vector<double> b = {1.0, 2.0, 3.0};
    lu.solve(b);
    // residual check against the original matrix
    CHECK(0.0 * b[0] + 1.0 * b[1] == doctest::Approx(1.0));
    CHECK(2.0 * b[0] + 1.0 * b[1] + 0.5 * b[2] == doctest::Approx(2.0));
    CHECK(1.0 * b[1] + 1.0 * b[2] == doctest::Approx(3.0));
}

TEST_CASE("singular matrix is reported") {
    BandedMatrix B(2, 1, 1);
    B(0, 0) = 1.0;
    B(0, 1) = 2.0;
    B(1, 0) = 0.5;
    B(1, 1) = 1.0;  // rank 1
    CHECK_THROWS_AS(BandedLU{std::move(B)}, solve_error);
}

TEST_SUITE_END();
