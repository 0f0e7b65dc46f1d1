#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "omdiss/smallmat.hpp"
#include "support/oracles.hpp"

using namespace omdiss;
using Catch::Approx;

TEST_CASE("det: identity, vacuum block, cofactor oracle", "[smallmat][det]") {
    CHECK(det(Matrix<2>::identity()) == 1.0);
    CHECK(det(Matrix<2>::diagonal({0.5, 0.5})) == 0.25);

    // Known LU factors: L unit lower, U upper with pivots 2, -3, 0.5, 4 and no row exchange needed.
    const Matrix<4> lower{{1, 0, 0, 0}, {0.25, 1, 0, 0}, {-0.5, 0.125, 1, 0}, {0.375, -0.25, 0.5, 1}};
    const Matrix<4> upper{{2, 1, -1, 3}, {0, -3, 2, 1}, {0, 0, 0.5, -2}, {0, 0, 0, 4}};
    const Matrix<4> a = lower * upper;
    const double pivots = 2.0 * -3.0 * 0.5 * 4.0;
    CHECK(det(a) == Approx(pivots).epsilon(1e-12));
    CHECK(testing::cofactor_det(a) == Approx(pivots).epsilon(1e-12));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = testing::random_matrix<4>(rng);
        CHECK(det(m) == Approx(testing::cofactor_det(m)).epsilon(1e-10).margin(1e-13));
        const auto m3 = testing::random_matrix<3>(rng);
        CHECK(det(m3) == Approx(testing::cofactor_det(m3)).epsilon(1e-12).margin(1e-14));
    }
}

TEST_CASE("det is multiplicative", "[smallmat][det][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = testing::random_matrix<5>(rng);
        const auto b = testing::random_matrix<5>(rng);
        const double lhs = det(a * b);
        const double rhs = det(a) * det(b);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("det of a singular matrix is zero", "[smallmat][det]") {
    const Matrix<4> s{{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 0, 1}, {1, 0, 1, 0}};
    CHECK(std::abs(det(s)) < 1e-12);
}

TEST_CASE("solve_linear", "[smallmat][solve]") {
    SECTION("identity") {
        const Vector<3> b{1.5, -2.0, 7.0};
        CHECK(solve_linear(Matrix<3>::identity(), b) == b);
    }
    SECTION("diagonal") {
        const auto x = solve_linear(Matrix<2>::diagonal({2.0, 4.0}), Vector<2>{2.0, 8.0});
        CHECK(x[0] == 1.0);
        CHECK(x[1] == 2.0);
    }
    SECTION("36x36 residual bound") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 5; ++trial) {
            auto a = testing::random_matrix<36>(rng);
            for (std::size_t i = 0; i < 36; ++i) a(i, i) += 10.0;  // well conditioned
            Vector<36> b{};
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (auto& v : b) v = u(rng);
            const auto x = solve_linear(a, b);
            const auto ax = a * x;
            double res = 0.0;
            for (std::size_t i = 0; i < 36; ++i) res = std::max(res, std::abs(ax[i] - b[i]));
            CHECK(res <= 1e-10 * max_abs(b));
        }
    }
    SECTION("singular matrix throws") {
        const Matrix<3> s{{1, 2, 3}, {2, 4, 6}, {1, 1, 1}};
        CHECK_THROWS_AS(solve_linear(s, Vector<3>{1, 2, 3}), SingularMatrix);
        CHECK_THROWS_AS(solve_linear(Matrix<3>{}, Vector<3>{1, 2, 3}), SingularMatrix);
    }
}

TEST_CASE("Matrix rejects non-finite entries", "[smallmat]") {
    CHECK_THROWS_AS((Matrix<2>{{1.0, NAN}, {0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS((Matrix<2>{{1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Matrix<2>::diagonal({INFINITY, 1.0}), std::invalid_argument);
}

TEST_CASE("char_poly", "[smallmat][charpoly]") {
    SECTION("diag(-1,-2)") {
        const auto p = char_poly(Matrix<2>::diagonal({-1.0, -2.0}));
        CHECK(p.coefficients() == std::vector<double>{2.0, 3.0, 1.0});
    }
    SECTION("damped rotation") {
        const double g = 0.3, w = 1.7;
        const auto p = char_poly(Matrix<2>{{-g / 2, w}, {-w, -g / 2}});
        CHECK(p[1] == Approx(g).epsilon(1e-14));
        CHECK(p[0] == Approx(g * g / 4 + w * w).epsilon(1e-14));
        CHECK(p[2] == 1.0);
    }
    SECTION("zero 3x3") {
        const auto p = char_poly(Matrix<3>{});
        CHECK(p.coefficients() == std::vector<double>{0.0, 0.0, 0.0, 1.0});
    }
    SECTION("block-diagonal factorizes") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = testing::random_matrix<2>(rng);
            const auto b = testing::random_matrix<3>(rng);
            Matrix<5> m;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) m(i, j) = a(i, j);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) m(2 + i, 2 + j) = b(i, j);
            const auto whole = char_poly(m);
            const auto product = multiply(char_poly(a), char_poly(b));
            for (std::size_t k = 0; k <= 5; ++k) CHECK(whole[k] == Approx(product[k]).margin(1e-12));
        }
    }
    SECTION("constant term is det(-M)") {
        std::mt19937_64 rng(9);
        const auto m = testing::random_matrix<6>(rng);
        CHECK(char_poly(m)[0] == Approx(testing::cofactor_det(-m)).epsilon(1e-10));
    }
}

TEST_CASE("routh_hurwitz_stable examples", "[smallmat][routh]") {
    CHECK(routh_hurwitz_stable(PolynomialCoeffs({2.0, 3.0, 1.0})));
    CHECK_FALSE(routh_hurwitz_stable(PolynomialCoeffs({1.0, -1.0, 1.0})));
    CHECK(routh_hurwitz_stable(PolynomialCoeffs({0.5, 1.0})));
    CHECK_FALSE(routh_hurwitz_stable(PolynomialCoeffs({-0.5, 1.0})));
    // s^2 + 1: roots on the axis, vanishing row
    CHECK_FALSE(routh_hurwitz_stable(PolynomialCoeffs({1.0, 0.0, 1.0})));
    // (s+1)(s^2+s+1)(s^2+2s+5)(s+3)
    const auto p = multiply(multiply(PolynomialCoeffs({1.0, 1.0}), PolynomialCoeffs({1.0, 1.0, 1.0})),
                            multiply(PolynomialCoeffs({5.0, 2.0, 1.0}), PolynomialCoeffs({3.0, 1.0})));
    CHECK(routh_hurwitz_stable(p));
    // zero first-column entry met mid-table: s^4 + s^3 + 2s^2 + 2s + 3 (two RHP roots)
    CHECK_FALSE(routh_hurwitz_stable(PolynomialCoeffs({3.0, 2.0, 2.0, 1.0, 1.0})));
}

namespace {

/// M = S Λ S⁻¹ with Λ chosen block by block; returns M and whether Λ is stable.
std::pair<Matrix<6>, bool> random_spectrum_matrix(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Matrix<6> lambda;
        double max_re = -INFINITY, min_abs_re = INFINITY, radius = 0.0;
        for (std::size_t blk = 0; blk < 3; ++blk) {
            const std::size_t o = 2 * blk;
            const double a = u(rng);
            if (u(rng) > 0.0) {
                const double b = 2.0 * u(rng);
                lambda(o, o) = a;
                lambda(o + 1, o + 1) = a;
                lambda(o, o + 1) = b;
                lambda(o + 1, o) = -b;
                max_re = std::max(max_re, a);
                min_abs_re = std::min(min_abs_re, std::abs(a));
                radius = std::max(radius, std::hypot(a, b));
            } else {
                const double a2 = u(rng);
                lambda(o, o) = a;
                lambda(o + 1, o + 1) = a2;
                max_re = std::max({max_re, a, a2});
                min_abs_re = std::min({min_abs_re, std::abs(a), std::abs(a2)});
                radius = std::max({radius, std::abs(a), std::abs(a2)});
            }
        }
        if (min_abs_re <= 1e-6 * radius) continue;
        Matrix<6> s = Matrix<6>::identity() + 0.3 * testing::random_matrix<6>(rng);
        if (std::abs(det(s)) < 0.2) continue;
        return {s * lambda * testing::inverse(s), max_re < 0.0};
    }
}

}  // namespace

TEST_CASE("Routh-Hurwitz agrees with the eigenvalue-sign oracle on 500 random 6x6 matrices",
          "[smallmat][routh][property]") {
    std::mt19937_64 rng(2024);
    int stable_count = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto [m, truth] = random_spectrum_matrix(rng);
        const bool oracle = testing::eigen_stable(m);
        const bool routh = routh_hurwitz_stable(char_poly(m));
        REQUIRE(oracle == truth);
        CHECK(routh == oracle);
        stable_count += truth ? 1 : 0;
    }
    // both verdicts must be exercised
    CHECK(stable_count > 20);
    CHECK(stable_count < 480);
}

TEST_CASE("kron", "[smallmat][kron]") {
    CHECK(kron(Matrix<2>::identity(), Matrix<3>::identity()) == Matrix<6>::identity());
    CHECK(kron(Matrix<2>::diagonal({2.0, -3.0}), Matrix<2>::identity()) == Matrix<4>::diagonal({2.0, 2.0, -3.0, -3.0}));

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testing::random_matrix<2>(rng);
        const auto b = testing::random_matrix<3>(rng);
        Vector<2> x{u(rng), u(rng)};
        Vector<3> y{u(rng), u(rng), u(rng)};
        const auto lhs = kron(a, b) * kron(x, y);
        const auto rhs = kron(a * x, b * y);
        for (std::size_t i = 0; i < 6; ++i) CHECK(lhs[i] == Approx(rhs[i]).margin(1e-14));
    }
}
