#pragma once

/**
 * @file smallmat.hpp
 * @brief Dense real linear algebra on fixed-size square matrices (2x2 .. 36x36).
 *
 * Everything here is a pure function on values. The upper bound 36 is the
 * size of the vectorized Lyapunov operator for a 6x6 covariance matrix.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "omdiss/errors.hpp"
#include "omdiss/tolerances.hpp"

namespace omdiss {

inline constexpr std::size_t kMaxDim = 36;

template<std::size_t N>
using Vector = std::array<double, N>;

/**
 * @brief Square row-major matrix of fixed dimension N.
 *
 * Entries supplied at construction must be finite. Default construction
 * yields the zero matrix.
 */
template<std::size_t N>
class Matrix {
    static_assert(N >= 2 && N <= kMaxDim, "Matrix dimension must be in [2, 36]");

public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        if (rows.size() != N) {
            throw std::invalid_argument("Matrix: expected " + std::to_string(N) + " rows");
        }
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != N) {
                throw std::invalid_argument("Matrix: row " + std::to_string(r) + " has wrong length");
            }
            std::size_t c = 0;
            for (double v : row) {
                data_[r * N + c++] = v;
            }
            ++r;
        }
        require_finite();
    }

    static Matrix from_row_major(std::span<const double> values) {
        if (values.size() != N * N) {
            throw std::invalid_argument("Matrix::from_row_major: size mismatch");
        }
        Matrix m;
        std::copy(values.begin(), values.end(), m.data_.begin());
        m.require_finite();
        return m;
    }

    static constexpr Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) {
            m.data_[i * N + i] = 1.0;
        }
        return m;
    }

    static Matrix diagonal(const Vector<N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) {
            m.data_[i * N + i] = d[i];
        }
        m.require_finite();
        return m;
    }

    [[nodiscard]] constexpr double operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }
    constexpr double& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }

    [[nodiscard]] constexpr std::span<const double, N * N> row_major() const { return data_; }

    constexpr Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] += o.data_[i];
        return *this;
    }
    constexpr Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    constexpr Matrix& operator*=(double s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend constexpr Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend constexpr Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend constexpr Matrix operator*(Matrix a, double s) { return a *= s; }
    friend constexpr Matrix operator*(double s, Matrix a) { return a *= s; }
    friend constexpr Matrix operator-(Matrix a) { return a *= -1.0; }

    friend constexpr Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                const double aik = a.data_[i * N + k];
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < N; ++j) {
                    out.data_[i * N + j] += aik * b.data_[k * N + j];
                }
            }
        }
        return out;
    }

    friend constexpr Vector<N> operator*(const Matrix& a, const Vector<N>& x) {
        Vector<N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += a.data_[i * N + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    friend constexpr bool operator==(const Matrix&, const Matrix&) = default;

    [[nodiscard]] constexpr Matrix transposed() const {
        Matrix t;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) t.data_[j * N + i] = data_[i * N + j];
        return t;
    }

    /// (A + Aᵀ)/2
    [[nodiscard]] constexpr Matrix symmetrized() const {
        Matrix s;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                s.data_[i * N + j] = 0.5 * (data_[i * N + j] + data_[j * N + i]);
        return s;
    }

    [[nodiscard]] constexpr double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += data_[i * N + i];
        return s;
    }

    /// Largest absolute entry.
    [[nodiscard]] constexpr double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    void require_finite() const {
        if (!all_finite()) {
            throw std::invalid_argument("Matrix: entries must be finite");
        }
    }

    std::array<double, N * N> data_{};
};

template<std::size_t N>
[[nodiscard]] constexpr double max_abs(const Vector<N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Largest |a_ij - a_ji|.
template<std::size_t N>
[[nodiscard]] constexpr double asymmetry(const Matrix<N>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
    return m;
}

/// Principal submatrix on the given row/column indices.
template<std::size_t K, std::size_t N>
[[nodiscard]] constexpr Matrix<K> submatrix(const Matrix<N>& a, const std::array<std::size_t, K>& idx) {
    Matrix<K> s;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) s(i, j) = a(idx[i], idx[j]);
    return s;
}

/// Off-diagonal block a[rows, cols].
template<std::size_t K, std::size_t N>
[[nodiscard]] constexpr Matrix<K> block(const Matrix<N>& a, const std::array<std::size_t, K>& rows,
                                        const std::array<std::size_t, K>& cols) {
    Matrix<K> s;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) s(i, j) = a(rows[i], cols[j]);
    return s;
}

/// Row-major vectorization: vec(A)[i*N + j] = A(i, j).
template<std::size_t N>
[[nodiscard]] constexpr Vector<N * N> vectorize(const Matrix<N>& a) {
    Vector<N * N> v{};
    const auto src = a.row_major();
    std::copy(src.begin(), src.end(), v.begin());
    return v;
}

template<std::size_t N>
[[nodiscard]] Matrix<N> unvectorize(const Vector<N * N>& v) {
    return Matrix<N>::from_row_major(v);
}

namespace detail {

/// In-place partial-pivot LU. Returns the permutation sign, or 0 if a zero pivot was met.
template<std::size_t N>
constexpr int lu_decompose(Matrix<N>& a, std::array<std::size_t, N>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < N; ++i) perm[i] = i;
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < N; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        }
        if (best == 0.0) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < N; ++j) std::swap(a(k, j), a(p, j));
            std::swap(perm[k], perm[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < N; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (std::size_t j = k + 1; j < N; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return sign;
}

}  // namespace detail

/**
 * @brief Determinant.
 *
 * Closed-form cofactor expansion for N <= 3, otherwise the signed product of
 * partial-pivot LU pivots. Exactly singular input gives 0.
 */
template<std::size_t N>
[[nodiscard]] constexpr double det(const Matrix<N>& m) {
    if constexpr (N == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    } else if constexpr (N == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    } else {
        Matrix<N> lu = m;
        std::array<std::size_t, N> perm{};
        const int sign = detail::lu_decompose(lu, perm);
        if (sign == 0) return 0.0;
        double d = sign;
        for (std::size_t i = 0; i < N; ++i) d *= lu(i, i);
        return d;
    }
}

/**
 * @brief Solve a·x = b by Gaussian elimination with partial pivoting.
 * @throws SingularMatrix if a pivot falls below pivot_relative * max|a_ij|.
 */
template<std::size_t N>
[[nodiscard]] Vector<N> solve_linear(const Matrix<N>& a, const Vector<N>& b) {
    const double scale = a.max_abs();
    const double threshold = Tolerances::pivot_relative * scale;
    Matrix<N> m = a;
    Vector<N> x = b;
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < N; ++i) {
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                p = i;
            }
        }
        if (scale == 0.0 || best < threshold) {
            throw SingularMatrix("solve_linear: pivot " + std::to_string(best) + " below threshold at column " +
                                 std::to_string(k));
        }
        if (p != k) {
            for (std::size_t j = k; j < N; ++j) std::swap(m(k, j), m(p, j));
            std::swap(x[k], x[p]);
        }
        const double inv = 1.0 / m(k, k);
        for (std::size_t i = k + 1; i < N; ++i) {
            const double f = m(i, k) * inv;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < N; ++j) m(i, j) -= f * m(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t ii = N; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < N; ++j) s -= m(ii, j) * x[j];
        x[ii] = s / m(ii, ii);
    }
    return x;
}

/**
 * @brief Monic real polynomial c_0 + c_1 s + ... + s^n, stored ascending.
 */
class PolynomialCoeffs {
public:
    explicit PolynomialCoeffs(std::vector<double> ascending) : c_(std::move(ascending)) {
        if (c_.size() < 2) {
            throw std::invalid_argument("PolynomialCoeffs: degree must be >= 1");
        }
        if (c_.back() != 1.0) {
            throw std::invalid_argument("PolynomialCoeffs: leading coefficient must be exactly 1");
        }
        for (double v : c_) {
            if (!std::isfinite(v)) throw std::invalid_argument("PolynomialCoeffs: non-finite coefficient");
        }
    }

    [[nodiscard]] std::size_t degree() const noexcept { return c_.size() - 1; }
    [[nodiscard]] double operator[](std::size_t k) const { return c_.at(k); }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }

    [[nodiscard]] double evaluate(double s) const {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * s + c_[k];
        return acc;
    }

private:
    std::vector<double> c_;
};

/// Product of two monic polynomials.
[[nodiscard]] inline PolynomialCoeffs multiply(const PolynomialCoeffs& a, const PolynomialCoeffs& b) {
    std::vector<double> out(a.degree() + b.degree() + 1, 0.0);
    for (std::size_t i = 0; i <= a.degree(); ++i)
        for (std::size_t j = 0; j <= b.degree(); ++j) out[i + j] += a[i] * b[j];
    out.back() = 1.0;
    return PolynomialCoeffs(std::move(out));
}

/// det(sI - m) by the Faddeev-LeVerrier recursion.
template<std::size_t N>
[[nodiscard]] PolynomialCoeffs char_poly(const Matrix<N>& m) {
    static_assert(N <= 6, "char_poly is intended for n <= 6");
    std::vector<double> c(N + 1, 0.0);
    c[N] = 1.0;
    Matrix<N> mk;  // M_0 = 0
    const auto eye = Matrix<N>::identity();
    for (std::size_t k = 1; k <= N; ++k) {
        mk = m * mk + c[N - k + 1] * eye;
        c[N - k] = -(m * mk).trace() / static_cast<double>(k);
    }
    return PolynomialCoeffs(std::move(c));
}

struct RouthResult {
    bool stable = false;
    /// Smallest |first-column entry|; diagnostic only.
    double margin = 0.0;
};

/**
 * @brief Routh array test: are all roots strictly in the left half-plane?
 *
 * An exactly-zero first-column entry is replaced by routh_epsilon; a row that
 * vanishes entirely signals roots symmetric about the origin and is reported
 * unstable.
 */
[[nodiscard]] inline RouthResult routh_hurwitz(const PolynomialCoeffs& p) {
    const std::size_t n = p.degree();
    const std::size_t width = n / 2 + 1;
    // Descending coefficients a_0 = 1, a_1 = c_{n-1}, ..., a_n = c_0.
    auto desc = [&](std::size_t i) { return i <= n ? p[n - i] : 0.0; };
    std::vector<double> prev(width, 0.0), cur(width, 0.0);
    for (std::size_t j = 0; j < width; ++j) {
        prev[j] = desc(2 * j);
        cur[j] = desc(2 * j + 1);
    }
    RouthResult out;
    out.margin = std::abs(prev[0]);
    bool all_positive = prev[0] > 0.0;
    for (std::size_t row = 1; row <= n; ++row) {
        if (cur[0] == 0.0) {
            const bool row_zero = std::all_of(cur.begin(), cur.end(), [](double v) { return v == 0.0; });
            if (row_zero) {
                out.stable = false;
                out.margin = 0.0;
                return out;
            }
            cur[0] = Tolerances::routh_epsilon;
        }
        out.margin = std::min(out.margin, std::abs(cur[0]));
        all_positive = all_positive && cur[0] > 0.0;
        if (row == n) break;
        std::vector<double> next(width, 0.0);
        for (std::size_t j = 0; j + 1 < width; ++j) {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    out.stable = all_positive;
    return out;
}

[[nodiscard]] inline bool routh_hurwitz_stable(const PolynomialCoeffs& p) { return routh_hurwitz(p).stable; }

/// Kronecker product a ⊗ b.
template<std::size_t A, std::size_t B>
[[nodiscard]] constexpr Matrix<A * B> kron(const Matrix<A>& a, const Matrix<B>& b) {
    static_assert(A * B <= kMaxDim, "kron: result dimension exceeds 36");
    Matrix<A * B> out;
    for (std::size_t i = 0; i < A; ++i)
        for (std::size_t j = 0; j < A; ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < B; ++k)
                for (std::size_t l = 0; l < B; ++l) out(i * B + k, j * B + l) = aij * b(k, l);
        }
    return out;
}

/// Kronecker product of vectors, same index convention as kron.
template<std::size_t A, std::size_t B>
[[nodiscard]] constexpr Vector<A * B> kron(const Vector<A>& x, const Vector<B>& y) {
    Vector<A * B> out{};
    for (std::size_t i = 0; i < A; ++i)
        for (std::size_t k = 0; k < B; ++k) out[i * B + k] = x[i] * y[k];
    return out;
}

}  // namespace omdiss
