#pragma once

// Self-contained complex arithmetic kernel for the two- and three-level
// solvers: fixed-size complex vectors/matrices, principal-branch square
// root, central finite differences and composite Simpson quadrature.
// Everything here is a pure function of its inputs.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace nhberry::numerics {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};

// ---------------------------------------------------------------------------
// Fixed-size complex vector / matrix (row-major)
// ---------------------------------------------------------------------------

template <std::size_t N>
struct CVec {
    std::array<Complex, N> v{};

    Complex& operator[](std::size_t i) { return v[i]; }
    const Complex& operator[](std::size_t i) const { return v[i]; }
    static constexpr std::size_t size() { return N; }

    CVec& operator+=(const CVec& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    CVec& operator-=(const CVec& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
        return *this;
    }
    CVec& operator*=(Complex s) {
        for (auto& x : v) x *= s;
        return *this;
    }
};

template <std::size_t N>
struct CMat {
    std::array<Complex, N * N> m{};

    Complex& operator()(std::size_t r, std::size_t c) { return m[r * N + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return m[r * N + c]; }
    static constexpr std::size_t dim() { return N; }

    CMat& operator+=(const CMat& o) {
        for (std::size_t i = 0; i < N * N; ++i) m[i] += o.m[i];
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        for (std::size_t i = 0; i < N * N; ++i) m[i] -= o.m[i];
        return *this;
    }
    CMat& operator*=(Complex s) {
        for (auto& x : m) x *= s;
        return *this;
    }

    static CMat identity() {
        CMat r;
        for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
        return r;
    }
};

using CVec2 = CVec<2>;
using CVec3 = CVec<3>;
using CMat2 = CMat<2>;
using CMat3 = CMat<3>;

template <std::size_t N>
inline CVec<N> operator+(CVec<N> a, const CVec<N>& b) { return a += b; }
template <std::size_t N>
inline CVec<N> operator-(CVec<N> a, const CVec<N>& b) { return a -= b; }
template <std::size_t N>
inline CVec<N> operator*(Complex s, CVec<N> a) { return a *= s; }
template <std::size_t N>
inline CVec<N> operator*(double s, CVec<N> a) { return a *= Complex{s, 0.0}; }

template <std::size_t N>
inline CMat<N> operator+(CMat<N> a, const CMat<N>& b) { return a += b; }
template <std::size_t N>
inline CMat<N> operator-(CMat<N> a, const CMat<N>& b) { return a -= b; }
template <std::size_t N>
inline CMat<N> operator*(Complex s, CMat<N> a) { return a *= s; }
template <std::size_t N>
inline CMat<N> operator*(double s, CMat<N> a) { return a *= Complex{s, 0.0}; }
template <std::size_t N>
inline CMat<N> operator*(CMat<N> a, Complex s) { return a *= s; }
template <std::size_t N>
inline CVec<N> operator*(CVec<N> a, Complex s) { return a *= s; }

template <std::size_t N>
inline CVec<N> operator*(const CMat<N>& a, const CVec<N>& x) {
    CVec<N> y;
    for (std::size_t r = 0; r < N; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < N; ++c) acc += a(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

template <std::size_t N>
inline CMat<N> operator*(const CMat<N>& a, const CMat<N>& b) {
    CMat<N> y;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < N; ++k) acc += a(r, k) * b(k, c);
            y(r, c) = acc;
        }
    return y;
}

// Hermitian inner product <a|b> = sum conj(a_i) b_i.
template <std::size_t N>
inline Complex inner(const CVec<N>& a, const CVec<N>& b) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

// Bilinear contraction sum_i a_i b_i (no conjugation). Used for left
// bras stored by their row components.
template <std::size_t N>
inline Complex bilinear(const CVec<N>& a, const CVec<N>& b) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += a[i] * b[i];
    return acc;
}

template <std::size_t N>
inline double norm_sq(const CVec<N>& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += std::norm(a[i]);
    return acc;
}

// |ket><bra_row| as a matrix; bra given by its row components.
template <std::size_t N>
inline CMat<N> outer(const CVec<N>& ket, const CVec<N>& bra_row) {
    CMat<N> y;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) y(r, c) = ket[r] * bra_row[c];
    return y;
}

template <std::size_t N>
inline CMat<N> dagger(const CMat<N>& a) {
    CMat<N> y;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) y(r, c) = std::conj(a(c, r));
    return y;
}

template <std::size_t N>
inline Complex trace(const CMat<N>& a) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += a(i, i);
    return acc;
}

template <std::size_t N>
inline double max_abs(const CMat<N>& a) {
    double m = 0.0;
    for (const auto& x : a.m) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------------------
// Scalar kernels
// ---------------------------------------------------------------------------

// Principal-branch complex square root: Re(w) >= 0, and on the cut
// (negative real axis) the value with Im(w) >= 0 is returned.
inline Complex principal_sqrt(Complex z) {
    // std::sqrt already implements the principal branch; canonicalize a
    // signed-zero imaginary part so the cut value has Im >= 0.
    if (z.imag() == 0.0) z = Complex{z.real(), +0.0};
    return std::sqrt(z);
}

// Symmetric difference quotient (f(x+h) - f(x-h)) / 2h, error O(h^2).
template <typename F>
inline Complex central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Composite Simpson rule over n even subintervals, error O((b-a)^5 / n^4).
template <typename F>
inline Complex simpson(F&& f, double a, double b, int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("simpson: n must be even and >= 2");
    const double h = (b - a) / n;
    Complex odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + h * i);
    for (int i = 2; i < n; i += 2) even += f(a + h * i);
    return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace nhberry::numerics
