// Jacobi theta functions theta1, theta2, theta4 for complex argument and
// fixed real nome q in (0,1), plus z-derivatives, logarithmic derivatives
// and overflow-safe log|theta| evaluators.
//
// Series are the q-expansions
//
//   theta1(z,q) = 2 SUM_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)z)
//   theta2(z,q) = 2 SUM_{n>=0}        q^{(n+1/2)^2} cos((2n+1)z)
//   theta4(z,q) = 1 + 2 SUM_{n>=1} (-1)^n q^{n^2} cos(2nz)
//
// truncated when the bound on the next term drops below 1e-16 of the
// accumulated magnitude (hard cap: 64 terms).  For purely real q the lattice
// parameter tau is purely imaginary, q = exp(i pi tau), so the zero lattice
// of theta1 is { m pi + i n (-log q) : m, n integers }.
//
// Admissible imaginary parts: the largest series term is ~exp(Im(z)^2 / t)
// with t = -log q, so |Im z| must stay below sqrt(700 t) to keep the sum in
// double range (about 33 for q = e^{-pi/2}, 66 for q = e^{-2 pi}).  Inputs
// beyond that raise std::overflow_error.  The log| | evaluators reduce the
// argument by quasi-periodicity first and have no such restriction.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kleinvort {

inline constexpr double kPi = std::numbers::pi;

using complex = std::complex<double>;

/// Thrown when a logarithmic derivative is evaluated too close to a zero of
/// the theta function (within kDeltaZero of the zero lattice).
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Proximity guard radius for the zero lattice of theta1.
inline constexpr double kDeltaZero = 1e-9;

/// Theta-function parameter q, restricted to (0, 1).
struct Nome {
    double q;
    double log_q; // ln q < 0;  -log_q is the vertical spacing of theta1 zeros

    explicit Nome(double q_) : q(q_), log_q(std::log(q_)) {
        if (!(q_ > 0.0) || !(q_ < 1.0))
            throw std::domain_error("Nome: q must lie in (0, 1), got " + std::to_string(q_));
    }

    /// Vertical period of the zero lattice, pi * Im(tau) = -ln q.
    double lattice_im() const { return -log_q; }

    /// Largest |Im z| the plain series supports without overflow.
    double im_bound() const { return std::sqrt(700.0 * -log_q); }
};

/// Nome of the theta1/theta2 terms of the Klein-bottle energy, e^{-pi/2}.
inline const Nome kNomeHalfPi{std::exp(-kPi / 2)};
/// Nome of the vertically-summed torus form and the theta4 terms, e^{-2 pi}.
inline const Nome kNomeTwoPi{std::exp(-2 * kPi)};

namespace detail {

inline constexpr int kThetaMaxTerms = 64;
inline constexpr double kThetaRelTail = 1e-16;

inline void check_im(const complex& z, const Nome& q) {
    if (std::abs(z.imag()) > q.im_bound())
        throw std::overflow_error("theta series: |Im z| = " + std::to_string(std::abs(z.imag())) +
                                  " exceeds admissible bound " + std::to_string(q.im_bound()));
}

// Half-integer-indexed series 2 SUM c_n q^{(n+1/2)^2} f((2n+1)z) shared by
// theta1, theta2 and their derivatives.  `sign` alternates for theta1-type
// sums, `weight` supplies the (2n+1) factor of the derivatives.
template <typename Term>
complex half_integer_sum(const complex& z, const Nome& q, Term term_fn) {
    const double ay = std::abs(z.imag());
    const double t = -q.log_q;
    const double peak = ay / t; // index of the largest term
    complex acc = 0.0;
    double mag = 0.0;
    for (int n = 0; n < kThetaMaxTerms; ++n) {
        const double b = std::exp(q.log_q * (n + 0.5) * (n + 0.5));
        const complex term = term_fn(n, b);
        acc += term;
        mag += std::abs(term);
        const double next_bound =
            2.0 * std::exp(q.log_q * (n + 1.5) * (n + 1.5) + (2.0 * n + 3.0) * ay) * (2.0 * n + 3.0);
        if (n + 1 > peak && next_bound <= kThetaRelTail * mag) break;
    }
    return acc;
}

} // namespace detail

inline complex theta1(const complex& z, const Nome& q) {
    detail::check_im(z, q);
    return detail::half_integer_sum(z, q, [&](int n, double b) {
        const complex s = 2.0 * b * std::sin((2.0 * n + 1.0) * z);
        return (n % 2) ? -s : s;
    });
}

inline complex theta2(const complex& z, const Nome& q) {
    detail::check_im(z, q);
    return detail::half_integer_sum(z, q, [&](int n, double b) {
        return 2.0 * b * std::cos((2.0 * n + 1.0) * z);
    });
}

/// d theta1 / dz, term-wise differentiated series.
inline complex theta1_prime(const complex& z, const Nome& q) {
    detail::check_im(z, q);
    return detail::half_integer_sum(z, q, [&](int n, double b) {
        const complex s = 2.0 * b * (2.0 * n + 1.0) * std::cos((2.0 * n + 1.0) * z);
        return (n % 2) ? -s : s;
    });
}

/// d theta2 / dz.
inline complex theta2_prime(const complex& z, const Nome& q) {
    detail::check_im(z, q);
    return detail::half_integer_sum(z, q, [&](int n, double b) {
        return -2.0 * b * (2.0 * n + 1.0) * std::sin((2.0 * n + 1.0) * z);
    });
}

inline complex theta4(const complex& z, const Nome& q) {
    detail::check_im(z, q);
    const double ay = std::abs(z.imag());
    const double peak = ay / -q.log_q;
    complex acc = 1.0;
    double mag = 1.0;
    for (int n = 1; n < detail::kThetaMaxTerms; ++n) {
        const double b = std::exp(q.log_q * n * n);
        complex term = 2.0 * b * std::cos(2.0 * n * z);
        if (n % 2) term = -term;
        acc += term;
        mag += std::abs(term);
        const double next_bound = 2.0 * std::exp(q.log_q * (n + 1.0) * (n + 1.0) + 2.0 * (n + 1.0) * ay);
        if (n > peak && next_bound <= detail::kThetaRelTail * mag) break;
    }
    return acc;
}

namespace detail {

// Distance from z to the zero lattice of theta1, { m pi + i n t }.
inline double theta1_zero_distance(const complex& z, const Nome& q) {
    const double dx = std::remainder(z.real(), kPi);
    const double dy = std::remainder(z.imag(), q.lattice_im());
    return std::hypot(dx, dy);
}

// Reduce z into the cell |Re| <= pi/2, |Im| <= t/2 around the origin.
// Records the vertical shift count n, since theta1 picks up the factor
// (-1)^n q^{-n^2} e^{-2 i n z0} under z -> z0 + i n t.
struct ReducedArg {
    complex z0;
    long n;
};

inline ReducedArg reduce_theta1_arg(const complex& z, const Nome& q) {
    const double t = q.lattice_im();
    const long m = std::lround(z.real() / kPi);
    const long n = std::lround(z.imag() / t);
    return {complex(z.real() - m * kPi, z.imag() - n * t), n};
}

} // namespace detail

/// log |theta1(z, q)|, valid for arbitrary Im z.  Reduces the argument by
/// the quasi-periodicity theta1(z + i n t) = (-1)^n q^{-n^2} e^{-2inz} theta1(z)
/// before summing, so no overflow can occur.  Returns -inf at lattice zeros.
inline double log_abs_theta1(const complex& z, const Nome& q) {
    const auto [z0, n] = detail::reduce_theta1_arg(z, q);
    const double t = q.lattice_im();
    return std::log(std::abs(theta1(z0, q))) + double(n) * n * t + 2.0 * n * z0.imag();
}

inline double log_abs_theta2(const complex& z, const Nome& q) {
    return log_abs_theta1(z + kPi / 2, q);
}

/// theta1'(z)/theta1(z) via the cotangent expansion
///   cot z + 4 SUM_{n>=1} q^{2n} sin(2z) / (q^{4n} - 2 q^{2n} cos(2z) + 1),
/// with the argument reduced into the fundamental cell first; each vertical
/// lattice shift contributes -2i.  Rejects z within kDeltaZero of a zero.
inline complex log_deriv_theta1(const complex& z, const Nome& q) {
    if (detail::theta1_zero_distance(z, q) < kDeltaZero)
        throw pole_error("log_deriv_theta1: argument within 1e-9 of a theta1 zero");
    const auto [z0, n] = detail::reduce_theta1_arg(z, q);
    const complex two_z = 2.0 * z0;
    const complex sin2z = std::sin(two_z);
    const complex cos2z = std::cos(two_z);
    complex acc = std::cos(z0) / std::sin(z0);
    for (int k = 1; k < detail::kThetaMaxTerms; ++k) {
        const double q2k = std::exp(2.0 * k * q.log_q);
        const complex term = 4.0 * q2k * sin2z / (q2k * q2k - 2.0 * q2k * cos2z + 1.0);
        acc += term;
        if (std::abs(term) <= detail::kThetaRelTail * (1.0 + std::abs(acc))) break;
    }
    return acc - complex(0.0, 2.0 * n);
}

/// theta2'(z)/theta2(z) = theta1'(z + pi/2)/theta1(z + pi/2).
inline complex log_deriv_theta2(const complex& z, const Nome& q) {
    return log_deriv_theta1(z + kPi / 2, q);
}

} // namespace kleinvort
