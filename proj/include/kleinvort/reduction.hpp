// The two-vortex system reduced by the horizontal S^1 symmetry.
//
// With C = G1 y1 + G2 y2 held fixed and y2 eliminated, the Hamiltonian is a
// function of s = x1 - x2 in (-pi, pi] and y1 on the cylinder cover (y1
// unbounded; every energy term is pi-periodic in each y, so feeding the
// unreduced value is legal).  Its singularities are collisions of covering
// copies and sit on the lines s = 0 and s = +-pi:
//
//   s = 0:     y1 = (pi k G2 + C)/(G1 + G2)   (direct copy, y1 - k pi = y2)
//   s = +-pi:  y1 = (pi k G2 - C)/(G2 - G1)   (mu-image,    y1 - k pi = -y2)
//
// Critical points are confined to the same lines (numerically supported
// claim, encoded here as a falsifiable scan).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dynamics.hpp"
#include "hamiltonian.hpp"
#include "state.hpp"

namespace kleinvort {

/// Radius of the masked neighborhoods around singular points in (s, y1).
inline constexpr double kSingularMask = 5e-3;

struct degenerate_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ReducedParams {
    double gamma1;
    double gamma2;
    double c;

    ReducedParams(double g1, double g2, double c_) : gamma1(g1), gamma2(g2), c(c_) {
        if (gamma2 == 0.0) throw degenerate_error("ReducedParams: gamma2 must be nonzero");
    }

    double y2_of(double y1) const { return (c - gamma1 * y1) / gamma2; }
};

struct ReducedPoint {
    double s;  // x1 - x2, reduced into (-pi, pi]
    double y1;
};

inline double wrap_s(double s) {
    double r = std::remainder(s, 2 * kPi);
    if (r <= -kPi) r = kPi;
    return r;
}

namespace detail {

inline std::array<Vortex, 2> reduced_config(const ReducedPoint& p, const ReducedParams& prm) {
    return {Vortex{p.s, p.y1, prm.gamma1}, Vortex{0.0, prm.y2_of(p.y1), prm.gamma2}};
}

} // namespace detail

/// ham_klein at x1 = s, x2 = 0, with y2 eliminated through C.
inline double reduced_ham(const ReducedPoint& p, const ReducedParams& prm) {
    const auto vs = detail::reduced_config(p, prm);
    const auto sep = pair_separation(vs[0], vs[1]);
    if (sep.min() < kDeltaColl)
        throw collision_error(0, 1, sep.image < sep.direct, sep.min());
    return ham_klein_raw(vs);
}

/// Analytic gradient (d/ds, d/dy1) of reduced_ham; dH/dy = 2 Im dH/dzbar and
/// the chain rule carries dy2/dy1 = -G1/G2.
inline std::array<double, 2> reduced_ham_gradient(const ReducedPoint& p, const ReducedParams& prm) {
    const auto vs = detail::reduced_config(p, prm);
    const complex d1 = dham_dzbar_raw(vs, 0);
    const complex d2 = dham_dzbar_raw(vs, 1);
    return {2.0 * d1.real(), 2.0 * d1.imag() - prm.gamma1 / prm.gamma2 * 2.0 * d2.imag()};
}

// ---------------------------------------------------------------------------
// Singular points.

struct SingularPoint {
    ReducedPoint pt;
    int k;
    bool image; // true for the s = +-pi (mu-image) family
};

struct SingularFamilies {
    std::vector<SingularPoint> on_zero; // s = 0, direct-copy collisions
    std::vector<SingularPoint> on_pi;   // s = pi, mu-image collisions
};

/// Closed-form singular families for k in [k_min, k_max].  When G1 = G2 the
/// mu-image family recedes to infinity and on_pi is left empty; requesting it
/// explicitly through mirror_singularities throws instead.
inline SingularFamilies singular_points(const ReducedParams& prm, int k_min, int k_max) {
    if (prm.gamma1 + prm.gamma2 == 0.0)
        throw degenerate_error("singular_points: G1 + G2 = 0 degenerates the direct family");
    SingularFamilies out;
    for (int k = k_min; k <= k_max; ++k)
        out.on_zero.push_back({{0.0, (kPi * k * prm.gamma2 + prm.c) / (prm.gamma1 + prm.gamma2)}, k, false});
    if (prm.gamma2 != prm.gamma1)
        for (int k = k_min; k <= k_max; ++k)
            out.on_pi.push_back({{kPi, (kPi * k * prm.gamma2 - prm.c) / (prm.gamma2 - prm.gamma1)}, k, true});
    return out;
}

/// The s = +-pi family alone; degenerate denominator G2 - G1 is an error here.
inline std::vector<SingularPoint> mirror_singularities(const ReducedParams& prm, int k_min, int k_max) {
    if (prm.gamma2 == prm.gamma1)
        throw degenerate_error("mirror_singularities: G1 = G2 sends the family to infinity");
    std::vector<SingularPoint> out;
    for (int k = k_min; k <= k_max; ++k)
        out.push_back({{kPi, (kPi * k * prm.gamma2 - prm.c) / (prm.gamma2 - prm.gamma1)}, k, true});
    return out;
}

// ---------------------------------------------------------------------------
// Y1 zero-scan.

/// Samples of Y1(s) = Re(dH/dzbar_1 per unit strength with G1 = 0): the
/// vertical-velocity profile a probe at (s, y1) feels from a vortex of
/// strength gamma2 at (0, y2).  Grid points near a copy collision are flagged.
struct Y1Scan {
    std::vector<double> s;
    std::vector<double> value;
    std::vector<std::uint8_t> flagged;
    std::vector<std::pair<double, double>> brackets; // sign-change intervals (cyclic)
};

inline Y1Scan scan_Y1(double y1, double y2, double gamma2, int n_points) {
    if (y1 == y2) throw std::invalid_argument("scan_Y1: requires y1 != y2");
    if (n_points < 64) throw std::invalid_argument("scan_Y1: need at least 64 points");
    Y1Scan out;
    out.s.reserve(n_points);
    out.value.reserve(n_points);
    const complex z2{0.0, y2};
    const Vortex v2{0.0, y2, gamma2};
    for (int i = 0; i < n_points; ++i) {
        const double s = -kPi + 2 * kPi * (i + 0.5) / n_points; // midpoints avoid the exact zeros
        const complex z1{s, y1};
        out.s.push_back(s);
        out.value.push_back((gamma2 * klein_pair_dzbar(z1, z2)).real());
        out.flagged.push_back(pair_separation(Vortex{s, y1, 0.0}, v2).min() < kSingularMask ? 1 : 0);
    }
    for (int i = 0; i < n_points; ++i) {
        const int j = (i + 1) % n_points;
        if (out.value[i] * out.value[j] < 0.0)
            out.brackets.emplace_back(out.s[i], out.s[j] + (j == 0 ? 2 * kPi : 0.0));
    }
    return out;
}

/// Extremum census of a scan over the full period, split by nearest zero line
/// (|s| < pi/2 versus the rest).  The three qualitative profile shapes are
/// told apart by these counts.
struct ExtremumCounts {
    int total = 0;
    int near_zero = 0;
    int near_pi = 0;
};

inline ExtremumCounts count_extrema(const Y1Scan& scan) {
    ExtremumCounts out;
    const int n = int(scan.value.size());
    for (int i = 0; i < n; ++i) {
        const double a = scan.value[(i + n - 1) % n], b = scan.value[i], c = scan.value[(i + 1) % n];
        if ((b > a && b > c) || (b < a && b < c)) {
            ++out.total;
            (std::abs(scan.s[i]) < kPi / 2 ? out.near_zero : out.near_pi)++;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Critical points on the lines s = 0, pi.

enum class CriticalKind { minimum, maximum, saddle };

struct CriticalPoint {
    ReducedPoint pt;
    CriticalKind kind;
    double value;
    double grad_norm; // full 2-D gradient at the point
};

namespace detail {

inline const char* kind_name(CriticalKind k) {
    switch (k) {
        case CriticalKind::minimum: return "minimum";
        case CriticalKind::maximum: return "maximum";
        default: return "saddle";
    }
}

inline CriticalKind classify(const ReducedPoint& p, const ReducedParams& prm) {
    const double h = 1e-4;
    auto f = [&](double s, double y) { return reduced_ham({s, y}, prm); };
    const double f0 = f(p.s, p.y1);
    const double fss = (f(p.s + h, p.y1) - 2 * f0 + f(p.s - h, p.y1)) / (h * h);
    const double fyy = (f(p.s, p.y1 + h) - 2 * f0 + f(p.s, p.y1 - h)) / (h * h);
    const double fsy = (f(p.s + h, p.y1 + h) - f(p.s + h, p.y1 - h) - f(p.s - h, p.y1 + h) +
                        f(p.s - h, p.y1 - h)) /
                       (4 * h * h);
    const double det = fss * fyy - fsy * fsy;
    if (det < 0) return CriticalKind::saddle;
    return (fss + fyy > 0) ? CriticalKind::minimum : CriticalKind::maximum;
}

} // namespace detail

/// 1-D search for zeros of d(reduced_ham)/dy1 along s = 0 and s = pi inside
/// [y_lo, y_hi], excluding kSingularMask neighborhoods of singular points;
/// bisection on bracketed sign changes over a 2048-point sampling.
inline std::vector<CriticalPoint> critical_points_on_lines(const ReducedParams& prm, double y_lo,
                                                           double y_hi) {
    if (!(y_hi > y_lo)) throw std::invalid_argument("critical_points_on_lines: empty window");
    constexpr int n_samples = 2048;
    std::vector<CriticalPoint> out;

    const int k_span = int(std::ceil((std::abs(y_lo) + std::abs(y_hi) + 1.0) *
                                     (std::abs(prm.gamma1) + std::abs(prm.gamma2)) /
                                     (kPi * std::abs(prm.gamma2)))) + 2;
    const auto fams = singular_points(prm, -k_span, k_span);

    for (const double line : {0.0, kPi}) {
        const auto& family = (line == 0.0) ? fams.on_zero : fams.on_pi;
        auto excluded = [&](double y) {
            for (const auto& sp : family)
                if (std::abs(y - sp.pt.y1) < kSingularMask) return true;
            return false;
        };
        auto g = [&](double y) { return reduced_ham_gradient({line, y}, prm)[1]; };

        double prev_y = 0.0, prev_g = 0.0;
        bool have_prev = false;
        for (int i = 0; i < n_samples; ++i) {
            const double yv = y_lo + (y_hi - y_lo) * i / (n_samples - 1);
            if (excluded(yv)) {
                have_prev = false;
                continue;
            }
            double gv;
            try {
                gv = g(yv);
            } catch (const pole_error&) {
                // degenerate parameter sets can make a whole line singular
                // (G1 = G2 with C = 0 puts every s = pi point on a mu-image)
                have_prev = false;
                continue;
            }
            if (have_prev && prev_g * gv < 0.0) {
                double a = prev_y, b = yv, ga = prev_g;
                for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double gm = g(mid);
                    if (ga * gm <= 0.0)
                        b = mid;
                    else {
                        a = mid;
                        ga = gm;
                    }
                }
                const ReducedPoint p{line, 0.5 * (a + b)};
                const auto grad = reduced_ham_gradient(p, prm);
                out.push_back({p, detail::classify(p, prm), reduced_ham(p, prm),
                               std::hypot(grad[0], grad[1])});
            }
            prev_y = yv;
            prev_g = gv;
            have_prev = true;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Level-set grid.

struct LevelSetGrid {
    std::vector<double> s_coords;
    std::vector<double> y_coords;
    std::vector<double> value;         // row-major, value[iy * ns + is]
    std::vector<std::uint8_t> masked;  // cells inside kSingularMask of a singular point
    std::size_t ns = 0;
    std::size_t ny = 0;

    double at(std::size_t iy, std::size_t is) const { return value[iy * ns + is]; }
    bool is_masked(std::size_t iy, std::size_t is) const { return masked[iy * ns + is] != 0; }
};

/// reduced_ham sampled on [s_lo, s_hi] x [y_lo, y_hi] (endpoints included),
/// with cells within kSingularMask of a singular point masked to NaN.
inline LevelSetGrid level_set_grid(const ReducedParams& prm, double s_lo, double s_hi, double y_lo,
                                   double y_hi, std::size_t ns, std::size_t ny) {
    if (ns < 2 || ny < 2 || !(s_hi > s_lo) || !(y_hi > y_lo))
        throw std::invalid_argument("level_set_grid: invalid ranges");
    LevelSetGrid grid;
    grid.ns = ns;
    grid.ny = ny;
    grid.s_coords.resize(ns);
    grid.y_coords.resize(ny);
    for (std::size_t i = 0; i < ns; ++i) grid.s_coords[i] = s_lo + (s_hi - s_lo) * double(i) / double(ns - 1);
    for (std::size_t j = 0; j < ny; ++j) grid.y_coords[j] = y_lo + (y_hi - y_lo) * double(j) / double(ny - 1);

    const int k_span = int(std::ceil((std::abs(y_lo) + std::abs(y_hi) + 1.0) *
                                     (std::abs(prm.gamma1) + std::abs(prm.gamma2)) /
                                     (kPi * std::abs(prm.gamma2)))) + 2;
    const auto fams = singular_points(prm, -k_span, k_span);
    std::vector<SingularPoint> all = fams.on_zero;
    all.insert(all.end(), fams.on_pi.begin(), fams.on_pi.end());

    grid.value.assign(ns * ny, 0.0);
    grid.masked.assign(ns * ny, 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < ns; ++i) {
            const double s = grid.s_coords[i], yv = grid.y_coords[j];
            bool mask = false;
            for (const auto& sp : all)
                if (std::hypot(wrap_centered(s - sp.pt.s, 2 * kPi), yv - sp.pt.y1) < kSingularMask) {
                    mask = true;
                    break;
                }
            grid.masked[j * ns + i] = mask ? 1 : 0;
            grid.value[j * ns + i] = mask ? nan : reduced_ham({s, yv}, prm);
        }
    return grid;
}

} // namespace kleinvort
