#include "ratchet/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ratchet/fft.hpp"
#include "ratchet/propagator.hpp"

namespace ratchet {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double wrap_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a + 0.0;  // clears negative zero
}

double wrap_pm_pi(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - kPi;
}

double circular_distance(double a, double b) { return std::fabs(wrap_pm_pi(a - b)); }

struct AnalyticParts {
    double s;
    double sbar;
    double theta1;  // vbar2(x0) + S      (band 1 eigenvector phase)
    double theta3;  // vbar2(x0) - S      (band 3)
    double theta2;  // vbar2(x0+pi/2) + Sbar
    double theta4;  // vbar2(x0+pi/2) - Sbar
    double p1;
    double p2;
};

double checked_sqrt(double radicand, const char* what) {
    if (radicand < -1e-9)
        throw SimulationError(std::string("analytic_quasienergies: negative radicand in ") + what +
                              " (" + std::to_string(radicand) + ")");
    return std::sqrt(std::max(radicand, 0.0));
}

AnalyticParts analytic_parts(double x0, double strength_P, double alpha) {
    const double vb1 = strength_P * alpha * std::sin(2.0 * x0);
    const double vb2 = strength_P * std::sin(x0);
    const double vb2s = strength_P * std::sin(x0 + kPi / 2.0);
    const double p1 = std::cos(vb1 + kPi / 4.0);
    const double p2 = std::cos(vb1 - kPi / 4.0);
    const double q1 = std::sin(2.0 * vb1) - 1.0;
    const double q2 = std::sin(2.0 * vb1) + 1.0;

    const double c2 = std::cos(vb2);
    const double c2s = std::cos(vb2s);
    // q1 = -2 p1^2 and q2 = +2 p2^2, so both radicands equal 1 - (cos * p)^2
    const double num_s = checked_sqrt(1.0 + 0.5 * c2 * c2 * q1, "S");
    const double num_sbar = checked_sqrt(1.0 - 0.5 * c2s * c2s * q2, "Sbar");

    AnalyticParts parts{};
    parts.s = std::atan2(num_s, c2 * p1);
    parts.sbar = std::atan2(num_sbar, c2s * p2);
    parts.theta1 = vb2 + parts.s;
    parts.theta3 = vb2 - parts.s;
    parts.theta2 = vb2s + parts.sbar;
    parts.theta4 = vb2s - parts.sbar;
    parts.p1 = p1;
    parts.p2 = p2;
    return parts;
}

}  // namespace

std::array<double, 4> analytic_quasienergies(double x0, double strength_P, double alpha) {
    const AnalyticParts parts = analytic_parts(x0, strength_P, alpha);
    return {kPi / 4.0 - parts.s, kPi / 4.0 - parts.sbar, kPi / 4.0 + parts.s,
            kPi / 4.0 + parts.sbar};
}

namespace {

// one eigenvector of the even (components 0,2) or odd (1,3) family
Eigen::Vector4cd family_vector(double theta, double p_num, double p_den, bool even) {
    const double den2 = 2.0 - 2.0 * p_den * std::cos(theta);
    const cplx phase = std::polar(1.0, -theta);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    const cplx a = p_num * phase;
    const cplx b = cplx{0.0, -1.0} * (1.0 - p_den * phase);
    if (even) {
        v(0) = a;
        v(2) = b;
    } else {
        v(1) = a;
        v(3) = b;
    }
    if (den2 > 1e-24) v /= std::sqrt(den2);
    v.normalize();
    return v;
}

}  // namespace

std::array<Eigen::Vector4cd, 4> analytic_eigenvectors(double x0, double strength_P, double alpha) {
    AnalyticParts parts = analytic_parts(x0, strength_P, alpha);
    // vanishing denominators (isolated degeneracies): one-sided limit in x0
    const auto degenerate = [](double theta, double p) {
        return 2.0 - 2.0 * p * std::cos(theta) <= 1e-24;
    };
    if (degenerate(parts.theta1, parts.p1) || degenerate(parts.theta3, parts.p1) ||
        degenerate(parts.theta2, parts.p2) || degenerate(parts.theta4, parts.p2))
        parts = analytic_parts(x0 + 1e-7, strength_P, alpha);

    return {family_vector(parts.theta1, parts.p2, parts.p1, true),
            family_vector(parts.theta2, parts.p1, parts.p2, false),
            family_vector(parts.theta3, parts.p2, parts.p1, true),
            family_vector(parts.theta4, parts.p1, parts.p2, false)};
}

namespace {

int fiber_dimension(const RatchetParams& params) {
    if (std::fabs(params.kappa - kPi) > 1e-9)
        throw SimulationError("no closed fiber: requires kappa = pi");
    if (std::fabs(params.eta - 0.5) < 1e-12) return 4;
    if (std::fabs(params.eta) < 1e-12) return 2;
    throw SimulationError("no closed fiber: requires eta in {0, 1/2}");
}

// circulant of one free segment on the fiber; tau = 1/2 for d = 4, 1 for d = 2
Eigen::MatrixXcd fiber_free_circulant(int d, double tau) {
    std::vector<cplx> kernel(static_cast<std::size_t>(d), cplx{0.0, 0.0});
    for (int j = 0; j < d; ++j) {
        cplx acc{0.0, 0.0};
        for (int r = 0; r < d; ++r)
            acc += std::polar(1.0, -0.5 * tau * kPi * r * r + kTwoPi * r * j / d);
        kernel[static_cast<std::size_t>(j)] = acc / static_cast<double>(d);
    }
    Eigen::MatrixXcd c(d, d);
    for (int l = 0; l < d; ++l)
        for (int lp = 0; lp < d; ++lp) c(l, lp) = kernel[static_cast<std::size_t>(((l - lp) % d + d) % d)];
    return c;
}

Eigen::MatrixXcd fiber_kick_diagonal(int d, double x0, double spacing, Potential potential,
                                     double strength_P, double alpha) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int l = 0; l < d; ++l) {
        const double x = x0 + l * spacing;
        double v = 0.0;
        switch (potential) {
            case Potential::V1: v = alpha * std::sin(2.0 * x); break;
            case Potential::V2: v = std::sin(x); break;
            case Potential::Combined: v = alpha * std::sin(2.0 * x) + std::sin(x); break;
        }
        m(l, l) = std::polar(1.0, -strength_P * v);
    }
    return m;
}

}  // namespace

FiberUnitary fiber_unitary(double x0, const RatchetParams& params) {
    params.validate();
    const int d = fiber_dimension(params);
    if (d == 2) {
        const Eigen::MatrixXcd c = fiber_free_circulant(2, 1.0);
        const Eigen::MatrixXcd kick_c =
            fiber_kick_diagonal(2, x0, kPi, Potential::Combined, params.strength_P, params.alpha);
        return FiberUnitary{x0, kick_c * c};
    }
    const Potential slot1 = params.kick_order == KickOrder::V1First ? Potential::V1 : Potential::V2;
    const Potential slot2 = params.kick_order == KickOrder::V1First ? Potential::V2 : Potential::V1;
    const Eigen::MatrixXcd c = fiber_free_circulant(4, 0.5);
    const Eigen::MatrixXcd k1 =
        fiber_kick_diagonal(4, x0, kPi / 2.0, slot1, params.strength_P, params.alpha);
    const Eigen::MatrixXcd k2 =
        fiber_kick_diagonal(4, x0, kPi / 2.0, slot2, params.strength_P, params.alpha);
    return FiberUnitary{x0, k2 * c * k1 * c};
}

namespace {

struct EigenPair2 {
    cplx lambda;
    Eigen::Vector2cd vec;
};

// closed-form eigendecomposition of a 2x2 unitary; returns an orthonormal pair
std::array<EigenPair2, 2> eig_unitary_2x2(const Eigen::Matrix2cd& m) {
    const cplx tr = m(0, 0) + m(1, 1);
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l0 = 0.5 * (tr + disc);
    cplx l1 = 0.5 * (tr - disc);

    const double off = std::abs(m(0, 1)) + std::abs(m(1, 0));
    std::array<EigenPair2, 2> out;
    if (off < 1e-14) {
        // diagonal up to roundoff (includes lambda * I): standard basis
        out[0] = {m(0, 0), Eigen::Vector2cd(1.0, 0.0)};
        out[1] = {m(1, 1), Eigen::Vector2cd(0.0, 1.0)};
        return out;
    }
    const auto vector_for = [&m](const cplx& lambda) {
        Eigen::Vector2cd a(m(0, 1), lambda - m(0, 0));
        Eigen::Vector2cd b(lambda - m(1, 1), m(1, 0));
        Eigen::Vector2cd v = a.norm() >= b.norm() ? a : b;
        v.normalize();
        return v;
    };
    out[0] = {l0 / std::abs(l0), vector_for(l0)};
    out[1] = {l1 / std::abs(l1), vector_for(l1)};
    // distinct eigenvalues of a (numerically) unitary matrix: orthogonalize the
    // pair to guard against roundoff near degeneracies
    out[1].vec -= out[0].vec * (out[0].vec.adjoint() * out[1].vec)(0, 0);
    if (out[1].vec.norm() < 0.5) {
        // near-degenerate: complete the basis instead
        Eigen::Vector2cd alt(-std::conj(out[0].vec(1)), std::conj(out[0].vec(0)));
        out[1].vec = alt;
    }
    out[1].vec.normalize();
    return out;
}

Eigen::Matrix2cd even_block(const Eigen::MatrixXcd& u) {
    Eigen::Matrix2cd b;
    b << u(0, 0), u(0, 2), u(2, 0), u(2, 2);
    return b;
}

Eigen::Matrix2cd odd_block(const Eigen::MatrixXcd& u) {
    Eigen::Matrix2cd b;
    b << u(1, 1), u(1, 3), u(3, 1), u(3, 3);
    return b;
}

double off_family_leak(const Eigen::MatrixXcd& u) {
    double leak = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if ((r + c) % 2 != 0) leak = std::max(leak, std::abs(u(r, c)));
    return leak;
}

// eigenphase pair of a 2x2 block, ordered (minus-branch, plus-branch)
// relative to the free-rotor point pi/4
std::array<double, 2> block_band_pair(const Eigen::Matrix2cd& block) {
    const auto pairs = eig_unitary_2x2(block);
    double w0 = wrap_2pi(-std::arg(pairs[0].lambda));
    double w1 = wrap_2pi(-std::arg(pairs[1].lambda));
    const auto offset = [](double w) { return wrap_2pi(w - kPi / 4.0); };
    const bool first_is_minus = offset(w0) >= kPi;
    if (offset(w0) >= kPi && offset(w1) >= kPi) {
        // both on the minus side (cannot happen for a closed fiber; keep sorted)
        if (w0 > w1) std::swap(w0, w1);
        return {w0, w1};
    }
    return first_is_minus ? std::array<double, 2>{w0, w1} : std::array<double, 2>{w1, w0};
}

}  // namespace

BandSpectrum band_scan(const RatchetParams& params, int x0_count) {
    if (x0_count < 2) throw std::invalid_argument("band_scan: need at least 2 grid points");
    const int d = fiber_dimension(params);
    const double domain = d == 4 ? kPi / 2.0 : kPi;

    BandSpectrum spectrum;
    spectrum.x0_grid.resize(static_cast<std::size_t>(x0_count));
    spectrum.bands.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(x0_count)));

    for (int i = 0; i < x0_count; ++i) {
        const double x0 = domain * static_cast<double>(i) / static_cast<double>(x0_count);
        spectrum.x0_grid[static_cast<std::size_t>(i)] = x0;
        const FiberUnitary fiber = fiber_unitary(x0, params);
        if (d == 2) {
            const auto pair = block_band_pair(fiber.matrix.topLeftCorner<2, 2>());
            spectrum.bands[0][static_cast<std::size_t>(i)] = pair[0];
            spectrum.bands[1][static_cast<std::size_t>(i)] = pair[1];
            continue;
        }
        if (off_family_leak(fiber.matrix) > 1e-10)
            throw SimulationError("band_scan: fiber does not split into sublattice families");
        const auto even_pair = block_band_pair(even_block(fiber.matrix));
        const auto odd_pair = block_band_pair(odd_block(fiber.matrix));
        spectrum.bands[0][static_cast<std::size_t>(i)] = even_pair[0];
        spectrum.bands[1][static_cast<std::size_t>(i)] = even_pair[1];
        spectrum.bands[2][static_cast<std::size_t>(i)] = odd_pair[0];
        spectrum.bands[3][static_cast<std::size_t>(i)] = odd_pair[1];
    }
    return spectrum;
}

double min_band_gap(const BandSpectrum& spectrum, int band_a, int band_b) {
    const auto a = static_cast<std::size_t>(band_a - 1);
    const auto b = static_cast<std::size_t>(band_b - 1);
    if (a >= spectrum.bands.size() || b >= spectrum.bands.size())
        throw std::invalid_argument("min_band_gap: band index out of range");
    double gap = kTwoPi;
    for (std::size_t i = 0; i < spectrum.x0_grid.size(); ++i)
        gap = std::min(gap, circular_distance(spectrum.bands[a][i], spectrum.bands[b][i]));
    return gap;
}

namespace {

double band_difference_at(const RatchetParams& params, double x0, int band_a, int band_b) {
    const FiberUnitary fiber = fiber_unitary(x0, params);
    std::array<double, 4> bands{};
    const auto even_pair = block_band_pair(even_block(fiber.matrix));
    const auto odd_pair = block_band_pair(odd_block(fiber.matrix));
    bands = {even_pair[0], even_pair[1], odd_pair[0], odd_pair[1]};
    return wrap_pm_pi(bands[static_cast<std::size_t>(band_a - 1)] -
                      bands[static_cast<std::size_t>(band_b - 1)]);
}

}  // namespace

double refined_min_band_gap(const RatchetParams& params, int band_a, int band_b,
                            int coarse_points) {
    if (fiber_dimension(params) != 4)
        throw SimulationError("refined_min_band_gap: four-band fiber required");
    if (band_a < 1 || band_a > 4 || band_b < 1 || band_b > 4 || coarse_points < 2)
        throw std::invalid_argument("refined_min_band_gap: bad band index or grid");
    const double domain = kPi / 2.0;
    double best = kTwoPi;
    double prev_x = 0.0;
    double prev_d = band_difference_at(params, 0.0, band_a, band_b);
    best = std::min(best, std::fabs(prev_d));
    for (int i = 1; i <= coarse_points; ++i) {
        const double x = domain * static_cast<double>(i) / static_cast<double>(coarse_points);
        const double diff = band_difference_at(params, x, band_a, band_b);
        best = std::min(best, std::fabs(diff));
        if ((diff < 0.0) != (prev_d < 0.0)) {
            double lo = prev_x, hi = x, flo = prev_d;
            for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = band_difference_at(params, mid, band_a, band_b);
                best = std::min(best, std::fabs(fm));
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
        }
        prev_x = x;
        prev_d = diff;
    }
    return best;
}

MomentumState reconstruct_integer_time(std::int64_t t, const RatchetParams& params,
                                       std::int64_t k_window) {
    params.validate();
    if (t < 0) throw std::invalid_argument("reconstruct_integer_time: t must be >= 0");
    if (k_window < 1) throw std::invalid_argument("reconstruct_integer_time: k_window must be >= 1");
    if (fiber_dimension(params) != 4)
        throw SimulationError("reconstruct_integer_time: requires kappa = pi, eta = 1/2");

    const auto n_grid = static_cast<std::int64_t>(
        detail::next_pow2(static_cast<std::size_t>(std::max<std::int64_t>(16, 2 * (2 * k_window + 1)))));
    const std::int64_t n_fibers = n_grid / 4;

    std::vector<cplx> grid(static_cast<std::size_t>(n_grid), cplx{0.0, 0.0});
    const double init = 1.0 / std::sqrt(static_cast<double>(n_grid));

    for (std::int64_t m = 0; m < n_fibers; ++m) {
        const double x0 = kTwoPi * static_cast<double>(m) / static_cast<double>(n_grid);
        const FiberUnitary fiber = fiber_unitary(x0, params);
        const auto even = eig_unitary_2x2(even_block(fiber.matrix));
        const auto odd = eig_unitary_2x2(odd_block(fiber.matrix));

        // initial fiber vector is uniform; evolve each family separately
        Eigen::Vector2cd v_even(init, init);  // components (l=0, l=2)
        Eigen::Vector2cd v_odd(init, init);   // components (l=1, l=3)
        Eigen::Vector2cd out_even = Eigen::Vector2cd::Zero();
        Eigen::Vector2cd out_odd = Eigen::Vector2cd::Zero();
        for (const EigenPair2& p : even) {
            const cplx factor = std::polar(1.0, std::arg(p.lambda) * static_cast<double>(t));
            out_even += factor * (p.vec.adjoint() * v_even)(0, 0) * p.vec;
        }
        for (const EigenPair2& p : odd) {
            const cplx factor = std::polar(1.0, std::arg(p.lambda) * static_cast<double>(t));
            out_odd += factor * (p.vec.adjoint() * v_odd)(0, 0) * p.vec;
        }
        grid[static_cast<std::size_t>(m)] = out_even(0);
        grid[static_cast<std::size_t>(m + 2 * n_fibers)] = out_even(1);
        grid[static_cast<std::size_t>(m + n_fibers)] = out_odd(0);
        grid[static_cast<std::size_t>(m + 3 * n_fibers)] = out_odd(1);
    }

    MomentumState state = from_position_samples(grid, -n_grid / 2, params.tail_tol);
    if (state.k_min() < -k_window || state.k_max() > k_window)
        throw SimulationError("reconstruct_integer_time: momentum window overflow");
    return state;
}

MomentumState half_period_state(const MomentumState& state_at_t, const RatchetParams& params) {
    params.validate();
    if (params.eta == 0.0) {
        MomentumState s = kick(state_at_t, Potential::Combined, -params.strength_P, params.alpha,
                               params.k_cap);
        return free_evolve(s, -1.0, params.kappa);
    }
    const Potential slot2 = params.kick_order == KickOrder::V1First ? Potential::V2 : Potential::V1;
    MomentumState s = kick(state_at_t, slot2, -params.strength_P, params.alpha, params.k_cap);
    return free_evolve(s, -(1.0 - params.eta), params.kappa);
}

}  // namespace ratchet
