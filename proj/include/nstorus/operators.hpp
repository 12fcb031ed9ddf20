#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nstorus/convolution.hpp"
#include "nstorus/spectral_field.hpp"
#include "nstorus/time_grid.hpp"

namespace nstorus {

/// One of the Fourier multiplier operators used by the solver, acting
/// mode-wise:
///   partial(j)         i k_j
///   inverse_laplacian  -1 / |k|_e^2
///   degree             |k|_e
///   semigroup_s(t)     exp(-|k|_e^2 t)
///   semigroup_r(t)     exp(-|k|_e t / 2)
///   semigroup_h(t)     exp(-|k|_e t (|k|_e - 1/2))
/// Semigroup times must be nonnegative. Where the continuous problem applies
/// S^{nu t}, callers pass the product nu*t as the time argument.
struct MultiplierSpec {
    enum class Kind { partial, inverse_laplacian, degree, semigroup_s, semigroup_r, semigroup_h };

    Kind kind;
    int axis = 0;    // for partial: 0,1,2
    double t = 0.0;  // for semigroups

    static MultiplierSpec partial(int axis) { return {Kind::partial, axis, 0.0}; }
    static MultiplierSpec inverse_laplacian() { return {Kind::inverse_laplacian, 0, 0.0}; }
    static MultiplierSpec degree() { return {Kind::degree, 0, 0.0}; }
    static MultiplierSpec semigroup_s(double t) { return {Kind::semigroup_s, 0, t}; }
    static MultiplierSpec semigroup_r(double t) { return {Kind::semigroup_r, 0, t}; }
    static MultiplierSpec semigroup_h(double t) { return {Kind::semigroup_h, 0, t}; }
};

/// Per-mode factor of a multiplier; complex because partial(j) is i*k_j.
Complex multiplier_factor(const MultiplierSpec& spec, const WaveVector& k);

SpectralScalarField apply_multiplier(const MultiplierSpec& spec, const SpectralScalarField& f);
SpectralVectorField apply_multiplier(const MultiplierSpec& spec, const SpectralVectorField& v);

/// Pressure-elimination tensor A^l_m = Delta^{-1} d_l d_m - delta_lm, i.e.
/// the mode-wise factor k_l k_m / |k|_e^2 - delta_lm. Indices are 1-based.
double pressure_tensor_factor(int l_index, int m_index, const WaveVector& k);
SpectralScalarField apply_A(int l_index, int m_index, const SpectralScalarField& f);

/// N^k(v) = sum_{j,l} A^k_l d_j (v^j v^l): the divergence-free quadratic
/// term of the velocity equation. Output is solenoidal up to rounding.
SpectralVectorField nonlinear_term(const SpectralVectorField& v, const Convolver& conv);
SpectralVectorField nonlinear_term(const SpectralVectorField& v);  // direct-path convenience

/// p = -Delta^{-1} d_i d_j (v^i v^j), with the k = 0 mode dropped.
SpectralScalarField pressure(const SpectralVectorField& v, const Convolver& conv);
SpectralScalarField pressure(const SpectralVectorField& v);

/// Quadrature weights for one interval of the damped Duhamel integral
///   int_0^h exp(-c (h - u)) g(u) du ~= left * g(0) + right * g(h),
/// exact for linear g. Both weights are nonnegative for c >= 0.
struct ExpIntervalWeights {
    double left;
    double right;
};
ExpIntervalWeights exp_linear_weights(double c, double h);

/// Smoothing-kernel step Phi(u,w)(t) = int_0^t H^{nu(t-xi)} D(u w)(xi) dxi
/// evaluated at grid[target_index], with u, w sampled frame-by-frame on the
/// grid and the integrand taken piecewise linear between frames.
SpectralScalarField duhamel_phi(std::span<const SpectralScalarField> u_samples,
                                std::span<const SpectralScalarField> w_samples,
                                const TimeGrid& grid, std::size_t target_index, double nu,
                                const Convolver& conv);

/// Empirical bound check for the H^t D(u w) smoothing estimate over random
/// unit-H1 pairs. Each probe window reports the observed ratio
/// ||H^t D(u w)|| / (||u|| ||w||) (max over pairs), the compensated series
/// (ratio * t^{7/8} early, ratio * e^{t/2} in the tail), and whether its max
/// stays below bound_factor times its median.
struct KernelProbeConfig {
    int truncation = 8;
    int pair_count = 100;
    int time_count = 20;
    std::uint64_t seed = 20240801;
    double bound_factor = 3.0;
    double early_t_min = 1e-4;
    double early_t_max = 1.0;
    double tail_t_max = 10.0;
};

struct KernelProbeWindow {
    std::vector<double> times;
    std::vector<double> ratio;
    std::vector<double> scaled;
    double scaled_max = 0.0;
    double scaled_median = 0.0;
    bool bounded = false;
};

struct KernelProbeResult {
    KernelProbeWindow early;  // t in [early_t_min, early_t_max], weight t^{7/8}
    KernelProbeWindow tail;   // t in [early_t_max, tail_t_max], weight e^{t/2}
    double constant_estimate = 0.0;  // max compensated ratio over both windows
};

KernelProbeResult probe_smoothing_kernel(const KernelProbeConfig& cfg);

}  // namespace nstorus
