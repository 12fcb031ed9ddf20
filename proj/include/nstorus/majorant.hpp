#pragma once

#include <span>
#include <vector>

#include "nstorus/convolution.hpp"
#include "nstorus/solver_status.hpp"
#include "nstorus/spectral_field.hpp"
#include "nstorus/time_grid.hpp"

namespace nstorus {

/// Nonnegative per-mode envelope over the truncated lattice, stored like a
/// SpectralScalarField (dense cube, k = 0 pinned to zero).
class MajorantField {
  public:
    explicit MajorantField(int truncation);

    int truncation() const noexcept { return truncation_; }
    int side() const noexcept { return 2 * truncation_ + 1; }
    std::size_t size() const noexcept { return values_.size(); }

    double value(const WaveVector& k) const noexcept;
    /// Throws std::invalid_argument at k = 0, out of range, or negative value.
    void set_value(const WaveVector& k, double v);

    bool in_range(const WaveVector& k) const noexcept { return k.norm_max() <= truncation_; }
    std::size_t index_of(const WaveVector& k) const noexcept;
    WaveVector mode_at(std::size_t index) const noexcept;

    std::span<const double> data() const noexcept { return values_; }
    std::span<double> data() noexcept { return values_; }

    template <class Fn>
    void for_each_mode(Fn&& fn) const {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            WaveVector k = mode_at(i);
            if (k.is_zero()) continue;
            fn(k, values_[i]);
        }
    }

    bool operator==(const MajorantField& other) const = default;

  private:
    int truncation_;
    std::vector<double> values_;
};

double hs_norm(const MajorantField& f, double s);
inline double h1_norm(const MajorantField& f) { return hs_norm(f, 1.0); }

/// True when a_k <= b_k + tol for every mode.
bool dominated_by(const MajorantField& a, const MajorantField& b, double tol = 0.0);

/// Envelope of a velocity field: V_k = max_j |v^j_k|.
MajorantField build_majorant(const SpectralVectorField& v);

/// Truncated convolution (V W)_k via the given Convolver; tiny negative
/// round-off from the transform path is clamped to zero.
MajorantField product(const MajorantField& f, const MajorantField& g, const Convolver& conv);
MajorantField product(const MajorantField& f, const MajorantField& g);

struct MajorantTrajectory {
    TimeGrid grid;
    std::vector<MajorantField> frames;  // one per grid point
    double nu = 1.0;
    double a_const = 2.0;
};

double sup_h1(const MajorantTrajectory& traj);

struct MajorantConfig {
    double nu = 1.0;
    double a_const = 2.0;                 // coefficient of the quadratic term
    double picard_tol = 1e-12;            // relative sup-H1 increment threshold
    int max_iterations = 80;
    double sup_guard = 1e12;              // treat larger sup-H1 as divergence
    ConvolutionPath path = ConvolutionPath::padded_transform;
};

/// Fixed-point iteration for the scalar envelope equation
///   V_k(t) = e^{-nu phi_k t} Vhat_k
///            + a int_0^t e^{-nu phi_k (t-xi)} |k|_e (V^2)_k(xi) dxi,
/// phi_k = |k|_e (|k|_e - 1/2), starting from the homogeneous part. Iterates
/// are coefficientwise nondecreasing, so divergence shows up as norm growth
/// past sup_guard (reported as non_contraction) rather than oscillation.
struct MajorantSolveResult {
    MajorantTrajectory trajectory;
    SolveStatus status = SolveStatus::no_convergence;
    int iterations = 0;
    std::vector<double> increments;  // sup-H1 distance between successive iterates
};

MajorantSolveResult solve_majorant(const MajorantField& vhat, const TimeGrid& grid,
                                   const MajorantConfig& cfg);

/// Checks |v^j_k(t)| <= slack * V_k(t) e^{-nu t |k|_e / 2} + floor at every
/// grid point, mode and component, where floor = 1e-13 * max(1, ||v(0)||_H1)
/// absorbs transform round-off at modes the dynamics never populates.
/// Grids must match exactly (throws otherwise).
struct MajorizesReport {
    bool ok = false;
    double worst_ratio = 0.0;  // max of |v^j_k| / (slack * envelope + floor)
    double worst_time = 0.0;
    WaveVector worst_mode{0, 0, 0};
    int worst_component = 0;
    double floor = 0.0;
};

MajorizesReport majorizes(const MajorantTrajectory& env, const TimeGrid& velocity_grid,
                          std::span<const SpectralVectorField> velocity_frames, double slack);

/// (1 + ||vhat||_H1)^16, the growth factor in the existence-horizon bound.
double growth_factor16(double initial_h1);

/// Existence horizon c / (1 + ||vhat||_H1)^16.
double certified_horizon(double c_cal, double initial_h1);

/// Bisects on the horizon for the smallest T at which solve_majorant stops
/// converging. When the majorant converges all the way to t_max the bracket
/// is reported as (t_max, infinity) with unbounded = true.
struct BlowupBracket {
    double t_lo = 0.0;      // largest horizon that converged
    double t_hi = 0.0;      // smallest horizon that failed (infinity if none)
    bool unbounded = false;
    int trials = 0;
    double sup_h1_at_lo = 0.0;
};

BlowupBracket blowup_bracket(const MajorantField& vhat, const MajorantConfig& cfg,
                             const TimeGridSpec& grid_spec, double t_max,
                             double rel_width = 0.01);

/// Smoothing-kernel shape c t^{-7/8} on (0, 1], c e^{-t/2} beyond; throws
/// for t <= 0. Integrable at zero: int_0^T = 8 c T^{1/8} for T <= 1.
double kernel_h(double t, double c);

}  // namespace nstorus
