#include "nstorus/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nstorus/operators.hpp"

namespace nstorus {

MajorantField::MajorantField(int truncation) : truncation_(truncation) {
    if (truncation < 1) throw std::invalid_argument("MajorantField: truncation must be >= 1");
    std::size_t side = std::size_t(2 * truncation + 1);
    values_.assign(side * side * side, 0.0);
}

std::size_t MajorantField::index_of(const WaveVector& k) const noexcept {
    std::size_t s = std::size_t(side());
    return (std::size_t(k.k1 + truncation_) * s + std::size_t(k.k2 + truncation_)) * s +
           std::size_t(k.k3 + truncation_);
}

WaveVector MajorantField::mode_at(std::size_t index) const noexcept {
    int s = side();
    int k3 = int(index % std::size_t(s)) - truncation_;
    index /= std::size_t(s);
    int k2 = int(index % std::size_t(s)) - truncation_;
    int k1 = int(index / std::size_t(s)) - truncation_;
    return {k1, k2, k3};
}

double MajorantField::value(const WaveVector& k) const noexcept {
    if (!in_range(k) || k.is_zero()) return 0.0;
    return values_[index_of(k)];
}

void MajorantField::set_value(const WaveVector& k, double v) {
    if (k.is_zero()) throw std::invalid_argument("MajorantField: k = 0 is pinned to zero");
    if (!in_range(k)) throw std::invalid_argument("MajorantField: mode outside truncation");
    if (!(v >= 0.0)) throw std::invalid_argument("MajorantField: values must be nonnegative");
    values_[index_of(k)] = v;
}

double hs_norm(const MajorantField& f, double s) {
    double sum = 0.0;
    f.for_each_mode([&](const WaveVector& k, double v) {
        if (v != 0.0) sum += v * v * std::pow(double(k.norm_e2()), s);
    });
    return std::sqrt(sum);
}

bool dominated_by(const MajorantField& a, const MajorantField& b, double tol) {
    if (a.truncation() != b.truncation())
        throw std::invalid_argument("dominated_by: truncation mismatch");
    auto av = a.data(), bv = b.data();
    for (std::size_t i = 0; i < av.size(); ++i)
        if (av[i] > bv[i] + tol) return false;
    return true;
}

MajorantField build_majorant(const SpectralVectorField& v) {
    MajorantField out(v.truncation());
    for (int j = 0; j < 3; ++j)
        v.component(j).for_each_nonzero([&](const WaveVector& k, Complex c) {
            double m = std::abs(c);
            std::size_t idx = out.index_of(k);
            if (m > out.data()[idx]) out.data()[idx] = m;
        });
    return out;
}

namespace {

SpectralScalarField to_complex(const MajorantField& f) {
    SpectralScalarField out(f.truncation());
    auto src = f.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = Complex(src[i], 0.0);
    return out;
}

MajorantField clamp_real(const SpectralScalarField& f) {
    MajorantField out(f.truncation());
    auto src = f.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::max(0.0, src[i].real());
    WaveVector zero{0, 0, 0};
    dst[out.index_of(zero)] = 0.0;
    return out;
}

}  // namespace

MajorantField product(const MajorantField& f, const MajorantField& g, const Convolver& conv) {
    return clamp_real(conv.product(to_complex(f), to_complex(g)));
}

MajorantField product(const MajorantField& f, const MajorantField& g) {
    return clamp_real(nstorus::product(to_complex(f), to_complex(g)));
}

double sup_h1(const MajorantTrajectory& traj) {
    double sup = 0.0;
    for (const auto& frame : traj.frames) sup = std::max(sup, h1_norm(frame));
    return sup;
}

namespace {

void validate_grid(const TimeGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    if (grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

}  // namespace

MajorantSolveResult solve_majorant(const MajorantField& vhat, const TimeGrid& grid,
                                   const MajorantConfig& cfg) {
    validate_grid(grid);
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("solve_majorant: viscosity must be positive");
    if (!(cfg.a_const >= 0.0))
        throw std::invalid_argument("solve_majorant: quadratic coefficient must be nonnegative");

    const int n = vhat.truncation();
    const std::size_t modes = vhat.size();
    const std::size_t frames = grid.size();
    const std::size_t intervals = frames - 1;

    // Per-mode decay exponents phi_k = |k|_e (|k|_e - 1/2) and degrees |k|_e.
    std::vector<double> phi(modes, 0.0), degree(modes, 0.0);
    for (std::size_t m = 0; m < modes; ++m) {
        WaveVector k = vhat.mode_at(m);
        if (k.is_zero()) continue;
        double d = k.norm_e();
        degree[m] = d;
        phi[m] = d * (d - 0.5);
    }

    // Interval quadrature data, frozen for the whole iteration:
    // decay e^{-c h}, left/right weights of the exact piecewise-linear rule.
    std::vector<double> decay(modes * intervals), w_left(modes * intervals),
        w_right(modes * intervals);
    for (std::size_t m = 0; m < modes; ++m) {
        double c = cfg.nu * phi[m];
        for (std::size_t i = 0; i < intervals; ++i) {
            double h = grid[i + 1] - grid[i];
            auto w = exp_linear_weights(c, h);
            decay[m * intervals + i] = std::exp(-c * h);
            w_left[m * intervals + i] = w.left;
            w_right[m * intervals + i] = w.right;
        }
    }

    // Homogeneous part e^{-nu phi_k t_j} Vhat_k doubles as the first iterate.
    std::vector<MajorantField> hom(frames, MajorantField(n));
    for (std::size_t j = 0; j < frames; ++j) {
        auto dst = hom[j].data();
        auto src = vhat.data();
        for (std::size_t m = 0; m < modes; ++m)
            dst[m] = src[m] * std::exp(-cfg.nu * phi[m] * grid[j]);
    }

    MajorantSolveResult result;
    result.trajectory.grid = grid;
    result.trajectory.nu = cfg.nu;
    result.trajectory.a_const = cfg.a_const;
    result.trajectory.frames = hom;

    const double scale = std::max(1.0, hs_norm(vhat, 1.0));
    Convolver conv(n, cfg.path);

    auto& cur = result.trajectory.frames;
    std::vector<MajorantField> squares(frames, MajorantField(n));
    std::vector<MajorantField> next(frames, MajorantField(n));

    for (int it = 0; it < cfg.max_iterations; ++it) {
        for (std::size_t j = 0; j < frames; ++j) squares[j] = product(cur[j], cur[j], conv);

        next[0] = cur[0];
        for (std::size_t j = 1; j < frames; ++j) next[j] = hom[j];
        for (std::size_t m = 0; m < modes; ++m) {
            if (degree[m] == 0.0) continue;
            double integral = 0.0;
            const double gain = cfg.a_const * degree[m];
            for (std::size_t i = 0; i < intervals; ++i) {
                std::size_t idx = m * intervals + i;
                integral = decay[idx] * integral + w_left[idx] * squares[i].data()[m] +
                           w_right[idx] * squares[i + 1].data()[m];
                next[i + 1].data()[m] += gain * integral;
            }
        }

        double increment = 0.0, sup = 0.0;
        MajorantField diff(n);
        for (std::size_t j = 0; j < frames; ++j) {
            auto d = diff.data();
            auto a = next[j].data();
            auto b = cur[j].data();
            for (std::size_t m = 0; m < modes; ++m) d[m] = std::abs(a[m] - b[m]);
            increment = std::max(increment, h1_norm(diff));
            sup = std::max(sup, h1_norm(next[j]));
        }
        result.increments.push_back(increment);
        result.iterations = it + 1;
        cur.swap(next);

        if (!(sup < cfg.sup_guard) || !std::isfinite(sup)) {
            result.status = SolveStatus::non_contraction;
            return result;
        }
        if (increment <= cfg.picard_tol * scale) {
            result.status = SolveStatus::converged;
            return result;
        }
    }
    result.status = SolveStatus::no_convergence;
    return result;
}

MajorizesReport majorizes(const MajorantTrajectory& env, const TimeGrid& velocity_grid,
                          std::span<const SpectralVectorField> velocity_frames, double slack) {
    if (env.grid.size() != velocity_grid.size() || env.grid != velocity_grid)
        throw std::invalid_argument("majorizes: trajectories use different time grids");
    if (velocity_frames.size() != velocity_grid.size())
        throw std::invalid_argument("majorizes: frame count does not match the grid");
    if (!(slack >= 1.0)) throw std::invalid_argument("majorizes: slack must be >= 1");

    MajorizesReport report;
    report.floor = 1e-13 * std::max(1.0, h1_norm(velocity_frames[0]));

    for (std::size_t j = 0; j < velocity_frames.size(); ++j) {
        const double t = env.grid[j];
        const auto& envelope = env.frames[j];
        for (int comp = 0; comp < 3; ++comp) {
            velocity_frames[j].component(comp).for_each_nonzero(
                [&](const WaveVector& k, Complex c) {
                    double bound =
                        slack * envelope.value(k) * std::exp(-env.nu * t * k.norm_e() / 2.0) +
                        report.floor;
                    double ratio = std::abs(c) / bound;
                    if (ratio > report.worst_ratio) {
                        report.worst_ratio = ratio;
                        report.worst_time = t;
                        report.worst_mode = k;
                        report.worst_component = comp + 1;
                    }
                });
        }
    }
    report.ok = report.worst_ratio <= 1.0;
    return report;
}

double growth_factor16(double initial_h1) {
    if (!(initial_h1 >= 0.0))
        throw std::invalid_argument("growth_factor16: norm must be nonnegative");
    double p = 1.0 + initial_h1;
    p *= p;  // ^2
    p *= p;  // ^4
    p *= p;  // ^8
    return p * p;
}

double certified_horizon(double c_cal, double initial_h1) {
    if (!(c_cal > 0.0)) throw std::invalid_argument("certified_horizon: constant must be positive");
    return c_cal / growth_factor16(initial_h1);
}

BlowupBracket blowup_bracket(const MajorantField& vhat, const MajorantConfig& cfg,
                             const TimeGridSpec& grid_spec, double t_max, double rel_width) {
    if (!(t_max > 0.0)) throw std::invalid_argument("blowup_bracket: t_max must be positive");
    if (!(rel_width > 0.0 && rel_width < 1.0))
        throw std::invalid_argument("blowup_bracket: rel_width must lie in (0,1)");

    BlowupBracket bracket;
    auto attempt = [&](double horizon) {
        auto grid = grid_spec.build(horizon);
        auto res = solve_majorant(vhat, grid, cfg);
        ++bracket.trials;
        return res;
    };

    auto full = attempt(t_max);
    if (full.status == SolveStatus::converged) {
        bracket.t_lo = t_max;
        bracket.t_hi = std::numeric_limits<double>::infinity();
        bracket.unbounded = true;
        bracket.sup_h1_at_lo = sup_h1(full.trajectory);
        return bracket;
    }

    double lo = 0.0, hi = t_max;
    double sup_lo = hs_norm(vhat, 1.0);  // horizon 0: the envelope is the data itself
    while (hi - lo > rel_width * hi) {
        double mid = 0.5 * (lo + hi);
        auto res = attempt(mid);
        if (res.status == SolveStatus::converged) {
            lo = mid;
            sup_lo = sup_h1(res.trajectory);
        } else {
            hi = mid;
        }
    }
    bracket.t_lo = lo;
    bracket.t_hi = hi;
    bracket.unbounded = false;
    bracket.sup_h1_at_lo = sup_lo;
    return bracket;
}

double kernel_h(double t, double c) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_h: t must be positive");
    if (t <= 1.0) return c * std::pow(t, -7.0 / 8.0);
    return c * std::exp(-t / 2.0);
}

}  // namespace nstorus
