#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nstorus/initial_conditions.hpp"
#include "nstorus/majorant.hpp"
#include "nstorus/operators.hpp"

using namespace nstorus;

namespace {

TimeGrid uniform_grid(double horizon, int steps) {
    TimeGrid grid;
    for (int i = 0; i <= steps; ++i) grid.push_back(horizon * double(i) / double(steps));
    return grid;
}

}  // namespace

TEST_CASE("envelope of a velocity field takes the largest component modulus") {
    SpectralVectorField v(2);
    v.component(0).set_coeff(WaveVector{1, 0, 0}, Complex(0.3, -0.4));  // modulus 0.5
    v.component(1).set_coeff(WaveVector{1, 0, 0}, Complex(0.2, 0.0));
    v.component(2).set_coeff(WaveVector{0, 1, 1}, Complex(0.0, 0.25));
    auto env = build_majorant(v);
    CHECK(env.value(WaveVector{1, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(env.value(WaveVector{0, 1, 1}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(env.value(WaveVector{0, 0, 1}) == 0.0);

    auto tg_env = build_majorant(taylor_green(1.0));
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int s3 : {-1, 1})
                CHECK(tg_env.value(WaveVector{s1, s2, s3}) ==
                      doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(h1_norm(tg_env) == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-14));
}

TEST_CASE("majorant field validation and domination") {
    MajorantField f(2);
    CHECK_THROWS_AS(f.set_value(WaveVector{0, 0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(f.set_value(WaveVector{3, 0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(f.set_value(WaveVector{1, 0, 0}, -0.1), std::invalid_argument);
    f.set_value(WaveVector{1, 0, 0}, 2.0);

    MajorantField g(2);
    g.set_value(WaveVector{1, 0, 0}, 2.5);
    CHECK(dominated_by(f, g));
    CHECK_FALSE(dominated_by(g, f));
    CHECK(dominated_by(g, f, 0.6));
    MajorantField other(3);
    CHECK_THROWS_AS(dominated_by(f, other), std::invalid_argument);
}

TEST_CASE("majorant products agree between paths and stay nonnegative") {
    auto v = random_solenoidal(3, 1.0, 3);
    auto env = build_majorant(v);
    Convolver conv(3, ConvolutionPath::padded_transform);
    auto direct = product(env, env);
    auto padded = product(env, env, conv);
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(direct.data()[i] >= 0.0);
        CHECK(padded.data()[i] >= 0.0);
        CHECK(std::abs(direct.data()[i] - padded.data()[i]) <= 1e-13);
    }
}

TEST_CASE("fixed-point envelope solve matches an independent RK4 integration") {
    // Oracle route: the integral equation is equivalent to the stiff ODE
    // system dV_k/dt = -nu phi_k V_k + a |k|_e (V^2)_k; march it with RK4 at
    // a step far below the grid resolution and compare states.
    const double nu = 1.0, a = 2.0, T = 0.3;
    const int n = 2;
    auto vhat = build_majorant(taylor_green(0.3, n));

    MajorantConfig cfg;
    cfg.nu = nu;
    cfg.a_const = a;
    cfg.path = ConvolutionPath::direct;
    auto grid = uniform_grid(T, 300);
    auto result = solve_majorant(vhat, grid, cfg);
    REQUIRE(result.status == SolveStatus::converged);

    // RK4 on the complex embedding (values stay real).
    SpectralScalarField y(n);
    vhat.for_each_mode([&](const WaveVector& k, double v) {
        if (v != 0.0) y.set_coeff(k, Complex(v, 0.0));
    });
    auto rhs = [&](const SpectralScalarField& state) {
        auto sq = product(state, state);
        SpectralScalarField out(n);
        state.for_each_mode([&](const WaveVector& k, Complex c) {
            double d = k.norm_e();
            Complex value = -nu * d * (d - 0.5) * c + a * d * sq.coeff(k);
            if (value != Complex{}) out.set_coeff(k, value);
        });
        return out;
    };
    const int substeps = 10;  // 1e-4 step
    std::vector<SpectralScalarField> oracle_frames;
    oracle_frames.push_back(y);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        double h = (grid[j] - grid[j - 1]) / substeps;
        for (int s = 0; s < substeps; ++s) {
            auto k1 = rhs(y);
            auto k2 = rhs(y + (0.5 * h) * k1);
            auto k3 = rhs(y + (0.5 * h) * k2);
            auto k4 = rhs(y + h * k3);
            k2 += k3;
            k1 += k4;
            k1 += 2.0 * k2;
            y += (h / 6.0) * k1;
        }
        oracle_frames.push_back(y);
    }

    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& frame = result.trajectory.frames[j];
        frame.for_each_mode([&](const WaveVector& k, double v) {
            worst = std::max(worst, std::abs(v - oracle_frames[j].coeff(k).real()));
        });
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("envelope iterates grow coefficientwise and with the data") {
    auto vhat = build_majorant(taylor_green(0.5, 2));
    auto grid = uniform_grid(0.2, 100);
    MajorantConfig cfg;
    cfg.path = ConvolutionPath::direct;  // keeps the comparison exact
    cfg.picard_tol = 0.0;                // run a fixed number of iterations

    std::vector<MajorantSolveResult> runs;
    for (int m = 1; m <= 3; ++m) {
        cfg.max_iterations = m;
        runs.push_back(solve_majorant(vhat, grid, cfg));
    }
    for (int m = 0; m + 1 < 3; ++m)
        for (std::size_t j = 0; j < grid.size(); ++j)
            CHECK(dominated_by(runs[m].trajectory.frames[j], runs[m + 1].trajectory.frames[j]));

    // Comparison principle: larger initial envelope, larger iterates, at the
    // same fixed iteration count so the float-level argument stays exact.
    cfg.max_iterations = 40;
    auto small = solve_majorant(vhat, grid, cfg);
    MajorantField bigger(2);
    vhat.for_each_mode([&](const WaveVector& k, double v) {
        if (v != 0.0) bigger.set_value(k, 1.1 * v);
    });
    auto large = solve_majorant(bigger, grid, cfg);
    REQUIRE(small.status != SolveStatus::non_contraction);
    REQUIRE(large.status != SolveStatus::non_contraction);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(dominated_by(small.trajectory.frames[j], large.trajectory.frames[j]));
    CHECK(sup_h1(large.trajectory) > sup_h1(small.trajectory));
}

TEST_CASE("quadratic term off reduces the solve to the pure decay flow") {
    auto vhat = build_majorant(taylor_green(0.7, 2));
    auto grid = uniform_grid(0.4, 50);
    MajorantConfig cfg;
    cfg.a_const = 0.0;
    auto result = solve_majorant(vhat, grid, cfg);
    REQUIRE(result.status == SolveStatus::converged);
    CHECK(result.iterations == 1);

    for (std::size_t j = 0; j < grid.size(); ++j)
        result.trajectory.frames[j].for_each_mode([&](const WaveVector& k, double v) {
            double d = k.norm_e();
            double expect = vhat.value(k) * std::exp(-d * (d - 0.5) * grid[j]);
            CHECK(v == doctest::Approx(expect).epsilon(1e-14));
            // Splitting check: the decay envelope times e^{-t |k|/2} is the
            // full heat decay of the data.
            double heat = vhat.value(k) * std::exp(-double(k.norm_e2()) * grid[j]);
            CHECK(v * std::exp(-d * grid[j] / 2.0) == doctest::Approx(heat).epsilon(4e-14));
        });
}

TEST_CASE("grid refinement moves the envelope only at quadrature order") {
    auto vhat = build_majorant(taylor_green(0.6, 2));
    auto coarse = uniform_grid(0.2, 100);
    auto fine = refine_grid(coarse);
    MajorantConfig cfg;
    auto a = solve_majorant(vhat, coarse, cfg);
    auto b = solve_majorant(vhat, fine, cfg);
    REQUIRE(a.status == SolveStatus::converged);
    REQUIRE(b.status == SolveStatus::converged);
    double worst = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        const auto& ca = a.trajectory.frames[j];
        const auto& cb = b.trajectory.frames[2 * j];
        for (std::size_t i = 0; i < ca.size(); ++i)
            worst = std::max(worst, std::abs(ca.data()[i] - cb.data()[i]));
    }
    CHECK(worst <= 1e-5);
    CHECK(worst > 0.0);  // the grids genuinely differ
}

TEST_CASE("solve_majorant validates its inputs") {
    auto vhat = build_majorant(taylor_green(0.5, 2));
    MajorantConfig cfg;
    TimeGrid empty;
    CHECK_THROWS_AS(solve_majorant(vhat, empty, cfg), std::invalid_argument);
    TimeGrid no_zero{0.1, 0.2};
    CHECK_THROWS_AS(solve_majorant(vhat, no_zero, cfg), std::invalid_argument);
    TimeGrid unsorted{0.0, 0.2, 0.1};
    CHECK_THROWS_AS(solve_majorant(vhat, unsorted, cfg), std::invalid_argument);
    MajorantConfig bad = cfg;
    bad.nu = 0.0;
    CHECK_THROWS_AS(solve_majorant(vhat, uniform_grid(0.1, 4), bad), std::invalid_argument);
}

TEST_CASE("majorizes checks the weighted envelope pointwise") {
    const double nu = 2.0;
    MajorantTrajectory env;
    env.nu = nu;
    env.grid = {0.0, 0.5};
    env.frames.assign(2, MajorantField(2));
    env.frames[0].set_value(WaveVector{1, 0, 0}, 1.0);
    env.frames[1].set_value(WaveVector{1, 0, 0}, 1.0);

    std::vector<SpectralVectorField> frames(2, SpectralVectorField(2));
    const double weight = std::exp(-nu * 0.5 / 2.0);  // |k|_e = 1 at t = 0.5
    frames[1].component(0).set_coeff(WaveVector{1, 0, 0}, Complex(0.99 * weight, 0.0));
    auto report = majorizes(env, env.grid, frames, 1.0);
    CHECK(report.ok);
    CHECK(report.worst_ratio > 0.9);
    CHECK(report.worst_time == 0.5);
    CHECK(report.worst_mode == WaveVector{1, 0, 0});
    CHECK(report.worst_component == 1);

    frames[1].component(0).set_coeff(WaveVector{1, 0, 0}, Complex(1.01 * weight, 0.0));
    auto bad = majorizes(env, env.grid, frames, 1.0);
    CHECK_FALSE(bad.ok);
    CHECK(bad.worst_ratio > 1.0);

    // The documented floor absorbs transform-level noise at empty modes.
    frames[1].component(0).set_coeff(WaveVector{1, 0, 0}, Complex{});
    frames[1].component(2).set_coeff(WaveVector{0, 2, 1}, Complex(1e-14, 0.0));
    CHECK(majorizes(env, env.grid, frames, 1.0).ok);

    TimeGrid other{0.0, 0.25};
    CHECK_THROWS_AS(majorizes(env, other, frames, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(majorizes(env, env.grid, frames, 0.5), std::invalid_argument);
}

TEST_CASE("blow-up bracketing: subcritical data runs out the horizon") {
    auto vhat = build_majorant(taylor_green(0.2, 2));
    MajorantConfig cfg;
    TimeGridSpec spec;
    auto bracket = blowup_bracket(vhat, cfg, spec, 0.5);
    CHECK(bracket.unbounded);
    CHECK(bracket.t_lo == 0.5);
    CHECK(std::isinf(bracket.t_hi));
    CHECK(bracket.sup_h1_at_lo >= h1_norm(vhat) * 0.99);
}

TEST_CASE("blow-up bracketing: supercritical data gets a tight bracket") {
    auto vhat = build_majorant(taylor_green(40.0, 2));
    MajorantConfig cfg;
    TimeGridSpec spec;
    auto bracket = blowup_bracket(vhat, cfg, spec, 1.0);
    CHECK_FALSE(bracket.unbounded);
    CHECK(bracket.t_lo < bracket.t_hi);
    CHECK(bracket.t_hi - bracket.t_lo <= 0.01 * bracket.t_hi * (1.0 + 1e-12));
    CHECK(bracket.t_lo > 0.0);

    // The reported t_lo really is solvable.
    auto check = solve_majorant(vhat, spec.build(bracket.t_lo), cfg);
    CHECK(check.status == SolveStatus::converged);
}

TEST_CASE("existence horizon constant arithmetic") {
    CHECK(growth_factor16(0.0) == 1.0);
    CHECK(growth_factor16(1.0) == 65536.0);
    CHECK(certified_horizon(2.0, 0.0) == 2.0);
    CHECK(certified_horizon(65536.0, 1.0) == 1.0);
    CHECK_THROWS_AS(certified_horizon(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(growth_factor16(-0.5), std::invalid_argument);
}

TEST_CASE("kernel shape function and its integral") {
    const double c = 1.7;
    CHECK(kernel_h(1.0, c) == doctest::Approx(c).epsilon(1e-15));
    CHECK(kernel_h(4.0, c) == doctest::Approx(c * std::exp(-2.0)).epsilon(1e-15));
    CHECK(kernel_h(1.0 + 1e-12, c) == doctest::Approx(c * std::exp(-0.5)).epsilon(1e-9));
    CHECK(kernel_h(0.5, c) == doctest::Approx(c * std::pow(0.5, -7.0 / 8.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_h(0.0, c), std::invalid_argument);
    CHECK_THROWS_AS(kernel_h(-1.0, c), std::invalid_argument);

    // int_0^1 c t^{-7/8} dt = 8c, despite the singularity at zero: trapezoid
    // on a geometric grid reaching down to 1e-80.
    double sum = 0.0, t = 1e-80;
    const double r = 1.005;
    while (t < 1.0) {
        double next = std::min(t * r, 1.0);
        sum += 0.5 * (kernel_h(t, c) + kernel_h(next, c)) * (next - t);
        t = next;
    }
    CHECK(sum == doctest::Approx(8.0 * c).epsilon(1e-4));

    // int_1^inf c e^{-t/2} dt = 2 c e^{-1/2}.  Midpoint nodes stay clear of
    // the branch switch at t = 1, where the shape jumps from c to c e^{-1/2}.
    double tail = 0.0;
    for (double u = 1.0; u < 80.0; u += 1e-3)
        tail += kernel_h(u + 0.5e-3, c) * 1e-3;
    CHECK(tail == doctest::Approx(2.0 * c * std::exp(-0.5)).epsilon(1e-6));
}
