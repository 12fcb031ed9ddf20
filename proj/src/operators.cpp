#include "nstorus/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nstorus/initial_conditions.hpp"

namespace nstorus {

namespace {

void require_semigroup_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be nonnegative");
}

void require_axis(int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("partial: axis must be 0, 1 or 2");
}

// Growth exponent of the H semigroup: phi_k = |k|_e (|k|_e - 1/2).
double phi(const WaveVector& k) {
    double d = k.norm_e();
    return d * (d - 0.5);
}

}  // namespace

Complex multiplier_factor(const MultiplierSpec& spec, const WaveVector& k) {
    using Kind = MultiplierSpec::Kind;
    switch (spec.kind) {
        case Kind::partial:
            require_axis(spec.axis);
            return Complex(0.0, double(k.component(spec.axis)));
        case Kind::inverse_laplacian:
            return Complex(-1.0 / double(k.norm_e2()), 0.0);
        case Kind::degree:
            return Complex(k.norm_e(), 0.0);
        case Kind::semigroup_s:
            require_semigroup_time(spec.t);
            return Complex(std::exp(-double(k.norm_e2()) * spec.t), 0.0);
        case Kind::semigroup_r:
            require_semigroup_time(spec.t);
            return Complex(std::exp(-k.norm_e() * spec.t / 2.0), 0.0);
        case Kind::semigroup_h:
            require_semigroup_time(spec.t);
            return Complex(std::exp(-phi(k) * spec.t), 0.0);
    }
    throw std::invalid_argument("unknown multiplier kind");
}

SpectralScalarField apply_multiplier(const MultiplierSpec& spec, const SpectralScalarField& f) {
    using Kind = MultiplierSpec::Kind;
    if (spec.kind == Kind::partial) require_axis(spec.axis);
    if (spec.kind == Kind::semigroup_s || spec.kind == Kind::semigroup_r ||
        spec.kind == Kind::semigroup_h)
        require_semigroup_time(spec.t);

    SpectralScalarField out(f.truncation());
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        out.set_coeff(k, multiplier_factor(spec, k) * c);
    });
    // Every factor here is either real and even in k (semigroups, degree,
    // inverse Laplacian) or purely imaginary and odd (partial), so Hermitian
    // symmetry survives exactly.
    out.set_real_flagged(f.real_flagged());
    return out;
}

SpectralVectorField apply_multiplier(const MultiplierSpec& spec, const SpectralVectorField& v) {
    SpectralVectorField out(apply_multiplier(spec, v.component(0)),
                            apply_multiplier(spec, v.component(1)),
                            apply_multiplier(spec, v.component(2)));
    out.set_solenoidal_checked(v.solenoidal_checked());
    return out;
}

double pressure_tensor_factor(int l_index, int m_index, const WaveVector& k) {
    if (l_index < 1 || l_index > 3 || m_index < 1 || m_index > 3)
        throw std::invalid_argument("pressure_tensor_factor: indices are 1-based in {1,2,3}");
    if (k.is_zero()) return 0.0;
    long long kl = k.component(l_index - 1);
    long long km = k.component(m_index - 1);
    double factor = double(kl * km) / double(k.norm_e2());
    if (l_index == m_index) factor -= 1.0;
    return factor;
}

SpectralScalarField apply_A(int l_index, int m_index, const SpectralScalarField& f) {
    if (l_index < 1 || l_index > 3 || m_index < 1 || m_index > 3)
        throw std::invalid_argument("apply_A: indices are 1-based in {1,2,3}");
    SpectralScalarField out(f.truncation());
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        double factor = pressure_tensor_factor(l_index, m_index, k);
        if (factor != 0.0) out.set_coeff(k, factor * c);
    });
    out.set_real_flagged(f.real_flagged());
    return out;
}

namespace {

// The six distinct products v^i v^j, i <= j, indexed [i][j].
std::array<std::array<SpectralScalarField, 3>, 3> velocity_products(const SpectralVectorField& v,
                                                                    const Convolver& conv) {
    std::array<std::array<SpectralScalarField, 3>, 3> p{
        {{SpectralScalarField(v.truncation()), SpectralScalarField(v.truncation()),
          SpectralScalarField(v.truncation())},
         {SpectralScalarField(v.truncation()), SpectralScalarField(v.truncation()),
          SpectralScalarField(v.truncation())},
         {SpectralScalarField(v.truncation()), SpectralScalarField(v.truncation()),
          SpectralScalarField(v.truncation())}}};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            p[i][j] = conv.product(v.component(i), v.component(j));
            if (j != i) p[j][i] = p[i][j];
        }
    return p;
}

}  // namespace

SpectralVectorField nonlinear_term(const SpectralVectorField& v, const Convolver& conv) {
    auto p = velocity_products(v, conv);
    const int n = v.truncation();
    SpectralVectorField out(n);

    // g_l = sum_j i k_j (v^j v^l)_k, then N^k = sum_l A^k_l g_l.
    p[0][0].for_each_mode([&](const WaveVector& k, Complex) {
        std::array<Complex, 3> g{};
        bool any = false;
        for (int l = 0; l < 3; ++l) {
            Complex s{};
            for (int j = 0; j < 3; ++j) {
                Complex c = p[j][l].coeff(k);
                if (c != Complex{}) s += Complex(0.0, double(k.component(j))) * c;
            }
            g[l] = s;
            if (s != Complex{}) any = true;
        }
        if (!any) return;
        double inv = 1.0 / double(k.norm_e2());
        for (int kk = 0; kk < 3; ++kk) {
            Complex s{};
            for (int l = 0; l < 3; ++l) {
                long long prod = (long long)k.component(kk) * (long long)k.component(l);
                double factor = double(prod) * inv - (kk == l ? 1.0 : 0.0);
                if (factor != 0.0) s += factor * g[l];
            }
            if (s != Complex{}) out.component(kk).set_coeff(k, s);
        }
    });
    return out;
}

SpectralVectorField nonlinear_term(const SpectralVectorField& v) {
    Convolver conv(v.truncation(), ConvolutionPath::direct);
    return nonlinear_term(v, conv);
}

SpectralScalarField pressure(const SpectralVectorField& v, const Convolver& conv) {
    auto p = velocity_products(v, conv);
    const int n = v.truncation();
    SpectralScalarField out(n);
    p[0][0].for_each_mode([&](const WaveVector& m, Complex) {
        Complex s{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Complex c = p[i][j].coeff(m);
                if (c == Complex{}) continue;
                long long prod = (long long)m.component(i) * (long long)m.component(j);
                if (prod != 0) s += double(prod) * c;
            }
        if (s != Complex{}) out.set_coeff(m, -s / double(m.norm_e2()));
    });
    return out;
}

SpectralScalarField pressure(const SpectralVectorField& v) {
    Convolver conv(v.truncation(), ConvolutionPath::direct);
    return pressure(v, conv);
}

ExpIntervalWeights exp_linear_weights(double c, double h) {
    if (!(h >= 0.0)) throw std::invalid_argument("exp_linear_weights: step must be nonnegative");
    if (!(c >= 0.0)) throw std::invalid_argument("exp_linear_weights: rate must be nonnegative");
    if (h == 0.0) return {0.0, 0.0};
    if (c == 0.0) return {h / 2.0, h / 2.0};

    const double x = c * h;
    double j0, j1;  // j0 = int_0^h e^{-c(h-u)} du, j1 = int_0^h e^{-c(h-u)} u du
    if (x >= 1.0) {
        // Closed forms are safe here: e^{-x} <= e^{-1}, so no cancellation.
        const double e = std::exp(-x);
        j0 = -std::expm1(-x) / c;
        j1 = (1.0 - e * (1.0 + x)) / (c * c);
    } else {
        // Small x: series j0 = h sum (-x)^m / (m!(m+1)), j1 = h^2 sum (-x)^m / (m!(m+2)).
        double term = 1.0;
        double s0 = 1.0, s1 = 0.5;
        for (int m = 1; m < 40; ++m) {
            term *= -x / m;
            double a0 = term / (m + 1);
            s0 += a0;
            s1 += term / (m + 2);
            if (std::abs(a0) < 1e-18 * s0) break;
        }
        j0 = h * s0;
        j1 = h * h * s1;
    }
    return {j1 / h, j0 - j1 / h};
}

SpectralScalarField duhamel_phi(std::span<const SpectralScalarField> u_samples,
                                std::span<const SpectralScalarField> w_samples,
                                const TimeGrid& grid, std::size_t target_index, double nu,
                                const Convolver& conv) {
    if (grid.empty()) throw std::invalid_argument("duhamel_phi: empty time grid");
    if (target_index >= grid.size())
        throw std::invalid_argument("duhamel_phi: target index outside the grid");
    if (u_samples.size() < target_index + 1 || w_samples.size() < target_index + 1)
        throw std::invalid_argument("duhamel_phi: too few integrand samples");
    if (!(nu > 0.0)) throw std::invalid_argument("duhamel_phi: viscosity must be positive");

    const int n = u_samples[0].truncation();
    std::vector<SpectralScalarField> prods;
    prods.reserve(target_index + 1);
    for (std::size_t i = 0; i <= target_index; ++i)
        prods.push_back(conv.product(u_samples[i], w_samples[i]));

    SpectralScalarField out(n);
    if (target_index == 0) return out;

    prods[0].for_each_mode([&](const WaveVector& k, Complex) {
        const double c = nu * phi(k);
        Complex acc{};
        std::size_t left_idx = out.index_of(k);
        for (std::size_t i = 0; i + 1 <= target_index; ++i) {
            double h = grid[i + 1] - grid[i];
            auto w = exp_linear_weights(c, h);
            Complex fl = prods[i].data()[left_idx];
            Complex fr = prods[i + 1].data()[left_idx];
            acc = std::exp(-c * h) * acc + w.left * fl + w.right * fr;
        }
        Complex value = k.norm_e() * acc;  // leading degree factor D
        if (value != Complex{}) out.set_coeff(k, value);
    });
    return out;
}

namespace {

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n == 0) return 0.0;
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

KernelProbeWindow make_window(const std::vector<double>& times, const std::vector<double>& ratio,
                              const std::vector<double>& scaled, double bound_factor) {
    KernelProbeWindow wdw;
    wdw.times = times;
    wdw.ratio = ratio;
    wdw.scaled = scaled;
    wdw.scaled_max = *std::max_element(scaled.begin(), scaled.end());
    wdw.scaled_median = median_of(scaled);
    wdw.bounded = wdw.scaled_max <= bound_factor * wdw.scaled_median;
    return wdw;
}

}  // namespace

KernelProbeResult probe_smoothing_kernel(const KernelProbeConfig& cfg) {
    if (cfg.truncation < 1 || cfg.pair_count < 1 || cfg.time_count < 2)
        throw std::invalid_argument("probe_smoothing_kernel: bad configuration");

    const int n2 = 2 * cfg.truncation;  // products of truncation-N data live at 2N
    Convolver conv(n2, ConvolutionPath::padded_transform);

    // D(u w) for each pair, computed once; the probe then sweeps t.
    std::vector<SpectralScalarField> duw;
    duw.reserve(cfg.pair_count);
    for (int p = 0; p < cfg.pair_count; ++p) {
        auto u = random_hermitian_scalar(cfg.seed + 2 * std::uint64_t(p), 1.0, cfg.truncation);
        auto w = random_hermitian_scalar(cfg.seed + 2 * std::uint64_t(p) + 1, 1.0, cfg.truncation);
        auto prod = conv.product(resize_truncation(u, n2), resize_truncation(w, n2));
        duw.push_back(apply_multiplier(MultiplierSpec::degree(), prod));
    }

    auto sweep = [&](double t_lo, double t_hi, auto weight) {
        std::vector<double> times(cfg.time_count), ratio(cfg.time_count), scaled(cfg.time_count);
        for (int i = 0; i < cfg.time_count; ++i) {
            double f = double(i) / double(cfg.time_count - 1);
            double t = t_lo * std::pow(t_hi / t_lo, f);
            times[i] = t;
            double worst = 0.0;
            for (const auto& g : duw) {
                double norm = h1_norm(apply_multiplier(MultiplierSpec::semigroup_h(t), g));
                worst = std::max(worst, norm);  // unit-H1 inputs: denominator is 1
            }
            ratio[i] = worst;
            scaled[i] = worst * weight(t);
        }
        return make_window(times, ratio, scaled, cfg.bound_factor);
    };

    KernelProbeResult result;
    result.early = sweep(cfg.early_t_min, cfg.early_t_max,
                         [](double t) { return std::pow(t, 7.0 / 8.0); });
    result.tail =
        sweep(cfg.early_t_max, cfg.tail_t_max, [](double t) { return std::exp(t / 2.0); });
    result.constant_estimate = std::max(result.early.scaled_max, result.tail.scaled_max);
    return result;
}

}  // namespace nstorus
