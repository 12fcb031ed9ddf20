#include "nstorus/initial_conditions.hpp"

#include <array>
#include <random>
#include <stdexcept>

namespace nstorus {

SpectralVectorField taylor_green(double amplitude, int truncation) {
    if (truncation < 1) throw std::invalid_argument("taylor_green: truncation must be >= 1");
    SpectralVectorField v(truncation);
    const double eighth = amplitude / 8.0;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int s3 : {-1, 1}) {
                WaveVector k{s1, s2, s3};
                v.component(0).set_coeff(k, Complex(0.0, -s1 * eighth));
                v.component(1).set_coeff(k, Complex(0.0, s2 * eighth));
            }
    for (int j = 0; j < 3; ++j) v.component(j).set_real_flagged(true);
    v.set_solenoidal_checked(true);
    return v;
}

SpectralVectorField shear_flow(double amplitude, int truncation) {
    if (truncation < 1) throw std::invalid_argument("shear_flow: truncation must be >= 1");
    SpectralVectorField v(truncation);
    v.component(1).set_coeff(WaveVector{1, 0, 0}, Complex(amplitude / 2.0, 0.0));
    v.component(1).set_coeff(WaveVector{-1, 0, 0}, Complex(amplitude / 2.0, 0.0));
    for (int j = 0; j < 3; ++j) v.component(j).set_real_flagged(true);
    v.set_solenoidal_checked(true);
    return v;
}

namespace {

// Lexicographically canonical representative of a +-k pair.
bool canonical_half(const WaveVector& k) { return -k < k; }

}  // namespace

SpectralVectorField random_solenoidal(std::uint64_t seed, double target_h1, int truncation) {
    if (truncation < 1) throw std::invalid_argument("random_solenoidal: truncation must be >= 1");
    if (!(target_h1 > 0.0)) throw std::invalid_argument("random_solenoidal: target_h1 must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SpectralVectorField v(truncation);
    const int n = truncation;
    for (int k1 = -n; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2)
            for (int k3 = -n; k3 <= n; ++k3) {
                WaveVector k{k1, k2, k3};
                if (k.is_zero() || !canonical_half(k)) continue;
                std::array<Complex, 3> a;
                for (auto& c : a) {
                    double re = gauss(rng);
                    double im = gauss(rng);
                    c = Complex(re, im);
                }
                // Project onto the divergence-free subspace: a -= k (k.a)/|k|^2.
                Complex ka = a[0] * double(k1) + a[1] * double(k2) + a[2] * double(k3);
                double inv = 1.0 / double(k.norm_e2());
                a[0] -= ka * (double(k1) * inv);
                a[1] -= ka * (double(k2) * inv);
                a[2] -= ka * (double(k3) * inv);
                for (int j = 0; j < 3; ++j) {
                    if (a[j] == Complex{}) continue;
                    v.component(j).set_coeff(k, a[j]);
                    v.component(j).set_coeff(-k, std::conj(a[j]));
                }
            }

    double norm = h1_norm(v);
    if (norm == 0.0) throw std::runtime_error("random_solenoidal: degenerate draw");
    double scale = target_h1 / norm;
    for (int j = 0; j < 3; ++j) {
        v.component(j) *= scale;
        v.component(j).set_real_flagged(true);
    }
    v.set_solenoidal_checked(true);
    return v;
}

SpectralScalarField random_hermitian_scalar(std::uint64_t seed, double target_h1, int truncation) {
    if (truncation < 1) throw std::invalid_argument("random_hermitian_scalar: truncation must be >= 1");
    if (!(target_h1 > 0.0))
        throw std::invalid_argument("random_hermitian_scalar: target_h1 must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SpectralScalarField f(truncation);
    const int n = truncation;
    for (int k1 = -n; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2)
            for (int k3 = -n; k3 <= n; ++k3) {
                WaveVector k{k1, k2, k3};
                if (k.is_zero() || !canonical_half(k)) continue;
                Complex c(gauss(rng), gauss(rng));
                f.set_coeff(k, c);
                f.set_coeff(-k, std::conj(c));
            }

    double norm = hs_norm(f, 1.0);
    if (norm == 0.0) throw std::runtime_error("random_hermitian_scalar: degenerate draw");
    f *= target_h1 / norm;
    f.set_real_flagged(true);
    return f;
}

}  // namespace nstorus
