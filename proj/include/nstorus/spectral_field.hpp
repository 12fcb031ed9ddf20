#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nstorus/wave_vector.hpp"

namespace nstorus {

using Complex = std::complex<double>;

/// Truncated zero-mean Fourier series on the (2pi)^3 torus.
///
/// Coefficients are stored densely over the cube 0 < |k|_m <= N in
/// lexicographic (k1,k2,k3) order; the k = 0 slot exists in storage but is
/// pinned to zero. A field may be flagged real-valued, which promises the
/// Hermitian symmetry coeff(-k) == conj(coeff(k)) exactly; enforce_reality
/// establishes the flag, operations that cannot guarantee exact symmetry
/// (convolution) drop it.
class SpectralScalarField {
  public:
    explicit SpectralScalarField(int truncation, bool real_flagged = false);

    int truncation() const noexcept { return truncation_; }
    int side() const noexcept { return 2 * truncation_ + 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    bool real_flagged() const noexcept { return real_flagged_; }
    void set_real_flagged(bool flagged) noexcept { real_flagged_ = flagged; }

    /// Coefficient at k; reads outside the stored cube (and at k = 0) give 0.
    Complex coeff(const WaveVector& k) const noexcept;
    /// Throws std::invalid_argument at k = 0 or |k|_m > N.
    void set_coeff(const WaveVector& k, Complex value);
    void add_coeff(const WaveVector& k, Complex value);

    bool in_range(const WaveVector& k) const noexcept { return k.norm_max() <= truncation_; }

    std::size_t index_of(const WaveVector& k) const noexcept;
    WaveVector mode_at(std::size_t index) const noexcept;

    std::span<const Complex> data() const noexcept { return coeffs_; }
    std::span<Complex> data() noexcept { return coeffs_; }

    /// Visits stored modes in lexicographic order, skipping k = 0.
    template <class Fn>
    void for_each_mode(Fn&& fn) const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            WaveVector k = mode_at(i);
            if (k.is_zero()) continue;
            fn(k, coeffs_[i]);
        }
    }

    /// Visits only modes with a nonzero coefficient, lexicographic order.
    template <class Fn>
    void for_each_nonzero(Fn&& fn) const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == Complex{0.0, 0.0}) continue;
            WaveVector k = mode_at(i);
            if (k.is_zero()) continue;
            fn(k, coeffs_[i]);
        }
    }

    std::size_t nonzero_count() const noexcept;

    SpectralScalarField& operator+=(const SpectralScalarField& other);
    SpectralScalarField& operator-=(const SpectralScalarField& other);
    SpectralScalarField& operator*=(double scale);
    friend SpectralScalarField operator+(SpectralScalarField a, const SpectralScalarField& b) {
        a += b;
        return a;
    }
    friend SpectralScalarField operator-(SpectralScalarField a, const SpectralScalarField& b) {
        a -= b;
        return a;
    }
    friend SpectralScalarField operator*(double s, SpectralScalarField f) {
        f *= s;
        return f;
    }

    bool operator==(const SpectralScalarField& other) const = default;

  private:
    int truncation_;
    bool real_flagged_;
    std::vector<Complex> coeffs_;
};

/// Velocity-style field v = (v1, v2, v3); components share one truncation.
class SpectralVectorField {
  public:
    explicit SpectralVectorField(int truncation, bool real_flagged = false);
    SpectralVectorField(SpectralScalarField c1, SpectralScalarField c2, SpectralScalarField c3);

    int truncation() const noexcept { return components_[0].truncation(); }

    const SpectralScalarField& component(int j) const { return components_[j]; }
    SpectralScalarField& component(int j) { return components_[j]; }

    bool real_flagged() const noexcept;
    void set_real_flagged(bool flagged) noexcept;

    bool solenoidal_checked() const noexcept { return solenoidal_checked_; }
    void set_solenoidal_checked(bool v) noexcept { solenoidal_checked_ = v; }

    /// max_k |sum_j k_j v^j_k| -- the discrete divergence residual.
    double max_divergence() const noexcept;

    SpectralVectorField& operator+=(const SpectralVectorField& other);
    SpectralVectorField& operator-=(const SpectralVectorField& other);
    SpectralVectorField& operator*=(double scale);
    friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) {
        a += b;
        return a;
    }
    friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
        a -= b;
        return a;
    }
    friend SpectralVectorField operator*(double s, SpectralVectorField f) {
        f *= s;
        return f;
    }

    bool operator==(const SpectralVectorField& other) const = default;

  private:
    std::vector<SpectralScalarField> components_;  // always 3
    bool solenoidal_checked_ = false;
};

/// Sobolev norm sqrt(sum |f_k|^2 |k|_e^(2s)); s = 1 is the default norm.
double hs_norm(const SpectralScalarField& f, double s);
double hs_norm(const SpectralVectorField& v, double s);
inline double h1_norm(const SpectralScalarField& f) { return hs_norm(f, 1.0); }
inline double h1_norm(const SpectralVectorField& v) { return hs_norm(v, 1.0); }

/// Galerkin-truncated convolution h_k = sum_{m+n=k} f_m g_n, direct summation.
/// This is the reference path; see convolution.hpp for the padded-FFT path.
SpectralScalarField product(const SpectralScalarField& f, const SpectralScalarField& g);

/// Sum over stored modes of f_k e^{i(k,x)} at a (possibly complex) point,
/// accumulated in descending |k|_m order.
Complex evaluate(const SpectralScalarField& f, const std::array<Complex, 3>& x);

/// Projects onto exactly Hermitian coefficients and sets the real flag.
SpectralScalarField enforce_reality(const SpectralScalarField& f);
SpectralVectorField enforce_reality(const SpectralVectorField& v);

struct MeanSubtracted {
    SpectralScalarField field;
    Complex mean;  // the dropped k = 0 coefficient (Galilean shift per component)
};

/// Builds a zero-mean field from raw (k, coefficient) pairs that may include
/// k = 0; the dropped mean is reported so the caller can surface the shift.
MeanSubtracted subtract_mean(const std::vector<std::pair<WaveVector, Complex>>& raw,
                             int truncation);

/// Copies f into a field of a different truncation (modes outside the new
/// cube are dropped; new modes are zero).
SpectralScalarField resize_truncation(const SpectralScalarField& f, int new_truncation);
SpectralVectorField resize_truncation(const SpectralVectorField& v, int new_truncation);

}  // namespace nstorus
