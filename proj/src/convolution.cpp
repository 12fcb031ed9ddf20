#include "nstorus/convolution.hpp"

#include <fftw3.h>

#include <stdexcept>
#include <vector>

namespace nstorus {

int padded_grid_size(int truncation) {
    int m = 3 * truncation + 1;
    for (;; ++m) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

struct Convolver::Impl {
    int truncation;
    ConvolutionPath path;
    int grid = 0;  // padded grid points per axis
    fftw_complex* buf_a = nullptr;
    fftw_complex* buf_b = nullptr;
    fftw_plan to_phys = nullptr;   // coefficients -> grid values (e^{+i(k,x)})
    fftw_plan to_modes = nullptr;  // grid values -> coefficients, unnormalized

    Impl(int N, ConvolutionPath p) : truncation(N), path(p) {
        if (p != ConvolutionPath::padded_transform) return;
        grid = padded_grid_size(N);
        const std::size_t total = static_cast<std::size_t>(grid) * grid * grid;
        buf_a = fftw_alloc_complex(total);
        buf_b = fftw_alloc_complex(total);
        // FFTW's FORWARD is e^{-i}; our synthesis convention is e^{+i}, so the
        // plans are swapped relative to FFTW naming.
        to_phys = fftw_plan_dft_3d(grid, grid, grid, buf_a, buf_a, FFTW_BACKWARD, FFTW_ESTIMATE);
        to_modes = fftw_plan_dft_3d(grid, grid, grid, buf_a, buf_a, FFTW_FORWARD, FFTW_ESTIMATE);
    }

    ~Impl() {
        if (to_phys) fftw_destroy_plan(to_phys);
        if (to_modes) fftw_destroy_plan(to_modes);
        if (buf_a) fftw_free(buf_a);
        if (buf_b) fftw_free(buf_b);
    }

    std::size_t grid_index(const WaveVector& k) const {
        auto wrap = [this](int c) { return static_cast<std::size_t>((c % grid + grid) % grid); };
        return (wrap(k.k1) * grid + wrap(k.k2)) * grid + wrap(k.k3);
    }

    void scatter(const SpectralScalarField& f, fftw_complex* buf) const {
        const std::size_t total = static_cast<std::size_t>(grid) * grid * grid;
        for (std::size_t i = 0; i < total; ++i) buf[i][0] = buf[i][1] = 0.0;
        f.for_each_nonzero([&](const WaveVector& k, Complex c) {
            const std::size_t g = grid_index(k);
            buf[g][0] = c.real();
            buf[g][1] = c.imag();
        });
    }

    SpectralScalarField padded_product(const SpectralScalarField& f,
                                       const SpectralScalarField& g) {
        const std::size_t total = static_cast<std::size_t>(grid) * grid * grid;

        scatter(f, buf_a);
        fftw_execute_dft(to_phys, buf_a, buf_a);
        std::swap(buf_a, buf_b);

        scatter(g, buf_a);
        fftw_execute_dft(to_phys, buf_a, buf_a);

        const double scale = 1.0 / static_cast<double>(total);
        for (std::size_t i = 0; i < total; ++i) {
            const double ar = buf_a[i][0], ai = buf_a[i][1];
            const double br = buf_b[i][0], bi = buf_b[i][1];
            buf_a[i][0] = (ar * br - ai * bi) * scale;
            buf_a[i][1] = (ar * bi + ai * br) * scale;
        }
        fftw_execute_dft(to_modes, buf_a, buf_a);

        SpectralScalarField out(truncation);
        auto coeffs = out.data();
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const WaveVector k = out.mode_at(i);
            if (k.is_zero()) continue;
            const std::size_t g = grid_index(k);
            coeffs[i] = Complex{buf_a[g][0], buf_a[g][1]};
        }
        return out;
    }
};

Convolver::Convolver(int truncation, ConvolutionPath path)
    : impl_(std::make_unique<Impl>(truncation, path)) {}

Convolver::~Convolver() = default;
Convolver::Convolver(Convolver&&) noexcept = default;
Convolver& Convolver::operator=(Convolver&&) noexcept = default;

int Convolver::truncation() const noexcept { return impl_->truncation; }
ConvolutionPath Convolver::path() const noexcept { return impl_->path; }

SpectralScalarField Convolver::product(const SpectralScalarField& f,
                                       const SpectralScalarField& g) const {
    if (f.truncation() != impl_->truncation || g.truncation() != impl_->truncation)
        throw std::invalid_argument("Convolver truncation mismatch");
    if (impl_->path == ConvolutionPath::direct) return nstorus::product(f, g);
    return impl_->padded_product(f, g);
}

}  // namespace nstorus
