#pragma once

#include <memory>

#include "nstorus/spectral_field.hpp"

namespace nstorus {

enum class ConvolutionPath { direct, padded_transform };

/// Truncated convolution with a selectable backend.
///
/// direct          -- O(N^6) summation, the correctness reference.
/// padded_transform -- zero-padded complex FFTs on a grid of >= 3N+1 points
///                    per axis, alias-free for all retained modes.
///
/// A Convolver owns FFT plans and scratch buffers for one truncation; it is
/// not thread-safe, but independent instances may run concurrently.
class Convolver {
  public:
    explicit Convolver(int truncation, ConvolutionPath path = ConvolutionPath::padded_transform);
    ~Convolver();

    Convolver(Convolver&&) noexcept;
    Convolver& operator=(Convolver&&) noexcept;
    Convolver(const Convolver&) = delete;
    Convolver& operator=(const Convolver&) = delete;

    int truncation() const noexcept;
    ConvolutionPath path() const noexcept;

    SpectralScalarField product(const SpectralScalarField& f,
                                const SpectralScalarField& g) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Smallest grid size >= 3N+1 whose prime factors are all in {2,3,5}.
int padded_grid_size(int truncation);

}  // namespace nstorus
