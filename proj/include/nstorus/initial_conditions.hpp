#pragma once

#include <cstdint>

#include "nstorus/spectral_field.hpp"

namespace nstorus {

/// Taylor-Green vortex
///   v = A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0),
/// eight active modes s in {-1,1}^3 with v^1_s = -i A s1 / 8 and
/// v^2_s = i A s2 / 8. Exactly solenoidal in floating point.
SpectralVectorField taylor_green(double amplitude, int truncation = 2);

/// Unidirectional shear v = (0, A cos x1, 0). A steady eigenmode of the
/// nonlinearity-free dynamics: the quadratic term vanishes identically, so
/// the exact solution is e^{-nu t} times the initial data.
SpectralVectorField shear_flow(double amplitude, int truncation = 2);

/// Random solenoidal field with Hermitian symmetry and prescribed H1 norm.
/// Every mode 0 < |k|_max <= truncation carries an isotropic complex
/// Gaussian draw projected onto the divergence-free subspace; the result is
/// rescaled to target_h1. Deterministic in (seed, truncation).
SpectralVectorField random_solenoidal(std::uint64_t seed, double target_h1, int truncation);

/// Scalar analogue: random Hermitian-symmetric field rescaled to target_h1.
SpectralScalarField random_hermitian_scalar(std::uint64_t seed, double target_h1, int truncation);

}  // namespace nstorus
