#pragma once

#include <cmath>
#include <compare>
#include <cstdlib>

namespace nstorus {

/// Lattice point k in Z^3. The zero vector is a legal value (it shows up in
/// raw input data before mean subtraction) but never indexes a stored
/// spectral coefficient.
struct WaveVector {
    int k1 = 0;
    int k2 = 0;
    int k3 = 0;

    constexpr bool is_zero() const noexcept { return k1 == 0 && k2 == 0 && k3 == 0; }

    constexpr int norm_l1() const noexcept { return std::abs(k1) + std::abs(k2) + std::abs(k3); }
    constexpr int norm_max() const noexcept {
        int m = std::abs(k1);
        if (std::abs(k2) > m) m = std::abs(k2);
        if (std::abs(k3) > m) m = std::abs(k3);
        return m;
    }
    /// |k|_e^2 as an exact integer.
    constexpr long long norm_e2() const noexcept {
        return static_cast<long long>(k1) * k1 + static_cast<long long>(k2) * k2 +
               static_cast<long long>(k3) * k3;
    }
    double norm_e() const noexcept { return std::sqrt(static_cast<double>(norm_e2())); }

    constexpr int component(int j) const {
        return j == 0 ? k1 : (j == 1 ? k2 : k3);
    }

    constexpr WaveVector operator-() const noexcept { return {-k1, -k2, -k3}; }
    constexpr WaveVector operator+(const WaveVector& o) const noexcept {
        return {k1 + o.k1, k2 + o.k2, k3 + o.k3};
    }
    constexpr WaveVector operator-(const WaveVector& o) const noexcept {
        return {k1 - o.k1, k2 - o.k2, k3 - o.k3};
    }

    // Lexicographic; fixes the ordering of every mode loop and output file.
    constexpr auto operator<=>(const WaveVector&) const = default;
};

}  // namespace nstorus
