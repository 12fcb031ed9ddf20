#include "nstorus/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nstorus {

SpectralScalarField::SpectralScalarField(int truncation, bool real_flagged)
    : truncation_(truncation), real_flagged_(real_flagged) {
    if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
    const std::size_t side = static_cast<std::size_t>(2 * truncation + 1);
    coeffs_.assign(side * side * side, Complex{0.0, 0.0});
}

std::size_t SpectralScalarField::index_of(const WaveVector& k) const noexcept {
    const std::size_t s = static_cast<std::size_t>(side());
    return (static_cast<std::size_t>(k.k1 + truncation_) * s +
            static_cast<std::size_t>(k.k2 + truncation_)) *
               s +
           static_cast<std::size_t>(k.k3 + truncation_);
}

WaveVector SpectralScalarField::mode_at(std::size_t index) const noexcept {
    const int s = side();
    const int k3 = static_cast<int>(index % s) - truncation_;
    index /= s;
    const int k2 = static_cast<int>(index % s) - truncation_;
    const int k1 = static_cast<int>(index / s) - truncation_;
    return {k1, k2, k3};
}

Complex SpectralScalarField::coeff(const WaveVector& k) const noexcept {
    if (k.is_zero() || !in_range(k)) return {0.0, 0.0};
    return coeffs_[index_of(k)];
}

void SpectralScalarField::set_coeff(const WaveVector& k, Complex value) {
    if (k.is_zero()) throw std::invalid_argument("no coefficient stored at k = 0");
    if (!in_range(k)) throw std::invalid_argument("mode outside truncation cube");
    coeffs_[index_of(k)] = value;
}

void SpectralScalarField::add_coeff(const WaveVector& k, Complex value) {
    if (k.is_zero()) throw std::invalid_argument("no coefficient stored at k = 0");
    if (!in_range(k)) throw std::invalid_argument("mode outside truncation cube");
    coeffs_[index_of(k)] += value;
}

std::size_t SpectralScalarField::nonzero_count() const noexcept {
    std::size_t n = 0;
    for (const Complex& c : coeffs_)
        if (c != Complex{0.0, 0.0}) ++n;
    return n;
}

SpectralScalarField& SpectralScalarField::operator+=(const SpectralScalarField& other) {
    if (other.truncation_ != truncation_)
        throw std::invalid_argument("truncation mismatch in field sum");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    real_flagged_ = real_flagged_ && other.real_flagged_;
    return *this;
}

SpectralScalarField& SpectralScalarField::operator-=(const SpectralScalarField& other) {
    if (other.truncation_ != truncation_)
        throw std::invalid_argument("truncation mismatch in field difference");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    real_flagged_ = real_flagged_ && other.real_flagged_;
    return *this;
}

SpectralScalarField& SpectralScalarField::operator*=(double scale) {
    for (Complex& c : coeffs_) c *= scale;
    return *this;
}

SpectralVectorField::SpectralVectorField(int truncation, bool real_flagged) {
    components_.reserve(3);
    for (int j = 0; j < 3; ++j) components_.emplace_back(truncation, real_flagged);
}

SpectralVectorField::SpectralVectorField(SpectralScalarField c1, SpectralScalarField c2,
                                         SpectralScalarField c3) {
    if (c1.truncation() != c2.truncation() || c1.truncation() != c3.truncation())
        throw std::invalid_argument("vector field components must share one truncation");
    components_.reserve(3);
    components_.push_back(std::move(c1));
    components_.push_back(std::move(c2));
    components_.push_back(std::move(c3));
}

bool SpectralVectorField::real_flagged() const noexcept {
    return components_[0].real_flagged() && components_[1].real_flagged() &&
           components_[2].real_flagged();
}

void SpectralVectorField::set_real_flagged(bool flagged) noexcept {
    for (auto& c : components_) c.set_real_flagged(flagged);
}

double SpectralVectorField::max_divergence() const noexcept {
    double worst = 0.0;
    const auto d1 = components_[0].data();
    const auto d2 = components_[1].data();
    const auto d3 = components_[2].data();
    for (std::size_t i = 0; i < d1.size(); ++i) {
        WaveVector k = components_[0].mode_at(i);
        if (k.is_zero()) continue;
        const Complex div = static_cast<double>(k.k1) * d1[i] +
                            static_cast<double>(k.k2) * d2[i] +
                            static_cast<double>(k.k3) * d3[i];
        worst = std::max(worst, std::abs(div));
    }
    return worst;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
    for (int j = 0; j < 3; ++j) components_[j] += other.components_[j];
    return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
    for (int j = 0; j < 3; ++j) components_[j] -= other.components_[j];
    return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double scale) {
    for (auto& c : components_) c *= scale;
    return *this;
}

double hs_norm(const SpectralScalarField& f, double s) {
    double sum = 0.0;
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        sum += std::norm(c) * std::pow(static_cast<double>(k.norm_e2()), s);
    });
    return std::sqrt(sum);
}

double hs_norm(const SpectralVectorField& v, double s) {
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double n = hs_norm(v.component(j), s);
        sum += n * n;
    }
    return std::sqrt(sum);
}

SpectralScalarField product(const SpectralScalarField& f, const SpectralScalarField& g) {
    if (f.truncation() != g.truncation())
        throw std::invalid_argument("product requires equal truncation");
    const int N = f.truncation();
    SpectralScalarField h(N);

    // Direct summation over nonzero pairs; the k = 0 output mass is discarded.
    std::vector<std::pair<WaveVector, Complex>> fm, gn;
    fm.reserve(f.nonzero_count());
    gn.reserve(g.nonzero_count());
    f.for_each_nonzero([&](const WaveVector& k, Complex c) { fm.emplace_back(k, c); });
    g.for_each_nonzero([&](const WaveVector& k, Complex c) { gn.emplace_back(k, c); });

    auto out = h.data();
    for (const auto& [m, fc] : fm) {
        for (const auto& [n, gc] : gn) {
            const WaveVector k = m + n;
            if (k.is_zero() || k.norm_max() > N) continue;
            out[h.index_of(k)] += fc * gc;
        }
    }
    return h;
}

Complex evaluate(const SpectralScalarField& f, const std::array<Complex, 3>& x) {
    struct Term {
        int norm_max;
        std::size_t index;
        Complex value;
    };
    std::vector<Term> terms;
    terms.reserve(f.nonzero_count());
    std::size_t idx = 0;
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        const Complex phase =
            Complex{0.0, 1.0} * (static_cast<double>(k.k1) * x[0] +
                                 static_cast<double>(k.k2) * x[1] +
                                 static_cast<double>(k.k3) * x[2]);
        terms.push_back({k.norm_max(), idx++, c * std::exp(phase)});
    });
    // Descending |k|_m, ties broken by insertion order to stay deterministic.
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.norm_max > b.norm_max;
    });
    Complex sum{0.0, 0.0};
    for (const Term& t : terms) sum += t.value;
    return sum;
}

SpectralScalarField enforce_reality(const SpectralScalarField& f) {
    SpectralScalarField out(f.truncation());
    const int N = f.truncation();
    for (int k1 = -N; k1 <= N; ++k1)
        for (int k2 = -N; k2 <= N; ++k2)
            for (int k3 = -N; k3 <= N; ++k3) {
                const WaveVector k{k1, k2, k3};
                if (k.is_zero() || k < -k) continue;  // each +-pair handled once
                const Complex avg = 0.5 * (f.coeff(k) + std::conj(f.coeff(-k)));
                out.set_coeff(k, avg);
                out.set_coeff(-k, std::conj(avg));
            }
    out.set_real_flagged(true);
    return out;
}

SpectralVectorField enforce_reality(const SpectralVectorField& v) {
    SpectralVectorField out(enforce_reality(v.component(0)), enforce_reality(v.component(1)),
                            enforce_reality(v.component(2)));
    out.set_solenoidal_checked(v.solenoidal_checked());
    return out;
}

MeanSubtracted subtract_mean(const std::vector<std::pair<WaveVector, Complex>>& raw,
                             int truncation) {
    SpectralScalarField field(truncation);
    Complex mean{0.0, 0.0};
    for (const auto& [k, c] : raw) {
        if (k.is_zero()) {
            mean += c;
        } else if (k.norm_max() <= truncation) {
            field.add_coeff(k, c);
        }
    }
    return {std::move(field), mean};
}

SpectralScalarField resize_truncation(const SpectralScalarField& f, int new_truncation) {
    SpectralScalarField out(new_truncation, f.real_flagged());
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        if (k.norm_max() <= new_truncation) out.set_coeff(k, c);
    });
    return out;
}

SpectralVectorField resize_truncation(const SpectralVectorField& v, int new_truncation) {
    SpectralVectorField out(resize_truncation(v.component(0), new_truncation),
                            resize_truncation(v.component(1), new_truncation),
                            resize_truncation(v.component(2), new_truncation));
    out.set_solenoidal_checked(v.solenoidal_checked());
    return out;
}

}  // namespace nstorus
