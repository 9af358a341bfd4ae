#pragma once

#include "specreg/schemes.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace specreg {

/// Eigenvalues t_1 >= t_2 >= ... >= t_J > 0 of A = T*T, truncated to J terms.
class Spectrum {
public:
    /// Validates positivity and non-increasing order; throws std::invalid_argument.
    explicit Spectrum(std::vector<double> eigenvalues);

    /// t_j = j^(-2a), j = 1..J. Requires a > 1/2 (finite trace).
    static Spectrum power(double a, std::size_t J);

    [[nodiscard]] std::span<const double> values() const noexcept { return t_; }
    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return t_[j]; }
    [[nodiscard]] double trace() const noexcept { return trace_; }
    /// Operator norm ||A|| = t_1.
    [[nodiscard]] double norm() const noexcept { return t_.front(); }
    [[nodiscard]] double smallest() const noexcept { return t_.back(); }

private:
    std::vector<double> t_;
    double trace_ = 0.0;
};

/// Coefficients of an element of X in the eigenbasis of A.
class SpectralVector {
public:
    SpectralVector() = default;
    explicit SpectralVector(std::vector<double> c) : c_(std::move(c)) {}
    static SpectralVector zeros(std::size_t n) { return SpectralVector(std::vector<double>(n, 0.0)); }

    [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return c_[j]; }
    double& operator[](std::size_t j) { return c_[j]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return c_; }
    [[nodiscard]] const std::vector<double>& vec() const noexcept { return c_; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] double norm_sq() const;

    friend SpectralVector operator-(const SpectralVector& a, const SpectralVector& b);
    friend SpectralVector operator+(const SpectralVector& a, const SpectralVector& b);
    friend SpectralVector operator*(double s, const SpectralVector& v);
    friend bool operator==(const SpectralVector&, const SpectralVector&) = default;

private:
    std::vector<double> c_;
};

/// Throws PairingError unless v has one coefficient per eigenvalue.
void require_paired(const Spectrum& spectrum, const SpectralVector& v, const char* what);

/// Symmetrized problem z = A x_dag + delta zeta in sequence space.
struct ProblemInstance {
    Spectrum spectrum;
    SpectralVector x_dag;
    SpectralVector x0;
    double delta;

    ProblemInstance(Spectrum s, SpectralVector xd, SpectralVector x0_, double d);

    /// Noise-free data z = A x_dag.
    [[nodiscard]] SpectralVector exact_data() const;
    /// z^delta = A x_dag + delta zeta.
    [[nodiscard]] SpectralVector noisy_data(const SpectralVector& zeta) const;
    /// x_dag - x0.
    [[nodiscard]] SpectralVector initial_error() const { return x_dag - x0; }
};

/// N(lambda) = sum_j t_j / (t_j + lambda).
double effective_dimension(const Spectrum& spectrum, double lambda);

/// rho_N(t) = 1 / sqrt(t N(t)).
double rho_n(const Spectrum& spectrum, double t);

/// Theta(t) = t rho_N(t) = sqrt(t / N(t)); strictly increasing.
double theta_rho_n(const Spectrum& spectrum, double t);

struct Bracket {
    double lo;
    double hi;
};

inline constexpr double kThetaInverseRtol = 1e-10;

/// Solves Theta(t) = target for t in the bracket by geometric bisection.
/// Throws std::range_error if target is outside [Theta(lo), Theta(hi)].
double invert_theta(const Spectrum& spectrum, double target, Bracket bracket);

/// Generic monotone inversion used for Theta-like functions. f must be increasing on the bracket.
double invert_increasing(const std::function<double(double)>& f, double target, Bracket bracket,
                         double rtol = kThetaInverseRtol);

/// (f(t_j) v_j)_j.
SpectralVector spectral_apply(const std::function<double(double)>& f, const Spectrum& spectrum,
                              const SpectralVector& v);

/// ||E_alpha v||^2 = sum over t_j <= alpha of v_j^2.
double projector_norm_sq(const Spectrum& spectrum, const SpectralVector& v, double alpha);

/// x_alpha^delta = x0 - g_alpha(A)(A x0 - z_delta).
SpectralVector reconstruct(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                           const SpectralVector& z_delta);

/// ||r_alpha(A)(x_dag - x0)|| = ||x_dag - x_alpha||.
double bias_norm(const ProblemInstance& instance, const Scheme& scheme, double alpha);

}  // namespace specreg
