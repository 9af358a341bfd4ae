#include "specreg/spectrum.hpp"

#include "specreg/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specreg {

Spectrum::Spectrum(std::vector<double> eigenvalues) : t_(std::move(eigenvalues)) {
    if (t_.empty()) throw std::invalid_argument("spectrum: needs at least one eigenvalue");
    for (std::size_t j = 0; j < t_.size(); ++j) {
        if (!(t_[j] > 0.0) || !std::isfinite(t_[j]))
            throw std::invalid_argument("spectrum: eigenvalue " + std::to_string(j + 1) +
                                        " is not a finite positive number");
        if (j > 0 && t_[j] > t_[j - 1])
            throw std::invalid_argument("spectrum: eigenvalues must be non-increasing (index " +
                                        std::to_string(j + 1) + ")");
    }
    // smallest first for accuracy
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) trace_ += *it;
}

Spectrum Spectrum::power(double a, std::size_t J) {
    if (!(a > 0.5)) throw std::invalid_argument("power spectrum: a must exceed 1/2");
    if (J == 0) throw std::invalid_argument("power spectrum: J must be >= 1");
    std::vector<double> t(J);
    for (std::size_t j = 0; j < J; ++j) t[j] = std::pow(static_cast<double>(j + 1), -2.0 * a);
    return Spectrum(std::move(t));
}

double SpectralVector::norm_sq() const {
    double s = 0.0;
    for (double c : c_) s += c * c;
    return s;
}

double SpectralVector::norm() const { return std::sqrt(norm_sq()); }

namespace {

void require_same_size(const SpectralVector& a, const SpectralVector& b) {
    if (a.size() != b.size()) throw PairingError("spectral vectors have different lengths");
}

}  // namespace

SpectralVector operator-(const SpectralVector& a, const SpectralVector& b) {
    require_same_size(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] - b[j];
    return SpectralVector(std::move(out));
}

SpectralVector operator+(const SpectralVector& a, const SpectralVector& b) {
    require_same_size(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] + b[j];
    return SpectralVector(std::move(out));
}

SpectralVector operator*(double s, const SpectralVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = s * v[j];
    return SpectralVector(std::move(out));
}

void require_paired(const Spectrum& spectrum, const SpectralVector& v, const char* what) {
    if (v.size() != spectrum.size())
        throw PairingError(std::string(what) + ": length " + std::to_string(v.size()) +
                           " does not match spectrum size " + std::to_string(spectrum.size()));
}

ProblemInstance::ProblemInstance(Spectrum s, SpectralVector xd, SpectralVector x0_, double d)
    : spectrum(std::move(s)), x_dag(std::move(xd)), x0(std::move(x0_)), delta(d) {
    require_paired(spectrum, x_dag, "x_dag");
    require_paired(spectrum, x0, "x0");
    if (!(delta > 0.0)) throw std::domain_error("problem instance: delta must be positive");
}

SpectralVector ProblemInstance::exact_data() const {
    return spectral_apply([](double t) { return t; }, spectrum, x_dag);
}

SpectralVector ProblemInstance::noisy_data(const SpectralVector& zeta) const {
    require_paired(spectrum, zeta, "zeta");
    std::vector<double> z(spectrum.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = spectrum[j] * x_dag[j] + delta * zeta[j];
    return SpectralVector(std::move(z));
}

double effective_dimension(const Spectrum& spectrum, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("effective_dimension: lambda must be positive");
    const auto t = spectrum.values();
    double s = 0.0;
    for (std::size_t j = t.size(); j-- > 0;) s += t[j] / (t[j] + lambda);
    return s;
}

double rho_n(const Spectrum& spectrum, double t) {
    if (!(t > 0.0)) throw std::domain_error("rho_N: t must be positive");
    return 1.0 / std::sqrt(t * effective_dimension(spectrum, t));
}

double theta_rho_n(const Spectrum& spectrum, double t) {
    if (!(t > 0.0)) throw std::domain_error("Theta: t must be positive");
    return std::sqrt(t / effective_dimension(spectrum, t));
}

double invert_increasing(const std::function<double(double)>& f, double target, Bracket bracket,
                         double rtol) {
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo))
        throw std::invalid_argument("invert: bracket must satisfy 0 < lo < hi");
    double lo = bracket.lo, hi = bracket.hi;
    const double flo = f(lo), fhi = f(hi);
    const double tol = rtol * target;
    if (target < flo - tol || target > fhi + tol)
        throw std::range_error("invert: target outside the image of the bracket");
    if (std::abs(flo - target) <= tol) return lo;
    if (std::abs(fhi - target) <= tol) return hi;
    for (int it = 0; it < 2000; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double fm = f(mid);
        if (std::abs(fm - target) <= tol) return mid;
        if (fm < target)
            lo = mid;
        else
            hi = mid;
        if (hi <= lo * (1.0 + 4e-16)) return mid;
    }
    return std::sqrt(lo * hi);
}

double invert_theta(const Spectrum& spectrum, double target, Bracket bracket) {
    return invert_increasing([&spectrum](double t) { return theta_rho_n(spectrum, t); }, target,
                             bracket);
}

SpectralVector spectral_apply(const std::function<double(double)>& f, const Spectrum& spectrum,
                              const SpectralVector& v) {
    require_paired(spectrum, v, "spectral_apply");
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(spectrum[j]) * v[j];
    return SpectralVector(std::move(out));
}

double projector_norm_sq(const Spectrum& spectrum, const SpectralVector& v, double alpha) {
    require_paired(spectrum, v, "projector_norm_sq");
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (spectrum[j] <= alpha) s += v[j] * v[j];
    return s;
}

SpectralVector reconstruct(const ProblemInstance& instance, const Scheme& scheme, double alpha,
                           const SpectralVector& z_delta) {
    if (!(alpha > 0.0)) throw std::domain_error("reconstruct: alpha must be positive");
    const auto& sp = instance.spectrum;
    require_paired(sp, z_delta, "z_delta");
    std::vector<double> x(sp.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double t = sp[j];
        x[j] = instance.x0[j] - filter_g(scheme, alpha, t) * (t * instance.x0[j] - z_delta[j]);
    }
    return SpectralVector(std::move(x));
}

double bias_norm(const ProblemInstance& instance, const Scheme& scheme, double alpha) {
    const auto& sp = instance.spectrum;
    double s = 0.0;
    for (std::size_t j = 0; j < sp.size(); ++j) {
        const double e = residual_r(scheme, alpha, sp[j]) * (instance.x_dag[j] - instance.x0[j]);
        s += e * e;
    }
    return std::sqrt(s);
}

}  // namespace specreg
