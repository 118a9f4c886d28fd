#pragma once

// Ohmic-family reservoir: spectral density and the time-dependent decay
// rates of the two dressed-state transitions at zero temperature.
//
// Units: the atomic frequency is the frequency unit; times are in its inverse.

#include <complex>
#include <cstddef>
#include <vector>

#include "ohmic/quadrature.hpp"

namespace ohmic {

enum class Ohmicity { sub_ohmic, ohmic, super_ohmic };

struct ReservoirSpec {
    double s = 1.0;        ///< Ohmicity exponent, > 0
    double eta = 0.1;      ///< dimensionless coupling, >= 0
    double omega_c = 2.0;  ///< cutoff frequency, > 0

    /// Throws InvalidArgument naming the offending field.
    void validate() const;

    Ohmicity kind() const noexcept;
    /// Reservoir memory time, ~1/omega_c.
    double correlation_time() const noexcept { return 1.0 / omega_c; }
    /// Markovian relaxation time, ~1/eta (infinite for a decoupled reservoir).
    double relaxation_time() const noexcept;
    /// True for the exponents with a closed-form rate (1/2, 1, 3).
    bool has_closed_form() const noexcept;
};

/// Atom plus single cavity mode in the one-excitation sector.
struct SystemSpec {
    double omega0 = 1.0;    ///< atomic transition frequency, > 0
    double coupling = 0.0;  ///< atom-cavity coupling, >= 0

    void validate() const;

    /// Transition frequency |phi_{1,-}> <-> |phi_0>; negative when coupling > omega0.
    double omega1() const noexcept { return omega0 - coupling; }
    /// Transition frequency |phi_{1,+}> <-> |phi_0>.
    double omega2() const noexcept { return omega0 + coupling; }

    double ground_energy() const noexcept { return -0.5 * omega0; }
    double lower_dressed_energy() const noexcept { return 0.5 * omega0 - coupling; }
    double upper_dressed_energy() const noexcept { return 0.5 * omega0 + coupling; }
};

/// Uniform sample grid on [0, t_max] with n_steps points (both ends included).
class TimeGrid {
public:
    TimeGrid(double t_max, std::size_t n_steps);

    std::size_t size() const noexcept { return n_; }
    double t_max() const noexcept { return t_max_; }
    double dt() const noexcept { return dt_; }
    double operator[](std::size_t k) const noexcept {
        return k + 1 == n_ ? t_max_ : dt_ * static_cast<double>(k);
    }
    std::vector<double> samples() const;
    /// Same horizon with twice the resolution (2n - 1 points, old points kept).
    TimeGrid refined() const { return TimeGrid(t_max_, 2 * n_ - 1); }

private:
    double t_max_;
    std::size_t n_;
    double dt_;
};

enum class RateModel {
    /// The full frequency integral over [0, inf), evaluated through the
    /// reservoir correlation function. Valid for any s > 0.
    exact,
    /// Closed forms for s in {1/2, 1, 3}. They keep only the polynomial part
    /// of J(w)/(w_j - w) and drop the remainder that carries the pole, so they
    /// coincide with the exact rate at w_j = 0 only.
    closed_form,
};

/// closed_form silently degrades to exact when s has no closed form.
RateModel resolve_rate_model(const ReservoirSpec& r, RateModel requested) noexcept;

/// J(w) = eta w^s wc^(1-s) exp(-w/wc). Throws DomainError for w < 0.
double spectral_density(double omega, const ReservoirSpec& r);

/// Reservoir correlation function C(tau) = int_0^inf J(w) exp(-i w tau) dw.
std::complex<double> correlation_function(double tau, const ReservoirSpec& r);

/// Closed-form rate for s in {1/2, 1, 3}; throws UnsupportedExponent otherwise.
double decay_rate_closed(double omega_j, double t, const ReservoirSpec& r);

/// gamma(w_j, t) = 2 int_0^wmax J(w) sin((w_j - w) t)/(w_j - w) dw by
/// panel-wise adaptive quadrature. wmax = wc * max(50, 10 s).
QuadResult<double> decay_rate_quadrature(double omega_j, double t, const ReservoirSpec& r,
                                         const QuadOptions& opt = {});

/// gamma(w_j, t) = 2 Re int_0^t exp(i w_j tau) C(tau) dtau, the same integral
/// as decay_rate_quadrature with the frequency integral done first.
double decay_rate_exact(double omega_j, double t, const ReservoirSpec& r);

/// Rate under the requested model (after resolve_rate_model).
double decay_rate(double omega_j, double t, const ReservoirSpec& r, RateModel model);

/// gamma(w_j, t_k) and beta_j(t_k) = int_0^{t_k} gamma dt' on a grid.
struct RateHistory {
    std::vector<double> gamma;
    std::vector<double> beta;
};

/// Integrals are accumulated interval by interval with adaptive
/// Gauss-Kronrod, so values do not depend on the grid resolution.
RateHistory rate_history(double omega_j, const TimeGrid& grid, const ReservoirSpec& r,
                         RateModel model = RateModel::exact);

/// beta_j on the grid; beta_j(0) = 0.
std::vector<double> beta_series(double omega_j, const TimeGrid& grid, const ReservoirSpec& r,
                                RateModel model = RateModel::exact);

}  // namespace ohmic
