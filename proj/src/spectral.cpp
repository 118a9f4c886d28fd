#include "ohmic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ohmic/errors.hpp"

namespace ohmic {

namespace {

bool is_close(double a, double b) { return std::abs(a - b) <= 1e-12; }

// sin(x t) / x, with the removable singularity at x = 0 handled by the
// series of t*sinc(x t).
double sin_over(double x, double t) {
    const double u = x * t;
    if (std::abs(u) < 1e-4) return t * (1.0 - u * u / 6.0);
    return std::sin(u) / x;
}

// Panel width for an integrand oscillating like exp(i w t).
double phase_panel(double frequency) {
    return 0.5 * std::numbers::pi / std::max(std::abs(frequency), 1.0);
}

}  // namespace

void ReservoirSpec::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("s must be > 0 (got " + std::to_string(s) + ")");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be >= 0 (got " + std::to_string(eta) + ")");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw InvalidArgument("omega_c must be > 0 (got " + std::to_string(omega_c) + ")");
}

Ohmicity ReservoirSpec::kind() const noexcept {
    if (s < 1.0) return Ohmicity::sub_ohmic;
    if (s > 1.0) return Ohmicity::super_ohmic;
    return Ohmicity::ohmic;
}

double ReservoirSpec::relaxation_time() const noexcept {
    return eta > 0.0 ? 1.0 / eta : std::numeric_limits<double>::infinity();
}

bool ReservoirSpec::has_closed_form() const noexcept {
    return is_close(s, 0.5) || is_close(s, 1.0) || is_close(s, 3.0);
}

void SystemSpec::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw InvalidArgument("omega0 must be > 0 (got " + std::to_string(omega0) + ")");
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
        throw InvalidArgument("coupling must be >= 0 (got " + std::to_string(coupling) + ")");
}

TimeGrid::TimeGrid(double t_max, std::size_t n_steps) : t_max_(t_max), n_(n_steps), dt_(0.0) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw InvalidArgument("t_max must be > 0 (got " + std::to_string(t_max) + ")");
    if (n_steps < 2) throw InvalidArgument("n_steps must be >= 2 (got " + std::to_string(n_steps) + ")");
    dt_ = t_max / static_cast<double>(n_steps - 1);
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = (*this)[k];
    return out;
}

RateModel resolve_rate_model(const ReservoirSpec& r, RateModel requested) noexcept {
    if (requested == RateModel::closed_form && !r.has_closed_form()) return RateModel::exact;
    return requested;
}

double spectral_density(double omega, const ReservoirSpec& r) {
    if (omega < 0.0) throw DomainError("spectral density undefined for omega < 0 (got " + std::to_string(omega) + ")");
    if (omega == 0.0) return 0.0;
    return r.eta * std::pow(omega, r.s) * std::pow(r.omega_c, 1.0 - r.s) * std::exp(-omega / r.omega_c);
}

std::complex<double> correlation_function(double tau, const ReservoirSpec& r) {
    // eta wc^(1-s) Gamma(s+1) (1/wc + i tau)^-(s+1), rescaled to keep the base O(1).
    const std::complex<double> base(1.0, r.omega_c * tau);
    return r.eta * r.omega_c * r.omega_c * std::tgamma(r.s + 1.0) * std::pow(base, -(r.s + 1.0));
}

double decay_rate_closed(double omega_j, double t, const ReservoirSpec& r) {
    if (!r.has_closed_form()) throw UnsupportedExponent(r.s);
    if (t < 0.0) throw DomainError("decay rate needs t >= 0");
    const double wc = r.omega_c;
    const double eta = r.eta;
    const double alpha = std::atan(wc * t);
    const double q = 1.0 + wc * wc * t * t;
    const double phase = omega_j * t;

    if (is_close(r.s, 0.5)) {
        return -2.0 * eta * wc * std::sqrt(std::numbers::pi) / std::pow(q, 0.25) * std::sin(phase - 0.5 * alpha);
    }
    if (is_close(r.s, 1.0)) {
        return -2.0 * eta * wc / std::sqrt(q) * std::sin(phase - alpha);
    }
    // s = 3. The last coefficient is 4 eta wc: it is the w^2 moment of the
    // cutoff, and it is what makes the form agree with the integral at w_j = 0.
    return -2.0 * eta * omega_j * omega_j / (wc * std::sqrt(q)) * std::sin(phase - alpha) -
           2.0 * eta * omega_j / q * std::sin(phase - 2.0 * alpha) -
           4.0 * eta * wc / (q * std::sqrt(q)) * std::sin(phase - 3.0 * alpha);
}

QuadResult<double> decay_rate_quadrature(double omega_j, double t, const ReservoirSpec& r, const QuadOptions& opt) {
    r.validate();
    if (t < 0.0) throw DomainError("decay rate needs t >= 0");
    if (t == 0.0 || r.eta == 0.0) return {};
    const double omega_max = r.omega_c * std::max(50.0, 10.0 * r.s);
    auto integrand = [&](double w) { return 2.0 * spectral_density(w, r) * sin_over(omega_j - w, t); };
    return integrate_panels(integrand, 0.0, omega_max, 0.5 * std::numbers::pi / t, opt);
}

double decay_rate_exact(double omega_j, double t, const ReservoirSpec& r) {
    if (t < 0.0) throw DomainError("decay rate needs t >= 0");
    if (t == 0.0 || r.eta == 0.0) return 0.0;
    auto kernel = [&](double tau) { return std::exp(std::complex<double>(0.0, omega_j * tau)) * correlation_function(tau, r); };
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    return 2.0 * integrate_panels(kernel, 0.0, t, phase_panel(omega_j), opt).value.real();
}

double decay_rate(double omega_j, double t, const ReservoirSpec& r, RateModel model) {
    switch (resolve_rate_model(r, model)) {
        case RateModel::closed_form:
            return decay_rate_closed(omega_j, t, r);
        case RateModel::exact:
            break;
    }
    return decay_rate_exact(omega_j, t, r);
}

RateHistory rate_history(double omega_j, const TimeGrid& grid, const ReservoirSpec& r, RateModel model) {
    r.validate();
    const std::size_t n = grid.size();
    RateHistory out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (r.eta == 0.0) return out;

    QuadOptions opt;
    opt.abs_tol = 1e-16;
    opt.rel_tol = 1e-13;
    const double panel = phase_panel(omega_j);

    if (resolve_rate_model(r, model) == RateModel::closed_form) {
        auto rate = [&](double t) { return decay_rate_closed(omega_j, t, r); };
        for (std::size_t k = 1; k < n; ++k) {
            out.gamma[k] = rate(grid[k]);
            out.beta[k] = out.beta[k - 1] + integrate_panels(rate, grid[k - 1], grid[k], panel, opt).value;
        }
        return out;
    }

    // gamma(t) = 2 Re G(t) with G' = K; on [a, b]:
    //   G(b)  = G(a) + int_a^b K
    //   beta(b) = beta(a) + (b - a) gamma(a) + 2 Re int_a^b (b - tau) K(tau) dtau
    auto kernel = [&](double tau) { return std::exp(std::complex<double>(0.0, omega_j * tau)) * correlation_function(tau, r); };
    std::complex<double> accumulated{};
    for (std::size_t k = 1; k < n; ++k) {
        const double a = grid[k - 1];
        const double b = grid[k];
        const auto step = integrate_panels(kernel, a, b, panel, opt).value;
        const auto weighted = integrate_panels([&](double tau) { return (b - tau) * kernel(tau); }, a, b, panel, opt).value;
        out.beta[k] = out.beta[k - 1] + (b - a) * out.gamma[k - 1] + 2.0 * weighted.real();
        accumulated += step;
        out.gamma[k] = 2.0 * accumulated.real();
    }
    return out;
}

std::vector<double> beta_series(double omega_j, const TimeGrid& grid, const ReservoirSpec& r, RateModel model) {
    return rate_history(omega_j, grid, r, model).beta;
}

}  // namespace ohmic
