#include "ohmic/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ohmic/errors.hpp"

namespace ohmic {

void InitialAtomState::validate() const {
    if (!(rho11 >= 0.0 && rho11 <= 1.0)) throw InvalidArgument("rho11 must lie in [0, 1] (got " + std::to_string(rho11) + ")");
    // |rho10|^2 <= rho11 (1 - rho11), with a little room for rounding in callers' inputs.
    if (std::norm(rho10) > rho11 * (1.0 - rho11) + 1e-14)
        throw InvalidArgument("initial coherence violates positivity: |rho10|^2 > rho11 (1 - rho11)");
}

double DensityMatrix::hermiticity_error() const {
    return std::max({std::abs(ee.imag()), std::abs(gg.imag()), std::abs(eg - std::conj(ge))});
}

std::array<double, 2> DensityMatrix::eigenvalues() const {
    const double a = ee.real();
    const double d = gg.real();
    const cplx b = 0.5 * (eg + std::conj(ge));
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    return {mean - radius, mean + radius};
}

double RateSeries::lamb_at(std::size_t k) const {
    if (masked.at(k)) throw AmplitudeUnderflow(k, grid[k]);
    return lamb[k];
}

double RateSeries::gamma_at(std::size_t k) const {
    if (masked.at(k)) throw AmplitudeUnderflow(k, grid[k]);
    return gamma[k];
}

AmplitudeTrajectory amplitude(const SystemSpec& sys, const ReservoirSpec& r, const TimeGrid& grid, RateModel model) {
    sys.validate();
    r.validate();
    const RateModel used = resolve_rate_model(r, model);
    const auto lower = rate_history(sys.omega1(), grid, r, used);
    const auto upper = rate_history(sys.omega2(), grid, r, used);

    const std::size_t n = grid.size();
    AmplitudeTrajectory traj{grid, used, {}, {}, lower.beta, upper.beta, lower.gamma, upper.gamma, {}};
    traj.p.resize(n);
    traj.p_dot.resize(n);
    traj.pop.resize(n);

    const std::array<double, 2> omega = {sys.omega1(), sys.omega2()};
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid[k];
        const std::array<double, 2> beta = {traj.beta1[k], traj.beta2[k]};
        const std::array<double, 2> gamma = {traj.gamma1[k], traj.gamma2[k]};
        cplx p{};
        cplx p_dot{};
        for (std::size_t j = 0; j < 2; ++j) {
            const cplx term = 0.5 * std::exp(cplx(-beta[j] / 4.0, -omega[j] * t));
            p += term;
            p_dot += cplx(-gamma[j] / 4.0, -omega[j]) * term;
        }
        if (k == 0) p = 1.0;
        traj.p[k] = p;
        traj.p_dot[k] = p_dot;
        traj.pop[k] = std::norm(p);
    }
    return traj;
}

DensityMatrix atom_state_at(const AmplitudeTrajectory& traj, const InitialAtomState& init, std::size_t k) {
    const cplx p = traj.p.at(k);
    const double pop = traj.pop[k];
    const cplx coherence = p * init.rho10;
    return {pop * init.rho11, coherence, std::conj(coherence), 1.0 - pop * init.rho11};
}

AtomStateSeries atom_state(const AmplitudeTrajectory& traj, const InitialAtomState& init) {
    init.validate();
    AtomStateSeries out{traj.grid, {}};
    out.rho.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) out.rho.push_back(atom_state_at(traj, init, k));
    return out;
}

RateSeries rate_series(const AmplitudeTrajectory& traj) {
    const std::size_t n = traj.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    RateSeries out{traj.grid, std::vector<double>(n, nan), std::vector<double>(n, nan), std::vector<bool>(n, false)};
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(traj.p[k]) <= kAmplitudeFloor) {
            out.masked[k] = true;
            continue;
        }
        const cplx ratio = traj.p_dot[k] / traj.p[k];
        out.lamb[k] = -2.0 * ratio.imag();
        out.gamma[k] = -2.0 * ratio.real();
    }
    return out;
}

}  // namespace ohmic
