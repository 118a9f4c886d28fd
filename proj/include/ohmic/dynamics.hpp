#pragma once

// Reduced dynamics of the atom: excited-state amplitude p(t), the atomic
// density matrix, and the rates of the equivalent time-local master equation
//
//   d rho/dt = -i/2 S(t) [s+ s-, rho] + Gamma(t) (s- rho s+ - 1/2 {s+ s-, rho}).

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "ohmic/spectral.hpp"

namespace ohmic {

using cplx = std::complex<double>;

/// |p| at or below this floor masks S and Gamma (they diverge at Rabi zeros).
inline constexpr double kAmplitudeFloor = 1e-8;

/// Atomic state at t = 0; rho00 = 1 - rho11 and rho01 = conj(rho10) are implied.
struct InitialAtomState {
    double rho11 = 1.0;
    cplx rho10{};

    void validate() const;

    static InitialAtomState excited() { return {1.0, {}}; }
    static InitialAtomState ground() { return {0.0, {}}; }
    /// (|e> + |g>)/sqrt 2.
    static InitialAtomState plus() { return {0.5, {0.5, 0.0}}; }
};

/// 2x2 density matrix in the basis {|e>, |g>}.
struct DensityMatrix {
    cplx ee, eg, ge, gg;

    static DensityMatrix from(const InitialAtomState& s) { return {s.rho11, s.rho10, std::conj(s.rho10), 1.0 - s.rho11}; }

    cplx trace() const { return ee + gg; }
    /// Largest |A - A^dagger| entry.
    double hermiticity_error() const;
    /// Eigenvalues of the Hermitian part, ascending.
    std::array<double, 2> eigenvalues() const;
    double min_eigenvalue() const { return eigenvalues()[0]; }
};

struct AmplitudeTrajectory {
    TimeGrid grid;
    RateModel model;          ///< rate model actually used
    std::vector<cplx> p;      ///< excited-state amplitude
    std::vector<cplx> p_dot;  ///< analytic time derivative of p
    std::vector<double> beta1, beta2;
    std::vector<double> gamma1, gamma2;  ///< gamma(w_1, t), gamma(w_2, t)
    std::vector<double> pop;             ///< |p|^2

    std::size_t size() const noexcept { return p.size(); }
    double horizon() const noexcept { return grid.t_max(); }
};

/// Time-local master-equation rates. Masked samples hold NaN.
struct RateSeries {
    TimeGrid grid;
    std::vector<double> lamb;   ///< S(t)
    std::vector<double> gamma;  ///< Gamma(t)
    std::vector<bool> masked;

    /// Throws AmplitudeUnderflow at masked samples.
    double lamb_at(std::size_t k) const;
    double gamma_at(std::size_t k) const;
};

struct AtomStateSeries {
    TimeGrid grid;
    std::vector<DensityMatrix> rho;
};

/// p(t) = 1/2 sum_j exp(-i w_j t) exp(-beta_j(t)/4).
AmplitudeTrajectory amplitude(const SystemSpec& sys, const ReservoirSpec& r, const TimeGrid& grid,
                              RateModel model = RateModel::exact);

DensityMatrix atom_state_at(const AmplitudeTrajectory& traj, const InitialAtomState& init, std::size_t k);
AtomStateSeries atom_state(const AmplitudeTrajectory& traj, const InitialAtomState& init);

/// S = -2 Im(p'/p), Gamma = -2 Re(p'/p), with p' from beta_j' = gamma_j.
RateSeries rate_series(const AmplitudeTrajectory& traj);

struct OracleOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
};

struct OracleSeries {
    std::vector<double> excited_population;  ///< <e| Tr_cavity rho |e>
    std::vector<cplx> coherence;             ///< <e| Tr_cavity rho |g>
};

/// Integrates the zero-temperature dressed-state master equation (3 levels,
/// cavity starting in vacuum) with an adaptive Dormand-Prince pair and
/// samples the reduced atomic state on the grid. The rates are integrated
/// alongside the state, so this does not share code with amplitude().
OracleSeries dressed_ode_oracle(const SystemSpec& sys, const ReservoirSpec& r, const TimeGrid& grid,
                                const InitialAtomState& init, RateModel model = RateModel::exact,
                                const OracleOptions& opt = {});

}  // namespace ohmic
