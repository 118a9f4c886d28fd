#pragma once

// Information-flow measures built on the amplitude trajectory: trace
// distance of the optimal pair (|e><e|, |g><g|), its rate sigma, the BLP
// non-Markovianity N and the quantum-speed-limit ratio tau_QSL/tau.
//
// Time integrals use the cubic Hermite interpolant of |p|^2 through the
// sampled values and their analytic derivatives. Sign changes of the
// derivative inside a step are located exactly on that cubic, and the
// integral of any derivative piece is a difference of interpolant values,
// so int_0^tau sigma dt telescopes to |p(tau)|^2 - 1 with no quadrature error.

#include <cstddef>
#include <utility>
#include <vector>

#include "ohmic/dynamics.hpp"
#include "ohmic/errors.hpp"

namespace ohmic {

/// Default threshold separating N > 0 from integration noise.
inline constexpr double kDefaultNonMarkovianityThreshold = 1e-4;

/// Total variation of |p|^2 at or below this counts as no evolution; rounding
/// alone leaves about 1e-16 per sample.
inline constexpr double kVariationFloor = 1e-12;

/// D(t) for the optimal pair, equal to |p(t)|^2.
std::vector<double> trace_distance_optimal(const AmplitudeTrajectory& traj);

/// 1/2 Tr|a - b|. Throws InvalidArgument for non-Hermitian or non-unit-trace input.
double trace_distance_general(const DensityMatrix& a, const DensityMatrix& b);

/// sigma(t) = d|p|^2/dt = 2 Re(conj(p) p').
std::vector<double> sigma_series(const AmplitudeTrajectory& traj);

/// Times where sigma changes sign, by linear interpolation between samples.
std::vector<double> sigma_sign_changes(const AmplitudeTrajectory& traj);

/// max_k |Gamma(t_k) + sigma(t_k)/|p(t_k)|^2| over unmasked samples.
double gamma_sigma_consistency(const AmplitudeTrajectory& traj);

struct NonMarkovianity {
    /// -int_{Gamma<0} |p|^2 Gamma dt, from the time-local decoherence rate.
    double from_decoherence_rate = 0.0;
    /// 1/2 [int_0^tau |d|p|^2/dt| dt + |p(tau)|^2 - 1].
    double from_total_variation = 0.0;

    double residual() const;
};

NonMarkovianity non_markovianity(const AmplitudeTrajectory& traj);

/// int_0^tau |d|p|^2/dt| dt.
double total_variation(const AmplitudeTrajectory& traj);

/// tau_QSL/tau = (1 - |p(tau)|^2) / int_0^tau |d|p|^2/dt| dt for the initial
/// state |e><e|. Throws UndefinedRatio when |p|^2 never moved.
double qslt_ratio(const AmplitudeTrajectory& traj);

/// The same ratio written through N: (1 - |p(tau)|^2)/(1 - |p(tau)|^2 + 2N).
double qslt_ratio_from_non_markovianity(const AmplitudeTrajectory& traj);

/// |qslt_ratio - qslt_ratio_from_non_markovianity|.
double qslt_identity_residual(const AmplitudeTrajectory& traj);

struct MeasureReport {
    double n_markov = 0.0;        ///< N (total-variation form)
    double n_rate = 0.0;          ///< N (decoherence-rate form)
    double qsl_ratio = 1.0;       ///< NaN when undefined
    bool qsl_defined = true;
    double pop_tau = 1.0;
    double residual_n = 0.0;
    double residual_qsl = 0.0;
    double tau = 0.0;
};

MeasureReport measure(const AmplitudeTrajectory& traj);

/// One change of the indicator N(coupling) > eps between neighbouring
/// coarse samples.
struct Transition {
    double lo;
    double hi;
    bool rising;  ///< Markovian below, non-Markovian above
};

struct CriticalScan {
    ReservoirSpec reservoir;
    double omega_c_ratio = 0.0;  ///< omega_c / omega0
    double critical_coupling = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double n_at_probe = 0.0;  ///< N at bracket_hi
    bool found = false;
    std::vector<Transition> transitions;
    std::vector<std::pair<double, double>> coarse;  ///< (coupling, N)
};

struct CriticalOptions {
    double coupling_lo = 0.1;
    double coupling_hi = 4.0;
    double eps_n = kDefaultNonMarkovianityThreshold;
    double coarse_step = 0.02;
    double bracket_width = 1e-3;
    RateModel model = RateModel::exact;
    unsigned threads = 0;
};

class CriticalNotFound : public Error {
public:
    explicit CriticalNotFound(CriticalScan scan)
        : Error(ErrorCode::not_found, "no Markovian to non-Markovian transition in the coupling range"),
          scan_(std::move(scan)) {}

    const CriticalScan& scan() const noexcept { return scan_; }

private:
    CriticalScan scan_;
};

/// N as a function of the atom-cavity coupling.
double non_markovianity_at(double coupling, const ReservoirSpec& r, double omega0, const TimeGrid& grid,
                           RateModel model = RateModel::exact);

/// Coarse scan of N over [lo, hi], then bisection of the largest rising
/// transition down to bracket_width. Throws CriticalNotFound (carrying the
/// coarse scan) when the indicator never rises.
CriticalScan critical_coupling(const ReservoirSpec& r, double omega0, const TimeGrid& grid,
                               const CriticalOptions& opt = {});

}  // namespace ohmic
