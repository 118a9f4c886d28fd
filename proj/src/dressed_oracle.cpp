// Independent check of the closed-form amplitude: integrate the dressed-state
// master equation directly in the 3-level space {|phi_0>, |phi_1,->, |phi_1,+>}.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ohmic/dynamics.hpp"
#include "ohmic/errors.hpp"

namespace ohmic {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::vector<double>;

constexpr std::size_t kDim = 3;
constexpr std::size_t kRhoReals = 2 * kDim * kDim;
// Ground, lower dressed, upper dressed.
constexpr std::size_t kGround = 0;
constexpr std::array<std::size_t, 2> kDressed = {1, 2};

cplx load(const State& x, std::size_t a, std::size_t b) {
    const std::size_t i = 2 * (a * kDim + b);
    return {x[i], x[i + 1]};
}

void store(State& x, std::size_t a, std::size_t b, cplx v) {
    const std::size_t i = 2 * (a * kDim + b);
    x[i] = v.real();
    x[i + 1] = v.imag();
}

// Components of |0,e> and |0,g> in the dressed basis.
constexpr double kInvSqrt2 = 0.70710678118654752440;
const std::array<double, kDim> kExcitedVacuum = {0.0, -kInvSqrt2, kInvSqrt2};
const std::array<double, kDim> kGroundVacuum = {1.0, 0.0, 0.0};

class DressedMasterEquation {
public:
    DressedMasterEquation(const SystemSpec& sys, const ReservoirSpec& r, RateModel model)
        : r_(r), model_(model),
          energy_{sys.ground_energy(), sys.lower_dressed_energy(), sys.upper_dressed_energy()},
          omega_{sys.omega1(), sys.omega2()} {}

    /// Two complex rate accumulators ride after the density matrix when the
    /// exact model is used: G_j' = exp(i w_j t) C(t), gamma_j = 2 Re G_j.
    std::size_t state_size() const { return model_ == RateModel::exact ? kRhoReals + 4 : kRhoReals; }

    void operator()(const State& x, State& dxdt, double t) const {
        std::array<double, 2> gamma{};
        if (model_ == RateModel::exact) {
            const cplx corr = correlation_function(t, r_);
            for (std::size_t j = 0; j < 2; ++j) {
                gamma[j] = 2.0 * x[kRhoReals + 2 * j];
                const cplx dg = std::exp(cplx(0.0, omega_[j] * t)) * corr;
                dxdt[kRhoReals + 2 * j] = dg.real();
                dxdt[kRhoReals + 2 * j + 1] = dg.imag();
            }
        } else {
            for (std::size_t j = 0; j < 2; ++j) gamma[j] = decay_rate_closed(omega_[j], t, r_);
        }

        for (std::size_t a = 0; a < kDim; ++a) {
            for (std::size_t b = 0; b < kDim; ++b) {
                const cplx rho_ab = load(x, a, b);
                cplx d = cplx(0.0, -(energy_[a] - energy_[b])) * rho_ab;
                for (std::size_t j = 0; j < 2; ++j) {
                    const std::size_t level = kDressed[j];
                    const double rate = 0.5 * gamma[j];
                    // L rho L^dagger with L = |phi_0><phi_level|.
                    if (a == kGround && b == kGround) d += rate * load(x, level, level);
                    // -1/2 {L^dagger L, rho}.
                    if (a == level) d -= 0.5 * rate * rho_ab;
                    if (b == level) d -= 0.5 * rate * rho_ab;
                }
                store(dxdt, a, b, d);
            }
        }
    }

private:
    ReservoirSpec r_;
    RateModel model_;
    std::array<double, kDim> energy_;
    std::array<double, 2> omega_;
};

template <class V>
cplx sandwich(const State& x, const V& bra, const V& ket) {
    cplx acc{};
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b) acc += bra[a] * load(x, a, b) * ket[b];
    return acc;
}

}  // namespace

OracleSeries dressed_ode_oracle(const SystemSpec& sys, const ReservoirSpec& r, const TimeGrid& grid,
                                const InitialAtomState& init, RateModel model, const OracleOptions& opt) {
    sys.validate();
    r.validate();
    init.validate();
    const RateModel used = resolve_rate_model(r, model);
    DressedMasterEquation rhs(sys, r, used);

    // Atom state tensored with the cavity vacuum, rotated into the dressed basis.
    State x(rhs.state_size(), 0.0);
    const std::array<cplx, 4> atom = {init.rho11, init.rho10, std::conj(init.rho10), 1.0 - init.rho11};
    const std::array<const std::array<double, kDim>*, 2> basis = {&kExcitedVacuum, &kGroundVacuum};
    for (std::size_t a = 0; a < kDim; ++a) {
        for (std::size_t b = 0; b < kDim; ++b) {
            cplx v{};
            for (std::size_t m = 0; m < 2; ++m)
                for (std::size_t n = 0; n < 2; ++n) v += (*basis[m])[a] * atom[2 * m + n] * (*basis[n])[b];
            store(x, a, b, v);
        }
    }

    OracleSeries out;
    out.excited_population.reserve(grid.size());
    out.coherence.reserve(grid.size());
    double last_time = 0.0;
    auto observe = [&](const State& s, double t) {
        last_time = t;
        out.excited_population.push_back(sandwich(s, kExcitedVacuum, kExcitedVacuum).real());
        out.coherence.push_back(sandwich(s, kExcitedVacuum, kGroundVacuum));
    };

    const auto times = grid.samples();
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), std::min(grid.dt(), 1e-2), observe,
                                odeint::max_step_checker(1'000'000));
    } catch (const odeint::odeint_error& e) {
        throw NumericalAccuracyError("dressed-state integrator failed after t=" + std::to_string(last_time) + ": " +
                                         e.what(),
                                     opt.abs_tol);
    }
    return out;
}

}  // namespace ohmic
