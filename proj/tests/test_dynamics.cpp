#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ohmic/dynamics.hpp"
#include "ohmic/errors.hpp"

using namespace ohmic;

namespace {

const ReservoirSpec kFig1{1.0, 0.1, 2.0};
const SystemSpec kStrong{1.0, 3.0};

// Frozen mpmath value of |p|^2 at time t.
struct PopRef {
    double t, pop;
};

}  // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("amplitude starts at one") {
        for (double s : {0.5, 1.0, 3.0}) {
            const auto traj = amplitude(kStrong, {s, 0.4, 1.0}, TimeGrid(2.0, 5));
            CHECK(traj.p[0] == cplx(1.0, 0.0));
            CHECK(traj.pop[0] == 1.0);
            CHECK(traj.beta1[0] == 0.0);
        }
    }

    TEST_CASE("decoupled reservoir gives vacuum Rabi oscillation") {
        const SystemSpec sys{1.0, 1.7};
        const TimeGrid grid(25.0, 2501);
        const auto traj = amplitude(sys, {1.0, 0.0, 2.0}, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            CHECK(std::abs(traj.pop[k] - std::pow(std::cos(1.7 * t), 2)) < 1e-12);
            CHECK(std::abs(traj.p[k] - std::exp(cplx(0.0, -t)) * std::cos(1.7 * t)) < 1e-12);
        }
    }

    TEST_CASE("degenerate dressed frequencies") {
        const TimeGrid grid(6.0, 61);
        const auto traj = amplitude({1.0, 0.0}, kFig1, grid);
        CHECK(traj.beta1 == traj.beta2);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const cplx expected = std::exp(cplx(0.0, -grid[k])) * std::exp(-traj.beta1[k] / 4.0);
            CHECK(std::abs(traj.p[k] - expected) < 1e-14);
        }
    }

    TEST_CASE("population matches frozen high-precision references") {
        const TimeGrid grid(25.0, 101);
        const auto traj = amplitude(kStrong, kFig1, grid);
        const PopRef refs[] = {{0.5, 0.004858734068349452},
                               {1.0, 0.90459252975206578},
                               {2.5, 0.10507791040123296},
                               {10.0, 0.087507053864033127},
                               {25.0, 0.29090612147871436}};
        for (const auto& ref : refs) {
            const auto k = static_cast<std::size_t>(std::lround(ref.t / grid.dt()));
            REQUIRE(grid[k] == doctest::Approx(ref.t));
            CHECK(std::abs(traj.pop[k] - ref.pop) < 1e-10);
        }

        const auto sub = amplitude({1.0, 0.1}, {0.5, 0.6, 2.0}, TimeGrid(5.0, 6));
        CHECK(std::abs(sub.pop[1] - 0.47940367778386033) < 1e-10);
        CHECK(std::abs(sub.pop[5] - 0.00068535174577064523) < 1e-10);
    }

    TEST_CASE("amplitude does not depend on the grid") {
        const TimeGrid coarse(25.0, 26);
        const auto a = amplitude(kStrong, {0.5, 0.6, 2.0}, coarse);
        const auto b = amplitude(kStrong, {0.5, 0.6, 2.0}, TimeGrid(25.0, 2501));
        for (std::size_t k = 0; k < coarse.size(); ++k) CHECK(std::abs(a.p[k] - b.p[100 * k]) < 1e-11);
    }

    TEST_CASE("atomic state") {
        const auto traj = amplitude(kStrong, kFig1, TimeGrid(25.0, 501));
        SUBCASE("unit amplitude leaves the state unchanged") {
            const InitialAtomState init{0.3, {0.2, -0.35}};
            const auto rho = atom_state_at(traj, init, 0);
            const auto rho0 = DensityMatrix::from(init);
            CHECK(std::abs(rho.ee - rho0.ee) == 0.0);
            CHECK(std::abs(rho.eg - rho0.eg) == 0.0);
            CHECK(std::abs(rho.gg - rho0.gg) == 0.0);
        }
        SUBCASE("excited initial state") {
            const auto series = atom_state(traj, InitialAtomState::excited());
            for (std::size_t k = 0; k < traj.size(); ++k) {
                CHECK(series.rho[k].ee.real() == traj.pop[k]);
                CHECK(series.rho[k].eg == cplx{});
                CHECK(series.rho[k].ge == cplx{});
            }
        }
        SUBCASE("superposition stays positive") {
            const auto series = atom_state(traj, InitialAtomState::plus());
            for (const auto& rho : series.rho) {
                CHECK(rho.min_eigenvalue() >= -1e-15);
                CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
                CHECK(rho.hermiticity_error() == 0.0);
            }
        }
        SUBCASE("invalid initial states are rejected") {
            CHECK_THROWS_AS(atom_state(traj, {1.2, {}}), InvalidArgument);
            CHECK_THROWS_AS(atom_state(traj, {0.5, {0.6, 0.0}}), InvalidArgument);
            CHECK_NOTHROW(atom_state(traj, {0.5, {0.5, 0.0}}));
        }
    }

    TEST_CASE("density matrix eigenvalues") {
        const DensityMatrix mixed{0.5, 0.0, 0.0, 0.5};
        CHECK(mixed.eigenvalues()[0] == doctest::Approx(0.5));
        const DensityMatrix pure{0.5, 0.5, 0.5, 0.5};
        CHECK(pure.eigenvalues()[0] == doctest::Approx(0.0));
        CHECK(pure.eigenvalues()[1] == doctest::Approx(1.0));
        const DensityMatrix odd{0.5, cplx(0.0, 0.5), cplx(0.0, 0.5), 0.5};
        CHECK(odd.hermiticity_error() == doctest::Approx(1.0));
    }

    TEST_CASE("decoupled rates are analytic") {
        const double omega = 1.3;
        const TimeGrid grid(10.0, 1001);
        const auto traj = amplitude({1.0, omega}, {1.0, 0.0, 2.0}, grid);
        const auto rates = rate_series(traj);
        std::size_t checked = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (rates.masked[k]) continue;
            const double expected = 2.0 * omega * std::tan(omega * grid[k]);
            CHECK(std::abs(rates.gamma[k] - expected) < 1e-8 * std::max(1.0, std::abs(expected)));
            CHECK(std::abs(rates.lamb[k] - 2.0) < 1e-12 * std::max(1.0, std::abs(expected)));
            ++checked;
        }
        CHECK(checked > 990);

        const auto still = rate_series(amplitude({1.0, 0.0}, {1.0, 0.0, 2.0}, grid));
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(still.gamma[k]) < 1e-14);
            CHECK(still.lamb[k] == doctest::Approx(2.0).epsilon(1e-15));
        }
    }

    TEST_CASE("rates are masked where the amplitude vanishes") {
        const double omega = 1.0;
        const TimeGrid grid(std::numbers::pi, 3);
        const auto rates = rate_series(amplitude({1.0, omega}, {1.0, 0.0, 2.0}, grid));
        CHECK(rates.masked[1]);
        CHECK(std::isnan(rates.gamma[1]));
        CHECK(std::isnan(rates.lamb[1]));
        CHECK_THROWS_AS(rates.gamma_at(1), AmplitudeUnderflow);
        CHECK_THROWS_AS(rates.lamb_at(1), AmplitudeUnderflow);
        CHECK(rates.gamma_at(0) == 0.0);
    }

    TEST_CASE("decoherence rate matches a finite difference of log |p|^2") {
        // Gamma = -d/dt ln |p|^2, away from the near-zeros of |p|^2.
        auto worst_error = [&](std::size_t n) {
            const TimeGrid grid(25.0, n);
            const auto traj = amplitude(kStrong, kFig1, grid);
            const auto rates = rate_series(traj);
            const double h = grid.dt();
            double worst = 0.0;
            for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
                if (traj.pop[k - 1] < 0.05 || traj.pop[k] < 0.05 || traj.pop[k + 1] < 0.05) continue;
                const double fd = -(std::log(traj.pop[k + 1]) - std::log(traj.pop[k - 1])) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - rates.gamma[k]) / std::max(1.0, std::abs(rates.gamma[k])));
            }
            return worst;
        };
        const double coarse = worst_error(25001);
        const double fine = worst_error(50001);
        CHECK(fine < 1e-4);
        CHECK(coarse / fine >= 3.5);
    }

    TEST_CASE("dressed-state oracle") {
        SUBCASE("Rabi oscillation without the reservoir") {
            const TimeGrid grid(10.0, 201);
            const auto o = dressed_ode_oracle({1.0, 1.1}, {1.0, 0.0, 2.0}, grid, InitialAtomState::excited());
            for (std::size_t k = 0; k < grid.size(); ++k)
                CHECK(std::abs(o.excited_population[k] - std::pow(std::cos(1.1 * grid[k]), 2)) < 1e-7);
        }
        SUBCASE("initial condition") {
            const InitialAtomState init{0.37, {0.1, 0.2}};
            const auto o = dressed_ode_oracle(kStrong, kFig1, TimeGrid(1.0, 3), init);
            CHECK(o.excited_population[0] == doctest::Approx(0.37).epsilon(1e-15));
            CHECK(std::abs(o.coherence[0] - init.rho10) < 1e-15);
        }
        SUBCASE("agrees with the amplitude for every rate model and exponent") {
            const TimeGrid grid(25.0, 2501);
            for (double s : {0.5, 1.0, 3.0}) {
                for (auto model : {RateModel::exact, RateModel::closed_form}) {
                    const ReservoirSpec r{s, 0.1, 2.0};
                    const auto traj = amplitude(kStrong, r, grid, model);
                    const auto o = dressed_ode_oracle(kStrong, r, grid, InitialAtomState::plus(), model);
                    double pop_err = 0.0, coh_err = 0.0;
                    for (std::size_t k = 0; k < grid.size(); ++k) {
                        const auto rho = atom_state_at(traj, InitialAtomState::plus(), k);
                        pop_err = std::max(pop_err, std::abs(o.excited_population[k] - rho.ee.real()));
                        coh_err = std::max(coh_err, std::abs(o.coherence[k] - rho.eg));
                    }
                    CAPTURE(s);
                    CHECK(pop_err < 1e-5);
                    CHECK(coh_err < 1e-5);
                }
            }
        }
    }

    TEST_CASE("closed-form path runs only where it exists") {
        const TimeGrid grid(2.0, 21);
        CHECK(amplitude(kStrong, {1.0, 0.1, 2.0}, grid, RateModel::closed_form).model == RateModel::closed_form);
        CHECK(amplitude(kStrong, {2.0, 0.1, 2.0}, grid, RateModel::closed_form).model == RateModel::exact);
        const auto a = amplitude({1.0, 3.0}, {1.0, 0.1, 2.0}, grid, RateModel::closed_form);
        const auto b = amplitude({1.0, 3.0}, {1.0, 0.1, 2.0}, grid, RateModel::exact);
        CHECK(std::abs(a.pop.back() - b.pop.back()) > 1e-3);
    }

    TEST_CASE("system validation") {
        CHECK_THROWS_AS(SystemSpec({0.0, 1.0}).validate(), InvalidArgument);
        CHECK_THROWS_AS(SystemSpec({1.0, -1.0}).validate(), InvalidArgument);
        CHECK(SystemSpec({1.0, 3.0}).omega1() == -2.0);
        CHECK(SystemSpec({1.0, 3.0}).upper_dressed_energy() == 3.5);
        CHECK_THROWS_AS(amplitude({1.0, -1.0}, kFig1, TimeGrid(1.0, 2)), InvalidArgument);
    }
}
