#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ohmic/errors.hpp"
#include "ohmic/measures.hpp"

using namespace ohmic;

namespace {

const ReservoirSpec kFig1{1.0, 0.1, 2.0};
const SystemSpec kStrong{1.0, 3.0};

AmplitudeTrajectory traj_of(double coupling, const ReservoirSpec& r, double tau, std::size_t n = 0) {
    if (n == 0) n = static_cast<std::size_t>(std::lround(tau * 1000.0)) + 1;
    return amplitude({1.0, coupling}, r, TimeGrid(tau, n));
}

}  // namespace

TEST_SUITE("measures") {
    TEST_CASE("optimal trace distance") {
        const auto traj = traj_of(3.0, kFig1, 25.0);
        const auto d = trace_distance_optimal(traj);
        CHECK(d[0] == 1.0);
        CHECK(d == traj.pop);
        // Drops from 1 to nearly 0 and then revives.
        const auto first_min = std::min_element(d.begin(), d.begin() + 1000);
        CHECK(*first_min < 0.01);
        CHECK(*std::max_element(first_min, d.begin() + 1500) > 0.8);

        const auto free = traj_of(0.8, {1.0, 0.0, 2.0}, 10.0);
        const auto d0 = trace_distance_optimal(free);
        for (std::size_t k = 0; k < free.size(); ++k)
            CHECK(std::abs(d0[k] - std::pow(std::cos(0.8 * free.grid[k]), 2)) < 1e-12);
    }

    TEST_CASE("general trace distance") {
        const DensityMatrix e = DensityMatrix::from(InitialAtomState::excited());
        const DensityMatrix g = DensityMatrix::from(InitialAtomState::ground());
        const DensityMatrix plus = DensityMatrix::from(InitialAtomState::plus());
        CHECK(trace_distance_general(plus, plus) == 0.0);
        CHECK(trace_distance_general(e, g) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(trace_distance_general(e, plus) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

        const auto traj = traj_of(3.0, kFig1, 5.0, 501);
        for (std::size_t k = 0; k < traj.size(); k += 7) {
            const auto a = atom_state_at(traj, InitialAtomState::excited(), k);
            const auto b = atom_state_at(traj, InitialAtomState::ground(), k);
            CHECK(std::abs(trace_distance_general(a, b) - traj.pop[k]) < 1e-15);
        }

        const DensityMatrix skew{0.5, cplx(0.1, 0.0), cplx(0.2, 0.0), 0.5};
        CHECK_THROWS_AS(trace_distance_general(skew, plus), InvalidArgument);
        const DensityMatrix heavy{0.7, 0.0, 0.0, 0.5};
        CHECK_THROWS_AS(trace_distance_general(plus, heavy), InvalidArgument);
    }

    TEST_CASE("sigma") {
        const double omega = 0.9;
        const auto free = traj_of(omega, {1.0, 0.0, 2.0}, std::numbers::pi / (2.0 * omega), 301);
        const auto sigma0 = sigma_series(free);
        CHECK(sigma0[0] == 0.0);
        for (std::size_t k = 1; k + 1 < free.size(); ++k) {
            const double expected = -omega * std::sin(2.0 * omega * free.grid[k]);
            CHECK(sigma0[k] == doctest::Approx(expected).epsilon(1e-12));
            CHECK(sigma0[k] < 0.0);
        }

        const auto traj = traj_of(3.0, kFig1, 1.0);
        const auto sigma = sigma_series(traj);
        CHECK(sigma[0] == 0.0);
        const auto first_negative = std::find_if(sigma.begin(), sigma.end(), [](double v) { return v < 0.0; });
        REQUIRE(first_negative != sigma.end());
        CHECK(std::find_if(first_negative, sigma.end(), [](double v) { return v > 0.0; }) != sigma.end());
        CHECK_FALSE(sigma_sign_changes(traj).empty());
    }

    TEST_CASE("Gamma and sigma are consistent") {
        CHECK(gamma_sigma_consistency(traj_of(0.9, {1.0, 0.0, 2.0}, 10.0)) < 1e-10);
        CHECK(gamma_sigma_consistency(traj_of(0.0, kFig1, 10.0)) < 1e-8);
        for (double s : {0.5, 1.0, 3.0})
            for (double coupling : {0.5, 1.5, 3.0}) CHECK(gamma_sigma_consistency(traj_of(coupling, {s, 0.6, 1.0}, 25.0)) < 1e-8);
    }

    TEST_CASE("Markovian decay") {
        const auto traj = traj_of(0.0, {1.0, 0.5, 2.0}, 5.0);
        CHECK(std::is_sorted(traj.pop.rbegin(), traj.pop.rend()));
        const auto n = non_markovianity(traj);
        CHECK(n.from_decoherence_rate == 0.0);
        CHECK(std::abs(n.from_total_variation) < 1e-15);
        CHECK(qslt_ratio(traj) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(qslt_identity_residual(traj) < 1e-15);
    }

    TEST_CASE("measures match a dense brute-force evaluation") {
        // |p|^2 from scipy on 20001 points; N = sum of positive increments.
        struct Ref {
            double coupling;
            ReservoirSpec r;
            double tau, n, ratio;
        };
        const Ref refs[] = {
            {3.0, {1.0, 0.1, 2.0}, 1.0, 0.9045629838414052, 0.050094930520933036},
            {2.05, {1.0, 0.5, 2.0}, 1.0, 0.13779213909681606, 0.7572604199088844},
            {3.0, {0.5, 0.6, 2.0}, 5.0, 1.759966931286794, 0.1779388023307854},
        };
        for (const auto& ref : refs) {
            const auto traj = traj_of(ref.coupling, ref.r, ref.tau);
            const auto n = non_markovianity(traj);
            CHECK(std::abs(n.from_decoherence_rate - ref.n) < 1e-6);
            CHECK(std::abs(n.from_total_variation - ref.n) < 1e-6);
            CHECK(std::abs(qslt_ratio(traj) - ref.ratio) < 1e-6);
        }
    }

    TEST_CASE("identities hold on coarse grids") {
        for (double s : {0.5, 1.0, 3.0}) {
            for (std::size_t n : {11u, 101u, 1001u}) {
                const auto traj = traj_of(3.0, {s, 0.3, 2.0}, 25.0, n);
                CHECK(non_markovianity(traj).residual() < 1e-8);
                CHECK(qslt_identity_residual(traj) < 1e-10);
            }
        }
    }

    TEST_CASE("non-Markovianity grows with the horizon") {
        double prev = -1.0;
        for (double tau : {0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
            const double n = non_markovianity(traj_of(3.0, kFig1, tau)).from_decoherence_rate;
            CHECK(n >= prev);
            prev = n;
        }
    }

    TEST_CASE("Rabi half period") {
        const double omega = 1.25;
        const auto traj = traj_of(omega, {1.0, 0.0, 2.0}, std::numbers::pi / omega, 2001);
        const auto n = non_markovianity(traj);
        CHECK(n.from_decoherence_rate == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(n.from_total_variation == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(total_variation(traj) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(std::abs(qslt_ratio(traj)) < 1e-12);
        CHECK(qslt_identity_residual(traj) < 1e-10);
    }

    TEST_CASE("ratio is undefined without evolution") {
        const auto frozen = traj_of(0.0, {1.0, 0.0, 2.0}, 3.0);
        CHECK_THROWS_AS(qslt_ratio(frozen), UndefinedRatio);
        CHECK_THROWS_AS(qslt_ratio_from_non_markovianity(frozen), UndefinedRatio);
        const auto report = measure(frozen);
        CHECK_FALSE(report.qsl_defined);
        CHECK(std::isnan(report.qsl_ratio));
        CHECK(report.n_markov < 1e-12);
    }

    TEST_CASE("measure report") {
        const auto traj = traj_of(3.0, kFig1, 1.0);
        const auto report = measure(traj);
        CHECK(report.qsl_defined);
        CHECK(report.tau == 1.0);
        CHECK(report.pop_tau == traj.pop.back());
        CHECK(report.n_markov == non_markovianity(traj).from_total_variation);
        CHECK(report.n_rate == non_markovianity(traj).from_decoherence_rate);
        CHECK(report.qsl_ratio == qslt_ratio(traj));
        CHECK(report.residual_n < 1e-8);
        CHECK(report.residual_qsl < 1e-10);
    }

    TEST_CASE("critical coupling") {
        const TimeGrid grid(1.0, 1001);
        CriticalOptions opt;
        opt.coupling_lo = 1.3;
        opt.coupling_hi = 1.8;
        opt.coarse_step = 0.05;
        const auto scan = critical_coupling(kFig1, 1.0, grid, opt);
        CHECK(scan.found);
        CHECK(scan.critical_coupling > 1.5);
        CHECK(scan.critical_coupling < 1.6);
        CHECK(scan.bracket_hi - scan.bracket_lo <= 1e-3);
        CHECK(non_markovianity_at(scan.bracket_lo, kFig1, 1.0, grid, opt.model) <= opt.eps_n);
        CHECK(non_markovianity_at(scan.bracket_hi, kFig1, 1.0, grid, opt.model) > opt.eps_n);
        CHECK(scan.omega_c_ratio == 2.0);
        CHECK(scan.coarse.size() == 11);

        opt.coupling_lo = 0.1;
        opt.coupling_hi = 0.2;
        try {
            (void)critical_coupling(kFig1, 1.0, grid, opt);
            FAIL("expected CriticalNotFound");
        } catch (const CriticalNotFound& e) {
            CHECK(e.code() == ErrorCode::not_found);
            CHECK_FALSE(e.scan().found);
            CHECK_FALSE(e.scan().coarse.empty());
            CHECK(e.scan().transitions.empty());
        }

        opt.coupling_lo = 2.0;
        opt.coupling_hi = 1.0;
        CHECK_THROWS_AS(critical_coupling(kFig1, 1.0, grid, opt), InvalidArgument);
    }
}
