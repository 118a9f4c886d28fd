#include <algorithm>
#include <atomic>
#include <cmath>

#include "doctest.h"
#include "ohmic/errors.hpp"
#include "ohmic/sweep.hpp"

using namespace ohmic;

namespace {

RunConfig small_sweep(SweepParam param, double start, double stop, std::size_t steps) {
    RunConfig cfg = preset_config("fig2");
    cfg.sweep = SweepSpec{param, start, stop, steps};
    cfg.steps = 201;
    return cfg;
}

}  // namespace

TEST_SUITE("sweep") {
    TEST_CASE("rows are ordered and independent of the thread count") {
        auto cfg = small_sweep(SweepParam::coupling, 0.5, 3.5, 7);
        cfg.threads = 1;
        const auto serial = run_sweep(cfg);
        cfg.threads = 4;
        std::atomic<int> calls{0};
        const auto parallel = run_sweep(cfg, [&](const SweepRow&) { ++calls; });
        CHECK(calls == 7);
        REQUIRE(serial.size() == 7);
        REQUIRE(parallel.size() == 7);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(serial[i].value == parallel[i].value);
            CHECK(serial[i].report.n_markov == parallel[i].report.n_markov);
            CHECK(serial[i].report.qsl_ratio == parallel[i].report.qsl_ratio);
        }
        CHECK(std::is_sorted(serial.begin(), serial.end(),
                             [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; }));
    }

    TEST_CASE("each row equals a single run") {
        const auto cfg = small_sweep(SweepParam::eta, 0.1, 0.9, 3);
        const auto rows = run_sweep(cfg);
        RunConfig single = cfg.with(SweepParam::eta, 0.5);
        single.sweep.reset();
        const auto report = measure(run_dynamics(single));
        CHECK(rows[1].value == 0.5);
        CHECK(rows[1].report.n_markov == report.n_markov);
        CHECK(rows[1].report.pop_tau == report.pop_tau);
    }

    TEST_CASE("two-point sweep") {
        CHECK(run_sweep(small_sweep(SweepParam::omega_c, 0.5, 2.0, 2)).size() == 2);
    }

    TEST_CASE("sweeping s outside the closed-form set falls back to exact rates") {
        auto cfg = small_sweep(SweepParam::s, 0.5, 1.5, 3);
        cfg.rates = RateModel::closed_form;
        const auto rows = run_sweep(cfg);
        CHECK(rows[0].model == RateModel::closed_form);
        CHECK(rows[1].model == RateModel::closed_form);
        CHECK(rows[2].model == RateModel::exact);
    }

    TEST_CASE("sweep needs a sweep block") {
        RunConfig cfg;
        CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    }

    TEST_CASE("validation passes for the default configuration") {
        const auto report = validate_run(RunConfig{});
        CHECK(report.passed());
        REQUIRE(report.checks.size() == 5);
        for (const auto& check : report.checks) {
            CAPTURE(check.name);
            CHECK(check.passed);
            CHECK(check.residual <= check.threshold);
        }
    }

    TEST_CASE("an unattainable tolerance fails validation") {
        RunConfig cfg;
        cfg.steps = 2501;
        const auto report = validate_run(cfg, 1e-20);
        CHECK_FALSE(report.passed());
        const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return !c.passed; });
        CHECK(failed >= 3);
    }

    TEST_CASE("decoupled reservoir validates with vanishing residuals") {
        RunConfig cfg;
        cfg.reservoir.eta = 0.0;
        cfg.steps = 2501;
        const auto report = validate_run(cfg);
        CHECK(report.passed());
        for (const auto& check : report.checks) {
            CAPTURE(check.name);
            if (check.name == "ode_oracle") CHECK(check.residual < 1e-7);
            else CHECK(check.residual < 1e-12);
        }
    }

    TEST_CASE("closed-form rates fail the quadrature check") {
        RunConfig cfg;
        cfg.rates = RateModel::closed_form;
        cfg.steps = 2501;
        const auto report = validate_run(cfg);
        CHECK(report.checks[0].name == "rates_vs_quadrature");
        CHECK_FALSE(report.checks[0].passed);
        CHECK(report.checks[0].detail == "rates=closed");
        for (std::size_t i = 1; i < report.checks.size(); ++i) CHECK(report.checks[i].passed);
    }
}
