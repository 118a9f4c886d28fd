#include "ohmic/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>

#include "ohmic/errors.hpp"
#include "ohmic/parallel.hpp"

namespace ohmic {

AmplitudeTrajectory run_dynamics(const RunConfig& cfg) {
    cfg.validate();
    return amplitude(cfg.system, cfg.reservoir, cfg.grid(), cfg.rates);
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::function<void(const SweepRow&)>& on_row) {
    cfg.validate();
    if (!cfg.sweep) throw ConfigError("sweep", "configuration has no sweep block");
    const auto values = cfg.sweep->values();
    std::vector<SweepRow> rows(values.size());
    std::mutex callback_mutex;

    parallel_for(values.size(), cfg.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const RunConfig point = cfg.with(cfg.sweep->param, values[i]);
        const auto traj = amplitude(point.system, point.reservoir, point.grid(), point.rates);
        SweepRow row;
        row.value = values[i];
        row.report = measure(traj);
        row.model = traj.model;
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows[i] = row;
        if (on_row) {
            std::lock_guard lock(callback_mutex);
            on_row(row);
        }
    });
    return rows;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

namespace {

ValidationCheck make_check(std::string name, double residual, double threshold, std::string detail = {}) {
    return {std::move(name), residual, threshold, residual <= threshold, std::move(detail)};
}

}  // namespace

ValidationReport validate_run(const RunConfig& cfg, std::optional<double> tolerance) {
    cfg.validate();
    auto limit = [&](double fallback) { return tolerance.value_or(fallback); };
    const auto grid = cfg.grid();
    const auto traj = amplitude(cfg.system, cfg.reservoir, grid, cfg.rates);
    ValidationReport report;

    // Rate model against the frequency-domain quadrature, at eight times per
    // transition frequency.
    {
        double worst = 0.0;
        std::ostringstream detail;
        for (double omega_j : {cfg.system.omega1(), cfg.system.omega2()}) {
            for (int i = 1; i <= 8; ++i) {
                const double t = cfg.tau * i / 8.0;
                const double model = decay_rate(omega_j, t, cfg.reservoir, traj.model);
                const double reference = decay_rate_quadrature(omega_j, t, cfg.reservoir).value;
                worst = std::max(worst, std::abs(model - reference) / (1.0 + std::abs(reference)));
            }
        }
        detail << "rates=" << to_string(traj.model);
        report.checks.push_back(make_check("rates_vs_quadrature", worst, limit(kRateTolerance), detail.str()));
    }

    {
        double worst = 0.0;
        try {
            const auto oracle = dressed_ode_oracle(cfg.system, cfg.reservoir, grid, InitialAtomState::excited(), traj.model);
            for (std::size_t k = 0; k < traj.size(); ++k)
                worst = std::max(worst, std::abs(oracle.excited_population[k] - traj.pop[k]));
            report.checks.push_back(make_check("ode_oracle", worst, limit(kOracleTolerance)));
        } catch (const NumericalAccuracyError& e) {
            report.checks.push_back({"ode_oracle", e.achieved_error(), limit(kOracleTolerance), false, e.what()});
        }
    }

    report.checks.push_back(make_check("gamma_sigma", gamma_sigma_consistency(traj), limit(kGammaSigmaTolerance)));
    report.checks.push_back(
        make_check("n_identity", non_markovianity(traj).residual(), limit(kNonMarkovianityIdentityTolerance)));
    try {
        report.checks.push_back(make_check("qsl_identity", qslt_identity_residual(traj), limit(kQslIdentityTolerance)));
    } catch (const UndefinedRatio& e) {
        report.checks.push_back(make_check("qsl_identity", 0.0, limit(kQslIdentityTolerance), e.what()));
    }
    return report;
}

}  // namespace ohmic
