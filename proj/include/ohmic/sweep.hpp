#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ohmic/dynamics.hpp"
#include "ohmic/measures.hpp"
#include "ohmic/run_config.hpp"

namespace ohmic {

struct SweepRow {
    double value = 0.0;  ///< swept parameter
    MeasureReport report;
    RateModel model = RateModel::exact;  ///< rate model actually used for this row
    double wall_seconds = 0.0;
};

/// Evaluates N and tau_QSL/tau at every sweep value on cfg.threads workers.
/// Rows come back ordered by swept value. on_row, if set, is called once per
/// finished row from the worker that produced it.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::function<void(const SweepRow&)>& on_row = {});

/// Trajectory for a single-point configuration.
AmplitudeTrajectory run_dynamics(const RunConfig& cfg);

struct ValidationCheck {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
};

/// Default thresholds for each validation check.
inline constexpr double kRateTolerance = 1e-6;
inline constexpr double kOracleTolerance = 1e-5;
inline constexpr double kGammaSigmaTolerance = 1e-8;
inline constexpr double kNonMarkovianityIdentityTolerance = 1e-8;
inline constexpr double kQslIdentityTolerance = 1e-10;

/// Bundles the dual-route checks for one configuration: rate model against
/// frequency quadrature, amplitude against the dressed-state ODE, and the
/// Gamma/sigma, N and QSL identities. A tolerance override replaces every
/// threshold.
ValidationReport validate_run(const RunConfig& cfg, std::optional<double> tolerance = std::nullopt);

}  // namespace ohmic
