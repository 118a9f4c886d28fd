#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ohmic/spectral.hpp"

namespace ohmic {

enum class SweepParam { coupling, eta, omega_c, s };
enum class OutputFormat { csv, json };

std::string_view to_string(SweepParam p);
std::string_view to_string(OutputFormat f);
std::string_view to_string(RateModel m);
SweepParam parse_sweep_param(std::string_view name);
OutputFormat parse_output_format(std::string_view name);
RateModel parse_rate_model(std::string_view name);

struct SweepSpec {
    SweepParam param = SweepParam::coupling;
    double start = 0.1;
    double stop = 4.0;
    std::size_t steps = 40;

    /// Evenly spaced values, start and stop included.
    std::vector<double> values() const;
};

/// Default horizon and resolution: omega0 tau = 25, dt = 1e-3.
inline constexpr double kDefaultHorizon = 25.0;
inline constexpr std::size_t kDefaultSteps = 25001;
/// Horizon pinned by the figure presets.
inline constexpr double kFigureHorizon = 1.0;
inline constexpr std::size_t kFigureSteps = 1001;

struct RunConfig {
    ReservoirSpec reservoir{1.0, 0.1, 2.0};
    SystemSpec system{1.0, 3.0};
    double tau = kDefaultHorizon;
    std::size_t steps = kDefaultSteps;
    RateModel rates = RateModel::exact;
    std::optional<SweepSpec> sweep;
    std::string output;  ///< empty: standard output
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> preset;
    unsigned threads = 0;

    TimeGrid grid() const { return TimeGrid(tau, steps); }
    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    /// Copy with one swept parameter replaced.
    RunConfig with(SweepParam p, double value) const;
};

/// Configuration for "fig1".."fig5". fig2..fig5 carry a coupling sweep.
RunConfig preset_config(std::string_view id);

/// A figure expands into one or more labelled runs (fig3: one per eta, ...).
struct FigureSeries {
    std::string label;
    RunConfig config;
};
std::vector<FigureSeries> figure_series(int figure);

/// Flat JSON object mirroring RunConfig. A "preset" key is applied first and
/// the remaining keys override it; unknown keys are rejected.
RunConfig parse_config_json(std::string_view text, const RunConfig& base = {});
RunConfig load_config_file(const std::string& path, const RunConfig& base = {});
std::string config_to_json(const RunConfig& cfg);

/// Set one field by its JSON key ("s", "eta", "omega_c", "coupling", "omega0",
/// "tau", "steps", "sweep_start", "sweep_stop", "sweep_steps", "threads").
void set_numeric_field(RunConfig& cfg, std::string_view key, double value);
double get_numeric_field(const RunConfig& cfg, std::string_view key);

}  // namespace ohmic
