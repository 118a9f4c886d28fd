#include "ohmic/ohmic.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ohmic/errors.hpp"
#include "ohmic/measures.hpp"
#include "ohmic/run_config.hpp"
#include "ohmic/sweep.hpp"

struct ohm_config {
    ohmic::RunConfig cfg;
};

struct ohm_trajectory {
    ohmic::AmplitudeTrajectory traj;
    ohmic::RateSeries rates;
    std::vector<double> sigma;
};

struct ohm_sweep {
    std::vector<ohmic::SweepRow> rows;
};

struct ohm_critical {
    ohmic::CriticalScan scan;
};

struct ohm_validation {
    ohmic::ValidationReport report;
};

namespace {

thread_local std::string g_last_error;

int status_of(ohmic::ErrorCode code) {
    using ohmic::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return OHM_ERR_INVALID_ARGUMENT;
        case ErrorCode::domain: return OHM_ERR_DOMAIN;
        case ErrorCode::unsupported_exponent: return OHM_ERR_UNSUPPORTED_EXPONENT;
        case ErrorCode::numerical_accuracy: return OHM_ERR_NUMERICAL_ACCURACY;
        case ErrorCode::amplitude_underflow: return OHM_ERR_AMPLITUDE_UNDERFLOW;
        case ErrorCode::undefined_ratio: return OHM_ERR_UNDEFINED_RATIO;
        case ErrorCode::not_found: return OHM_ERR_NOT_FOUND;
        case ErrorCode::config: return OHM_ERR_CONFIG;
        case ErrorCode::io: return OHM_ERR_IO;
    }
    return OHM_ERR_UNKNOWN;
}

int fail(int status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <class F>
int guard(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const ohmic::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(OHM_ERR_UNKNOWN, "out of memory");
    } catch (const std::exception& e) {
        return fail(OHM_ERR_UNKNOWN, e.what());
    } catch (...) {
        return fail(OHM_ERR_UNKNOWN, "unknown exception");
    }
}

#define OHM_REQUIRE(p) \
    do { if (!(p)) return fail(OHM_ERR_NULL_POINTER, "argument " #p " is null"); } while (0)

int copy_string(const std::string& text, char* buf, std::size_t* len) {
    OHM_REQUIRE(len);
    const std::size_t needed = text.size() + 1;
    const std::size_t capacity = *len;
    *len = needed;
    if (buf == nullptr || capacity < needed) return fail(OHM_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(needed) + " bytes");
    std::memcpy(buf, text.c_str(), needed);
    return OHM_OK;
}

ohmic::RateModel rate_model_of(int value) {
    switch (value) {
        case OHM_RATES_EXACT: return ohmic::RateModel::exact;
        case OHM_RATES_CLOSED_FORM: return ohmic::RateModel::closed_form;
        default: throw ohmic::InvalidArgument("unknown rate model " + std::to_string(value));
    }
}

int rate_model_code(ohmic::RateModel m) {
    return m == ohmic::RateModel::exact ? OHM_RATES_EXACT : OHM_RATES_CLOSED_FORM;
}

ohm_measure_report to_c(const ohmic::MeasureReport& r) {
    return {r.n_markov, r.n_rate, r.qsl_ratio, r.qsl_defined ? 1 : 0, r.pop_tau, r.residual_n, r.residual_qsl, r.tau};
}

ohmic::ReservoirSpec reservoir(double s, double eta, double omega_c) {
    ohmic::ReservoirSpec r{s, eta, omega_c};
    r.validate();
    return r;
}

}  // namespace

extern "C" {

const char* ohm_version(void) { return "1.0.0"; }

const char* ohm_status_string(int status) {
    switch (status) {
        case OHM_OK: return "ok";
        case OHM_ERR_NULL_POINTER: return "null pointer";
        case OHM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case OHM_ERR_DOMAIN: return "domain error";
        case OHM_ERR_UNSUPPORTED_EXPONENT: return "unsupported exponent";
        case OHM_ERR_NUMERICAL_ACCURACY: return "numerical accuracy";
        case OHM_ERR_AMPLITUDE_UNDERFLOW: return "amplitude underflow";
        case OHM_ERR_UNDEFINED_RATIO: return "undefined ratio";
        case OHM_ERR_NOT_FOUND: return "not found";
        case OHM_ERR_CONFIG: return "configuration error";
        case OHM_ERR_IO: return "i/o error";
        case OHM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case OHM_ERR_OUT_OF_RANGE: return "index out of range";
        default: return "unknown error";
    }
}

const char* ohm_last_error(void) { return g_last_error.c_str(); }

int ohm_config_create(ohm_config** out) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = new ohm_config{};
        return OHM_OK;
    });
}

int ohm_config_clone(const ohm_config* cfg, ohm_config** out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = new ohm_config{cfg->cfg};
        return OHM_OK;
    });
}

void ohm_config_destroy(ohm_config* cfg) { delete cfg; }

int ohm_config_set(ohm_config* cfg, const char* key, double value) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(key);
    return guard([&]() -> int {
        ohmic::set_numeric_field(cfg->cfg, key, value);
        return OHM_OK;
    });
}

int ohm_config_get(const ohm_config* cfg, const char* key, double* out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(key);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = ohmic::get_numeric_field(cfg->cfg, key);
        return OHM_OK;
    });
}

int ohm_config_set_string(ohm_config* cfg, const char* key, const char* value) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(key);
    OHM_REQUIRE(value);
    return guard([&]() -> int {
        const std::string k = key;
        auto& c = cfg->cfg;
        if (k == "rates") c.rates = ohmic::parse_rate_model(value);
        else if (k == "format") c.format = ohmic::parse_output_format(value);
        else if (k == "output") c.output = value;
        else if (k == "sweep_param") {
            if (!c.sweep) c.sweep = ohmic::SweepSpec{};
            c.sweep->param = ohmic::parse_sweep_param(value);
        } else throw ohmic::ConfigError(k, "unknown string field");
        return OHM_OK;
    });
}

int ohm_config_get_string(const ohm_config* cfg, const char* key, char* buf, size_t* len) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(key);
    return guard([&]() -> int {
        const std::string k = key;
        const auto& c = cfg->cfg;
        std::string text;
        if (k == "rates") text = ohmic::to_string(c.rates);
        else if (k == "format") text = ohmic::to_string(c.format);
        else if (k == "output") text = c.output;
        else if (k == "preset") text = c.preset.value_or("");
        else if (k == "sweep_param") {
            if (!c.sweep) throw ohmic::ConfigError(k, "configuration has no sweep block");
            text = ohmic::to_string(c.sweep->param);
        } else throw ohmic::ConfigError(k, "unknown string field");
        return copy_string(text, buf, len);
    });
}

int ohm_config_apply_preset(ohm_config* cfg, const char* preset) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(preset);
    return guard([&]() -> int {
        auto next = ohmic::preset_config(preset);
        next.output = cfg->cfg.output;
        next.format = cfg->cfg.format;
        next.threads = cfg->cfg.threads;
        cfg->cfg = std::move(next);
        return OHM_OK;
    });
}

int ohm_config_load_json(ohm_config* cfg, const char* json_text) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(json_text);
    return guard([&]() -> int {
        cfg->cfg = ohmic::parse_config_json(json_text, cfg->cfg);
        return OHM_OK;
    });
}

int ohm_config_load_file(ohm_config* cfg, const char* path) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(path);
    return guard([&]() -> int {
        cfg->cfg = ohmic::load_config_file(path, cfg->cfg);
        return OHM_OK;
    });
}

int ohm_config_clear_sweep(ohm_config* cfg) {
    OHM_REQUIRE(cfg);
    cfg->cfg.sweep.reset();
    return OHM_OK;
}

int ohm_config_has_sweep(const ohm_config* cfg, int* out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    *out = cfg->cfg.sweep ? 1 : 0;
    return OHM_OK;
}

int ohm_config_to_json(const ohm_config* cfg, char* buf, size_t* len) {
    OHM_REQUIRE(cfg);
    return guard([&]() -> int { return copy_string(ohmic::config_to_json(cfg->cfg), buf, len); });
}

int ohm_config_validate(const ohm_config* cfg) {
    OHM_REQUIRE(cfg);
    return guard([&]() -> int {
        cfg->cfg.validate();
        return OHM_OK;
    });
}

int ohm_figure_series_count(int figure, size_t* out) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = ohmic::figure_series(figure).size();
        return OHM_OK;
    });
}

int ohm_figure_series(int figure, size_t index, ohm_config** out, char* label, size_t* label_len) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        auto series = ohmic::figure_series(figure);
        if (index >= series.size()) return fail(OHM_ERR_OUT_OF_RANGE, "figure series index out of range");
        if (label_len) {
            const int rc = copy_string(series[index].label, label, label_len);
            if (rc != OHM_OK) return rc;
        }
        *out = new ohm_config{std::move(series[index].config)};
        return OHM_OK;
    });
}

int ohm_spectral_density(double s, double eta, double omega_c, double omega, double* out) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = ohmic::spectral_density(omega, reservoir(s, eta, omega_c));
        return OHM_OK;
    });
}

int ohm_decay_rate(double s, double eta, double omega_c, int rate_model, double omega_j, double t, double* out) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        const auto r = reservoir(s, eta, omega_c);
        const auto model = rate_model_of(rate_model);
        *out = model == ohmic::RateModel::closed_form ? ohmic::decay_rate_closed(omega_j, t, r)
                                                      : ohmic::decay_rate_exact(omega_j, t, r);
        return OHM_OK;
    });
}

int ohm_decay_rate_quadrature(double s, double eta, double omega_c, double omega_j, double t, double* out,
                              double* abs_error) {
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        const auto res = ohmic::decay_rate_quadrature(omega_j, t, reservoir(s, eta, omega_c));
        *out = res.value;
        if (abs_error) *abs_error = res.abs_error;
        return OHM_OK;
    });
}

int ohm_trajectory_compute(const ohm_config* cfg, ohm_trajectory** out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        auto traj = ohmic::run_dynamics(cfg->cfg);
        auto rates = ohmic::rate_series(traj);
        auto sigma = ohmic::sigma_series(traj);
        *out = new ohm_trajectory{std::move(traj), std::move(rates), std::move(sigma)};
        return OHM_OK;
    });
}

void ohm_trajectory_destroy(ohm_trajectory* traj) { delete traj; }

int ohm_trajectory_size(const ohm_trajectory* traj, size_t* out) {
    OHM_REQUIRE(traj);
    OHM_REQUIRE(out);
    *out = traj->traj.size();
    return OHM_OK;
}

int ohm_trajectory_column(const ohm_trajectory* traj, int column, double* out, size_t n) {
    OHM_REQUIRE(traj);
    OHM_REQUIRE(out);
    const auto& t = traj->traj;
    if (n < t.size()) return fail(OHM_ERR_BUFFER_TOO_SMALL, "column buffer holds fewer samples than the trajectory");
    for (std::size_t k = 0; k < t.size(); ++k) {
        switch (column) {
            case OHM_COL_T: out[k] = t.grid[k]; break;
            case OHM_COL_P_RE: out[k] = t.p[k].real(); break;
            case OHM_COL_P_IM: out[k] = t.p[k].imag(); break;
            case OHM_COL_POP:
            case OHM_COL_TRACE_DISTANCE: out[k] = t.pop[k]; break;
            case OHM_COL_SIGMA: out[k] = traj->sigma[k]; break;
            case OHM_COL_GAMMA: out[k] = traj->rates.gamma[k]; break;
            case OHM_COL_LAMB: out[k] = traj->rates.lamb[k]; break;
            case OHM_COL_BETA1: out[k] = t.beta1[k]; break;
            case OHM_COL_BETA2: out[k] = t.beta2[k]; break;
            default: return fail(OHM_ERR_INVALID_ARGUMENT, "unknown column " + std::to_string(column));
        }
    }
    return OHM_OK;
}

int ohm_trajectory_rate_model(const ohm_trajectory* traj, int* out) {
    OHM_REQUIRE(traj);
    OHM_REQUIRE(out);
    *out = rate_model_code(traj->traj.model);
    return OHM_OK;
}

int ohm_trajectory_measures(const ohm_trajectory* traj, ohm_measure_report* out) {
    OHM_REQUIRE(traj);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = to_c(ohmic::measure(traj->traj));
        return OHM_OK;
    });
}

int ohm_trajectory_atom_state(const ohm_trajectory* traj, double rho11, double rho10_re, double rho10_im, size_t k,
                              double out[8]) {
    OHM_REQUIRE(traj);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        if (k >= traj->traj.size()) return fail(OHM_ERR_OUT_OF_RANGE, "sample index out of range");
        const ohmic::InitialAtomState init{rho11, {rho10_re, rho10_im}};
        init.validate();
        const auto m = ohmic::atom_state_at(traj->traj, init, k);
        const ohmic::cplx entries[4] = {m.ee, m.eg, m.ge, m.gg};
        for (int i = 0; i < 4; ++i) {
            out[2 * i] = entries[i].real();
            out[2 * i + 1] = entries[i].imag();
        }
        return OHM_OK;
    });
}

int ohm_dressed_oracle(const ohm_config* cfg, double* out, size_t n) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        const auto& c = cfg->cfg;
        c.validate();
        if (n < c.steps) return fail(OHM_ERR_BUFFER_TOO_SMALL, "oracle buffer holds fewer samples than the grid");
        const auto series = ohmic::dressed_ode_oracle(c.system, c.reservoir, c.grid(),
                                                      ohmic::InitialAtomState::excited(), c.rates);
        std::copy(series.excited_population.begin(), series.excited_population.end(), out);
        return OHM_OK;
    });
}

int ohm_sweep_run(const ohm_config* cfg, ohm_sweep** out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        *out = new ohm_sweep{ohmic::run_sweep(cfg->cfg)};
        return OHM_OK;
    });
}

void ohm_sweep_destroy(ohm_sweep* sweep) { delete sweep; }

int ohm_sweep_size(const ohm_sweep* sweep, size_t* out) {
    OHM_REQUIRE(sweep);
    OHM_REQUIRE(out);
    *out = sweep->rows.size();
    return OHM_OK;
}

int ohm_sweep_row_at(const ohm_sweep* sweep, size_t i, ohm_sweep_row* out) {
    OHM_REQUIRE(sweep);
    OHM_REQUIRE(out);
    if (i >= sweep->rows.size()) return fail(OHM_ERR_OUT_OF_RANGE, "sweep row index out of range");
    const auto& row = sweep->rows[i];
    *out = {row.value, to_c(row.report), rate_model_code(row.model), row.wall_seconds};
    return OHM_OK;
}

int ohm_critical_run(const ohm_config* cfg, double lo, double hi, double eps_n, ohm_critical** out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    *out = nullptr;
    return guard([&]() -> int {
        const auto& c = cfg->cfg;
        c.validate();
        ohmic::CriticalOptions opt;
        opt.coupling_lo = lo;
        opt.coupling_hi = hi;
        if (eps_n > 0.0) opt.eps_n = eps_n;
        opt.model = c.rates;
        opt.threads = c.threads;
        try {
            *out = new ohm_critical{ohmic::critical_coupling(c.reservoir, c.system.omega0, c.grid(), opt)};
        } catch (const ohmic::CriticalNotFound& e) {
            *out = new ohm_critical{e.scan()};
            return fail(OHM_ERR_NOT_FOUND, e.what());
        }
        return OHM_OK;
    });
}

void ohm_critical_destroy(ohm_critical* scan) { delete scan; }

int ohm_critical_summary_get(const ohm_critical* scan, ohm_critical_summary* out) {
    OHM_REQUIRE(scan);
    OHM_REQUIRE(out);
    const auto& s = scan->scan;
    *out = {s.found ? 1 : 0, s.critical_coupling, s.bracket_lo, s.bracket_hi, s.n_at_probe, s.transitions.size(),
            s.coarse.size()};
    return OHM_OK;
}

int ohm_critical_transition(const ohm_critical* scan, size_t i, double* lo, double* hi, int* rising) {
    OHM_REQUIRE(scan);
    if (i >= scan->scan.transitions.size()) return fail(OHM_ERR_OUT_OF_RANGE, "transition index out of range");
    const auto& t = scan->scan.transitions[i];
    if (lo) *lo = t.lo;
    if (hi) *hi = t.hi;
    if (rising) *rising = t.rising ? 1 : 0;
    return OHM_OK;
}

int ohm_critical_sample(const ohm_critical* scan, size_t i, double* coupling, double* n_markov) {
    OHM_REQUIRE(scan);
    if (i >= scan->scan.coarse.size()) return fail(OHM_ERR_OUT_OF_RANGE, "sample index out of range");
    if (coupling) *coupling = scan->scan.coarse[i].first;
    if (n_markov) *n_markov = scan->scan.coarse[i].second;
    return OHM_OK;
}

int ohm_validate_run(const ohm_config* cfg, double tolerance, ohm_validation** out) {
    OHM_REQUIRE(cfg);
    OHM_REQUIRE(out);
    return guard([&]() -> int {
        std::optional<double> tol;
        if (tolerance > 0.0) tol = tolerance;
        *out = new ohm_validation{ohmic::validate_run(cfg->cfg, tol)};
        return OHM_OK;
    });
}

void ohm_validation_destroy(ohm_validation* report) { delete report; }

int ohm_validation_size(const ohm_validation* report, size_t* out) {
    OHM_REQUIRE(report);
    OHM_REQUIRE(out);
    *out = report->report.checks.size();
    return OHM_OK;
}

int ohm_validation_check(const ohm_validation* report, size_t i, ohm_check* out) {
    OHM_REQUIRE(report);
    OHM_REQUIRE(out);
    if (i >= report->report.checks.size()) return fail(OHM_ERR_OUT_OF_RANGE, "check index out of range");
    const auto& c = report->report.checks[i];
    *out = {c.name.c_str(), c.residual, c.threshold, c.passed ? 1 : 0, c.detail.c_str()};
    return OHM_OK;
}

int ohm_validation_passed(const ohm_validation* report, int* out) {
    OHM_REQUIRE(report);
    OHM_REQUIRE(out);
    *out = report->report.passed() ? 1 : 0;
    return OHM_OK;
}

}  // extern "C"
