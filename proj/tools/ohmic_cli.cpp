// Command-line front end over the ohmic C interface.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ohmic/ohmic.h"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kIoError = 2, kNotFound = 3, kValidationFailed = 4, kInternal = 5 };

struct Failure {
    int exit_code;
    std::string message;
};

int exit_code_for(int status) {
    switch (status) {
        case OHM_ERR_CONFIG:
        case OHM_ERR_INVALID_ARGUMENT:
        case OHM_ERR_DOMAIN:
        case OHM_ERR_UNSUPPORTED_EXPONENT: return kConfigError;
        case OHM_ERR_IO: return kIoError;
        case OHM_ERR_NOT_FOUND: return kNotFound;
        default: return kInternal;
    }
}

void check(int status) {
    if (status != OHM_OK) {
        std::string msg = ohm_last_error();
        if (msg.empty()) msg = ohm_status_string(status);
        throw Failure{exit_code_for(status), msg};
    }
}

struct ConfigDeleter {
    void operator()(ohm_config* c) const { ohm_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<ohm_config, ConfigDeleter>;

struct TrajectoryDeleter {
    void operator()(ohm_trajectory* t) const { ohm_trajectory_destroy(t); }
};
struct SweepDeleter {
    void operator()(ohm_sweep* s) const { ohm_sweep_destroy(s); }
};
struct CriticalDeleter {
    void operator()(ohm_critical* c) const { ohm_critical_destroy(c); }
};
struct ValidationDeleter {
    void operator()(ohm_validation* v) const { ohm_validation_destroy(v); }
};

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt(v);
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out + "\"";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string config_json(const ohm_config* cfg) {
    std::size_t len = 0;
    ohm_config_to_json(cfg, nullptr, &len);
    std::string text(len, '\0');
    check(ohm_config_to_json(cfg, text.data(), &len));
    text.resize(len - 1);
    return text;
}

std::string get_string(const ohm_config* cfg, const char* key) {
    std::size_t len = 0;
    ohm_config_get_string(cfg, key, nullptr, &len);
    std::string text(len, '\0');
    check(ohm_config_get_string(cfg, key, text.data(), &len));
    text.resize(len - 1);
    return text;
}

double get_number(const ohm_config* cfg, const char* key) {
    double v = 0.0;
    check(ohm_config_get(cfg, key, &v));
    return v;
}

// Named columns with preformatted CSV and JSON cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<std::vector<std::string>> json_rows;

    void add(std::vector<std::string> csv, std::vector<std::string> json) {
        csv_rows.push_back(std::move(csv));
        json_rows.push_back(std::move(json));
    }
};

struct Options {
    std::string config_file;
    std::optional<std::string> preset;
    std::optional<double> s, eta, omega_c, coupling, tau;
    std::optional<std::size_t> steps;
    std::optional<unsigned> threads;
    std::optional<std::string> output, format, rates;
    std::optional<std::string> param;
    std::optional<double> start, stop;
    std::optional<std::size_t> sweep_steps;
    double lo = 0.1, hi = 4.0, eps = 1e-4;
    double tolerance = 0.0;
    bool timing = false;
    int figure = 0;
};

void apply_overrides(ohm_config* cfg, const Options& o) {
    auto set = [&](const char* key, const auto& value) {
        if (value) check(ohm_config_set(cfg, key, static_cast<double>(*value)));
    };
    set("s", o.s);
    set("eta", o.eta);
    set("omega_c", o.omega_c);
    set("coupling", o.coupling);
    set("tau", o.tau);
    set("steps", o.steps);
    set("threads", o.threads);
    if (o.param) check(ohm_config_set_string(cfg, "sweep_param", o.param->c_str()));
    set("sweep_start", o.start);
    set("sweep_stop", o.stop);
    set("sweep_steps", o.sweep_steps);
    if (o.output) check(ohm_config_set_string(cfg, "output", o.output->c_str()));
    if (o.format) check(ohm_config_set_string(cfg, "format", o.format->c_str()));
    if (o.rates) check(ohm_config_set_string(cfg, "rates", o.rates->c_str()));
}

ConfigPtr resolve_config(const Options& o) {
    ohm_config* raw = nullptr;
    check(ohm_config_create(&raw));
    ConfigPtr cfg(raw);
    if (o.preset) check(ohm_config_apply_preset(cfg.get(), o.preset->c_str()));
    if (!o.config_file.empty()) check(ohm_config_load_file(cfg.get(), o.config_file.c_str()));
    apply_overrides(cfg.get(), o);
    check(ohm_config_validate(cfg.get()));
    return cfg;
}

bool has_sweep(const ohm_config* cfg) {
    int flag = 0;
    check(ohm_config_has_sweep(cfg, &flag));
    return flag != 0;
}

void warn_rate_fallback(const ohm_config* cfg, int used, const std::string& where) {
    if (get_string(cfg, "rates") == "closed" && used == OHM_RATES_EXACT)
        std::cerr << "ohmic: closed-form rates are unavailable for " << where
                  << "; using the exact correlation-function rates\n";
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Failure{kIoError, "cannot open output file '" + path + "'"};
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish(const std::string& path) {
        stream().flush();
        if (!stream()) throw Failure{kIoError, "error writing output to '" + (path.empty() ? "stdout" : path) + "'"};
    }

private:
    std::ofstream file_;
};

void write_table(const ohm_config* cfg, const Table& table, const std::vector<std::string>& config_lines) {
    const std::string path = get_string(cfg, "output");
    const bool json = get_string(cfg, "format") == "json";
    Sink sink(path);
    auto& out = sink.stream();
    if (json) {
        out << "[";
        for (std::size_t r = 0; r < table.json_rows.size(); ++r) {
            out << (r ? ",\n " : "\n ") << "{";
            for (std::size_t c = 0; c < table.header.size(); ++c)
                out << (c ? ", " : "") << json_string(table.header[c]) << ": " << table.json_rows[r][c];
            out << "}";
        }
        out << "\n]\n";
    } else {
        for (const auto& line : config_lines) out << "# " << line << "\n";
        for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << csv_field(table.header[c]);
        out << "\n";
        for (const auto& row : table.csv_rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
            out << "\n";
        }
    }
    sink.finish(path);
}

const std::vector<std::string> kDynamicsHeader = {"t",     "re_p",  "im_p",       "pop",   "trace_distance",
                                                  "sigma", "gamma", "lamb_shift", "beta1", "beta2"};

void dynamics_rows(const ohm_config* cfg, Table& table, const std::string& label) {
    ohm_trajectory* raw = nullptr;
    check(ohm_trajectory_compute(cfg, &raw));
    std::unique_ptr<ohm_trajectory, TrajectoryDeleter> traj(raw);
    int used = OHM_RATES_EXACT;
    check(ohm_trajectory_rate_model(traj.get(), &used));
    warn_rate_fallback(cfg, used, "s=" + fmt(get_number(cfg, "s")));

    std::size_t n = 0;
    check(ohm_trajectory_size(traj.get(), &n));
    const int columns[] = {OHM_COL_T,     OHM_COL_P_RE,  OHM_COL_P_IM, OHM_COL_POP,   OHM_COL_TRACE_DISTANCE,
                           OHM_COL_SIGMA, OHM_COL_GAMMA, OHM_COL_LAMB, OHM_COL_BETA1, OHM_COL_BETA2};
    std::vector<std::vector<double>> data;
    for (int col : columns) {
        data.emplace_back(n);
        check(ohm_trajectory_column(traj.get(), col, data.back().data(), n));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::string> csv, json;
        if (!label.empty()) {
            csv.push_back(label);
            json.push_back(json_string(label));
        }
        for (const auto& column : data) {
            csv.push_back(fmt(column[k]));
            json.push_back(json_number(column[k]));
        }
        table.add(std::move(csv), std::move(json));
    }
}

std::vector<std::string> sweep_header(const ohm_config* cfg, bool timing, bool labelled) {
    std::vector<std::string> h;
    if (labelled) h.push_back("series");
    h.insert(h.end(), {get_string(cfg, "sweep_param"), "n_markov", "n_rate", "qsl_ratio", "pop_tau", "residual_n",
                       "residual_qsl", "rates"});
    if (timing) h.push_back("wall_seconds");
    return h;
}

void sweep_rows(const ohm_config* cfg, Table& table, const std::string& label, bool labelled, bool timing) {
    ohm_sweep* raw = nullptr;
    check(ohm_sweep_run(cfg, &raw));
    std::unique_ptr<ohm_sweep, SweepDeleter> sweep(raw);
    std::size_t n = 0;
    check(ohm_sweep_size(sweep.get(), &n));
    bool warned = false;
    for (std::size_t i = 0; i < n; ++i) {
        ohm_sweep_row row{};
        check(ohm_sweep_row_at(sweep.get(), i, &row));
        if (!warned && get_string(cfg, "rates") == "closed" && row.rate_model == OHM_RATES_EXACT) {
            const double s = get_string(cfg, "sweep_param") == "s" ? row.value : get_number(cfg, "s");
            warn_rate_fallback(cfg, row.rate_model, "s=" + fmt(s));
            warned = true;
        }
        const std::string model = row.rate_model == OHM_RATES_EXACT ? "exact" : "closed";
        const double values[] = {row.value,
                                 row.report.n_markov,
                                 row.report.n_rate,
                                 row.report.qsl_ratio,
                                 row.report.pop_tau,
                                 row.report.residual_n,
                                 row.report.residual_qsl};
        std::vector<std::string> csv, json;
        if (labelled) {
            csv.push_back(label);
            json.push_back(json_string(label));
        }
        for (double v : values) {
            csv.push_back(fmt(v));
            json.push_back(json_number(v));
        }
        csv.push_back(model);
        json.push_back(json_string(model));
        if (timing) {
            csv.push_back(fmt(row.wall_seconds));
            json.push_back(json_number(row.wall_seconds));
        }
        table.add(std::move(csv), std::move(json));
    }
}

int cmd_dynamics(const Options& o) {
    auto cfg = resolve_config(o);
    if (has_sweep(cfg.get()))
        throw Failure{kConfigError, "sweep: the dynamics command takes a configuration without a sweep block"};
    Table table;
    table.header = kDynamicsHeader;
    dynamics_rows(cfg.get(), table, "");
    write_table(cfg.get(), table, {config_json(cfg.get())});
    return kOk;
}

int cmd_sweep(const Options& o) {
    auto cfg = resolve_config(o);
    if (!has_sweep(cfg.get())) throw Failure{kConfigError, "sweep: configuration has no sweep block"};
    Table table;
    table.header = sweep_header(cfg.get(), o.timing, false);
    sweep_rows(cfg.get(), table, "", false, o.timing);
    write_table(cfg.get(), table, {config_json(cfg.get())});
    return kOk;
}

int cmd_figure(const Options& o) {
    std::size_t count = 0;
    check(ohm_figure_series_count(o.figure, &count));
    ohm_config* base_raw = nullptr;
    check(ohm_config_create(&base_raw));
    ConfigPtr base(base_raw);
    check(ohm_config_apply_preset(base.get(), ("fig" + std::to_string(o.figure)).c_str()));
    if (!o.config_file.empty()) check(ohm_config_load_file(base.get(), o.config_file.c_str()));
    apply_overrides(base.get(), o);

    Table table;
    std::vector<std::string> config_lines;
    const bool labelled = count > 1;
    for (std::size_t i = 0; i < count; ++i) {
        ohm_config* raw = nullptr;
        std::size_t label_len = 64;
        std::string label(label_len, '\0');
        check(ohm_figure_series(o.figure, i, &raw, label.data(), &label_len));
        label.resize(label_len - 1);
        ConfigPtr series(raw);
        apply_overrides(series.get(), o);
        check(ohm_config_validate(series.get()));
        config_lines.push_back((labelled ? label + " " : std::string()) + config_json(series.get()));
        if (o.figure == 1) {
            table.header = kDynamicsHeader;
            dynamics_rows(series.get(), table, "");
        } else {
            table.header = sweep_header(series.get(), o.timing, labelled);
            sweep_rows(series.get(), table, label, labelled, o.timing);
        }
    }
    write_table(base.get(), table, config_lines);
    return kOk;
}

int cmd_critical(const Options& o) {
    auto cfg = resolve_config(o);
    ohm_critical* raw = nullptr;
    const int status = ohm_critical_run(cfg.get(), o.lo, o.hi, o.eps, &raw);
    std::unique_ptr<ohm_critical, CriticalDeleter> scan(raw);
    if (status != OHM_OK && status != OHM_ERR_NOT_FOUND) check(status);
    const std::string not_found_message = ohm_last_error();

    ohm_critical_summary sum{};
    check(ohm_critical_summary_get(scan.get(), &sum));
    std::ostringstream transitions;
    transitions << "[";
    for (std::size_t i = 0; i < sum.transition_count; ++i) {
        double lo = 0, hi = 0;
        int rising = 0;
        check(ohm_critical_transition(scan.get(), i, &lo, &hi, &rising));
        transitions << (i ? ", " : "") << "{\"lo\": " << json_number(lo) << ", \"hi\": " << json_number(hi)
                    << ", \"rising\": " << (rising ? "true" : "false") << "}";
    }
    transitions << "]";

    std::ostringstream json;
    json << "{\"config\": " << config_json(cfg.get()) << ", \"found\": " << (sum.found ? "true" : "false")
         << ", \"critical_coupling\": " << json_number(sum.found ? sum.critical_coupling : NAN)
         << ", \"bracket_lo\": " << json_number(sum.found ? sum.bracket_lo : NAN)
         << ", \"bracket_hi\": " << json_number(sum.found ? sum.bracket_hi : NAN)
         << ", \"n_at_probe\": " << json_number(sum.found ? sum.n_at_probe : NAN) << ", \"eps_n\": " << json_number(o.eps)
         << ", \"range\": [" << json_number(o.lo) << ", " << json_number(o.hi) << "]"
         << ", \"transitions\": " << transitions.str() << ", \"samples\": " << sum.sample_count << "}";

    const std::string path = get_string(cfg.get(), "output");
    const bool as_json = get_string(cfg.get(), "format") == "json";
    Sink sink(path);
    auto& out = sink.stream();
    if (as_json) {
        out << json.str() << "\n";
    } else {
        out << "# " << config_json(cfg.get()) << "\n";
        if (sum.found) {
            out << "critical_coupling " << fmt(sum.critical_coupling) << "\n"
                << "bracket " << fmt(sum.bracket_lo) << " " << fmt(sum.bracket_hi) << "\n"
                << "n_at_probe " << fmt(sum.n_at_probe) << "\n";
        } else {
            out << "critical_coupling not found in [" << fmt(o.lo) << ", " << fmt(o.hi) << "]\n";
        }
        out << "transitions " << sum.transition_count << "\n"
            << "json " << json.str() << "\n";
    }
    sink.finish(path);
    if (!sum.found) {
        std::cerr << "ohmic: " << not_found_message << "\n";
        return kNotFound;
    }
    return kOk;
}

int cmd_validate(const Options& o) {
    auto cfg = resolve_config(o);
    if (has_sweep(cfg.get())) check(ohm_config_clear_sweep(cfg.get()));
    ohm_validation* raw = nullptr;
    check(ohm_validate_run(cfg.get(), o.tolerance, &raw));
    std::unique_ptr<ohm_validation, ValidationDeleter> report(raw);
    std::size_t n = 0;
    check(ohm_validation_size(report.get(), &n));
    int passed = 0;
    check(ohm_validation_passed(report.get(), &passed));

    const std::string path = get_string(cfg.get(), "output");
    const bool as_json = get_string(cfg.get(), "format") == "json";
    Sink sink(path);
    auto& out = sink.stream();
    if (as_json) out << "[";
    else out << "# " << config_json(cfg.get()) << "\ncheck,status,residual,threshold,detail\n";
    for (std::size_t i = 0; i < n; ++i) {
        ohm_check c{};
        check(ohm_validation_check(report.get(), i, &c));
        const std::string status = c.passed ? "PASS" : "FAIL";
        if (as_json) {
            out << (i ? ",\n " : "\n ") << "{\"check\": " << json_string(c.name) << ", \"passed\": "
                << (c.passed ? "true" : "false") << ", \"residual\": " << json_number(c.residual)
                << ", \"threshold\": " << json_number(c.threshold) << ", \"detail\": " << json_string(c.detail) << "}";
        } else {
            out << csv_field(c.name) << "," << status << "," << fmt(c.residual) << "," << fmt(c.threshold) << ","
                << csv_field(c.detail) << "\n";
        }
        if (!c.passed)
            std::cerr << "ohmic: check " << c.name << " failed: residual " << fmt(c.residual) << " > "
                      << fmt(c.threshold) << "\n";
    }
    if (as_json) out << "\n]\n";
    sink.finish(path);
    return passed ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ohmic: two-level atom in a lossy cavity coupled to an Ohmic-family reservoir.\n"
        "Units: omega0 = 1; frequencies are in units of omega0 and times in 1/omega0.\n"
        "Configuration: a flat JSON file (--config) and/or flags; flags override file values,\n"
        "and a preset (--preset or a \"preset\" key) is applied before any other field."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(ohm_version()));

    Options o;
    app.add_option("--config", o.config_file, "JSON configuration file");
    app.add_option("--preset", o.preset, "figure preset fig1..fig5");
    app.add_option("--s", o.s, "Ohmicity exponent s");
    app.add_option("--eta", o.eta, "coupling strength eta to the reservoir");
    app.add_option("--omega-c", o.omega_c, "cutoff frequency omega_c");
    app.add_option("--coupling", o.coupling, "atom-cavity coupling Omega");
    app.add_option("--tau", o.tau, "evolution horizon tau");
    app.add_option("--steps", o.steps, "number of time samples including t=0 and t=tau");
    app.add_option("--output", o.output, "output file (default standard output)");
    app.add_option("--format", o.format, "csv or json");
    app.add_option("--rates", o.rates, "decay-rate model: exact or closed");
    app.add_option("--threads", o.threads, "worker threads for sweeps (0 = hardware concurrency)");

    auto* dynamics = app.add_subcommand("dynamics", "time series of amplitude, trace distance and rates");
    auto* sweep = app.add_subcommand("sweep", "non-Markovianity and QSL ratio over a parameter sweep");
    auto* critical = app.add_subcommand("critical", "critical coupling at which N first becomes positive");
    auto* validate = app.add_subcommand("validate", "dual-route numerical checks for one configuration");
    auto* figure = app.add_subcommand("figure", "data for figure 1..5");

    for (auto* sub : {sweep, figure}) {
        sub->add_option("--param", o.param, "swept parameter: coupling, eta, omega_c or s");
        sub->add_option("--start", o.start, "first swept value");
        sub->add_option("--stop", o.stop, "last swept value");
        sub->add_option("--sweep-steps", o.sweep_steps, "number of swept values (>= 2)");
        sub->add_flag("--timing", o.timing, "append a wall_seconds column (output is then not reproducible)");
    }
    critical->add_option("--lo", o.lo, "lower end of the coupling range")->capture_default_str();
    critical->add_option("--hi", o.hi, "upper end of the coupling range")->capture_default_str();
    critical->add_option("--eps", o.eps, "threshold on N for a non-Markovian point")->capture_default_str();
    validate->add_option("--tolerance", o.tolerance, "replace every check threshold");
    figure->add_option("number", o.figure, "figure number")->required()->check(CLI::Range(1, 5));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*dynamics) return cmd_dynamics(o);
        if (*sweep) return cmd_sweep(o);
        if (*critical) return cmd_critical(o);
        if (*validate) return cmd_validate(o);
        if (*figure) return cmd_figure(o);
    } catch (const Failure& f) {
        std::cerr << "ohmic: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "ohmic: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
