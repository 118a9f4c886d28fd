#include "ohmic/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ohmic/errors.hpp"

namespace ohmic {

using nlohmann::json;

std::string_view to_string(SweepParam p) {
    switch (p) {
        case SweepParam::coupling: return "coupling";
        case SweepParam::eta: return "eta";
        case SweepParam::omega_c: return "omega_c";
        case SweepParam::s: return "s";
    }
    return "?";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(RateModel m) { return m == RateModel::exact ? "exact" : "closed"; }

SweepParam parse_sweep_param(std::string_view name) {
    if (name == "coupling") return SweepParam::coupling;
    if (name == "eta") return SweepParam::eta;
    if (name == "omega_c" || name == "omega-c") return SweepParam::omega_c;
    if (name == "s") return SweepParam::s;
    throw ConfigError("sweep_param", "expected one of coupling, eta, omega_c, s (got '" + std::string(name) + "')");
}

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("format", "expected csv or json (got '" + std::string(name) + "')");
}

RateModel parse_rate_model(std::string_view name) {
    if (name == "exact") return RateModel::exact;
    if (name == "closed" || name == "closed_form") return RateModel::closed_form;
    throw ConfigError("rates", "expected exact or closed (got '" + std::string(name) + "')");
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = i + 1 == steps ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return out;
}

void RunConfig::validate() const {
    auto wrap = [](const char* field, auto&& check) {
        try {
            check();
        } catch (const InvalidArgument& e) {
            throw ConfigError(field, e.what());
        }
    };
    wrap("reservoir", [&] { reservoir.validate(); });
    wrap("system", [&] { system.validate(); });
    wrap("grid", [&] { (void)grid(); });
    if (sweep) {
        if (sweep->steps < 2) throw ConfigError("sweep_steps", "must be >= 2");
        if (!(sweep->start < sweep->stop)) throw ConfigError("sweep_start", "must be < sweep_stop");
        for (double v : {sweep->start, sweep->stop}) {
            wrap("sweep", [&] { (void)with(sweep->param, v).reservoir.validate(); });
            wrap("sweep", [&] { (void)with(sweep->param, v).system.validate(); });
        }
    }
}

RunConfig RunConfig::with(SweepParam p, double value) const {
    RunConfig out = *this;
    switch (p) {
        case SweepParam::coupling: out.system.coupling = value; break;
        case SweepParam::eta: out.reservoir.eta = value; break;
        case SweepParam::omega_c: out.reservoir.omega_c = value; break;
        case SweepParam::s: out.reservoir.s = value; break;
    }
    return out;
}

RunConfig preset_config(std::string_view id) {
    RunConfig cfg;
    cfg.preset = std::string(id);
    cfg.tau = kFigureHorizon;
    cfg.steps = kFigureSteps;
    cfg.system = {1.0, 3.0};
    const SweepSpec coupling_sweep{SweepParam::coupling, 0.1, 4.0, 79};
    if (id == "fig1") {
        cfg.reservoir = {1.0, 0.1, 2.0};
    } else if (id == "fig2" || id == "fig3") {
        cfg.reservoir = {1.0, 0.1, 2.0};
        cfg.sweep = coupling_sweep;
    } else if (id == "fig4") {
        cfg.reservoir = {1.0, 0.9, 2.0};
        cfg.sweep = coupling_sweep;
    } else if (id == "fig5") {
        cfg.reservoir = {1.0, 0.6, 2.0};
        cfg.sweep = coupling_sweep;
    } else {
        throw ConfigError("preset", "expected fig1..fig5 (got '" + std::string(id) + "')");
    }
    return cfg;
}

std::vector<FigureSeries> figure_series(int figure) {
    if (figure < 1 || figure > 5) throw ConfigError("figure", "expected 1..5 (got " + std::to_string(figure) + ")");
    const RunConfig base = preset_config("fig" + std::to_string(figure));
    auto label = [](const char* name, double v) {
        std::ostringstream os;
        os << name << '=' << v;
        return os.str();
    };
    std::vector<FigureSeries> out;
    switch (figure) {
        case 1:
        case 2:
            out.push_back({"", base});
            break;
        case 3:
            for (double eta : {0.1, 0.5, 0.9}) out.push_back({label("eta", eta), base.with(SweepParam::eta, eta)});
            break;
        case 4:
            for (double wc : {2.0, 1.0, 0.5}) out.push_back({label("omega_c", wc), base.with(SweepParam::omega_c, wc)});
            break;
        case 5:
            for (double s : {0.5, 1.0, 3.0}) out.push_back({label("s", s), base.with(SweepParam::s, s)});
            break;
    }
    return out;
}

void set_numeric_field(RunConfig& cfg, std::string_view key, double value) {
    auto count = [&](const char* field) {
        if (!(value >= 0.0) || std::floor(value) != value) throw ConfigError(field, "must be a non-negative integer");
        return static_cast<std::size_t>(value);
    };
    auto sweep = [&]() -> SweepSpec& {
        if (!cfg.sweep) cfg.sweep = SweepSpec{};
        return *cfg.sweep;
    };
    if (key == "s") cfg.reservoir.s = value;
    else if (key == "eta") cfg.reservoir.eta = value;
    else if (key == "omega_c") cfg.reservoir.omega_c = value;
    else if (key == "coupling") cfg.system.coupling = value;
    else if (key == "omega0") cfg.system.omega0 = value;
    else if (key == "tau") cfg.tau = value;
    else if (key == "steps") cfg.steps = count("steps");
    else if (key == "threads") cfg.threads = static_cast<unsigned>(count("threads"));
    else if (key == "sweep_start") sweep().start = value;
    else if (key == "sweep_stop") sweep().stop = value;
    else if (key == "sweep_steps") sweep().steps = count("sweep_steps");
    else throw ConfigError(std::string(key), "unknown numeric field");
}

double get_numeric_field(const RunConfig& cfg, std::string_view key) {
    if (key == "s") return cfg.reservoir.s;
    if (key == "eta") return cfg.reservoir.eta;
    if (key == "omega_c") return cfg.reservoir.omega_c;
    if (key == "coupling") return cfg.system.coupling;
    if (key == "omega0") return cfg.system.omega0;
    if (key == "tau") return cfg.tau;
    if (key == "steps") return static_cast<double>(cfg.steps);
    if (key == "threads") return cfg.threads;
    if (cfg.sweep) {
        if (key == "sweep_start") return cfg.sweep->start;
        if (key == "sweep_stop") return cfg.sweep->stop;
        if (key == "sweep_steps") return static_cast<double>(cfg.sweep->steps);
    }
    throw ConfigError(std::string(key), "unknown or unset numeric field");
}

RunConfig parse_config_json(std::string_view text, const RunConfig& base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");

    RunConfig cfg = base;
    if (auto it = doc.find("preset"); it != doc.end()) {
        if (!it->is_string()) throw ConfigError("preset", "must be a string");
        cfg = preset_config(it->get<std::string>());
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "preset") continue;
        if (key == "rates" || key == "format" || key == "output" || key == "sweep_param") {
            if (!value.is_string()) throw ConfigError(key, "must be a string");
            const auto text_value = value.get<std::string>();
            if (key == "rates") cfg.rates = parse_rate_model(text_value);
            else if (key == "format") cfg.format = parse_output_format(text_value);
            else if (key == "output") cfg.output = text_value;
            else {
                if (!cfg.sweep) cfg.sweep = SweepSpec{};
                cfg.sweep->param = parse_sweep_param(text_value);
            }
            continue;
        }
        if (!value.is_number()) throw ConfigError(key, "must be a number");
        set_numeric_field(cfg, key, value.get<double>());
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str(), base);
}

std::string config_to_json(const RunConfig& cfg) {
    // nlohmann::json keeps keys sorted, so the text is deterministic.
    json doc = {
        {"s", cfg.reservoir.s},
        {"eta", cfg.reservoir.eta},
        {"omega_c", cfg.reservoir.omega_c},
        {"coupling", cfg.system.coupling},
        {"omega0", cfg.system.omega0},
        {"tau", cfg.tau},
        {"steps", cfg.steps},
        {"rates", std::string(to_string(cfg.rates))},
        {"format", std::string(to_string(cfg.format))},
    };
    if (cfg.preset) doc["preset"] = *cfg.preset;
    if (!cfg.output.empty()) doc["output"] = cfg.output;
    if (cfg.sweep) {
        doc["sweep_param"] = std::string(to_string(cfg.sweep->param));
        doc["sweep_start"] = cfg.sweep->start;
        doc["sweep_stop"] = cfg.sweep->stop;
        doc["sweep_steps"] = cfg.sweep->steps;
    }
    return doc.dump();
}

}  // namespace ohmic
