#include "rdc/run_config.hpp"

#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "rdc/errors.hpp"
#include "rdc/figure_export.hpp"

namespace rdc {

namespace {

using nlohmann::json;

const std::set<std::string>& experiment_names() {
    static const std::set<std::string> names = {
        "path",  "path-to-barrier", "barrier",   "mu-star",     "simulate",
        "omega", "wave",            "staircase", "quasistatic", "min-time"};
    return names;
}

double as_number(const json& value, const std::string& key) {
    if (!value.is_number()) {
        throw ValidationError("config: " + key + " must be a number");
    }
    return value.get<double>();
}

int as_integer(const json& value, const std::string& key) {
    if (!value.is_number_integer()) {
        throw ValidationError("config: " + key + " must be an integer");
    }
    return value.get<int>();
}

std::string as_string(const json& value, const std::string& key) {
    if (!value.is_string()) {
        throw ValidationError("config: " + key + " must be a string");
    }
    return value.get<std::string>();
}

void require_finite(double x, const std::string& key) {
    if (!std::isfinite(x)) {
        throw ValidationError("config: " + key + " must be finite");
    }
}

void require_positive(double x, const std::string& key) {
    require_finite(x, key);
    if (x <= 0.0) {
        throw ValidationError("config: " + key + " must be positive");
    }
}

void require_unit(double x, const std::string& key) {
    require_finite(x, key);
    if (x < 0.0 || x > 1.0) {
        throw ValidationError("config: " + key + " must lie in [0, 1]");
    }
}

json resolved_object(const RunConfig& c) {
    json obj;
    obj["experiment"] = c.experiment;
    obj["nonlinearity"] = json::parse(c.nl.to_json());
    obj["mu"] = c.mu;
    obj["dimension"] = c.dimension;
    obj["radius"] = c.radius;
    if (c.dimension == 1) {
        obj["length"] = 2.0 * c.radius;
    }
    obj["nr"] = c.nr;
    obj["dt"] = c.dt;
    obj["tol"] = c.tol;
    obj["eps"] = c.eps;
    obj["horizon"] = c.horizon;
    obj["t_hi"] = c.t_hi;
    obj["dwell"] = c.dwell;
    obj["a"] = c.a;
    obj["u0"] = c.u0;
    obj["target"] = c.target_value();
    obj["t_max"] = c.t_max;
    obj["omega_tol"] = c.omega_tol;
    obj["rate_cap"] = c.rate_cap ? json(*c.rate_cap) : json(nullptr);
    obj["init_boundary"] =
        c.init_boundary ? json(*c.init_boundary) : json(nullptr);
    return obj;
}

} // namespace

double RunConfig::target_value() const {
    if (target) {
        return *target;
    }
    return nl.has_theta() ? nl.theta() : 0.5;
}

std::string RunConfig::resolved_json() const {
    json obj = resolved_object(*this);
    obj["out_dir"] = out_dir;
    obj["format"] = format;
    return obj.dump(2);
}

std::string RunConfig::hash_name() const {
    return experiment + "-" + fnv1a_hex(resolved_object(*this).dump());
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::string& experiment) {
    RunConfig config;
    config.experiment = experiment;
    json obj;
    if (json_text.empty()) {
        obj = json::object();
    } else {
        try {
            obj = json::parse(json_text);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("config parse: ") + e.what());
        }
    }
    if (!obj.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }
    bool has_radius = false;
    bool has_length = false;
    double length = 0.0;
    for (const auto& [key, value] : obj.items()) {
        if (key == "experiment") {
            const std::string named = as_string(value, key);
            if (named != experiment) {
                throw ValidationError("config: experiment \"" + named +
                                      "\" does not match subcommand \"" +
                                      experiment + "\"");
            }
        } else if (key == "nonlinearity") {
            if (!value.is_object()) {
                throw ValidationError("config: nonlinearity must be an object");
            }
            config.nl = Nonlinearity::from_json(value.dump());
        } else if (key == "mu") {
            config.mu = as_number(value, key);
        } else if (key == "dimension") {
            config.dimension = as_integer(value, key);
        } else if (key == "radius") {
            config.radius = as_number(value, key);
            has_radius = true;
        } else if (key == "length") {
            length = as_number(value, key);
            has_length = true;
        } else if (key == "nr") {
            config.nr = as_integer(value, key);
        } else if (key == "dt") {
            config.dt = as_number(value, key);
        } else if (key == "tol") {
            config.tol = as_number(value, key);
        } else if (key == "eps") {
            config.eps = as_number(value, key);
        } else if (key == "horizon") {
            config.horizon = as_number(value, key);
        } else if (key == "t_hi") {
            config.t_hi = as_number(value, key);
        } else if (key == "dwell") {
            config.dwell = as_number(value, key);
        } else if (key == "a") {
            config.a = as_number(value, key);
        } else if (key == "u0") {
            config.u0 = as_number(value, key);
        } else if (key == "target") {
            config.target = as_number(value, key);
        } else if (key == "t_max") {
            config.t_max = as_number(value, key);
        } else if (key == "omega_tol") {
            config.omega_tol = as_number(value, key);
        } else if (key == "rate_cap") {
            config.rate_cap = as_number(value, key);
        } else if (key == "init_boundary") {
            config.init_boundary = as_number(value, key);
        } else if (key == "out_dir") {
            config.out_dir = as_string(value, key);
        } else if (key == "format") {
            config.format = as_string(value, key);
        } else {
            throw ValidationError("config: unknown key \"" + key + "\"");
        }
    }
    if (has_length) {
        if (has_radius) {
            throw ValidationError(
                "config: give either length or radius, not both");
        }
        require_positive(length, "length");
        if (config.dimension != 1) {
            throw ValidationError(
                "config: length applies to dimension 1 only");
        }
        config.radius = length / 2.0;
    }
    validate_run_config(config);
    return config;
}

void validate_run_config(const RunConfig& config) {
    if (experiment_names().count(config.experiment) == 0) {
        throw ValidationError("config: unknown experiment \"" +
                              config.experiment + "\"");
    }
    require_positive(config.mu, "mu");
    if (config.dimension < 1 || config.dimension > 3) {
        throw ValidationError("config: dimension must be 1, 2, or 3");
    }
    require_positive(config.radius, "radius");
    if (config.nr < 2) {
        throw ValidationError("config: nr must be at least 2");
    }
    require_positive(config.dt, "dt");
    require_positive(config.tol, "tol");
    require_positive(config.eps, "eps");
    require_positive(config.horizon, "horizon");
    require_positive(config.t_hi, "t_hi");
    require_positive(config.dwell, "dwell");
    require_unit(config.a, "a");
    require_unit(config.u0, "u0");
    if (config.target) {
        require_unit(*config.target, "target");
    }
    require_positive(config.t_max, "t_max");
    require_positive(config.omega_tol, "omega_tol");
    if (config.rate_cap) {
        require_positive(*config.rate_cap, "rate_cap");
    }
    if (config.init_boundary) {
        require_unit(*config.init_boundary, "init_boundary");
    }
    if (config.out_dir.empty()) {
        throw ValidationError("config: out_dir must be nonempty");
    }
    if (config.format != "csv" && config.format != "svg") {
        throw ValidationError("config: format must be csv or svg");
    }
}

} // namespace rdc
