#include "petcor/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "petcor/errors.hpp"
#include "petcor/presets_data.hpp"

namespace petcor {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(path + "." + key, "missing required key");
    }
    return *it;
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) throw ConfigError(path, "expected a number");
    return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
    return value.get<int>();
}

Vector as_vector(const json& value, const std::string& path) {
    if (!value.is_array() || value.empty()) throw ConfigError(path, "expected a non-empty array");
    Vector v(value.size());
    for (std::size_t k = 0; k < value.size(); ++k) {
        v(k) = as_number(value[k], path + "[" + std::to_string(k) + "]");
    }
    return v;
}

Matrix as_matrix(const json& value, const std::string& path) {
    if (!value.is_array() || value.empty()) throw ConfigError(path, "expected a non-empty array of rows");
    const std::size_t rows = value.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const Vector row = as_vector(value[r], path + "[" + std::to_string(r) + "]");
        if (r == 0) {
            cols = row.size();
            m.resize(rows, cols);
        } else if (static_cast<std::size_t>(row.size()) != cols) {
            throw ConfigError(path + "[" + std::to_string(r) + "]", "ragged matrix rows");
        }
        m.row(r) = row.transpose();
    }
    return m;
}

Exosystem parse_exosystem(const json& node, const std::string& path) {
    check_keys(node, {"S", "v0"}, path);
    const Matrix s = as_matrix(require(node, "S", path), path + ".S");
    const Vector v0 = as_vector(require(node, "v0", path), path + ".v0");
    try {
        return Exosystem::make(s, v0);
    } catch (const ContractViolation& e) {
        throw ConfigError(path, e.what());
    }
}

CommGraph parse_graph(const json& node, const std::string& path) {
    check_keys(node, {"followers", "edges", "self_periods"}, path);
    CommGraph g;
    g.followers = as_int(require(node, "followers", path), path + ".followers");
    if (g.followers < 1) throw ConfigError(path + ".followers", "need at least one follower");
    g.adjacency = Matrix::Zero(g.followers + 1, g.followers + 1);

    const json& edges = require(node, "edges", path);
    if (!edges.is_array()) throw ConfigError(path + ".edges", "expected an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string epath = path + ".edges[" + std::to_string(k) + "]";
        const json& edge = edges[k];
        check_keys(edge, {"to", "from", "weight", "period"}, epath);
        const int to = as_int(require(edge, "to", epath), epath + ".to");
        const int from = as_int(require(edge, "from", epath), epath + ".from");
        if (to < 1 || to > g.followers || from < 0 || from > g.followers || to == from) {
            throw ConfigError(epath, "edge endpoints out of range");
        }
        const double weight =
            edge.contains("weight") ? as_number(edge["weight"], epath + ".weight") : 1.0;
        if (weight <= 0.0) throw ConfigError(epath + ".weight", "edge weight must be positive");
        g.adjacency(to, from) = weight;
        g.pair_periods[{to, from}] = as_number(require(edge, "period", epath), epath + ".period");
    }

    const json& selfp = require(node, "self_periods", path);
    if (!selfp.is_array() || static_cast<int>(selfp.size()) != g.followers) {
        throw ConfigError(path + ".self_periods", "expected one period per follower");
    }
    for (int i = 1; i <= g.followers; ++i) {
        g.pair_periods[{i, i}] =
            as_number(selfp[i - 1], path + ".self_periods[" + std::to_string(i - 1) + "]");
    }
    return g;
}

ObserverParams parse_observer(const json& node, const std::string& path) {
    check_keys(node, {"kappa1", "kappa2", "delta_s", "delta_v", "gamma_s", "gamma_v", "exact_init"},
               path);
    ObserverParams p;
    p.kappa1 = as_number(require(node, "kappa1", path), path + ".kappa1");
    p.kappa2 = as_number(require(node, "kappa2", path), path + ".kappa2");
    p.delta_s = as_number(require(node, "delta_s", path), path + ".delta_s");
    p.delta_v = as_number(require(node, "delta_v", path), path + ".delta_v");
    p.gamma_s = as_number(require(node, "gamma_s", path), path + ".gamma_s");
    p.gamma_v = as_number(require(node, "gamma_v", path), path + ".gamma_v");
    return p;
}

FollowerPlant parse_plant(const json& node, const std::string& path) {
    check_keys(node, {"f", "slope", "order", "delay", "x0", "ell", "disturbance", "strict_feedback"},
               path);
    FollowerPlant p;
    const std::string fname = require(node, "f", path).get<std::string>();
    const double slope = node.contains("slope") ? as_number(node["slope"], path + ".slope") : 1.0;
    try {
        p.f = Nonlinearity::from_name(fname, slope);
    } catch (const ContractViolation& e) {
        throw ConfigError(path + ".f", e.what());
    }
    p.order = node.contains("order") ? as_int(node["order"], path + ".order") : 1;
    p.delay = as_number(require(node, "delay", path), path + ".delay");
    p.x0 = as_vector(require(node, "x0", path), path + ".x0");
    p.ell = node.contains("ell") ? as_number(node["ell"], path + ".ell") : p.f.lipschitz();
    if (node.contains("disturbance")) {
        const std::string dpath = path + ".disturbance";
        check_keys(node["disturbance"], {"sin", "cos"}, dpath);
        if (node["disturbance"].contains("sin")) {
            p.disturbance.sin_amp = as_number(node["disturbance"]["sin"], dpath + ".sin");
        }
        if (node["disturbance"].contains("cos")) {
            p.disturbance.cos_amp = as_number(node["disturbance"]["cos"], dpath + ".cos");
        }
    }
    if (node.contains("strict_feedback")) {
        const json& sf = node["strict_feedback"];
        if (!sf.is_array()) throw ConfigError(path + ".strict_feedback", "expected an array of names");
        for (std::size_t k = 0; k < sf.size(); ++k) {
            try {
                p.strict_feedback.push_back(Nonlinearity::from_name(sf[k].get<std::string>()));
            } catch (const ContractViolation& e) {
                throw ConfigError(path + ".strict_feedback[" + std::to_string(k) + "]", e.what());
            }
        }
    }
    return p;
}

ControllerConfig parse_controller(const json& node, const std::string& path, double plant_ell) {
    check_keys(node, {"K", "d_hat", "nx"}, path);
    ControllerConfig c;
    const Vector k = as_vector(require(node, "K", path), path + ".K");
    c.k = k.transpose();
    c.d_hat = as_number(require(node, "d_hat", path), path + ".d_hat");
    c.nx = node.contains("nx") ? as_int(node["nx"], path + ".nx") : 40;
    c.ell = plant_ell;
    return c;
}

FilterParams parse_filter(const json& node, const std::string& path) {
    check_keys(node, {"L", "period", "delta_phi", "gamma_phi"}, path);
    FilterParams f;
    f.l = as_number(require(node, "L", path), path + ".L");
    f.cal_t = as_number(require(node, "period", path), path + ".period");
    f.delta_phi = as_number(require(node, "delta_phi", path), path + ".delta_phi");
    f.gamma_phi = as_number(require(node, "gamma_phi", path), path + ".gamma_phi");
    return f;
}

}  // namespace

LoadedConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin, std::string("parse error: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(origin, "top level must be an object");
    }
    check_keys(root,
               {"name", "description", "exosystem", "graph", "observer", "plants", "controllers",
                "filter", "run", "diagnostics"},
               "");

    LoadedConfig out;
    out.name = root.contains("name") ? root["name"].get<std::string>() : origin;
    out.description = root.contains("description") ? root["description"].get<std::string>() : "";

    Scenario& sc = out.scenario;
    sc.exo = parse_exosystem(require(root, "exosystem", origin), "exosystem");
    sc.graph = parse_graph(require(root, "graph", origin), "graph");
    const json& obs_node = require(root, "observer", origin);
    sc.observer = parse_observer(obs_node, "observer");
    if (obs_node.contains("exact_init")) {
        if (!obs_node["exact_init"].is_boolean()) {
            throw ConfigError("observer.exact_init", "expected a boolean");
        }
        sc.exact_observer_init = obs_node["exact_init"].get<bool>();
    }

    const json& plants = require(root, "plants", origin);
    if (!plants.is_array()) throw ConfigError("plants", "expected an array");
    for (std::size_t k = 0; k < plants.size(); ++k) {
        sc.plants.push_back(parse_plant(plants[k], "plants[" + std::to_string(k) + "]"));
    }

    const json& ctrls = require(root, "controllers", origin);
    if (!ctrls.is_array()) throw ConfigError("controllers", "expected an array");
    if (ctrls.size() != plants.size()) {
        throw ConfigError("controllers", "need exactly one controller per plant");
    }
    for (std::size_t k = 0; k < ctrls.size(); ++k) {
        sc.controllers.push_back(
            parse_controller(ctrls[k], "controllers[" + std::to_string(k) + "]", sc.plants[k].ell));
    }

    if (root.contains("filter")) {
        const json& filters = root["filter"];
        if (!filters.is_array()) throw ConfigError("filter", "expected an array");
        std::vector<FilterParams> fps;
        for (std::size_t k = 0; k < filters.size(); ++k) {
            fps.push_back(parse_filter(filters[k], "filter[" + std::to_string(k) + "]"));
        }
        sc.filters = std::move(fps);
    }

    const json& run_node = require(root, "run", origin);
    check_keys(run_node, {"t_end", "h"}, "run");
    sc.t_end = as_number(require(run_node, "t_end", "run"), "run.t_end");
    sc.h = as_number(require(run_node, "h", "run"), "run.h");

    if (root.contains("diagnostics")) {
        const json& d = root["diagnostics"];
        check_keys(d, {"enabled", "lambda", "lambda_cal"}, "diagnostics");
        if (d.contains("enabled")) {
            if (!d["enabled"].is_boolean()) throw ConfigError("diagnostics.enabled", "expected a boolean");
            sc.diagnostics.enabled = d["enabled"].get<bool>();
        }
        if (d.contains("lambda")) {
            const Vector lv = as_vector(d["lambda"], "diagnostics.lambda");
            if (lv.size() != 4) throw ConfigError("diagnostics.lambda", "expected four weights");
            for (int k = 0; k < 4; ++k) sc.diagnostics.lambda[k] = lv(k);
        }
        if (d.contains("lambda_cal")) {
            const Vector lv = as_vector(d["lambda_cal"], "diagnostics.lambda_cal");
            if (lv.size() != 5) throw ConfigError("diagnostics.lambda_cal", "expected five weights");
            for (int k = 0; k < 5; ++k) sc.diagnostics.lambda_cal[k] = lv(k);
        }
    }

    try {
        sc.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(origin, e.what());
    }
    return out;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        for (const auto& [name, text] : detail::kPresets) {
            if (path == name) return parse_config(text, name);
        }
        throw ConfigError(path, "cannot open file (and no preset has this name)");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::kPresets) names.emplace_back(name);
    return names;
}

std::string preset_text(const std::string& name) {
    for (const auto& [pname, text] : detail::kPresets) {
        if (name == pname) return text;
    }
    throw ConfigError(name, "unknown preset");
}

LoadedConfig load_preset(const std::string& name) {
    return parse_config(preset_text(name), name);
}

}  // namespace petcor
