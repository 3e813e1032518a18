// SPDX-License-Identifier: Apache-2.0

#include "metaopt/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace metaopt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += fmt_double(v[i]);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw ParseError(key + ": trailing characters in '" + value + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(key + ": cannot parse number '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw ParseError(key + ": trailing characters in '" + value + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(key + ": cannot parse integer '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size())
            throw ParseError(key + ": trailing characters in '" + value + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(key + ": cannot parse integer '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ParseError(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    return out;
}

bool needs_groups(Suite s) {
    return s == Suite::Hrsma || s == Suite::Sdma || s == Suite::Isac;
}

bool needs_elements(Suite s) { return s == Suite::Ris || s == Suite::Bdris; }

} // namespace

std::string suite_name(Suite s) {
    switch (s) {
    case Suite::Hrsma: return "hrsma";
    case Suite::Sdma: return "sdma";
    case Suite::Isac: return "isac";
    case Suite::Ris: return "ris";
    case Suite::Bdris: return "bdris";
    }
    throw std::logic_error("suite_name: unknown suite");
}

Suite parse_suite(const std::string& name) {
    if (name == "hrsma") return Suite::Hrsma;
    if (name == "sdma") return Suite::Sdma;
    if (name == "isac") return Suite::Isac;
    if (name == "ris") return Suite::Ris;
    if (name == "bdris") return Suite::Bdris;
    throw ValidationError("suite: expected hrsma|sdma|isac|ris|bdris, got '" +
                          name + "'");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ParseError("duplicate key '" + key + "'");

        if (key == "suite") {
            c.suite = parse_suite(value);
        } else if (key == "system.num_tx") {
            c.num_tx = parse_int(key, value);
        } else if (key == "system.num_users") {
            c.num_users = parse_int(key, value);
        } else if (key == "system.num_groups") {
            c.num_groups = parse_int(key, value);
        } else if (key == "system.num_elements") {
            c.num_elements = parse_int(key, value);
        } else if (key == "saa.num_samples") {
            c.num_samples = parse_int(key, value);
        } else if (key == "meta.iterations") {
            c.iterations = static_cast<int>(parse_int(key, value));
        } else if (key == "meta.learning_rate") {
            c.learning_rate = parse_double(key, value);
        } else if (key == "meta.hidden_width") {
            c.hidden_width = parse_int(key, value);
        } else if (key == "csit.error_variance") {
            c.error_variance = parse_double(key, value);
        } else if (key == "grid.snr_db") {
            c.snr_db = parse_list(key, value);
        } else if (key == "grid.lambda") {
            c.lambda_grid = parse_list(key, value);
        } else if (key == "qos.lambda") {
            c.qos_lambda = parse_double(key, value);
        } else if (key == "qos.thresholds") {
            c.thresholds = parse_list(key, value);
        } else if (key == "groups.azimuths") {
            c.group_azimuths = parse_list(key, value);
        } else if (key == "groups.spreads") {
            c.group_spreads = parse_list(key, value);
        } else if (key == "isac.targets") {
            c.targets = parse_list(key, value);
        } else if (key == "array.geometry") {
            if (value == "linear")
                c.geometry = ArrayGeometry::UniformLinear;
            else if (value == "circular")
                c.geometry = ArrayGeometry::UniformCircular;
            else
                throw ValidationError("array.geometry: expected linear|circular");
        } else if (key == "array.spacing") {
            c.spacing = parse_double(key, value);
        } else if (key == "ris.lambda") {
            c.ris_lambda = parse_double(key, value);
        } else if (key == "ris.learning_rate") {
            c.ris_learning_rate = parse_double(key, value);
        } else if (key == "ris.literal_penalty") {
            c.literal_penalty = parse_bool(key, value);
        } else if (key == "ris.warm_iterations") {
            c.warm_iterations = static_cast<int>(parse_int(key, value));
        } else if (key == "pathloss.tx_ris_distance") {
            c.tx_ris_distance = parse_double(key, value);
        } else if (key == "pathloss.ris_user_distance") {
            c.ris_user_distance = parse_double(key, value);
        } else if (key == "pathloss.exponent") {
            c.pathloss_exponent = parse_double(key, value);
        } else if (key == "pathloss.reference_gain_db") {
            c.reference_gain_db = parse_double(key, value);
        } else if (key == "pathloss.noise_power_dbm") {
            c.noise_power_dbm = parse_double(key, value);
        } else if (key == "run.realizations") {
            c.realizations = static_cast<int>(parse_int(key, value));
        } else if (key == "run.seed") {
            c.seed = parse_u64(key, value);
        } else if (key == "run.timing") {
            c.emit_timing = parse_bool(key, value);
        } else if (key == "output.path") {
            c.output_path = value;
        } else {
            throw ValidationError("unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void ScenarioConfig::validate() const {
    auto bad = [](const std::string& key, const std::string& why) {
        throw ValidationError(key + ": " + why);
    };
    if (num_tx < 1)
        bad("system.num_tx", "must be >= 1");
    if (num_users < 1)
        bad("system.num_users", "must be >= 1");
    if (needs_groups(suite)) {
        if (num_groups < 1 || num_groups > num_users)
            bad("system.num_groups", "must be in [1, K]");
        if (num_elements != 0)
            bad("system.num_elements", "only meaningful for ris/bdris suites");
        if (!group_azimuths.empty() &&
            static_cast<Eigen::Index>(group_azimuths.size()) != num_groups)
            bad("groups.azimuths", "need one azimuth per group");
        if (!group_spreads.empty() &&
            static_cast<Eigen::Index>(group_spreads.size()) != num_groups)
            bad("groups.spreads", "need one spread per group");
        for (double s : group_spreads)
            if (s <= 0.0)
                bad("groups.spreads", "spreads must be positive");
    } else {
        if (num_elements < 1)
            bad("system.num_elements", "required for ris/bdris suites");
    }
    if (num_samples < 1)
        bad("saa.num_samples", "must be >= 1");
    if (iterations < 1)
        bad("meta.iterations", "must be >= 1");
    if (!(learning_rate > 0.0))
        bad("meta.learning_rate", "must be positive");
    if (hidden_width < 1)
        bad("meta.hidden_width", "must be >= 1");
    if (error_variance < 0.0 || error_variance > 1.0)
        bad("csit.error_variance", "must lie in [0, 1]");
    if (snr_db.empty())
        bad("grid.snr_db", "grid must be nonempty");
    if (lambda_grid.empty())
        bad("grid.lambda", "grid must be nonempty");
    for (double l : lambda_grid)
        if (l < 0.0)
            bad("grid.lambda", "entries must be >= 0");
    if (qos_lambda < 0.0)
        bad("qos.lambda", "must be >= 0");
    if (!thresholds.empty() &&
        static_cast<Eigen::Index>(thresholds.size()) != num_users)
        bad("qos.thresholds", "need one threshold per user");
    for (double t : thresholds)
        if (t < 0.0)
            bad("qos.thresholds", "thresholds must be >= 0");
    if (suite == Suite::Isac && targets.empty())
        bad("isac.targets", "isac suite needs at least one target angle");
    if (!(spacing > 0.0))
        bad("array.spacing", "must be positive");
    if (ris_lambda < 0.0)
        bad("ris.lambda", "must be >= 0");
    if (ris_learning_rate <= 0.0)
        bad("ris.learning_rate", "must be > 0");
    if (warm_iterations < 1)
        bad("ris.warm_iterations", "must be >= 1");
    if (realizations < 1)
        bad("run.realizations", "must be >= 1");
    if (output_path.empty())
        bad("output.path", "must be nonempty");
}

UserGroupLayout ScenarioConfig::layout() const {
    std::vector<double> az = group_azimuths;
    std::vector<double> sp = group_spreads;
    if (az.empty()) {
        // Evenly spread group centers over (-pi/3, pi/3).
        az.resize(num_groups);
        for (Eigen::Index g = 0; g < num_groups; ++g)
            az[g] = num_groups == 1
                        ? 0.0
                        : -std::numbers::pi / 3.0 +
                              (2.0 * std::numbers::pi / 3.0) * g /
                                  static_cast<double>(num_groups - 1);
    }
    if (sp.empty())
        sp.assign(num_groups, std::numbers::pi / 18.0); // 10 degrees
    return UserGroupLayout::equal_groups(num_users, num_groups, az, sp);
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream out;
    auto put = [&out](const std::string& key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    put("suite", suite_name(c.suite));
    put("system.num_tx", std::to_string(c.num_tx));
    put("system.num_users", std::to_string(c.num_users));
    if (needs_groups(c.suite))
        put("system.num_groups", std::to_string(c.num_groups));
    if (needs_elements(c.suite))
        put("system.num_elements", std::to_string(c.num_elements));
    put("saa.num_samples", std::to_string(c.num_samples));
    put("meta.iterations", std::to_string(c.iterations));
    put("meta.learning_rate", fmt_double(c.learning_rate));
    put("meta.hidden_width", std::to_string(c.hidden_width));
    put("csit.error_variance", fmt_double(c.error_variance));
    put("grid.snr_db", fmt_list(c.snr_db));
    put("grid.lambda", fmt_list(c.lambda_grid));
    put("qos.lambda", fmt_double(c.qos_lambda));
    if (!c.thresholds.empty())
        put("qos.thresholds", fmt_list(c.thresholds));
    if (needs_groups(c.suite)) {
        if (!c.group_azimuths.empty())
            put("groups.azimuths", fmt_list(c.group_azimuths));
        if (!c.group_spreads.empty())
            put("groups.spreads", fmt_list(c.group_spreads));
    }
    if (c.suite == Suite::Isac) {
        put("isac.targets", fmt_list(c.targets));
        put("array.geometry",
            c.geometry == ArrayGeometry::UniformLinear ? "linear" : "circular");
        put("array.spacing", fmt_double(c.spacing));
    }
    if (needs_elements(c.suite)) {
        put("ris.lambda", fmt_double(c.ris_lambda));
        put("ris.learning_rate", fmt_double(c.ris_learning_rate));
        put("ris.literal_penalty", c.literal_penalty ? "true" : "false");
        put("ris.warm_iterations", std::to_string(c.warm_iterations));
        put("pathloss.tx_ris_distance", fmt_double(c.tx_ris_distance));
        put("pathloss.ris_user_distance", fmt_double(c.ris_user_distance));
        put("pathloss.exponent", fmt_double(c.pathloss_exponent));
        put("pathloss.reference_gain_db", fmt_double(c.reference_gain_db));
        put("pathloss.noise_power_dbm", fmt_double(c.noise_power_dbm));
    }
    put("run.realizations", std::to_string(c.realizations));
    put("run.seed", std::to_string(c.seed));
    put("run.timing", c.emit_timing ? "true" : "false");
    put("output.path", c.output_path);
    return out.str();
}

} // namespace metaopt
