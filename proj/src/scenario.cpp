#include "quedyn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quedyn/fermion.hpp"

namespace quedyn {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool consumed = false;
};

/// Flat view of the file: "section.key" -> value.
struct ScenarioText {
    std::string path;
    std::map<std::string, KeyValue> entries;
    std::set<std::string> sections;

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
    }

    const KeyValue* find(const std::string& qualified) {
        auto it = entries.find(qualified);
        if (it == entries.end()) return nullptr;
        it->second.consumed = true;
        return &it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        const KeyValue* kv = find(key);
        return kv ? kv->value : fallback;
    }

    double get_double(const std::string& key, double fallback) {
        const KeyValue* kv = find(key);
        if (!kv) return fallback;
        try {
            std::size_t pos = 0;
            double v = std::stod(kv->value, &pos);
            if (pos != kv->value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(kv->line, "key '" + key + "' expects a number, got '" + kv->value + "'");
        }
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) {
        const KeyValue* kv = find(key);
        if (!kv) return fallback;
        try {
            std::size_t pos = 0;
            std::int64_t v = std::stoll(kv->value, &pos);
            if (pos != kv->value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(kv->line, "key '" + key + "' expects an integer, got '" + kv->value + "'");
        }
    }

    int line_of(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    }
};

ScenarioText read_scenario_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");

    ScenarioText text;
    text.path = path;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') text.fail(lineno, "unterminated section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) text.fail(lineno, "empty section name");
            text.sections.insert(section);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) text.fail(lineno, "expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) text.fail(lineno, "missing key before '='");
        if (value.empty()) text.fail(lineno, "key '" + key + "' has no value");
        if (section.empty()) text.fail(lineno, "key '" + key + "' appears before any [section]");
        std::string qualified = section + "." + key;
        if (text.entries.count(qualified))
            text.fail(lineno, "duplicate key '" + qualified + "'");
        text.entries[qualified] = KeyValue{value, lineno, false};
    }
    return text;
}

const std::set<std::string> kKnownSections = {
    "molecule", "pulse", "propagation", "engine", "hadamard", "cap", "output"};

}  // namespace

Scenario load_scenario(const std::string& path) {
    ScenarioText text = read_scenario_text(path);
    for (const auto& s : text.sections) {
        if (!kKnownSections.count(s))
            throw ParseError(path + ": unknown section [" + s + "]");
    }

    Scenario scn;
    scn.source_path = path;

    // [molecule]
    scn.molecule = text.get_string("molecule.fixture", "");
    if (scn.molecule.empty())
        throw ParseError(path + ": missing required key 'molecule.fixture'");
    std::string init = text.get_string("molecule.initial_state", "ground");
    if (init == "ground") {
        scn.initial_determinant = -1;
    } else {
        bool numeric = !init.empty() &&
                       std::all_of(init.begin(), init.end(), [](unsigned char c) { return std::isdigit(c); });
        if (!numeric)
            text.fail(text.line_of("molecule.initial_state"),
                      "key 'molecule.initial_state' must be 'ground' or a determinant index, got '" + init + "'");
        scn.initial_determinant = static_cast<int>(std::stoll(init));
    }

    // [pulse]
    scn.pulse.omega = text.get_double("pulse.omega", 0.0);
    scn.pulse.sigma = text.get_double("pulse.sigma", 0.0);
    scn.pulse.t_p = text.get_double("pulse.t_p", scn.pulse.sigma);
    scn.pulse.f0 = Eigen::Vector3d(text.get_double("pulse.f0_x", 0.0),
                                   text.get_double("pulse.f0_y", 0.0),
                                   text.get_double("pulse.f0_z", 0.0));
    if (scn.pulse.sigma <= 0.0)
        throw ParseError(path + ": key 'pulse.sigma' must be positive");
    if (scn.pulse.omega < 0.0)
        throw ParseError(path + ": key 'pulse.omega' must be non-negative");

    // [propagation]
    scn.config.dt = text.get_double("propagation.dt", 0.2);
    scn.config.t_final = text.get_double("propagation.t_final", -1.0);
    scn.config.trotter_order = static_cast<int>(text.get_int("propagation.trotter_order", 2));
    scn.config.record_every = static_cast<int>(text.get_int("propagation.record_every", 1));
    std::string axis = text.get_string("propagation.record_axis", "z");
    scn.reference_dt = text.get_double("propagation.reference_dt", 1.0);
    if (scn.config.dt <= 0.0)
        throw ParseError(path + ": key 'propagation.dt' must be positive");
    if (scn.config.t_final <= 0.0)
        throw ParseError(path + ": missing or non-positive key 'propagation.t_final'");
    if (scn.config.trotter_order != 1 && scn.config.trotter_order != 2)
        throw ParseError(path + ": key 'propagation.trotter_order' must be 1 or 2");
    if (scn.config.record_every < 1)
        throw ParseError(path + ": key 'propagation.record_every' must be >= 1");
    if (axis == "x") scn.config.record_axis = 0;
    else if (axis == "y") scn.config.record_axis = 1;
    else if (axis == "z") scn.config.record_axis = 2;
    else throw ParseError(path + ": key 'propagation.record_axis' must be x, y or z");
    if (scn.reference_dt <= 0.0)
        throw ParseError(path + ": key 'propagation.reference_dt' must be positive");

    // [engine]
    scn.engine = text.get_string("engine.name", "qdyn");
    static const std::set<std::string> kEngines = {"tdci", "qdyn", "hadamard", "qite"};
    if (!kEngines.count(scn.engine))
        throw ParseError(path + ": key 'engine.name' must be one of tdci, qdyn, hadamard, qite; got '" +
                         scn.engine + "'");
    std::int64_t seed = text.get_int("engine.seed", 1);
    if (seed < 0)
        throw ParseError(path + ": key 'engine.seed' must be non-negative");
    scn.seed = static_cast<std::uint64_t>(seed);

    // [hadamard]
    scn.has_hadamard = text.sections.count("hadamard") > 0;
    if (scn.has_hadamard) {
        scn.hadamard.delta_x = text.get_double("hadamard.delta_x", 0.1);
        scn.hadamard.shots = static_cast<std::uint64_t>(text.get_int("hadamard.shots", 20000));
        std::string part = text.get_string("hadamard.part", "imaginary");
        if (part == "imaginary") scn.hadamard.part = HadamardPart::imaginary;
        else if (part == "real") scn.hadamard.part = HadamardPart::real;
        else throw ParseError(path + ": key 'hadamard.part' must be real or imaginary");
        scn.hadamard.trotter_order_for_u = static_cast<int>(text.get_int("hadamard.trotter_order", 1));
        std::string restart = text.get_string("hadamard.restart", "cached");
        if (restart == "cached") scn.hadamard.restart_mode = RestartMode::cached_register;
        else if (restart == "honest") scn.hadamard.restart_mode = RestartMode::honest_restart;
        else throw ParseError(path + ": key 'hadamard.restart' must be cached or honest");
        if (scn.hadamard.delta_x == 0.0)
            throw ParseError(path + ": key 'hadamard.delta_x' must be non-zero");
        if (scn.hadamard.shots < 1)
            throw ParseError(path + ": key 'hadamard.shots' must be >= 1");
        if (scn.hadamard.trotter_order_for_u != 1 && scn.hadamard.trotter_order_for_u != 2)
            throw ParseError(path + ": key 'hadamard.trotter_order' must be 1 or 2");
    }

    // [cap]
    scn.has_cap = text.sections.count("cap") > 0;
    if (scn.has_cap) {
        scn.cap_d = text.get_double("cap.d", 0.0);
        if (scn.cap_d <= 0.0)
            throw ParseError(path + ": key 'cap.d' must be positive");
        scn.qite.delta = text.get_double("cap.delta", 0.1);
        if (scn.qite.delta < 0.0)
            throw ParseError(path + ": key 'cap.delta' must be non-negative");
        std::string mode = text.get_string("cap.mode", "exact");
        if (mode == "exact") scn.qite.mode = ReadoutMode::exact;
        else if (mode == "sampled") scn.qite.mode = ReadoutMode::sampled;
        else throw ParseError(path + ": key 'cap.mode' must be exact or sampled");
        std::int64_t shots = text.get_int("cap.shots", 1000000);
        if (shots < 1)
            throw ParseError(path + ": key 'cap.shots' must be >= 1");
        scn.qite.shots = static_cast<std::uint64_t>(shots);
        scn.qite.seed = scn.seed;
    }

    // [output]
    std::string default_prefix = std::filesystem::path(path).stem().string();
    scn.output_prefix = text.get_string("output.prefix", default_prefix);
    scn.population_threshold = text.get_double("output.population_threshold", 0.01);
    if (scn.population_threshold < 0.0 || scn.population_threshold > 1.0)
        throw ParseError(path + ": key 'output.population_threshold' must lie in [0, 1]");

    // Cross-section requirements.
    if (scn.engine == "hadamard" && !scn.has_hadamard)
        throw ParseError(path + ": engine 'hadamard' requires a [hadamard] section");
    if (scn.engine == "qite" && !scn.has_cap)
        throw ParseError(path + ": engine 'qite' requires a [cap] section");
    if (scn.has_cap && (scn.engine == "qdyn" || scn.engine == "hadamard"))
        throw ParseError(path + ": a [cap] section requires engine tdci or qite");

    for (const auto& [key, kv] : text.entries) {
        if (!kv.consumed)
            text.fail(kv.line, "unknown key '" + key + "'");
    }
    return scn;
}

}  // namespace quedyn
