#include "parisian/runconfig.hpp"

#include <fstream>
#include <sstream>

namespace parisian {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError(where + ": bad number '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(where + ": empty range");
    return out;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse(f, path);
}

RunConfig RunConfig::parse(std::istream& is, const std::string& label) {
    RunConfig rc;
    std::string line, section;
    int lineno = 0;
    bool saw_sigma = false, saw_K = false, saw_Sbar = false, saw_T = false, saw_S = false;
    bool saw_pde_prehistory = false;

    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = label + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError(where + ": empty key or value");

        auto num = [&]() {
            try {
                return std::stod(val);
            } catch (...) {
                throw ConfigError(where + ": bad number '" + val + "' for key " + key);
            }
        };
        auto integer = [&]() { return static_cast<long>(num()); };

        if (section == "market") {
            if (key == "r") rc.market.r = num();
            else if (key == "D") rc.market.D = num();
            else if (key == "sigma") { rc.market.sigma = num(); saw_sigma = true; }
            else throw ConfigError(where + ": unknown market key '" + key + "'");
        } else if (section == "contract") {
            if (key == "K") { rc.contract.K = num(); saw_K = true; }
            else if (key == "S_bar") { rc.contract.S_bar = num(); saw_Sbar = true; }
            else if (key == "J_bar") rc.contract.J_bar = num();
            else if (key == "T") { rc.contract.T = num(); saw_T = true; }
            else if (key == "embedded_style") {
                if (val == "american") rc.contract.embedded_style = EmbeddedStyle::American;
                else if (val == "european") rc.contract.embedded_style = EmbeddedStyle::European;
                else throw ConfigError(where + ": embedded_style must be american|european");
            } else throw ConfigError(where + ": unknown contract key '" + key + "'");
        } else if (section == "state") {
            if (key == "S") { rc.S = num(); saw_S = true; }
            else if (key == "t") rc.t = num();
            else if (key == "J") rc.J = num();
            else if (key == "S_range") rc.S_range = parse_list(val, where);
            else if (key == "J_range") rc.J_range = parse_list(val, where);
            else throw ConfigError(where + ": unknown state key '" + key + "'");
        } else if (section == "engine") {
            if (key == "surface_n_x") rc.engine.surface.n_x = static_cast<int>(integer());
            else if (key == "surface_n_tau") rc.engine.surface.n_tau = static_cast<int>(integer());
            else if (key == "window_samples")
                rc.engine.window.samples_per_window = static_cast<int>(integer());
            else if (key == "window_quad_rel_tol") rc.engine.window.quad.rel_tol = num();
            else if (key == "window_quad_abs_tol") rc.engine.window.quad.abs_tol = num();
            else if (key == "quad_rel_tol") rc.engine.quad.rel_tol = num();
            else if (key == "quad_abs_tol") rc.engine.quad.abs_tol = num();
            else if (key == "first_window_memory") {
                if (val == "vanilla")
                    rc.engine.window.first_window_memory = FirstWindowMemory::Vanilla;
                else if (val == "zero")
                    rc.engine.window.first_window_memory = FirstWindowMemory::Zero;
                else throw ConfigError(where + ": first_window_memory must be vanilla|zero");
            } else if (key == "classifier_j_eps") rc.engine.thresholds.j_eps = num();
            else if (key == "classifier_s_eps_factor") rc.engine.thresholds.s_eps_factor = num();
            else if (key == "classifier_s_max_factor") rc.engine.thresholds.s_max_factor = num();
            else throw ConfigError(where + ": unknown engine key '" + key + "'");
        } else if (section == "mc") {
            if (key == "n_paths") rc.mc.n_paths = integer();
            else if (key == "n_steps_per_year") rc.mc.n_steps_per_year = static_cast<int>(integer());
            else if (key == "seed") rc.mc.seed = static_cast<std::uint64_t>(integer());
            else if (key == "antithetic") rc.mc.antithetic = (val == "true" || val == "1");
            else throw ConfigError(where + ": unknown mc key '" + key + "'");
        } else if (section == "pde") {
            if (key == "n_x") rc.pde.res.n_x = static_cast<int>(integer());
            else if (key == "n_tau") rc.pde.res.n_tau = static_cast<int>(integer());
            else if (key == "n_j") rc.pde.res.n_j = static_cast<int>(integer());
            else if (key == "pre_history") {
                saw_pde_prehistory = true;
                if (val == "vanilla") rc.pde.pre_history = PdePreHistory::Vanilla;
                else if (val == "zero") rc.pde.pre_history = PdePreHistory::Zero;
                else throw ConfigError(where + ": pre_history must be vanilla|zero");
            } else throw ConfigError(where + ": unknown pde key '" + key + "'");
        } else if (section == "output") {
            if (key == "csv") rc.out_path = val;
            else throw ConfigError(where + ": unknown output key '" + key + "'");
        } else if (section == "verify") {
            if (key == "pde_rel_tol") rc.verify_pde_rel_tol = num();
            else if (key == "mc_se_mult") rc.verify_mc_se_mult = num();
            else throw ConfigError(where + ": unknown verify key '" + key + "'");
        } else if (section.empty()) {
            throw ConfigError(where + ": key outside any section");
        } else {
            throw ConfigError(where + ": unknown section '" + section + "'");
        }
    }

    if (!saw_sigma) throw ConfigError(label + ": missing required field market.sigma");
    if (!saw_K) throw ConfigError(label + ": missing required field contract.K");
    if (!saw_Sbar) throw ConfigError(label + ": missing required field contract.S_bar");
    if (!saw_T) throw ConfigError(label + ": missing required field contract.T");
    if (!saw_S && rc.S_range.empty())
        throw ConfigError(label + ": state needs S or S_range");

    rc.market.validate();
    rc.contract.validate();
    // The pde pre-history follows the engine switch unless set explicitly.
    if (!saw_pde_prehistory &&
        rc.engine.window.first_window_memory == FirstWindowMemory::Zero)
        rc.pde.pre_history = PdePreHistory::Zero;
    return rc;
}

}  // namespace parisian
