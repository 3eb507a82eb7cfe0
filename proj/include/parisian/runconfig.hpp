#ifndef PARISIAN_RUNCONFIG_HPP
#define PARISIAN_RUNCONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parisian/mc.hpp"
#include "parisian/model.hpp"
#include "parisian/pde.hpp"
#include "parisian/pricer.hpp"

namespace parisian {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed batch-run configuration. The file format is flat sectioned key = value text:
///
///   # comment
///   [market]
///   r = 0.05
///   ...
///
/// Sections: market, contract, state, engine, mc, pde, output, verify. Unknown keys are
/// errors with line attribution; all values are validated against the module invariants
/// before any computation starts.
struct RunConfig {
    MarketParams market;
    ParisianContract contract;

    // state: point or ranges
    double S = 0.0, t = 0.0, J = 0.0;
    std::vector<double> S_range;  ///< explicit spot list for surface runs
    std::vector<double> J_range;

    EngineConfig engine;
    McConfig mc;
    PdeConfig pde;

    // verify tolerances
    double verify_pde_rel_tol = 0.01;
    double verify_mc_se_mult = 3.0;

    std::string out_path;  ///< CSV destination ("" = stdout only)

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse(std::istream& is, const std::string& label);
};

}  // namespace parisian

#endif
