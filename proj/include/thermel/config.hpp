#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "thermel/coupled.hpp"

namespace thermel {

/// Parse or validation failure.  what() lists every diagnostic, one per line,
/// each naming the offending line number and key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, std::vector<std::string> diags = {})
        : std::runtime_error(msg), diagnostics(std::move(diags)) {}
    std::vector<std::string> diagnostics;
};

enum class FluxPreset { Zero, Chi, Uniform };

/// Everything a run needs, as parsed from the plain-text config grammar
/// (sections [grid], [sigma], [boundary], [picard], [output]; see README for
/// the full key list).  Unknown keys and duplicate keys are hard errors.
struct RunConfig {
    std::array<int, 3> cells{8, 8, 8};
    std::array<double, 3> extent{1.0, 1.0, 1.0};

    ConductivityModel sigma = ConductivityModel::constant(1.0);

    BoundaryMode mode = BoundaryMode::Electric;
    JouleMode joule = JouleMode::Pointwise;
    double u0_const = 0.0;
    std::array<double, 3> e_const{0, 0, 0};
    FluxPreset flux_preset = FluxPreset::Zero;
    double flux_amplitude = 1.0;

    PicardControls picard;
    SolverControls linear;
    bool write_fields = true;

    Grid make_grid() const { return Grid(cells[0], cells[1], cells[2], extent[0], extent[1], extent[2]); }
    /// Full problem: samples boundary data (and, for the chi preset, the
    /// analytic curl of H0 used by the energy estimates).
    ProblemSpec make_problem() const;
};

/// Total parse of the config text: either a validated RunConfig or a
/// ConfigError listing every diagnostic with its line number.
RunConfig parse_config(const std::string& text);

/// Convenience: read a file and parse it.
RunConfig load_config(const std::string& path);

}  // namespace thermel
