#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "texflow/entropy.hpp"
#include "texflow/expansivity.hpp"
#include "texflow/fixtures.hpp"

namespace texflow {

/// Fully determines a run together with the artifact version: fixture and
/// parameters, compact descriptor, grids, delta family, budgets, seed,
/// tolerances and output paths. Loaded from a JSON key-value tree; every
/// command-line flag overrides the corresponding key.
struct RunConfig {
    std::string fixture = "suspension:full2";
    std::optional<Eigen::Vector2d> translation_v;
    std::optional<double> time_scale_a;
    std::optional<std::string> time_scale_base;
    std::optional<int> word_length;
    std::optional<SFT> sft;  // alphabet / adjacency / roof from the config tree
    long long max_points = 20000;
    std::vector<double> heights{0.0};

    std::string mode = "e-star";  // estimate: classical | e-star | e-star-spanning
    double t_max = 12.0;
    std::vector<double> t_grid;   // empty: {t_max-2, t_max-1, t_max}
    double dt = 0.5;
    std::vector<double> delta_grid{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::string delta_kind = "constant";  // constant | decay | vanishing-norm
    double eps = 1.0;
    std::string notion = "expansive";

    // annulus K for plane fixtures
    double annulus_r0 = 1.0;
    double annulus_r1 = 2.0;
    int annulus_count = 256;

    std::uint64_t seed = 7;
    int jobs = 0;  // 0 = hardware
    int pair_samples = 1000;
    long long iterations = 100000;
    double window_t = 20.0;
    int knot_count = 33;
    double distinctness_margin = 1e-3;
    double identity_tolerance = 0.05;
    double slack = 0.05;

    std::string out_dir;  // default: $TEXFLOW_OUT or ./out

    static RunConfig from_file(const std::string& path);
    void resolve_out_dir();

    std::vector<double> resolved_t_grid() const;
    SFT resolved_sft() const;
    int resolved_word_length() const;
    FlowSpec build_fixture() const;
    CompactSample build_compact(const FlowSpec& flow) const;
    std::vector<ScaleFn> build_delta_family(const FlowSpec& flow) const;
    SearchParams search_params() const;

    Json to_json() const;
};

}  // namespace texflow
