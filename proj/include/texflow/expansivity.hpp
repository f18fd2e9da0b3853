#pragma once

#include <optional>
#include <string>
#include <vector>

#include "texflow/flow.hpp"
#include "texflow/report_io.hpp"
#include "texflow/scale.hpp"

namespace texflow {

/// Continuous time-reparameterization alpha: [-T, T] -> R with alpha(0) = 0,
/// piecewise-linear over its knots. Outside the knot range it continues
/// with slope 1 (used only by tail probes).
struct Reparam {
    std::vector<double> knot_t;
    std::vector<double> knot_v;

    double operator()(double t) const;
    static Reparam identity(double window_t, int knot_count);
    void pin_zero();  // force alpha(0) = 0 on the knot nearest 0

    Json to_json() const;
};

/// A refutation candidate: a pair whose orbits stay inside the delta-tube
/// along alpha over the window while y provably stays off phi_[-eps,eps](x).
struct Witness {
    Point x, y;
    Reparam alpha;
    double window_t = 0;
    double max_discrepancy = 0;    // max over grid of d(phi_t x, phi_alpha(t) y) - delta(phi_t x)
    double orbit_distinctness = 0; // min over s-grid of d(phi_s x, y), s in [-eps, eps]
    enum class Tail { tail_verified, window_only } tail = Tail::window_only;

    Json to_json(const FlowSpec& flow) const;
};

enum class Notion { expansive, topological, rescaling };

std::string notion_name(Notion n);

struct SearchParams {
    int pair_samples = 1000;
    int knot_count = 33;
    double window_t = 20.0;
    double dt = 0.05;
    std::uint64_t seed = 7;
    long long iterations = 100000;  // objective-evaluation budget for the descent
    double distinctness_margin = 1e-3;
    int jobs = 1;
    int restarts = 1;
    int sweeps = 4;
};

struct ExpansivityVerdict {
    Notion notion = Notion::expansive;
    std::string fixture_id;
    std::string delta_id;
    double eps = 0;
    std::optional<Witness> witness;
    long long pairs_sampled = 0;
    long long pairs_screened_out = 0;
    long long pairs_admitted = 0;
    long long singular_pairs_admitted = 0;  // admitted pairs touching a declared singularity
    long long objective_evals = 0;
    bool budget_exhausted = false;
    std::string search_note;

    Json to_json(const FlowSpec& flow) const;
};

/// Seeded falsification search over point pairs and piecewise-linear
/// reparameterizations. Returns the first verified Witness in candidate
/// order (deterministic under a fixed seed, independent of jobs), or a
/// no-witness verdict with budget accounting.
ExpansivityVerdict falsify(const FlowSpec& flow, Notion notion, double eps, const ScaleFn& delta,
                           const SearchParams& search);

/// Recompute a witness's discrepancy and distinctness from scratch.
/// strict: discrepancy must be < 0 (expansive/topological); rescaling uses <= 0.
struct WitnessCheck {
    double max_discrepancy;
    double orbit_distinctness;
    bool valid;
};
WitnessCheck verify_witness(const FlowSpec& flow, const Point& x, const Point& y,
                            const Reparam& alpha, const ScaleFn& delta, double eps,
                            double window_t, double dt, double distinctness_margin, bool strict);

/// (t, d(phi_t x, phi_alpha(t) y), delta(phi_t x)) rows for plotting.
std::vector<std::vector<double>> witness_orbit_rows(const FlowSpec& flow, const Witness& w,
                                                    const ScaleFn& delta, double dt);

/// Numerical reproduction of the translation-flow mechanism: fit the drift
/// s(t) - t along the window, check the drift times v approaches x - y, and
/// recover the orbit parameter alpha with |alpha| < eps via the t = 0 bound.
struct DriftPair {
    bool accepted = false;
    std::string reject_reason;
    double recovered_alpha = 0;
    double drift_residual = 0;   // max over window of ||(s(t)-t)v - (x-y)||
    bool alpha_within_eps = false;
};
DriftPair certify_drift_pair(const FlowSpec& translation_flow, const Eigen::Vector2d& v,
                         const Point& x, const Point& y, double eps, double window_t = 10.0,
                         double dt = 0.25);

struct DriftReport {
    int pairs = 0;
    int accepted = 0;
    int rejected = 0;
    double max_drift_residual = 0;
    double max_abs_alpha = 0;
    bool all_accepted_within_eps = true;

    Json to_json() const;
};
DriftReport certify_translation_drift(const FlowSpec& translation_flow, const Eigen::Vector2d& v,
                              double eps, int pair_count, std::uint64_t seed);

/// For each declared singularity, B(sigma, r) must meet the sample cloud
/// only at sigma itself (r = the fixture's declared isolation radius).
/// Vacuously true without singularities; missing radius is an error.
bool check_singularities_isolated(const FlowSpec& flow, int sample_count = 2000,
                                  std::uint64_t seed = 1);

}  // namespace texflow
