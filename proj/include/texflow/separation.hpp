#pragma once

#include <cstdint>
#include <vector>

#include "texflow/flow.hpp"
#include "texflow/report_io.hpp"
#include "texflow/scale.hpp"

namespace texflow {

/// Result of a separated-set / spanning-set computation over a sampled
/// compact. Greedy values are bounds (S from below, R from above); on
/// instances with |K| <= 12 exact extremal values are computed instead
/// and flagged. Spanning candidates are restricted to K samples
/// ("K-restricted spanning"), which can only increase R.
struct SeparationReport {
    double t_horizon = 0;
    double dt = 0;
    int k_size = 0;
    long long s_lower = 0;
    long long r_upper = 0;
    double beta = 0;
    bool exact = false;
    bool k_restricted_spanning = true;
    std::vector<int> separating_witness;
    std::vector<int> spanning_witness;
    std::string delta_id;
    std::uint64_t seed = 0;

    Json to_json() const;
    std::string csv_header() const;
    std::string csv_row() const;
};

/// delta evaluated along every orbit of a cache, stored by step for
/// cache-friendly pair scans. Constant scales skip the table entirely.
struct DeltaTable {
    int n = 0;
    int steps = 0;
    bool constant = false;
    double constant_value = 0;
    std::vector<double> by_step;  // s * n + i when not constant

    double at(int i, int s) const {
        return constant ? constant_value
                        : by_step[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(i)];
    }
};

/// Precomputed orbit segments of every K point over the time grid
/// {0, dt, ..., <= t_max}. Reused across t and delta sweeps.
class OrbitCache {
public:
    OrbitCache(const FlowSpec& flow, const CompactSample& k, double t_max, double dt, int jobs);

    int points() const { return static_cast<int>(orbits_.size()); }
    int steps() const { return steps_; }  // grid size including s = 0
    double dt() const { return dt_; }
    const Point& at(int i, int s) const { return orbits_[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)]; }
    const MetricSpace& space() const { return *space_; }

    /// Number of grid times covering [0, t] (at least 1).
    int steps_for(double t) const;

    /// delta evaluated along orbit i at every grid step.
    DeltaTable delta_table(const ScaleFn& delta, int jobs) const;

    /// Metric between orbit points (i, s) and (j, s) without per-call
    /// dispatch when the fixture declares the native suspension metric.
    double dist(int i, int j, int s) const {
        if (fast_) return fast_dist(i, j, s);
        return (*space_)(at(i, s), at(j, s));
    }

private:
    std::vector<std::vector<Point>> orbits_;
    const MetricSpace* space_;
    int steps_;
    double dt_;

    // tiled-word tables for the suspension metric: each word repeated into a
    // flat stride so central windows index without modulo; coordinate-0
    // pointers and heights are stored by step so a pair scan at fixed s
    // walks contiguous arrays
    bool fast_ = false;
    int max_len_ = 0;
    std::vector<std::uint8_t> tiles_;            // n x stride
    std::vector<const std::uint8_t*> win_;       // s * n + i: coordinate-0 pointer
    std::vector<double> flat_heights_;           // s * n + i
    std::vector<int> pair_cap_;                  // per point: word length
    std::vector<double> pow2_;                   // 2^-k lookup

    void build_fast_tables();
    double fast_dist(int i, int j, int s) const;
};

/// True iff some grid time s in [0, t] has d(phi_s(x), phi_s(y)) >= delta(phi_s(x)).
bool is_separated_pair(const FlowSpec& flow, const Point& x, const Point& y, double t,
                       const ScaleFn& delta, double dt);

/// Greedy (seeded order) maximal separated subset of K; exact maximum via
/// exhaustive search when |K| <= 12. Fills s_lower and the witness.
SeparationReport max_separated_set(const FlowSpec& flow, const CompactSample& k, double t,
                                   const ScaleFn& delta, double dt, std::uint64_t seed = 0,
                                   int jobs = 1);

/// Greedy cover of K by delta-shadow tubes; exact minimum when |K| <= 12.
/// Fills r_upper and the witness.
SeparationReport min_spanning_set(const FlowSpec& flow, const CompactSample& k, double t,
                                  const ScaleFn& delta, double dt, std::uint64_t seed = 0,
                                  int jobs = 1);

/// beta(t, delta, K) = min over K samples and grid times of delta along the
/// orbit. Requires a positive_continuous delta.
double beta_infimum(const FlowSpec& flow, const CompactSample& k, double t, const ScaleFn& delta,
                    double dt, int jobs = 1);

// Cache-level primitives used by the entropy sweeps.
long long greedy_separated_count(const OrbitCache& cache, int steps, const DeltaTable& deltas,
                                 std::uint64_t seed, int jobs, std::vector<int>* witness = nullptr);
long long greedy_cover_count(const OrbitCache& cache, int steps, const DeltaTable& deltas,
                             std::uint64_t seed, int jobs, std::vector<int>* witness = nullptr);
double beta_from_table(const DeltaTable& deltas, int steps);

}  // namespace texflow
