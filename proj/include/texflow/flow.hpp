#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "texflow/metric.hpp"
#include "texflow/point.hpp"

namespace texflow {

/// A finite point cloud standing in for a compact set K.
struct CompactSample {
    std::vector<Point> points;
    std::string region;
    std::uint64_t seed = 0;
};

/// An evaluable flow on a metric space together with the fixture metadata
/// the toolkit needs: singularities, an isolation radius for them, an
/// optional compact witness that meets every regular orbit, and seeded
/// samplers for the fixture's working region.
struct FlowSpec {
    std::string id;
    MetricSpace space;
    std::function<Point(const Point&, double)> map;  // (x, t) -> phi_t(x)
    std::vector<Point> singularities;
    std::optional<double> isolation_radius;
    std::optional<CompactSample> infinity_witness;
    std::function<Point(Rng&)> sample_point;
    std::function<Point(const Point&, double, Rng&)> perturb;
    double tol_group = 1e-9;

    /// phi_t(x). Throws DomainEscape when the image leaves the domain.
    Point evaluate(const Point& x, double t) const { return map(x, t); }
};

/// Homeomorphism pair h : Y -> X, h_inv : X -> Y used to conjugate flows.
struct Conjugacy {
    std::function<Point(const Point&)> h;
    std::function<Point(const Point&)> h_inv;
    std::string source_id;  // Y
    std::string target_id;  // X (the space of the flow being conjugated)
};

/// psi_t = h_inv . phi_t . h on the source space of h. Singularities are
/// mapped through h_inv. Inverse consistency d(h(h_inv(x)), x) is checked
/// on the given samples against flow.tol_group.
FlowSpec conjugate_flow(const FlowSpec& flow, const Conjugacy& h,
                        const MetricSpace& source_space,
                        std::span<const Point> consistency_samples);

/// Fixed-step RK4 for fixtures defined by a vector field instead of a
/// closed form. Analytic fixtures do not use this path.
VecPoint rk4_integrate(const std::function<VecPoint(const VecPoint&)>& field,
                       VecPoint x, double t, double dt_step);

/// Sampled check of "dynamically isolated at infinity": every sampled
/// regular orbit must pass within `tol` of the fixture's declared compact
/// witness at some grid time in [-t_range, t_range]. Returns false when the
/// fixture declares no witness.
bool check_isolated_at_infinity(const FlowSpec& flow, int sample_count = 200,
                                double t_range = 12.0, double dt = 0.25, double tol = 0.15,
                                std::uint64_t seed = 2);

}  // namespace texflow
