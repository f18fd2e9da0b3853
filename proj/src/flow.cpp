#include "texflow/flow.hpp"

#include <utility>

namespace texflow {

FlowSpec conjugate_flow(const FlowSpec& flow, const Conjugacy& conj,
                        const MetricSpace& source_space,
                        std::span<const Point> consistency_samples) {
    // h : Y -> X must invert on samples before we trust it.
    for (const Point& y : consistency_samples) {
        const double r = source_space(conj.h_inv(conj.h(y)), y);
        if (!(r < flow.tol_group))
            throw InvalidArgument("conjugate_flow: h_inv(h(y)) differs from y by " +
                                  fp17(r) + " on a sample");
    }

    FlowSpec out;
    out.id = flow.id + "~" + conj.source_id;
    out.space = source_space;
    out.tol_group = flow.tol_group;
    auto h = conj.h;
    auto h_inv = conj.h_inv;
    auto base = flow.map;
    out.map = [h, h_inv, base](const Point& y, double t) {
        return h_inv(base(h(y), t));
    };
    for (const Point& s : flow.singularities) out.singularities.push_back(conj.h_inv(s));
    out.isolation_radius = flow.isolation_radius;
    if (flow.infinity_witness) {
        CompactSample w;
        w.region = flow.infinity_witness->region + " (pulled back)";
        w.seed = flow.infinity_witness->seed;
        for (const Point& p : flow.infinity_witness->points) w.points.push_back(h_inv(p));
        out.infinity_witness = std::move(w);
    }
    auto base_sample = flow.sample_point;
    if (base_sample)
        out.sample_point = [base_sample, h_inv](Rng& rng) { return h_inv(base_sample(rng)); };
    auto base_perturb = flow.perturb;
    if (base_perturb)
        out.perturb = [base_perturb, h, h_inv](const Point& y, double scale, Rng& rng) {
            return h_inv(base_perturb(h(y), scale, rng));
        };
    return out;
}

bool check_isolated_at_infinity(const FlowSpec& flow, int sample_count, double t_range, double dt,
                                double tol, std::uint64_t seed) {
    if (!flow.infinity_witness || !flow.sample_point) return false;
    const auto& witness = flow.infinity_witness->points;
    Rng rng = make_rng(seed, 29);
    for (int i = 0; i < sample_count; ++i) {
        const Point x = flow.sample_point(rng);
        // skip declared singularities: the witness only meets regular orbits
        bool singular = false;
        for (const Point& s : flow.singularities)
            if (flow.space(s, x) == 0.0) { singular = true; break; }
        if (singular) continue;
        bool met = false;
        for (double t = -t_range; t <= t_range + 1e-9 && !met; t += dt) {
            Point xt;
            try {
                xt = flow.evaluate(x, t);
            } catch (const DomainEscape&) {
                continue;
            }
            for (const Point& w : witness)
                if (flow.space(xt, w) <= tol) { met = true; break; }
        }
        if (!met) return false;
    }
    return true;
}

VecPoint rk4_integrate(const std::function<VecPoint(const VecPoint&)>& field,
                       VecPoint x, double t, double dt_step) {
    if (!(dt_step > 0)) throw InvalidArgument("rk4_integrate: dt_step must be positive");
    const double dir = t < 0 ? -1.0 : 1.0;
    double remaining = std::abs(t);
    while (remaining > 0) {
        const double h = dir * std::min(dt_step, remaining);
        const VecPoint k1 = field(x);
        const VecPoint k2 = field(x + 0.5 * h * k1);
        const VecPoint k3 = field(x + 0.5 * h * k2);
        const VecPoint k4 = field(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        remaining -= std::abs(h);
    }
    return x;
}

}  // namespace texflow
