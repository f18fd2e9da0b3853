#include "texflow/expansivity.hpp"

#include <algorithm>
#include <cmath>

#include "texflow/parallel.hpp"

namespace texflow {

double Reparam::operator()(double t) const {
    if (knot_t.empty()) return t;
    if (t <= knot_t.front()) return knot_v.front() + (t - knot_t.front());
    if (t >= knot_t.back()) return knot_v.back() + (t - knot_t.back());
    auto it = std::upper_bound(knot_t.begin(), knot_t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knot_t.begin());
    const double w = (t - knot_t[i - 1]) / (knot_t[i] - knot_t[i - 1]);
    return (1.0 - w) * knot_v[i - 1] + w * knot_v[i];
}

Reparam Reparam::identity(double window_t, int knot_count) {
    if (knot_count < 3 || knot_count % 2 == 0)
        throw InvalidArgument("Reparam: knot_count must be odd and >= 3 so a knot sits at 0");
    Reparam r;
    r.knot_t.resize(static_cast<std::size_t>(knot_count));
    r.knot_v.resize(static_cast<std::size_t>(knot_count));
    for (int i = 0; i < knot_count; ++i) {
        const double t = -window_t + 2.0 * window_t * i / (knot_count - 1);
        r.knot_t[static_cast<std::size_t>(i)] = t;
        r.knot_v[static_cast<std::size_t>(i)] = t;
    }
    r.pin_zero();
    return r;
}

void Reparam::pin_zero() {
    std::size_t zi = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < knot_t.size(); ++i)
        if (std::abs(knot_t[i]) < best) { best = std::abs(knot_t[i]); zi = i; }
    knot_t[zi] = 0.0;
    knot_v[zi] = 0.0;
}

Json Reparam::to_json() const {
    Json kt = Json::array(), kv = Json::array();
    for (double t : knot_t) kt.push(t);
    for (double v : knot_v) kv.push(v);
    Json j = Json::object();
    j.set("knot_times", std::move(kt)).set("knot_values", std::move(kv));
    return j;
}

std::string notion_name(Notion n) {
    switch (n) {
        case Notion::expansive: return "expansive";
        case Notion::topological: return "topological_expansive";
        case Notion::rescaling: return "rescaling_expansive";
    }
    return "?";
}

namespace {

Json point_json(const FlowSpec& flow, const Point& p) {
    Json j = Json::array();
    if (p.is_vector()) {
        for (Eigen::Index i = 0; i < p.vec().size(); ++i) j.push(p.vec()[i]);
    } else {
        const auto& s = p.sym();
        std::string w;
        for (auto c : s.word) w += std::to_string(int(c));
        Json o = Json::object();
        o.set("word", w).set("phase", s.phase).set("height", s.height);
        return o;
    }
    (void)flow;
    return j;
}

// max over the window grid of d(phi_t x, phi_alpha(t) y) - delta(phi_t x);
// aborts early once the running max exceeds `bail_above`.
double discrepancy_objective(const FlowSpec& flow, const Point& x, const Point& y,
                             const Reparam& alpha, const ScaleFn& delta, double window_t,
                             double dt, double bail_above) {
    double worst = -std::numeric_limits<double>::infinity();
    const int half = static_cast<int>(std::floor(window_t / dt + 1e-9));
    // scan outward from the window edges: for escaping orbits the binding
    // times are the extremes, so the early abort fires quickly
    for (int k = half; k >= 0; --k) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            if (k == 0 && sgn == 1) continue;
            const double t = sgn * k * dt;
            const Point xt = flow.evaluate(x, t);
            const Point ya = flow.evaluate(y, alpha(t));
            const double disc = flow.space(xt, ya) - delta(xt);
            if (disc > worst) {
                worst = disc;
                if (worst > bail_above) return worst;
            }
        }
    }
    return worst;
}

double distinctness_scan(const FlowSpec& flow, const Point& x, const Point& y, double eps,
                         double step) {
    double best = std::numeric_limits<double>::infinity();
    const int half = static_cast<int>(std::ceil(eps / step - 1e-9));
    for (int k = -half; k <= half; ++k) {
        const double s = std::clamp(k * step, -eps, eps);
        best = std::min(best, flow.space(flow.evaluate(x, s), y));
    }
    return best;
}

bool tail_probe(const FlowSpec& flow, const Point& x, const Point& y, const Reparam& alpha,
                const ScaleFn& delta, double window_t, bool strict) {
    // Beyond +-T both tails must stay inside the delta-tube with distances
    // contracting monotonically toward a common limit.
    try {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            double prev = std::numeric_limits<double>::infinity();
            for (int k = 0; k <= 8; ++k) {
                const double t = sgn * window_t * (1.0 + 0.5 * k);
                const Point xt = flow.evaluate(x, t);
                const Point ya = flow.evaluate(y, alpha(t));
                const double d = flow.space(xt, ya);
                const double bound = delta(xt);
                const bool inside = strict ? (d < bound) : (d <= bound);
                if (!inside) return false;
                if (k > 0 && d > prev + 1e-12) return false;
                prev = d;
            }
        }
    } catch (const DomainEscape&) {
        return false;
    }
    return true;
}

}  // namespace

WitnessCheck verify_witness(const FlowSpec& flow, const Point& x, const Point& y,
                            const Reparam& alpha, const ScaleFn& delta, double eps,
                            double window_t, double dt, double distinctness_margin, bool strict) {
    WitnessCheck c{};
    c.max_discrepancy =
        discrepancy_objective(flow, x, y, alpha, delta, window_t, dt,
                              std::numeric_limits<double>::infinity());
    c.orbit_distinctness = distinctness_scan(flow, x, y, eps, std::min(dt, distinctness_margin / 2));
    const bool tube_ok = strict ? (c.max_discrepancy < 0) : (c.max_discrepancy <= 0);
    c.valid = tube_ok && c.orbit_distinctness > distinctness_margin;
    return c;
}

std::vector<std::vector<double>> witness_orbit_rows(const FlowSpec& flow, const Witness& w,
                                                    const ScaleFn& delta, double dt) {
    std::vector<std::vector<double>> rows;
    const int half = static_cast<int>(std::floor(w.window_t / dt + 1e-9));
    for (int k = -half; k <= half; ++k) {
        const double t = k * dt;
        const Point xt = flow.evaluate(w.x, t);
        const Point ya = flow.evaluate(w.y, w.alpha(t));
        rows.push_back({t, flow.space(xt, ya), delta(xt)});
    }
    return rows;
}

namespace {

struct PairCandidate {
    Point x, y;
    bool admitted = false;
    bool hopeless = false;  // fails the t=0 bound, which no alpha can fix
    bool touches_singularity = false;
    std::string reject;
};

struct PairOutcome {
    bool witness_found = false;
    Reparam alpha;
    double objective = 0;
    long long evals = 0;
};

PairOutcome descend_pair(const FlowSpec& flow, const PairCandidate& cand, const ScaleFn& delta,
                         const SearchParams& sp, bool strict, long long budget,
                         std::uint64_t pair_stream) {
    PairOutcome out;
    auto accepts = [strict](double v) { return strict ? v < 0 : v <= 0; };

    Reparam alpha = Reparam::identity(sp.window_t, sp.knot_count);
    double incumbent = discrepancy_objective(flow, cand.x, cand.y, alpha, delta, sp.window_t, sp.dt,
                                             std::numeric_limits<double>::infinity());
    ++out.evals;
    Reparam best_alpha = alpha;
    double best = incumbent;
    if (accepts(best)) {
        out.witness_found = true;
        out.alpha = best_alpha;
        out.objective = best;
        return out;
    }

    Rng rng = make_rng(sp.seed, 1000003 + pair_stream);
    std::normal_distribution<double> jitter(0.0, 1.0);
    const double base_step = std::max(0.25, sp.window_t / 16.0);

    for (int restart = 0; restart <= sp.restarts && out.evals < budget; ++restart) {
        if (restart > 0) {
            alpha = Reparam::identity(sp.window_t, sp.knot_count);
            for (double& v : alpha.knot_v) v += 0.5 * jitter(rng);
            alpha.pin_zero();
            incumbent = discrepancy_objective(flow, cand.x, cand.y, alpha, delta, sp.window_t,
                                              sp.dt, std::numeric_limits<double>::infinity());
            ++out.evals;
        }
        double step = base_step;
        for (int sweep = 0; sweep < sp.sweeps && out.evals < budget; ++sweep) {
            bool improved = false;
            for (std::size_t j = 0; j < alpha.knot_t.size() && out.evals < budget; ++j) {
                if (alpha.knot_t[j] == 0.0) continue;  // alpha(0) = 0 is pinned
                const double saved = alpha.knot_v[j];
                for (double dir : {+1.0, -1.0}) {
                    alpha.knot_v[j] = saved + dir * step;
                    const double val = discrepancy_objective(flow, cand.x, cand.y, alpha, delta,
                                                             sp.window_t, sp.dt, incumbent);
                    ++out.evals;
                    if (val < incumbent) {
                        incumbent = val;
                        improved = true;
                        break;
                    }
                    alpha.knot_v[j] = saved;
                }
                if (incumbent < best) {
                    best = incumbent;
                    best_alpha = alpha;
                    if (accepts(best)) {
                        out.witness_found = true;
                        out.alpha = best_alpha;
                        out.objective = best;
                        return out;
                    }
                }
            }
            if (!improved) {
                if (step < 0.1 * base_step) break;
                step *= 0.5;
            }
        }
    }
    out.alpha = best_alpha;
    out.objective = best;
    return out;
}

}  // namespace

ExpansivityVerdict falsify(const FlowSpec& flow, Notion notion, double eps, const ScaleFn& delta,
                           const SearchParams& sp) {
    switch (notion) {
        case Notion::expansive:
            if (!delta.is_constant)
                throw InvalidArgument("falsify: the expansive notion takes a constant delta");
            break;
        case Notion::topological:
            if (delta.kind != ScaleFn::Kind::positive_continuous)
                throw InvalidArgument("falsify: topological expansivity takes a positive continuous delta");
            break;
        case Notion::rescaling:
            if (delta.kind != ScaleFn::Kind::vanishing_on_singularities)
                throw InvalidArgument("falsify: rescaling expansivity takes a delta vanishing exactly on singularities");
            break;
    }
    if (!flow.sample_point || !flow.perturb)
        throw InvalidArgument("falsify: fixture provides no sampler");
    const bool strict = notion != Notion::rescaling;

    ExpansivityVerdict verdict;
    verdict.notion = notion;
    verdict.fixture_id = flow.id;
    verdict.delta_id = delta.id;
    verdict.eps = eps;
    verdict.search_note =
        "reparameterizations restricted to piecewise-linear with " +
        std::to_string(sp.knot_count) + " knots over [-" + fp17(sp.window_t) + ", " +
        fp17(sp.window_t) + "]; 'for all t' truncated to the window plus tail probes";

    // Phase 1: sample and screen candidate pairs (sequential, seeded).
    Rng rng = make_rng(sp.seed, 5);
    const double dscan = std::min(sp.dt, sp.distinctness_margin / 2);
    std::vector<PairCandidate> pairs;
    pairs.reserve(static_cast<std::size_t>(sp.pair_samples));
    for (int i = 0; i < sp.pair_samples; ++i) {
        PairCandidate c;
        c.x = flow.sample_point(rng);
        const double scale = std::max(delta(c.x), 1e-6);
        c.y = (i % 4 == 3) ? flow.sample_point(rng) : flow.perturb(c.x, scale, rng);
        ++verdict.pairs_sampled;
        const double d0 = flow.space(c.x, c.y);
        if (!(d0 > 0)) {
            c.reject = "points coincide";
        } else {
            const double dist = distinctness_scan(flow, c.x, c.y, eps, dscan);
            if (!(dist > sp.distinctness_margin)) {
                c.reject = "inside the eps-orbit tube";
            } else {
                c.admitted = true;
                // alpha(0) = 0 pins the t=0 comparison, so a pair failing
                // d(x,y) < delta(x) can never become a witness
                c.hopeless = strict ? !(d0 < delta(c.x)) : !(d0 <= delta(c.x));
            }
        }
        if (c.admitted) {
            ++verdict.pairs_admitted;
            for (const Point& s : flow.singularities) {
                if (flow.space(s, c.x) == 0.0 || flow.space(s, c.y) == 0.0) {
                    c.touches_singularity = true;
                    ++verdict.singular_pairs_admitted;
                    break;
                }
            }
        } else {
            ++verdict.pairs_screened_out;
        }
        pairs.push_back(std::move(c));
    }

    // Phase 2: per-pair descent in deterministic batches; first witness in
    // candidate order wins regardless of worker count.
    std::vector<std::size_t> admitted_idx;
    std::size_t descent_pairs = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].admitted) {
            admitted_idx.push_back(i);
            if (!pairs[i].hopeless) ++descent_pairs;
        }
    const long long per_pair_budget =
        descent_pairs == 0
            ? 0
            : std::max<long long>(2, sp.iterations / static_cast<long long>(descent_pairs));

    constexpr std::size_t kBatch = 16;
    for (std::size_t b = 0; b < admitted_idx.size(); b += kBatch) {
        const std::size_t e = std::min(admitted_idx.size(), b + kBatch);
        std::vector<PairOutcome> outcomes(e - b);
        parallel_for_chunks(e - b, sp.jobs, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t pi = admitted_idx[b + k];
                if (pairs[pi].hopeless) continue;  // no evals needed
                outcomes[k] = descend_pair(flow, pairs[pi], delta, sp, strict, per_pair_budget,
                                           static_cast<std::uint64_t>(pi));
            }
        });
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            verdict.objective_evals += outcomes[k].evals;
            if (!outcomes[k].witness_found) continue;
            const PairCandidate& cand = pairs[admitted_idx[b + k]];
            const WitnessCheck chk =
                verify_witness(flow, cand.x, cand.y, outcomes[k].alpha, delta, eps, sp.window_t,
                               sp.dt, sp.distinctness_margin, strict);
            if (!chk.valid) continue;  // search artifact; keep looking
            Witness w;
            w.x = cand.x;
            w.y = cand.y;
            w.alpha = outcomes[k].alpha;
            w.window_t = sp.window_t;
            w.max_discrepancy = chk.max_discrepancy;
            w.orbit_distinctness = chk.orbit_distinctness;
            w.tail = tail_probe(flow, cand.x, cand.y, outcomes[k].alpha, delta, sp.window_t, strict)
                         ? Witness::Tail::tail_verified
                         : Witness::Tail::window_only;
            verdict.witness = std::move(w);
            return verdict;
        }
    }
    verdict.budget_exhausted = verdict.objective_evals >= sp.iterations;
    return verdict;
}

Json Witness::to_json(const FlowSpec& flow) const {
    Json j = Json::object();
    j.set("x", point_json(flow, x))
        .set("y", point_json(flow, y))
        .set("alpha", alpha.to_json())
        .set("window_T", window_t)
        .set("max_discrepancy", max_discrepancy)
        .set("orbit_distinctness", orbit_distinctness)
        .set("tail_flag", tail == Tail::tail_verified ? "tail_verified" : "window_only");
    return j;
}

Json ExpansivityVerdict::to_json(const FlowSpec& flow) const {
    Json j = Json::object();
    j.set("notion", notion_name(notion))
        .set("fixture", fixture_id)
        .set("delta", delta_id)
        .set("eps", eps)
        .set("result", witness ? "witness_found" : "no_witness");
    if (witness) j.set("witness", witness->to_json(flow));
    j.set("pairs_sampled", pairs_sampled)
        .set("pairs_screened_out", pairs_screened_out)
        .set("pairs_admitted", pairs_admitted)
        .set("singular_pairs_admitted", singular_pairs_admitted)
        .set("objective_evals", objective_evals)
        .set("budget_exhausted", budget_exhausted)
        .set("search_note", search_note);
    return j;
}

DriftPair certify_drift_pair(const FlowSpec& translation_flow, const Eigen::Vector2d& v,
                         const Point& x, const Point& y, double eps, double window_t, double dt) {
    DriftPair out;
    const double vnorm = v.norm();
    const auto delta_decay = [&](const Point& p) {
        return 0.5 * vnorm * eps * std::exp(-p.vec().norm());
    };
    const double d0 = translation_flow.space(x, y);
    if (!(d0 < delta_decay(x))) {
        out.reject_reason = "violates closeness premise: d(x,y) >= delta(x)";
        return out;
    }

    // drift fit: s*(t) = argmin_s ||phi_t(x) - phi_s(y)|| by ternary search
    const double span = eps + d0 / vnorm + 2.0;
    auto best_s = [&](double t) {
        double lo = t - span, hi = t + span;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            const double f1 = translation_flow.space(translation_flow.evaluate(x, t),
                                                     translation_flow.evaluate(y, m1));
            const double f2 = translation_flow.space(translation_flow.evaluate(x, t),
                                                     translation_flow.evaluate(y, m2));
            if (f1 < f2) hi = m2;
            else lo = m1;
        }
        return 0.5 * (lo + hi);
    };

    const Eigen::Vector2d diff = x.vec() - y.vec();
    double worst = 0;
    for (double t = -window_t; t <= window_t + 1e-9; t += dt) {
        const double s = best_s(t);
        const Eigen::Vector2d drift = (s - t) * v;
        worst = std::max(worst, (drift - diff).norm());
    }
    out.drift_residual = worst;
    out.recovered_alpha = -best_s(0.0);
    out.alpha_within_eps = std::abs(out.recovered_alpha) < eps;
    out.accepted = true;
    return out;
}

DriftReport certify_translation_drift(const FlowSpec& translation_flow, const Eigen::Vector2d& v,
                              double eps, int pair_count, std::uint64_t seed) {
    DriftReport rep;
    Rng rng = make_rng(seed, 77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < pair_count; ++i) {
        const Point x = translation_flow.sample_point(rng);
        Point y;
        if (i % 5 == 4) {
            // off the v-line beyond the delta-tube: must be rejected
            Eigen::Vector2d perp(-v[1], v[0]);
            perp.normalize();
            y = Point(VecPoint(x.vec() + (2.0 + std::abs(u(rng))) * eps * v.norm() * perp));
        } else {
            const double cap = 0.45 * eps * std::exp(-x.vec().norm());
            y = Point(VecPoint(x.vec() + cap * u(rng) * v));
        }
        const DriftPair p = certify_drift_pair(translation_flow, v, x, y, eps);
        ++rep.pairs;
        if (!p.accepted) {
            ++rep.rejected;
            continue;
        }
        ++rep.accepted;
        rep.max_drift_residual = std::max(rep.max_drift_residual, p.drift_residual);
        rep.max_abs_alpha = std::max(rep.max_abs_alpha, std::abs(p.recovered_alpha));
        if (!p.alpha_within_eps) rep.all_accepted_within_eps = false;
    }
    return rep;
}

Json DriftReport::to_json() const {
    Json j = Json::object();
    j.set("pairs", pairs)
        .set("accepted", accepted)
        .set("rejected", rejected)
        .set("max_drift_residual", max_drift_residual)
        .set("max_abs_alpha", max_abs_alpha)
        .set("all_accepted_within_eps", all_accepted_within_eps);
    return j;
}

bool check_singularities_isolated(const FlowSpec& flow, int sample_count, std::uint64_t seed) {
    if (flow.singularities.empty()) return true;  // vacuously
    if (!flow.isolation_radius)
        throw InvalidArgument("check_singularities_isolated: fixture declares no isolation radius");
    const double r = *flow.isolation_radius;
    std::vector<Point> samples;
    if (flow.sample_point) {
        Rng rng = make_rng(seed, 13);
        for (int i = 0; i < sample_count; ++i) samples.push_back(flow.sample_point(rng));
    }
    for (const Point& s : flow.singularities) samples.push_back(s);
    for (const Point& sigma : flow.singularities)
        for (const Point& p : samples) {
            const double d = flow.space(sigma, p);
            if (d < r && d != 0.0) return false;
        }
    return true;
}

}  // namespace texflow
