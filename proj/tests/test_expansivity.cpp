#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "texflow/expansivity.hpp"
#include "texflow/fixtures.hpp"

using namespace texflow;

namespace {

ScaleFn decay_scale(double eps, double vnorm = 1.0) {
    ScaleFn s;
    s.kind = ScaleFn::Kind::positive_continuous;
    s.id = "decay";
    const double c = 0.5 * vnorm * eps;
    s.eval = [c](const Point& p) { return c * std::exp(-p.vec().norm()); };
    return s;
}

ScaleFn zero_on_all_singularities() {
    // C_phi scale of a trivial flow: every point is singular, so delta == 0
    ScaleFn s;
    s.kind = ScaleFn::Kind::vanishing_on_singularities;
    s.id = "zero";
    s.eval = [](const Point&) { return 0.0; };
    return s;
}

SearchParams quick_search(int pairs, long long iters, double window = 20.0, double dt = 0.05) {
    SearchParams sp;
    sp.pair_samples = pairs;
    sp.iterations = iters;
    sp.window_t = window;
    sp.dt = dt;
    sp.seed = 7;
    sp.jobs = 2;
    return sp;
}

}  // namespace

TEST_CASE("punctured sphere is not expansive: witness with verified tails") {
    FlowSpec f = punctured_sphere();
    const auto verdict = falsify(f, Notion::expansive, 1.0, ScaleFn::constant(0.05),
                                 quick_search(128, 20000));
    REQUIRE(verdict.witness.has_value());
    const Witness& w = *verdict.witness;
    CHECK(w.max_discrepancy < 0.0);
    CHECK(w.orbit_distinctness > 1e-3);
    CHECK(w.tail == Witness::Tail::tail_verified);

    // independent re-check of the stored witness
    const auto chk = verify_witness(f, w.x, w.y, w.alpha, ScaleFn::constant(0.05), 1.0,
                                    w.window_t, 0.05, 1e-3, /*strict=*/true);
    CHECK(chk.valid);
    CHECK(chk.max_discrepancy == doctest::Approx(w.max_discrepancy));

    // monotonicity: the same witness is valid for any pointwise-larger delta
    const auto replay = verify_witness(f, w.x, w.y, w.alpha, ScaleFn::constant(0.1), 1.0,
                                       w.window_t, 0.05, 1e-3, true);
    CHECK(replay.valid);
    CHECK(replay.max_discrepancy <= w.max_discrepancy);
}

TEST_CASE("translation flow with the decaying certification scale admits no witness") {
    FlowSpec f = translation({1.0, 0.0});
    const auto verdict =
        falsify(f, Notion::topological, 1.0, decay_scale(1.0), quick_search(200, 100000));
    CHECK_FALSE(verdict.witness.has_value());
    CHECK(verdict.pairs_sampled == 200);
    CHECK(verdict.pairs_admitted > 0);
}

TEST_CASE("trivial flow on the lattice is expansive at delta 0.5") {
    FlowSpec f = trivial_discrete(6);
    const auto verdict =
        falsify(f, Notion::expansive, 1.0, ScaleFn::constant(0.5), quick_search(200, 5000));
    CHECK_FALSE(verdict.witness.has_value());
    // distinct lattice points are >= 1 apart, so every pair is admitted but
    // fails the t = 0 bound
    CHECK(verdict.pairs_admitted > 0);
    CHECK(verdict.objective_evals == 0);
}

TEST_CASE("delta kind must match the notion") {
    FlowSpec f = translation({1.0, 0.0});
    SearchParams sp = quick_search(10, 100);
    CHECK_THROWS_AS(falsify(f, Notion::expansive, 1.0, decay_scale(1.0), sp), InvalidArgument);
    CHECK_THROWS_AS(falsify(f, Notion::rescaling, 1.0, ScaleFn::constant(0.1), sp), InvalidArgument);
    CHECK_THROWS_AS(falsify(f, Notion::topological, 1.0, zero_on_all_singularities(), sp),
                    InvalidArgument);
}

TEST_CASE("negative control: accumulation point breaks isolation, screening admits singular pairs") {
    FlowSpec control = trivial_accumulation(500);
    CHECK_FALSE(check_singularities_isolated(control));

    // the topological falsifier refutes expansivity at a constant scale
    const auto top = falsify(control, Notion::topological, 1.0, ScaleFn::constant(0.05),
                             quick_search(300, 20000, 10.0, 0.1));
    REQUIRE(top.witness.has_value());
    CHECK(top.witness->max_discrepancy < 0.0);
    CHECK(top.witness->tail == Witness::Tail::tail_verified);

    // rescaling mode: C_phi forces delta == 0 here (every point singular);
    // screening still admits singular pairs, reported not asserted
    const auto res = falsify(control, Notion::rescaling, 1.0, zero_on_all_singularities(),
                             quick_search(300, 5000, 10.0, 0.1));
    CHECK_FALSE(res.witness.has_value());
    CHECK(res.singular_pairs_admitted > 0);
}

TEST_CASE("isolation checks across fixtures") {
    CHECK(check_singularities_isolated(suspension(SFT::full_shift(2), 8)));  // vacuous
    CHECK(check_singularities_isolated(trivial_discrete(6)));
    CHECK(check_singularities_isolated(trivial_nonuniform(300)));
    FlowSpec no_radius = trivial_discrete(3);
    no_radius.isolation_radius.reset();
    CHECK_THROWS_AS(check_singularities_isolated(no_radius), InvalidArgument);
}

TEST_CASE("fixture-level cross-check: no witness implies isolated singularities") {
    struct Case {
        FlowSpec flow;
        ScaleFn delta;
        Notion notion;
        SearchParams sp;
    };
    std::vector<Case> cases;
    cases.push_back({trivial_discrete(6), ScaleFn::constant(0.4), Notion::topological,
                     quick_search(120, 4000, 10.0, 0.1)});
    cases.push_back({suspension(SFT::golden_mean(), 9), ScaleFn::constant(0.25),
                     Notion::topological, quick_search(60, 5000, 10.0, 0.1)});
    cases.push_back({translation({1.0, 0.0}), decay_scale(1.0), Notion::topological,
                     quick_search(120, 20000)});
    cases.push_back({trivial_accumulation(400), ScaleFn::constant(0.05), Notion::topological,
                     quick_search(200, 10000, 10.0, 0.1)});
    for (auto& c : cases) {
        const auto verdict = falsify(c.flow, c.notion, 1.0, c.delta, c.sp);
        INFO(c.flow.id);
        if (!verdict.witness.has_value()) CHECK(check_singularities_isolated(c.flow));
    }
}

TEST_CASE("certify_translation_drift recovers the orbit parameter") {
    FlowSpec f = translation({1.0, 0.0});
    const Eigen::Vector2d v(1.0, 0.0);

    // y = phi_{0.3}(x) exactly
    const auto p = certify_drift_pair(f, v, Point::of({0.0, 0.0}), Point::of({0.3, 0.0}), 1.0);
    REQUIRE(p.accepted);
    CHECK(p.recovered_alpha == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(p.alpha_within_eps);
    CHECK(p.drift_residual < 1e-6);

    // y = x
    const auto q = certify_drift_pair(f, v, Point::of({0.5, -0.25}), Point::of({0.5, -0.25}), 1.0);
    REQUIRE(q.accepted);
    CHECK(std::abs(q.recovered_alpha) < 1e-9);

    // off the v-line beyond the delta-tube: rejected at screening
    const auto r = certify_drift_pair(f, v, Point::of({0.0, 0.0}), Point::of({0.0, 0.6}), 1.0);
    CHECK_FALSE(r.accepted);
    CHECK(r.reject_reason.find("closeness premise") != std::string::npos);

    const DriftReport rep = certify_translation_drift(f, v, 1.0, 100, 7);
    CHECK(rep.accepted > 0);
    CHECK(rep.rejected > 0);
    CHECK(rep.all_accepted_within_eps);
    CHECK(rep.max_abs_alpha < 1.0);
}

TEST_CASE("verdict serializes with search budget accounting") {
    FlowSpec f = trivial_discrete(4);
    const auto verdict =
        falsify(f, Notion::expansive, 1.0, ScaleFn::constant(0.5), quick_search(50, 500));
    const std::string js = verdict.to_json(f).dump();
    CHECK(js.find("\"result\": \"no_witness\"") != std::string::npos);
    CHECK(js.find("\"pairs_sampled\": 50") != std::string::npos);
    CHECK(js.find("\"search_note\"") != std::string::npos);
}

TEST_CASE("witness orbit dump rows are (t, distance, delta)") {
    FlowSpec f = punctured_sphere();
    const auto verdict = falsify(f, Notion::expansive, 1.0, ScaleFn::constant(0.1),
                                 quick_search(64, 5000));
    REQUIRE(verdict.witness.has_value());
    const auto rows = witness_orbit_rows(f, *verdict.witness, ScaleFn::constant(0.1), 0.5);
    CHECK(rows.size() == 81);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        CHECK(row[1] < row[2]);  // inside the tube everywhere
    }
}
