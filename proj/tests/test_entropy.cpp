#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "texflow/entropy.hpp"
#include "texflow/fixtures.hpp"
#include "texflow/orbits.hpp"

using namespace texflow;

namespace {
const std::vector<double> kTGrid{5.0, 6.0, 7.0};
constexpr double kDt = 0.5;
}  // namespace

TEST_CASE("trivial flow has zero entropy in both modes") {
    FlowSpec f = trivial_discrete(4);
    CompactSample k = lattice_sample(4);
    const auto classical = estimate_entropy_compact(f, k, {0.25, 0.125}, kTGrid, kDt, 7);
    CHECK(classical.estimate == doctest::Approx(0.0));
    const auto estar = estimate_e_star(f, {k}, {ScaleFn::constant(0.25)}, kTGrid, kDt,
                                       EStarMode::separating, 7);
    CHECK(estar.estimate == doctest::Approx(0.0));
}

TEST_CASE("full 2-shift suspension: classical estimate recovers log 2") {
    SFT full = SFT::full_shift(2);
    FlowSpec f = suspension(full, 10);
    CompactSample k = cylinder_sample(full, 10);
    REQUIRE(k.points.size() == 1024);
    const auto rep = estimate_entropy_compact(f, k, {0.25, 0.125, 0.0625}, kTGrid, kDt, 7);
    CHECK(rep.estimate == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    // oracle: the counts in the winning cell are exact separated-set maxima
    // (separation is an equivalence on cylinder samples, classes counted
    // independently by union-find over the definition)
    const EntropyCell& win = rep.cells[std::size_t(rep.winning_cell)];
    const double delta = 0.25;  // winning constant
    REQUIRE(win.delta_id == "const_0.25");
    for (std::size_t i = 0; i < kTGrid.size(); ++i) {
        bool equivalence_ok = false;
        const long long oracle =
            oracles::oracle_class_count(k.points, kTGrid[i], delta, kDt, 1.0, &equivalence_ok);
        CHECK(equivalence_ok);
        CHECK(win.counts[i] == oracle);
    }
    // regression slope of the unsaturated winning cell is the same rate
    CHECK(rep.regression_slope == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("golden-mean suspension: classical estimate near log golden ratio") {
    SFT golden = SFT::golden_mean();
    FlowSpec f = suspension(golden, 13);
    CompactSample k = cylinder_sample(golden, 13);
    REQUIRE(k.points.size() == 521);  // Lucas(13)
    const auto rep = estimate_entropy_compact(f, k, {0.25, 0.125}, kTGrid, kDt, 7);
    const double target =
        std::log(oracles::power_iteration_spectral_radius(golden.adjacency.cast<double>()));
    CHECK(std::abs(rep.estimate - target) < 0.005);
    CHECK(rep.estimate == doctest::Approx(0.4812).epsilon(0.01));
}

TEST_CASE("e* agrees with the classical estimate on matched sweeps (compact case)") {
    SFT full = SFT::full_shift(2);
    FlowSpec f = suspension(full, 10);
    CompactSample k = cylinder_sample(full, 10);
    const std::vector<double> eps{0.25, 0.125, 0.0625};
    const auto classical = estimate_entropy_compact(f, k, eps, kTGrid, kDt, 7);
    std::vector<ScaleFn> family;
    for (double e : eps) family.push_back(ScaleFn::constant(e));
    const auto estar = estimate_e_star(f, {k}, family, kTGrid, kDt, EStarMode::separating, 7);
    const auto verdict = verify_identity_equal("compact_equality", estar, classical, 0.05);
    CHECK(verdict.pass);
    CHECK(verdict.margin < 1e-9);
}

TEST_CASE("time-rescaled flow doubles the estimate") {
    SFT full = SFT::full_shift(2);
    FlowSpec base = suspension(full, 10);
    FlowSpec scaled = time_scaled(base, 2.0);
    CompactSample k = cylinder_sample(full, 10);
    const std::vector<ScaleFn> family{ScaleFn::constant(0.25)};
    const auto base_rep = estimate_e_star(base, {k}, family, kTGrid, kDt, EStarMode::separating, 7);
    // matched shift depth: the a=2 flow is sampled on the halved grid
    const std::vector<double> half{2.5, 3.0, 3.5};
    const auto scaled_rep =
        estimate_e_star(scaled, {k}, family, half, kDt / 2, EStarMode::separating, 7);
    const auto verdict = verify_identity_ratio("time_rescale", scaled_rep, base_rep, 1.8, 2.2);
    CHECK(verdict.pass);
    CHECK(scaled_rep.estimate / base_rep.estimate == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("spanning-mode e* equals separating-mode e* on the full shift") {
    SFT full = SFT::full_shift(2);
    FlowSpec f = suspension(full, 10);
    CompactSample k = cylinder_sample(full, 10);
    const std::vector<ScaleFn> family{ScaleFn::constant(0.25)};
    const auto sep = estimate_e_star(f, {k}, family, kTGrid, kDt, EStarMode::separating, 7);
    const auto span = estimate_e_star(f, {k}, family, kTGrid, kDt, EStarMode::spanning, 7);
    const auto verdict = verify_identity_equal("spanning_equals_separating", span, sep, 0.05);
    CHECK(verdict.pass);
    CHECK(span.estimate == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("conjugate pair translation/colina: both e* estimates vanish") {
    FlowSpec trans = translation({1.0, 0.0});
    FlowSpec col = colina();
    CompactSample k_trans = annulus_sample(1.0, 2.0, 64, 11);
    CompactSample k_col;
    k_col.region = k_trans.region + " through h(x,y)=(x, e^x y)";
    for (const Point& p : k_trans.points)
        k_col.points.push_back(Point::of({p.vec()[0], std::exp(p.vec()[0]) * p.vec()[1]}));

    const std::vector<ScaleFn> family{ScaleFn::constant(0.25), ScaleFn::constant(0.0625)};
    const std::vector<double> grid{6.0, 7.0, 8.0};
    const auto lhs = estimate_e_star(trans, {k_trans}, family, grid, 0.25, EStarMode::separating, 7);
    const auto rhs = estimate_e_star(col, {k_col}, family, grid, 0.25, EStarMode::separating, 7);
    const auto verdict = verify_identity_zero_pair("conjugacy_invariance", lhs, rhs, 0.05);
    CHECK(verdict.pass);
    CHECK(lhs.estimate == doctest::Approx(0.0));
    CHECK(std::abs(rhs.estimate) < 0.05);
}

TEST_CASE("e* estimate is monotone when the swept family grows") {
    SFT full = SFT::full_shift(2);
    FlowSpec f = suspension(full, 10);
    CompactSample k = cylinder_sample(full, 10);
    // 2^-4 saturates depth-10 cylinders early (flat tail), 2^-2 does not
    const std::vector<ScaleFn> small_family{ScaleFn::constant(0.0625)};
    std::vector<ScaleFn> big_family = small_family;
    big_family.push_back(ScaleFn::constant(0.25));
    const auto small_rep = estimate_e_star(f, {k}, small_family, kTGrid, kDt, EStarMode::separating, 7);
    const auto big_rep = estimate_e_star(f, {k}, big_family, kTGrid, kDt, EStarMode::separating, 7);
    CHECK(small_rep.estimate <= big_rep.estimate);
    CHECK(big_rep.estimate == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("report structure invariants") {
    SFT golden = SFT::golden_mean();
    FlowSpec f = suspension(golden, 9);
    CompactSample k = cylinder_sample(golden, 9);
    const auto rep = estimate_entropy_compact(f, k, {0.25, 0.125}, kTGrid, kDt, 7);
    CHECK(rep.per_t_rates.size() == kTGrid.size());
    CHECK(std::isfinite(rep.estimate));
    for (const auto& [t, r] : rep.per_t_rates) CHECK(r >= 0.0);
    for (const auto& cell : rep.cells) {
        for (std::size_t i = 1; i < cell.counts.size(); ++i)
            CHECK(cell.counts[i] >= cell.counts[i - 1]);  // S nondecreasing in t
    }
    const std::string js = rep.to_json().dump();
    CHECK(js.find("\"aggregation\"") != std::string::npos);
    CHECK(js.find("\"per_t_rates\"") != std::string::npos);
    CHECK(rep.plot_rows().size() == kTGrid.size());
}

TEST_CASE("e* requires positive continuous scales") {
    FlowSpec f = trivial_discrete(3);
    CompactSample k = lattice_sample(3);
    ScaleFn vanish;
    vanish.kind = ScaleFn::Kind::vanishing_on_singularities;
    vanish.id = "v";
    vanish.eval = [](const Point&) { return 0.0; };
    CHECK_THROWS_AS(
        estimate_e_star(f, {k}, {vanish}, kTGrid, kDt, EStarMode::separating, 7),
        InvalidArgument);
}

TEST_CASE("periodic-orbit growth is bounded by the e* estimate") {
    SFT full = SFT::full_shift(2);
    FlowSpec f = suspension(full, 10);
    CompactSample k = cylinder_sample(full, 10);
    const auto estar = estimate_e_star(f, {k}, {ScaleFn::constant(0.25)}, kTGrid, kDt,
                                       EStarMode::separating, 7);
    const OrbitCensus census = orbit_census(full, 12.0);
    const auto verdict = check_growth_bound(census, estar, 0.05);
    CHECK(verdict.pass);
    CHECK(verdict.growth < verdict.entropy_estimate + 0.05);
}
