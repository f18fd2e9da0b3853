// texflow: desk-scale toolkit for scale-function calculus, separated/spanning
// entropy estimates, expansivity falsification, and periodic-orbit censuses
// of suspension flows.
//
// Subcommands: fixtures, estimate, separate, falsify, census, verify.
// Exit codes: 0 = success / all verdicts pass, 2 = verdict failure,
// 1 = usage or config error.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "texflow/entropy.hpp"
#include "texflow/expansivity.hpp"
#include "texflow/fixtures.hpp"
#include "texflow/orbits.hpp"
#include "texflow/report_io.hpp"
#include "texflow/runconfig.hpp"
#include "texflow/separation.hpp"
#include "texflow/verify.hpp"

using namespace texflow;

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == ' ') c = '_';
    return s;
}

std::string out_path(const RunConfig& rc, const std::string& stem) {
    return (std::filesystem::path(rc.out_dir) / stem).string();
}

void attach_common(CLI::App* cmd, RunConfig& rc, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its keys");
    cmd->add_option("--fixture", rc.fixture, "fixture name (see `fixtures list`)");
    cmd->add_option("--seed", rc.seed, "seed for every stochastic choice");
    cmd->add_option("--jobs", rc.jobs, "worker count (0 = hardware); results are jobs-independent");
    cmd->add_option("--out", rc.out_dir, "output directory (default $TEXFLOW_OUT or ./out)");
}

// flags were parsed into a fresh RunConfig; re-apply the ones the user set
// on top of the config file
RunConfig merge_config(const CLI::App* cmd, const RunConfig& flags, const std::string& config_path) {
    if (config_path.empty()) return flags;
    RunConfig rc = RunConfig::from_file(config_path);
    auto drop = [&](const char* name) { return cmd->count(name) > 0; };
    if (drop("--fixture")) rc.fixture = flags.fixture;
    if (drop("--seed")) rc.seed = flags.seed;
    if (drop("--jobs")) rc.jobs = flags.jobs;
    if (drop("--out")) rc.out_dir = flags.out_dir;
    if (cmd->get_option_no_throw("--mode") && drop("--mode")) rc.mode = flags.mode;
    if (cmd->get_option_no_throw("--t-max") && drop("--t-max")) rc.t_max = flags.t_max;
    if (cmd->get_option_no_throw("--t-grid") && drop("--t-grid")) rc.t_grid = flags.t_grid;
    if (cmd->get_option_no_throw("--dt") && drop("--dt")) rc.dt = flags.dt;
    if (cmd->get_option_no_throw("--delta-grid") && drop("--delta-grid"))
        rc.delta_grid = flags.delta_grid;
    if (cmd->get_option_no_throw("--delta-kind") && drop("--delta-kind"))
        rc.delta_kind = flags.delta_kind;
    if (cmd->get_option_no_throw("--eps") && drop("--eps")) rc.eps = flags.eps;
    if (cmd->get_option_no_throw("--notion") && drop("--notion")) rc.notion = flags.notion;
    if (cmd->get_option_no_throw("--word-length") && drop("--word-length"))
        rc.word_length = flags.word_length;
    if (cmd->get_option_no_throw("--max-points") && drop("--max-points"))
        rc.max_points = flags.max_points;
    if (cmd->get_option_no_throw("--pairs") && drop("--pairs")) rc.pair_samples = flags.pair_samples;
    if (cmd->get_option_no_throw("--iterations") && drop("--iterations"))
        rc.iterations = flags.iterations;
    if (cmd->get_option_no_throw("--window-T") && drop("--window-T")) rc.window_t = flags.window_t;
    if (cmd->get_option_no_throw("--knots") && drop("--knots")) rc.knot_count = flags.knot_count;
    if (cmd->get_option_no_throw("--slack") && drop("--slack")) rc.slack = flags.slack;
    if (cmd->get_option_no_throw("--tolerance") && drop("--tolerance"))
        rc.identity_tolerance = flags.identity_tolerance;
    return rc;
}

int cmd_fixtures(bool as_json, const std::string& show) {
    const auto cat = list_fixtures();
    if (!show.empty()) {
        for (const auto& f : cat) {
            if (f.name == show || f.name == sanitize(show)) {
                std::printf("%s\n  %s\n  parameters: %s\n", f.name.c_str(), f.summary.c_str(),
                            f.params.c_str());
                return 0;
            }
        }
        std::fprintf(stderr, "error: unknown fixture: %s\n", show.c_str());
        return 1;
    }
    if (as_json) {
        Json arr = Json::array();
        for (const auto& f : cat) {
            Json j = Json::object();
            j.set("name", f.name).set("summary", f.summary).set("params", f.params);
            arr.push(std::move(j));
        }
        std::fputs(arr.dump().c_str(), stdout);
        return 0;
    }
    for (const auto& f : cat) std::printf("%-22s %s\n", f.name.c_str(), f.summary.c_str());
    return 0;
}

int cmd_estimate(RunConfig rc) {
    rc.resolve_out_dir();
    FlowSpec flow = rc.build_fixture();
    CompactSample k = rc.build_compact(flow);
    const std::vector<double> t_grid = rc.resolved_t_grid();
    EntropyReport rep;
    if (rc.mode == "classical") {
        rep = estimate_entropy_compact(flow, k, rc.delta_grid, t_grid, rc.dt, rc.seed, rc.jobs);
    } else if (rc.mode == "e-star" || rc.mode == "e-star-spanning") {
        rep = estimate_e_star(flow, {k}, rc.build_delta_family(flow), t_grid, rc.dt,
                              rc.mode == "e-star" ? EStarMode::separating : EStarMode::spanning,
                              rc.seed, rc.jobs);
    } else {
        throw ConfigError("unknown mode: " + rc.mode + " (classical | e-star | e-star-spanning)");
    }
    const std::string stem = "estimate_" + sanitize(rc.fixture) + "_" + sanitize(rc.mode);
    Json doc = Json::object();
    doc.set("config", rc.to_json()).set("report", rep.to_json());
    write_text_file(out_path(rc, stem + ".json"), doc.dump());
    write_plot_data(out_path(rc, stem + "_rates.dat"), rep.plot_rows());
    std::printf("estimate = %s nats/s (%s)\nreport: %s\n", fp17(rep.estimate).c_str(),
                rep.mode.c_str(), out_path(rc, stem + ".json").c_str());
    return 0;
}

int cmd_separate(RunConfig rc, double t, double delta) {
    rc.resolve_out_dir();
    FlowSpec flow = rc.build_fixture();
    CompactSample k = rc.build_compact(flow);
    const ScaleFn d = ScaleFn::constant(delta);
    SeparationReport sep = max_separated_set(flow, k, t, d, rc.dt, rc.seed, rc.jobs);
    SeparationReport span = min_spanning_set(flow, k, t, d, rc.dt, rc.seed, rc.jobs);
    sep.r_upper = span.r_upper;
    sep.spanning_witness = span.spanning_witness;
    const std::string stem = "separate_" + sanitize(rc.fixture);
    write_text_file(out_path(rc, stem + ".json"), sep.to_json().dump());
    write_text_file(out_path(rc, stem + ".csv"), sep.csv_header() + "\n" + sep.csv_row() + "\n");
    std::printf("S_lower = %lld, R_upper = %lld, beta = %s%s\nreport: %s\n", sep.s_lower,
                sep.r_upper, fp17(sep.beta).c_str(), sep.exact ? " (exact)" : "",
                out_path(rc, stem + ".json").c_str());
    return 0;
}

int cmd_falsify(RunConfig rc, double delta_value, bool delta_given, bool kind_given,
                bool dump_orbit) {
    rc.resolve_out_dir();
    FlowSpec flow = rc.build_fixture();
    Notion notion;
    if (rc.notion == "expansive") notion = Notion::expansive;
    else if (rc.notion == "topological") notion = Notion::topological;
    else if (rc.notion == "rescaling") notion = Notion::rescaling;
    else throw ConfigError("unknown notion: " + rc.notion);

    // without an explicit scale, pick the fixture's canonical one: the
    // exponentially decaying scale certifies the translation flow, C_phi scales are
    // the distance to the singular set, everything else gets a constant
    if (!delta_given && !kind_given) {
        if (notion == Notion::topological && flow.id == "translation") rc.delta_kind = "decay";
        else if (notion == Notion::rescaling) rc.delta_kind = "vanishing-norm";
    }

    ScaleFn delta;
    if (rc.delta_kind == "constant") {
        delta = ScaleFn::constant(delta_value);
    } else {
        auto family = rc.build_delta_family(flow);
        delta = family.front();
    }
    const auto verdict = falsify(flow, notion, rc.eps, delta, rc.search_params());
    const std::string stem = "falsify_" + sanitize(rc.fixture) + "_" + sanitize(rc.notion);
    Json doc = Json::object();
    doc.set("config", rc.to_json()).set("verdict", verdict.to_json(flow));
    write_text_file(out_path(rc, stem + ".json"), doc.dump());
    if (verdict.witness && dump_orbit)
        write_plot_data(out_path(rc, stem + "_orbit.dat"),
                        witness_orbit_rows(flow, *verdict.witness, delta, rc.search_params().dt));
    std::printf("%s\nreport: %s\n", verdict.witness ? "witness_found" : "no_witness",
                out_path(rc, stem + ".json").c_str());
    return 0;
}

int cmd_census(RunConfig rc) {
    rc.resolve_out_dir();
    std::string name = rc.fixture;
    for (char& c : name)
        if (c == '-') c = '_';
    if (name.rfind("suspension", 0) != 0)
        throw ConfigError("census runs on suspension fixtures, got: " + rc.fixture);
    const OrbitCensus census = orbit_census(rc.resolved_sft(), rc.t_max);
    const std::string stem = "census_" + sanitize(rc.fixture);
    write_text_file(out_path(rc, stem + ".csv"), census.to_csv());
    Json doc = Json::object();
    doc.set("config", rc.to_json()).set("census", census.to_json());
    const GrowthSeries g = growth_rate(census);
    doc.set("growth_rate_at_t_max", g.rate_at_tmax);
    write_text_file(out_path(rc, stem + ".json"), doc.dump());
    std::printf("census rows: %zu, v(t_max) = %s, growth rate = %s\nreport: %s\n",
                census.rows.size(), census.rows.back().v_cumulative.str().c_str(),
                fp17(g.rate_at_tmax).c_str(), out_path(rc, stem + ".csv").c_str());
    return 0;
}

int cmd_verify(const std::string& suite, RunConfig rc, double a) {
    rc.resolve_out_dir();
    const double tol = rc.identity_tolerance;
    std::vector<SuiteResult> results;
    if (suite == "sa1") results.push_back(verify_sa1(rc.seed, rc.jobs, tol));
    else if (suite == "sa2") {
        results.push_back(verify_sa2("full2", rc.seed, rc.jobs, tol));
        results.push_back(verify_sa2("golden", rc.seed, rc.jobs, tol));
    } else if (suite == "sa3") results.push_back(verify_sa3(a, rc.seed, rc.jobs));
    else if (suite == "sa4") results.push_back(verify_sa4(rc.seed, rc.jobs, tol));
    else if (suite == "thB") {
        if (rc.fixture.find("suspension") != std::string::npos &&
            rc.fixture.find("golden") != std::string::npos)
            results.push_back(verify_thB("golden", rc.seed, rc.jobs, rc.slack));
        else if (rc.fixture.find("suspension") != std::string::npos)
            results.push_back(verify_thB("full2", rc.seed, rc.jobs, rc.slack));
        else {
            results.push_back(verify_thB("full2", rc.seed, rc.jobs, rc.slack));
            results.push_back(verify_thB("golden", rc.seed, rc.jobs, rc.slack));
        }
    } else if (suite == "lemmas") results.push_back(verify_lemmas(rc.seed));
    else if (suite == "entropy") {
        results.push_back(verify_entropy_recovery("full2", rc.seed, rc.jobs));
        results.push_back(verify_entropy_recovery("golden", rc.seed, rc.jobs));
    } else if (suite == "falsification") results.push_back(verify_falsification(rc.seed, rc.jobs));
    else throw ConfigError("unknown suite: " + suite +
                           " (sa1 | sa2 | sa3 | sa4 | thB | lemmas | entropy | falsification)");

    bool all = true;
    Json arr = Json::array();
    for (const auto& r : results) {
        for (const auto& c : r.checks)
            std::printf("[%s] %s :: %s -- %s\n", c.pass ? "PASS" : "FAIL", r.suite.c_str(),
                        c.name.c_str(), c.detail.c_str());
        all = all && r.pass;
        arr.push(r.to_json());
    }
    write_text_file(out_path(rc, "verify_" + sanitize(suite) + ".json"), arr.dump());
    std::printf("%s\n", all ? "all checks passed" : "some checks FAILED");
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological-expansive-flow toolkit"};
    app.require_subcommand(1);

    // fixtures
    auto* fixtures_cmd = app.add_subcommand("fixtures", "list the built-in flows");
    auto* fx_list = fixtures_cmd->add_subcommand("list", "print the fixture catalog");
    bool fx_json = false;
    fx_list->add_flag("--json", fx_json, "machine-readable catalog");
    std::string fx_show_name;
    auto* fx_show = fixtures_cmd->add_subcommand("show", "parameter schema of one fixture");
    fx_show->add_option("name", fx_show_name)->required();

    // estimate
    RunConfig est;
    std::string est_config;
    auto* est_cmd = app.add_subcommand("estimate", "entropy estimators (classical and e*)");
    attach_common(est_cmd, est, est_config);
    est_cmd->add_option("--mode", est.mode, "classical | e-star | e-star-spanning");
    est_cmd->add_option("--t-max", est.t_max, "largest time horizon");
    est_cmd->add_option("--t-grid", est.t_grid, "explicit time grid")->delimiter(',');
    est_cmd->add_option("--dt", est.dt, "separation grid step");
    est_cmd->add_option("--delta-grid", est.delta_grid, "swept constant scales")->delimiter(',');
    est_cmd->add_option("--delta-kind", est.delta_kind, "constant | decay | vanishing-norm");
    est_cmd->add_option("--word-length", est.word_length, "cylinder depth for suspension compacts");
    est_cmd->add_option("--max-points", est.max_points, "cap on compact sample size");

    // separate
    RunConfig sep;
    std::string sep_config;
    double sep_t = 3.0, sep_delta = 0.125;
    auto* sep_cmd = app.add_subcommand("separate", "separated/spanning sets and beta over one compact");
    attach_common(sep_cmd, sep, sep_config);
    sep_cmd->add_option("--t", sep_t, "time horizon");
    sep_cmd->add_option("--dt", sep.dt, "grid step");
    sep_cmd->add_option("--delta", sep_delta, "constant scale");
    sep_cmd->add_option("--word-length", sep.word_length, "cylinder depth for suspension compacts");
    sep_cmd->add_option("--max-points", sep.max_points, "cap on compact sample size");

    // falsify
    RunConfig fal;
    std::string fal_config;
    double fal_delta = 0.05;
    bool fal_dump = false;
    auto* fal_cmd = app.add_subcommand("falsify", "expansivity falsification search");
    attach_common(fal_cmd, fal, fal_config);
    fal_cmd->add_option("--notion", fal.notion, "expansive | topological | rescaling");
    fal_cmd->add_option("--eps", fal.eps, "epsilon of the expansivity definition");
    fal_cmd->add_option("--delta", fal_delta, "constant delta value");
    fal_cmd->add_option("--delta-kind", fal.delta_kind, "constant | decay | vanishing-norm");
    fal_cmd->add_option("--pairs", fal.pair_samples, "candidate pairs to screen");
    fal_cmd->add_option("--iterations", fal.iterations, "objective-evaluation budget");
    fal_cmd->add_option("--window-T", fal.window_t, "time window half-width");
    fal_cmd->add_option("--knots", fal.knot_count, "reparameterization knots (odd)");
    fal_cmd->add_flag("--dump-orbit", fal_dump, "write (t, d, delta) plot data for the witness");

    // census
    RunConfig cen;
    std::string cen_config;
    auto* cen_cmd = app.add_subcommand("census", "periodic-orbit census of a suspension fixture");
    attach_common(cen_cmd, cen, cen_config);
    cen_cmd->add_option("--t-max", cen.t_max, "largest flow period");

    // verify
    RunConfig ver;
    std::string ver_config;
    std::string ver_suite;
    double ver_a = 2.0;
    auto* ver_cmd = app.add_subcommand("verify", "invariant verification suites");
    attach_common(ver_cmd, ver, ver_config);
    ver_cmd->add_option("suite", ver_suite, "sa1 | sa2 | sa3 | sa4 | thB | lemmas | entropy | falsification")
        ->required();
    ver_cmd->add_option("--a", ver_a, "time-rescale factor for sa3");
    ver_cmd->add_option("--slack", ver.slack, "thB growth-bound slack (default 0.05)");
    ver_cmd->add_option("--tolerance", ver.identity_tolerance,
                        "identity-check tolerance (default 0.05)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (fixtures_cmd->parsed()) {
            if (fx_show->parsed()) return cmd_fixtures(false, fx_show_name);
            return cmd_fixtures(fx_json, "");
        }
        if (est_cmd->parsed()) return cmd_estimate(merge_config(est_cmd, est, est_config));
        if (sep_cmd->parsed()) return cmd_separate(merge_config(sep_cmd, sep, sep_config), sep_t, sep_delta);
        if (fal_cmd->parsed())
            return cmd_falsify(merge_config(fal_cmd, fal, fal_config), fal_delta,
                               fal_cmd->count("--delta") > 0, fal_cmd->count("--delta-kind") > 0,
                               fal_dump);
        if (cen_cmd->parsed()) return cmd_census(merge_config(cen_cmd, cen, cen_config));
        if (ver_cmd->parsed()) return cmd_verify(ver_suite, merge_config(ver_cmd, ver, ver_config), ver_a);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
