#include "texflow/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <fstream>

#include <json.hpp>

namespace texflow {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, const json::exception& e,
                             const std::string& text) {
    // nlohmann reports a byte offset for parse errors; convert it to line:col
    std::string msg = e.what();
    const std::string marker = "at byte ";
    // parse_error messages carry "... at line L, column C" in recent
    // versions; fall back to the raw message otherwise
    (void)text;
    (void)marker;
    throw ConfigError(path + ": " + msg);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(path, e, text);
    }

    RunConfig c;
    c.fixture = get_or<std::string>(j, "fixture", c.fixture);
    if (j.contains("v")) {
        auto v = j.at("v").get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("config key 'v' must be a 2-vector");
        c.translation_v = Eigen::Vector2d(v[0], v[1]);
    }
    if (j.contains("a")) c.time_scale_a = j.at("a").get<double>();
    if (j.contains("base")) c.time_scale_base = j.at("base").get<std::string>();
    if (j.contains("word_length")) c.word_length = j.at("word_length").get<int>();
    if (j.contains("alphabet") || j.contains("adjacency") || j.contains("roof")) {
        SFT sft;
        sft.alphabet = get_or<int>(j, "alphabet", 2);
        sft.roof = get_or<double>(j, "roof", 1.0);
        if (j.contains("adjacency")) {
            const auto rows = j.at("adjacency").get<std::vector<std::vector<int>>>();
            sft.alphabet = static_cast<int>(rows.size());
            sft.adjacency = Eigen::MatrixXi::Zero(sft.alphabet, sft.alphabet);
            for (int r = 0; r < sft.alphabet; ++r) {
                if (static_cast<int>(rows[std::size_t(r)].size()) != sft.alphabet)
                    throw ConfigError("config key 'adjacency' must be a square 0/1 matrix");
                for (int cc = 0; cc < sft.alphabet; ++cc)
                    sft.adjacency(r, cc) = rows[std::size_t(r)][std::size_t(cc)];
            }
        } else {
            sft.adjacency = Eigen::MatrixXi::Ones(sft.alphabet, sft.alphabet);
        }
        sft.validate();
        c.sft = sft;
    }
    c.max_points = get_or<long long>(j, "max_points", c.max_points);
    c.heights = get_or<std::vector<double>>(j, "heights", c.heights);
    c.mode = get_or<std::string>(j, "mode", c.mode);
    c.t_max = get_or<double>(j, "t_max", c.t_max);
    c.t_grid = get_or<std::vector<double>>(j, "t_grid", c.t_grid);
    c.dt = get_or<double>(j, "dt", c.dt);
    c.delta_grid = get_or<std::vector<double>>(j, "delta_grid", c.delta_grid);
    c.delta_kind = get_or<std::string>(j, "delta_kind", c.delta_kind);
    c.eps = get_or<double>(j, "eps", c.eps);
    c.notion = get_or<std::string>(j, "notion", c.notion);
    c.annulus_r0 = get_or<double>(j, "annulus_r0", c.annulus_r0);
    c.annulus_r1 = get_or<double>(j, "annulus_r1", c.annulus_r1);
    c.annulus_count = get_or<int>(j, "annulus_count", c.annulus_count);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.jobs = get_or<int>(j, "jobs", c.jobs);
    c.pair_samples = get_or<int>(j, "pair_samples", c.pair_samples);
    c.iterations = get_or<long long>(j, "iterations", c.iterations);
    c.window_t = get_or<double>(j, "window_T", c.window_t);
    c.knot_count = get_or<int>(j, "knot_count", c.knot_count);
    c.distinctness_margin = get_or<double>(j, "distinctness_margin", c.distinctness_margin);
    c.identity_tolerance = get_or<double>(j, "identity_tolerance", c.identity_tolerance);
    c.slack = get_or<double>(j, "slack", c.slack);
    c.out_dir = get_or<std::string>(j, "out", c.out_dir);
    return c;
}

void RunConfig::resolve_out_dir() {
    if (!out_dir.empty()) return;
    if (const char* env = std::getenv("TEXFLOW_OUT"); env && *env) out_dir = env;
    else out_dir = "out";
}

std::vector<double> RunConfig::resolved_t_grid() const {
    if (!t_grid.empty()) return t_grid;
    return {t_max - 2.0, t_max - 1.0, t_max};
}

SFT RunConfig::resolved_sft() const {
    if (sft) return *sft;
    std::string name = fixture;
    for (char& ch : name) if (ch == '-') ch = '_';
    const bool golden = name.find("golden") != std::string::npos ||
                        (time_scale_base && time_scale_base->find("golden") != std::string::npos);
    return golden ? SFT::golden_mean() : SFT::full_shift(2);
}

int RunConfig::resolved_word_length() const {
    if (word_length) return *word_length;
    const SFT s = resolved_sft();
    // deepest depth within the point budget, capped two coordinates past the
    // widest tail window so constrained-shift increments read word growth
    int k_min = 2;
    if (!delta_grid.empty()) {
        const double dmax = *std::max_element(delta_grid.begin(), delta_grid.end());
        k_min = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / dmax))));
    }
    const double t_back = t_grid.empty() ? t_max : t_grid.back();
    const int window_cap = static_cast<int>(t_back) + k_min + 2;
    return std::min(max_cylinder_word_length(s, max_points), std::max(4, window_cap));
}

FlowSpec RunConfig::build_fixture() const {
    FixtureParams p;
    p.v = translation_v;
    p.a = time_scale_a;
    p.base = time_scale_base;
    std::string name = fixture;
    for (char& ch : name) if (ch == '-') ch = '_';
    const bool suspension_like =
        name.rfind("suspension", 0) == 0 ||
        (time_scale_base && time_scale_base->rfind("suspension", 0) == 0);
    if (suspension_like) {
        p.sft = resolved_sft();
        p.word_length = resolved_word_length();
    }
    return make_fixture(fixture, p);
}

CompactSample RunConfig::build_compact(const FlowSpec& flow) const {
    std::string base = flow.id;
    if (base.rfind("suspension", 0) == 0) {
        CompactSample k = cylinder_sample(resolved_sft(), resolved_word_length(), heights);
        k.seed = seed;
        return k;
    }
    if (base.rfind("trivial_discrete", 0) == 0) return lattice_sample(5);
    if (base.rfind("trivial", 0) == 0) {
        CompactSample k;
        k.region = flow.id + " sample";
        Rng rng = make_rng(seed, 3);
        for (int i = 0; i < annulus_count; ++i) k.points.push_back(flow.sample_point(rng));
        return k;
    }
    return annulus_sample(annulus_r0, annulus_r1, annulus_count, seed);
}

std::vector<ScaleFn> RunConfig::build_delta_family(const FlowSpec& flow) const {
    std::vector<ScaleFn> out;
    if (delta_kind == "constant") {
        for (double d : delta_grid) out.push_back(ScaleFn::constant(d));
    } else if (delta_kind == "decay") {
        // exponentially decaying translation-flow scale (1/2)|v| eps e^{-|x|}
        const Eigen::Vector2d v = translation_v.value_or(Eigen::Vector2d(1.0, 0.0));
        const double c = 0.5 * v.norm() * eps;
        ScaleFn s;
        s.kind = ScaleFn::Kind::positive_continuous;
        s.id = "decay";
        s.eval = [c](const Point& p) { return c * std::exp(-p.vec().norm()); };
        out.push_back(std::move(s));
    } else if (delta_kind == "vanishing-norm") {
        // C_phi scale for trivial fixtures: distance to the nearest singularity
        if (flow.singularities.empty())
            throw ConfigError("delta_kind vanishing-norm needs a fixture with singularities; " +
                              flow.id + " has none (use a positive scale instead)");
        auto sing = std::make_shared<std::vector<Point>>(flow.singularities);
        auto dist = flow.space.dist;
        ScaleFn s;
        s.kind = ScaleFn::Kind::vanishing_on_singularities;
        s.id = "dist_to_singularities";
        s.eval = [sing, dist](const Point& p) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& q : *sing) best = std::min(best, dist(p, q));
            return best;
        };
        out.push_back(std::move(s));
    } else {
        throw ConfigError("unknown delta_kind: " + delta_kind);
    }
    return out;
}

SearchParams RunConfig::search_params() const {
    SearchParams sp;
    sp.pair_samples = pair_samples;
    sp.knot_count = knot_count;
    sp.window_t = window_t;
    sp.dt = std::min(dt, 0.05);
    sp.seed = seed;
    sp.iterations = iterations;
    sp.distinctness_margin = distinctness_margin;
    sp.jobs = jobs;
    return sp;
}

Json RunConfig::to_json() const {
    Json tg = Json::array();
    for (double t : resolved_t_grid()) tg.push(t);
    Json dg = Json::array();
    for (double d : delta_grid) dg.push(d);
    Json hs = Json::array();
    for (double h : heights) hs.push(h);
    Json j = Json::object();
    j.set("fixture", fixture)
        .set("mode", mode)
        .set("t_max", t_max)
        .set("t_grid", std::move(tg))
        .set("dt", dt)
        .set("delta_grid", std::move(dg))
        .set("delta_kind", delta_kind)
        .set("heights", std::move(hs))
        .set("max_points", max_points)
        .set("eps", eps)
        .set("notion", notion)
        .set("seed", seed)
        .set("pair_samples", pair_samples)
        .set("iterations", iterations)
        .set("window_T", window_t)
        .set("knot_count", knot_count)
        .set("distinctness_margin", distinctness_margin)
        .set("identity_tolerance", identity_tolerance)
        .set("slack", slack);
    if (word_length) j.set("word_length", *word_length);
    if (time_scale_a) j.set("a", *time_scale_a);
    if (time_scale_base) j.set("base", *time_scale_base);
    return j;
}

}  // namespace texflow
