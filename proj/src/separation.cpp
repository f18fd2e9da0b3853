#include "texflow/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "texflow/parallel.hpp"

namespace texflow {

Json SeparationReport::to_json() const {
    Json w = Json::array();
    for (int i : separating_witness) w.push(Json::integer(i));
    Json c = Json::array();
    for (int i : spanning_witness) c.push(Json::integer(i));
    Json j = Json::object();
    j.set("t", t_horizon)
        .set("dt", dt)
        .set("k_size", k_size)
        .set("s_lower", s_lower)
        .set("r_upper", r_upper)
        .set("beta", beta)
        .set("exact", exact)
        .set("k_restricted_spanning", k_restricted_spanning)
        .set("delta", delta_id)
        .set("seed", seed)
        .set("separating_witness", std::move(w))
        .set("spanning_witness", std::move(c));
    return j;
}

std::string SeparationReport::csv_header() const {
    return "t,dt,k_size,s_lower,r_upper,beta,exact,seed";
}

std::string SeparationReport::csv_row() const {
    return fp17(t_horizon) + "," + fp17(dt) + "," + std::to_string(k_size) + "," +
           std::to_string(s_lower) + "," + std::to_string(r_upper) + "," + fp17(beta) + "," +
           (exact ? "1" : "0") + "," + std::to_string(seed);
}

OrbitCache::OrbitCache(const FlowSpec& flow, const CompactSample& k, double t_max, double dt,
                       int jobs)
    : space_(&flow.space), dt_(dt) {
    if (!(dt > 0)) throw InvalidArgument("OrbitCache: dt must be positive");
    if (!(t_max >= 0)) throw InvalidArgument("OrbitCache: t_max must be nonnegative");
    if (k.points.empty()) throw InvalidArgument("OrbitCache: empty compact sample");
    steps_ = static_cast<int>(std::floor(t_max / dt + 1e-9)) + 1;
    const std::size_t n = k.points.size();
    orbits_.resize(n);
    parallel_for_chunks(n, jobs, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            auto& orbit = orbits_[i];
            orbit.reserve(static_cast<std::size_t>(steps_));
            for (int s = 0; s < steps_; ++s)
                orbit.push_back(flow.evaluate(k.points[i], s * dt_));
        }
    });
    if (flow.space.suspension_native) build_fast_tables();
}

void OrbitCache::build_fast_tables() {
    max_len_ = 0;
    for (const auto& orbit : orbits_) {
        if (!orbit.front().is_symbolic()) return;
        max_len_ = std::max(max_len_, orbit.front().sym().block_length());
    }
    const std::size_t n = orbits_.size();
    const std::size_t steps = static_cast<std::size_t>(steps_);
    // central-window positions reach +-(La+Lb) <= 2*max_len around the
    // coordinate-0 pointer, which itself sits at a multiple of the word
    // length plus the phase
    const std::size_t stride = static_cast<std::size_t>(8 * max_len_ + 2);
    tiles_.assign(n * stride, 0);
    win_.assign(n * steps, nullptr);
    flat_heights_.assign(n * steps, 0.0);
    pair_cap_.assign(n, 0);
    pow2_.resize(static_cast<std::size_t>(2 * max_len_ + 1));
    for (std::size_t k = 0; k < pow2_.size(); ++k) pow2_[k] = std::ldexp(1.0, -static_cast<int>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const SymbolicPoint& base = orbits_[i].front().sym();
        const int len = base.block_length();
        pair_cap_[i] = len;
        std::uint8_t* tile = &tiles_[i * stride];
        for (std::size_t q = 0; q < stride; ++q)
            tile[q] = base.word[q % static_cast<std::size_t>(len)];
        // coordinate 0 of the shifted word sits at mid + phase with
        // mid a multiple of len, leaving >= 2*max_len slack on both sides
        const int mid = ((3 * max_len_ + len - 1) / len) * len;
        for (std::size_t s = 0; s < steps; ++s) {
            const SymbolicPoint& sp = orbits_[i][s].sym();
            win_[s * n + i] = tile + mid + sp.phase;
            flat_heights_[s * n + i] = sp.height;
        }
    }
    fast_ = true;
}

double OrbitCache::fast_dist(int i, int j, int s) const {
    const std::size_t row = static_cast<std::size_t>(s) * orbits_.size();
    const std::uint8_t* a = win_[row + static_cast<std::size_t>(i)];
    const std::uint8_t* b = win_[row + static_cast<std::size_t>(j)];
    const int cap = pair_cap_[static_cast<std::size_t>(i)] + pair_cap_[static_cast<std::size_t>(j)];
    int k = cap;
    for (int m = 1; m <= cap; ++m) {
        const int pos = (m & 1) ? (m - 1) / 2 : -(m / 2);
        if (a[pos] != b[pos]) {
            k = m - 1;
            break;
        }
    }
    const double sym = (k >= cap) ? 0.0 : pow2_[static_cast<std::size_t>(k)];
    const double dh =
        std::abs(flat_heights_[row + static_cast<std::size_t>(i)] -
                 flat_heights_[row + static_cast<std::size_t>(j)]);
    return sym > dh ? sym : dh;
}

int OrbitCache::steps_for(double t) const {
    const int s = static_cast<int>(std::floor(t / dt_ + 1e-9)) + 1;
    return std::clamp(s, 1, steps_);
}

DeltaTable OrbitCache::delta_table(const ScaleFn& delta, int jobs) const {
    DeltaTable out;
    out.n = points();
    out.steps = steps_;
    if (delta.is_constant) {
        out.constant = true;
        out.constant_value = delta.constant_value;
        return out;
    }
    const std::size_t n = orbits_.size();
    out.by_step.resize(n * static_cast<std::size_t>(steps_));
    parallel_for_chunks(n, jobs, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (int s = 0; s < steps_; ++s)
                out.by_step[static_cast<std::size_t>(s) * n + i] =
                    delta(orbits_[i][static_cast<std::size_t>(s)]);
    });
    return out;
}

namespace {

// "for all distinct x, y in E there is s with d(phi_s x, phi_s y) >= delta(phi_s x)":
// both ordered pairs must witness separation.
bool pair_separated_both(const OrbitCache& c, int i, int j, int steps,
                         const DeltaTable& deltas) {
    if (deltas.constant) {
        const double bound = deltas.constant_value;
        for (int s = 0; s < steps; ++s)
            if (c.dist(i, j, s) >= bound) return true;
        return false;
    }
    bool fwd = false, bwd = false;
    for (int s = 0; s < steps; ++s) {
        const double d = c.dist(i, j, s);
        if (d >= deltas.at(i, s)) fwd = true;
        if (d >= deltas.at(j, s)) bwd = true;
        if (fwd && bwd) return true;
    }
    return false;
}

// x shadows y along [0, t]: d(phi_s x, phi_s y) <= delta(phi_s x) at every grid s.
bool shadows(const OrbitCache& c, int i, int j, int steps, const DeltaTable& deltas) {
    for (int s = 0; s < steps; ++s)
        if (c.dist(i, j, s) > deltas.at(i, s)) return false;
    return true;
}

std::vector<int> seeded_order(int n, std::uint64_t seed) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed, 23);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

constexpr int kExactLimit = 12;

}  // namespace

long long greedy_separated_count(const OrbitCache& cache, int steps, const DeltaTable& deltas,
                                 std::uint64_t seed, int jobs, std::vector<int>* witness) {
    const int n = cache.points();
    const std::vector<int> order = seeded_order(n, seed);
    std::vector<int> admitted;
    admitted.reserve(static_cast<std::size_t>(n));
    for (int c : order) {
        const bool ok = parallel_all_of(admitted.size(), jobs, [&](std::size_t k) {
            return pair_separated_both(cache, c, admitted[k], steps, deltas);
        });
        if (ok) admitted.push_back(c);
    }
    if (witness) *witness = admitted;
    return static_cast<long long>(admitted.size());
}

long long greedy_cover_count(const OrbitCache& cache, int steps, const DeltaTable& deltas,
                             std::uint64_t seed, int jobs, std::vector<int>* witness) {
    const int n = cache.points();
    const std::vector<int> order = seeded_order(n, seed);
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    std::vector<int> chosen;
    for (int c : order) {
        if (covered[static_cast<std::size_t>(c)]) continue;
        chosen.push_back(c);
        parallel_for_chunks(static_cast<std::size_t>(n), jobs, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                if (covered[j]) continue;
                if (shadows(cache, c, static_cast<int>(j), steps, deltas)) covered[j] = 1;
            }
        });
    }
    // every K point must be shadowed by a chosen point
    for (int j = 0; j < n; ++j)
        if (!covered[static_cast<std::size_t>(j)])
            throw InvalidArgument("greedy_cover: post-check failed, uncovered point");
    if (witness) *witness = chosen;
    return static_cast<long long>(chosen.size());
}

double beta_from_table(const DeltaTable& deltas, int steps) {
    if (deltas.constant) return deltas.constant_value;
    double b = std::numeric_limits<double>::infinity();
    for (int i = 0; i < deltas.n; ++i)
        for (int s = 0; s < steps; ++s) b = std::min(b, deltas.at(i, s));
    return b;
}

bool is_separated_pair(const FlowSpec& flow, const Point& x, const Point& y, double t,
                       const ScaleFn& delta, double dt) {
    if (!(dt > 0)) throw InvalidArgument("is_separated_pair: dt must be positive");
    if (!(t >= 0)) throw InvalidArgument("is_separated_pair: t must be nonnegative");
    const int steps = static_cast<int>(std::floor(t / dt + 1e-9)) + 1;
    for (int s = 0; s < steps; ++s) {
        const Point xs = flow.evaluate(x, s * dt);
        const Point ys = flow.evaluate(y, s * dt);
        if (flow.space(xs, ys) >= delta(xs)) return true;
    }
    return false;
}

namespace {

struct ExactTables {
    int n;
    std::vector<std::vector<char>> sep_both;  // unordered pair separated (both orders)
    std::vector<std::uint32_t> shadow_mask;   // shadow_mask[i] bit j: i shadows j
};

ExactTables exact_tables(const OrbitCache& cache, int steps, const DeltaTable& deltas) {
    ExactTables t;
    t.n = cache.points();
    t.sep_both.assign(static_cast<std::size_t>(t.n), std::vector<char>(static_cast<std::size_t>(t.n), 0));
    t.shadow_mask.assign(static_cast<std::size_t>(t.n), 0);
    for (int i = 0; i < t.n; ++i) {
        for (int j = 0; j < t.n; ++j) {
            if (i != j && shadows(cache, i, j, steps, deltas))
                t.shadow_mask[static_cast<std::size_t>(i)] |= (1u << j);
        }
        t.shadow_mask[static_cast<std::size_t>(i)] |= (1u << i);
        for (int j = i + 1; j < t.n; ++j)
            t.sep_both[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                pair_separated_both(cache, i, j, steps, deltas) ? 1 : 0;
    }
    return t;
}

long long exact_max_separated(const ExactTables& t, std::vector<int>* witness) {
    const std::uint32_t full = (t.n == 32) ? 0xFFFFFFFFu : ((1u << t.n) - 1u);
    long long best = 0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        if (size <= best) continue;
        bool ok = true;
        for (int i = 0; i < t.n && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            for (int j = i + 1; j < t.n; ++j) {
                if (!(mask & (1u << j))) continue;
                if (!t.sep_both[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) { ok = false; break; }
            }
        }
        if (ok) { best = size; best_mask = mask; }
    }
    if (witness) {
        witness->clear();
        for (int i = 0; i < t.n; ++i)
            if (best_mask & (1u << i)) witness->push_back(i);
    }
    return best;
}

long long exact_min_cover(const ExactTables& t, std::vector<int>* witness) {
    const std::uint32_t full = (t.n == 32) ? 0xFFFFFFFFu : ((1u << t.n) - 1u);
    int best = t.n + 1;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        if (size >= best) continue;
        std::uint32_t cov = 0;
        for (int i = 0; i < t.n; ++i)
            if (mask & (1u << i)) cov |= t.shadow_mask[static_cast<std::size_t>(i)];
        if (cov == full) { best = size; best_mask = mask; }
    }
    if (witness) {
        witness->clear();
        for (int i = 0; i < t.n; ++i)
            if (best_mask & (1u << i)) witness->push_back(i);
    }
    return best;
}

}  // namespace

SeparationReport max_separated_set(const FlowSpec& flow, const CompactSample& k, double t,
                                   const ScaleFn& delta, double dt, std::uint64_t seed, int jobs) {
    OrbitCache cache(flow, k, t, dt, jobs);
    const auto deltas = cache.delta_table(delta, jobs);
    const int steps = cache.steps_for(t);
    SeparationReport rep;
    rep.t_horizon = t;
    rep.dt = dt;
    rep.k_size = cache.points();
    rep.delta_id = delta.id;
    rep.seed = seed;
    if (delta.kind == ScaleFn::Kind::positive_continuous)
        rep.beta = beta_from_table(deltas, steps);
    if (cache.points() <= kExactLimit) {
        rep.exact = true;
        rep.s_lower = exact_max_separated(exact_tables(cache, steps, deltas), &rep.separating_witness);
    } else {
        rep.s_lower = greedy_separated_count(cache, steps, deltas, seed, jobs, &rep.separating_witness);
    }
    return rep;
}

SeparationReport min_spanning_set(const FlowSpec& flow, const CompactSample& k, double t,
                                  const ScaleFn& delta, double dt, std::uint64_t seed, int jobs) {
    OrbitCache cache(flow, k, t, dt, jobs);
    const auto deltas = cache.delta_table(delta, jobs);
    const int steps = cache.steps_for(t);
    SeparationReport rep;
    rep.t_horizon = t;
    rep.dt = dt;
    rep.k_size = cache.points();
    rep.delta_id = delta.id;
    rep.seed = seed;
    if (delta.kind == ScaleFn::Kind::positive_continuous)
        rep.beta = beta_from_table(deltas, steps);
    if (cache.points() <= kExactLimit) {
        rep.exact = true;
        rep.r_upper = exact_min_cover(exact_tables(cache, steps, deltas), &rep.spanning_witness);
    } else {
        rep.r_upper = greedy_cover_count(cache, steps, deltas, seed, jobs, &rep.spanning_witness);
    }
    return rep;
}

double beta_infimum(const FlowSpec& flow, const CompactSample& k, double t, const ScaleFn& delta,
                    double dt, int jobs) {
    if (delta.kind != ScaleFn::Kind::positive_continuous)
        throw InvalidArgument("beta undefined for C_phi scale");
    OrbitCache cache(flow, k, t, dt, jobs);
    const auto deltas = cache.delta_table(delta, jobs);
    const double b = beta_from_table(deltas, cache.steps_for(t));
    if (!(b > 0)) throw InvalidArgument("beta undefined for C_phi scale: delta vanishes on a sampled orbit point");
    return b;
}

}  // namespace texflow
