#include "texflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "texflow/parallel.hpp"

namespace texflow {

namespace {

const char* kAggregation =
    "max over (K, delta) cells of the tail rates at the two largest t, "
    "where the rate at t_i is (log num(t_i) - log num(t_{i-1})) / (t_i - t_{i-1})";

double tail_rate_of(const std::vector<double>& t, const std::vector<double>& log_num) {
    const std::size_t n = t.size();
    if (n == 1) return log_num[0] / std::max(t[0], 1e-300);
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t first = n >= 3 ? n - 2 : 1;
    for (std::size_t i = first; i < n; ++i)
        best = std::max(best, (log_num[i] - log_num[i - 1]) / (t[i] - t[i - 1]));
    return best;
}

void fit_line(const std::vector<double>& t, const std::vector<double>& y, double& slope,
              double& intercept) {
    const std::size_t n = t.size();
    if (n < 2) { slope = 0; intercept = n ? y[0] : 0; return; }
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double d = double(n) * stt - st * st;
    slope = (double(n) * sty - st * sy) / d;
    intercept = (sy - slope * st) / double(n);
}

struct SweepSpec {
    const FlowSpec* flow;
    const std::vector<CompactSample>* k_list;
    const std::vector<ScaleFn>* deltas;
    const std::vector<double>* t_grid;
    double dt;
    std::uint64_t seed;
    int jobs;
    bool divide_beta;
    bool spanning;
};

EntropyReport run_sweep(const SweepSpec& sp, std::string mode) {
    const auto& t_grid = *sp.t_grid;
    if (t_grid.empty()) throw InvalidArgument("entropy sweep: empty t grid");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw InvalidArgument("entropy sweep: t grid must be increasing");
    if (sp.k_list->empty() || sp.deltas->empty())
        throw InvalidArgument("entropy sweep: need at least one K and one delta");

    EntropyReport rep;
    rep.mode = std::move(mode);
    rep.aggregation = kAggregation;
    rep.fixture_id = sp.flow->id;
    rep.t_grid = t_grid;
    rep.dt = sp.dt;
    rep.seed = sp.seed;
    rep.estimate = -std::numeric_limits<double>::infinity();

    for (const ScaleFn& delta : *sp.deltas)
        if (sp.divide_beta && delta.kind != ScaleFn::Kind::positive_continuous)
            throw InvalidArgument("estimate_e_star: every delta must be positive_continuous");

    const double t_max = t_grid.back();
    std::vector<std::unique_ptr<OrbitCache>> caches;
    for (const CompactSample& k : *sp.k_list)
        caches.push_back(std::make_unique<OrbitCache>(*sp.flow, k, t_max, sp.dt, sp.jobs));

    // one task per (K, delta, t) cell entry; tasks are independent and the
    // results land in preallocated slots, so scheduling cannot reorder them
    struct TaskRef { std::size_t ki, di, ti; };
    std::vector<TaskRef> tasks;
    const std::size_t nd = sp.deltas->size(), nt = t_grid.size();
    rep.cells.assign(sp.k_list->size() * nd, {});
    std::vector<DeltaTable> dtabs(sp.k_list->size() * nd);
    for (std::size_t ki = 0; ki < sp.k_list->size(); ++ki)
        for (std::size_t di = 0; di < nd; ++di) {
            auto& cell = rep.cells[ki * nd + di];
            cell.k_id = (*sp.k_list)[ki].region;
            cell.delta_id = (*sp.deltas)[di].id;
            cell.counts.assign(nt, 0);
            cell.betas.assign(nt, 0.0);
            cell.log_numerator.assign(nt, 0.0);
            dtabs[ki * nd + di] = caches[ki]->delta_table((*sp.deltas)[di], sp.jobs);
            for (std::size_t ti = 0; ti < nt; ++ti) tasks.push_back({ki, di, ti});
        }

    std::string first_error;
    std::mutex error_mu;
    parallel_tasks(tasks.size(), sp.jobs, [&](std::size_t w) {
        const TaskRef task = tasks[w];
        try {
            const OrbitCache& cache = *caches[task.ki];
            const auto& dtab = dtabs[task.ki * nd + task.di];
            EntropyCell& cell = rep.cells[task.ki * nd + task.di];
            const int steps = cache.steps_for(t_grid[task.ti]);
            const long long count = sp.spanning
                                        ? greedy_cover_count(cache, steps, dtab, sp.seed, 1)
                                        : greedy_separated_count(cache, steps, dtab, sp.seed, 1);
            double log_num = std::log(double(count));
            double beta = 0;
            if (sp.divide_beta) {
                beta = beta_from_table(dtab, steps);
                if (!(beta > 0))
                    throw InvalidArgument(
                        "beta undefined for C_phi scale: delta vanishes on a sampled orbit point");
                log_num -= std::log(beta);
            }
            cell.counts[task.ti] = count;
            cell.betas[task.ti] = beta;
            cell.log_numerator[task.ti] = log_num;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (first_error.empty()) first_error = e.what();
        }
    });
    if (!first_error.empty()) throw InvalidArgument(first_error);

    for (std::size_t ci = 0; ci < rep.cells.size(); ++ci) {
        EntropyCell& cell = rep.cells[ci];
        cell.tail_rate = tail_rate_of(t_grid, cell.log_numerator);
        if (cell.tail_rate > rep.estimate) {
            rep.estimate = cell.tail_rate;
            rep.winning_cell = static_cast<int>(ci);
        }
    }

    const EntropyCell& win = rep.cells[static_cast<std::size_t>(rep.winning_cell)];
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        rep.per_t_rates.emplace_back(t_grid[i], win.log_numerator[i] / std::max(t_grid[i], 1e-300));
    fit_line(t_grid, win.log_numerator, rep.regression_slope, rep.regression_intercept);
    rep.k_id = win.k_id;
    rep.delta_family_id = win.delta_id;
    return rep;
}

}  // namespace

EntropyReport estimate_entropy_compact(const FlowSpec& flow, const CompactSample& k,
                                       const std::vector<double>& eps_grid,
                                       const std::vector<double>& t_grid, double dt,
                                       std::uint64_t seed, int jobs) {
    std::vector<ScaleFn> deltas;
    for (double eps : eps_grid) deltas.push_back(ScaleFn::constant(eps));
    std::vector<CompactSample> ks{k};
    SweepSpec sp{&flow, &ks, &deltas, &t_grid, dt, seed, jobs, /*divide_beta=*/false,
                 /*spanning=*/false};
    return run_sweep(sp, "classical_e");
}

EntropyReport estimate_e_star(const FlowSpec& flow, const std::vector<CompactSample>& k_list,
                              const std::vector<ScaleFn>& delta_family,
                              const std::vector<double>& t_grid, double dt, EStarMode mode,
                              std::uint64_t seed, int jobs) {
    SweepSpec sp{&flow, &k_list, &delta_family, &t_grid, dt, seed, jobs, /*divide_beta=*/true,
                 mode == EStarMode::spanning};
    return run_sweep(sp, mode == EStarMode::spanning ? "e_star_spanning" : "e_star_separating");
}

Json EntropyReport::to_json() const {
    Json tg = Json::array();
    for (double t : t_grid) tg.push(t);
    Json rates = Json::array();
    for (const auto& [t, r] : per_t_rates) {
        Json row = Json::array();
        row.push(t).push(r);
        rates.push(std::move(row));
    }
    Json cells_j = Json::array();
    for (const auto& c : cells) {
        Json counts = Json::array(), betas = Json::array(), lognum = Json::array();
        for (long long v : c.counts) counts.push(Json::integer(v));
        for (double v : c.betas) betas.push(v);
        for (double v : c.log_numerator) lognum.push(v);
        Json cj = Json::object();
        cj.set("K", c.k_id)
            .set("delta", c.delta_id)
            .set("counts", std::move(counts))
            .set("betas", std::move(betas))
            .set("log_numerator", std::move(lognum))
            .set("tail_rate", c.tail_rate);
        cells_j.push(std::move(cj));
    }
    Json j = Json::object();
    j.set("mode", mode)
        .set("fixture", fixture_id)
        .set("estimate", estimate)
        .set("aggregation", aggregation)
        .set("K", k_id)
        .set("delta_family", delta_family_id)
        .set("t_grid", std::move(tg))
        .set("dt", dt)
        .set("seed", seed)
        .set("per_t_rates", std::move(rates))
        .set("regression_slope", regression_slope)
        .set("regression_intercept", regression_intercept)
        .set("winning_cell", winning_cell)
        .set("cells", std::move(cells_j));
    return j;
}

std::vector<std::vector<double>> EntropyReport::plot_rows() const {
    std::vector<std::vector<double>> rows;
    for (const auto& [t, r] : per_t_rates) rows.push_back({t, r});
    return rows;
}

Json IdentityVerdict::to_json() const {
    Json j = Json::object();
    j.set("identity", identity)
        .set("pass", pass)
        .set("lhs", lhs)
        .set("rhs", rhs)
        .set("margin", margin)
        .set("tolerance", tolerance)
        .set("note", note);
    return j;
}

IdentityVerdict verify_identity_equal(const std::string& name, const EntropyReport& lhs,
                                      const EntropyReport& rhs, double tol) {
    IdentityVerdict v;
    v.identity = name;
    v.lhs = lhs.estimate;
    v.rhs = rhs.estimate;
    v.margin = std::abs(lhs.estimate - rhs.estimate);
    v.tolerance = tol;
    v.pass = v.margin <= tol;
    return v;
}

IdentityVerdict verify_identity_zero_pair(const std::string& name, const EntropyReport& lhs,
                                          const EntropyReport& rhs, double tol) {
    IdentityVerdict v;
    v.identity = name;
    v.lhs = lhs.estimate;
    v.rhs = rhs.estimate;
    v.margin = std::max({std::abs(lhs.estimate), std::abs(rhs.estimate),
                         std::abs(lhs.estimate - rhs.estimate)});
    v.tolerance = tol;
    v.pass = v.margin <= tol;
    v.note = "both estimates must vanish and agree";
    return v;
}

IdentityVerdict verify_identity_ratio(const std::string& name, const EntropyReport& scaled,
                                      const EntropyReport& base, double lo, double hi) {
    IdentityVerdict v;
    v.identity = name;
    v.lhs = scaled.estimate;
    v.rhs = base.estimate;
    const double ratio = base.estimate != 0 ? scaled.estimate / base.estimate
                                            : std::numeric_limits<double>::infinity();
    v.margin = ratio;
    v.tolerance = hi;
    v.pass = ratio >= lo && ratio <= hi;
    v.note = "margin field holds the ratio; allowed interval [" + fp17(lo) + ", " + fp17(hi) + "]";
    return v;
}

}  // namespace texflow
