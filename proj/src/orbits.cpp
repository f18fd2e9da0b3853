#include "texflow/orbits.hpp"

#include <cmath>

namespace texflow {

namespace {

// flat big-integer matrix multiply, m <= a few dozen
std::vector<BigInt> mat_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b, int m) {
    std::vector<BigInt> c(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            const BigInt& aik = a[static_cast<std::size_t>(i) * m + k];
            if (aik == 0) continue;
            for (int j = 0; j < m; ++j)
                c[static_cast<std::size_t>(i) * m + j] += aik * b[static_cast<std::size_t>(k) * m + j];
        }
    return c;
}

BigInt trace_of(const std::vector<BigInt>& a, int m) {
    BigInt t = 0;
    for (int i = 0; i < m; ++i) t += a[static_cast<std::size_t>(i) * m + i];
    return t;
}

}  // namespace

int moebius(int n) {
    if (n < 1) throw InvalidArgument("moebius: n must be positive");
    int omega = 0;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            ++omega;
            if (n % p == 0) return 0;
        }
    }
    if (n > 1) ++omega;
    return omega % 2 == 0 ? 1 : -1;
}

OrbitCensus orbit_census(const SFT& sft, double t_max) {
    sft.validate();
    if (!(t_max >= sft.roof))
        throw InvalidArgument("orbit_census: t_max must be at least the roof");
    const int m = sft.alphabet;
    const int n_max = static_cast<int>(std::floor(t_max / sft.roof + 1e-9));

    std::vector<BigInt> a(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(i) * m + j] = sft.adjacency(i, j);

    std::vector<BigInt> traces(static_cast<std::size_t>(n_max) + 1);
    std::vector<BigInt> power = a;
    traces[1] = trace_of(power, m);
    for (int n = 2; n <= n_max; ++n) {
        power = mat_mul(power, a, m);
        traces[static_cast<std::size_t>(n)] = trace_of(power, m);
    }

    OrbitCensus census;
    census.roof = sft.roof;
    BigInt cumulative = 0;
    for (int n = 1; n <= n_max; ++n) {
        // least(n) = (1/n) sum_{d | n} mu(n/d) trace(A^d)
        BigInt acc = 0;
        for (int d = 1; d <= n; ++d) {
            if (n % d) continue;
            const int mu = moebius(n / d);
            if (mu == 1) acc += traces[static_cast<std::size_t>(d)];
            else if (mu == -1) acc -= traces[static_cast<std::size_t>(d)];
        }
        if (acc % n != 0)
            throw InvalidArgument("orbit_census: Moebius inversion produced a non-integer count");
        OrbitCensus::Row row;
        row.n = n;
        row.trace = traces[static_cast<std::size_t>(n)];
        row.least_orbits = acc / n;
        row.flow_period = n * sft.roof;
        cumulative += row.least_orbits;
        row.v_cumulative = cumulative;
        census.rows.push_back(std::move(row));
    }
    return census;
}

BigInt OrbitCensus::v(double t) const {
    BigInt total = 0;
    for (const Row& r : rows)
        if (r.flow_period <= t) total += r.least_orbits;
    return total;
}

BigInt OrbitCensus::count_in(double lo, double hi) const {
    BigInt total = 0;
    for (const Row& r : rows)
        if (r.flow_period >= lo && r.flow_period <= hi) total += r.least_orbits;
    return total;
}

BigInt census_window(const OrbitCensus& census, double t_star, double rho) {
    if (!(t_star >= 0) || !(rho >= 0))
        throw InvalidArgument("census_window: t_star and rho must be nonnegative");
    return census.count_in(t_star - rho, t_star + rho);
}

GrowthSeries growth_rate(const OrbitCensus& census) {
    if (census.rows.empty()) throw InvalidArgument("growth_rate: empty census");
    if (census.rows.back().v_cumulative == 0) throw InvalidArgument("growth_rate: no orbits");
    int positive = 0;
    GrowthSeries g;
    for (const auto& row : census.rows) {
        if (row.v_cumulative == 0) continue;
        ++positive;
        const double t = row.flow_period;
        g.series.emplace_back(t, std::log(row.v_cumulative.convert_to<double>()) / t);
    }
    if (positive < 3)
        throw InvalidArgument("growth_rate: need at least 3 census rows with v > 0");
    g.rate_at_tmax = g.series.back().second;
    return g;
}

GrowthBoundVerdict check_growth_bound(const OrbitCensus& census, const EntropyReport& entropy,
                                      double slack) {
    GrowthBoundVerdict v;
    v.growth = growth_rate(census).rate_at_tmax;
    v.entropy_estimate = entropy.estimate;
    v.slack = slack;
    v.pass = v.growth <= v.entropy_estimate + slack;
    return v;
}

Json OrbitCensus::to_json() const {
    Json rows_j = Json::array();
    for (const Row& r : rows) {
        Json row = Json::object();
        row.set("n", r.n)
            .set("trace", r.trace.str())
            .set("least_period_orbits", r.least_orbits.str())
            .set("flow_period", r.flow_period)
            .set("v_cumulative", r.v_cumulative.str());
        rows_j.push(std::move(row));
    }
    Json j = Json::object();
    j.set("roof", roof).set("rows", std::move(rows_j));
    return j;
}

std::string OrbitCensus::to_csv() const {
    std::string out = "n,trace,least_period_orbits,flow_period,v_cumulative\n";
    for (const Row& r : rows) {
        out += std::to_string(r.n) + "," + r.trace.str() + "," + r.least_orbits.str() + "," +
               fp17(r.flow_period) + "," + r.v_cumulative.str() + "\n";
    }
    return out;
}

Json GrowthBoundVerdict::to_json() const {
    Json j = Json::object();
    j.set("pass", pass)
        .set("growth_rate", growth)
        .set("entropy_estimate", entropy_estimate)
        .set("slack", slack);
    return j;
}

}  // namespace texflow
