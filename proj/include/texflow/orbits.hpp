#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "texflow/entropy.hpp"
#include "texflow/report_io.hpp"
#include "texflow/sft.hpp"

namespace texflow {

using BigInt = boost::multiprecision::cpp_int;

/// Table n -> periodic-orbit data of the suspension flow over an SFT with
/// constant roof r: points of symbolic period n is trace(A^n) (exact),
/// least-period orbit counts come from Moebius inversion, and a symbolic
/// least period n gives flow period n*r.
struct OrbitCensus {
    struct Row {
        int n = 0;
        BigInt trace;
        BigInt least_orbits;
        double flow_period = 0;
        BigInt v_cumulative;
    };

    double roof = 1.0;
    std::vector<Row> rows;

    /// Number of periodic orbits with flow period <= t.
    BigInt v(double t) const;
    /// Number of periodic orbits with flow period in [lo, hi] (inclusive).
    BigInt count_in(double lo, double hi) const;

    Json to_json() const;
    std::string to_csv() const;
};

/// Exact census for n = 1 .. floor(t_max / roof). Big-integer arithmetic,
/// overflow impossible.
OrbitCensus orbit_census(const SFT& sft, double t_max);

/// Orbits with period in [t_star - rho, t_star + rho].
BigInt census_window(const OrbitCensus& census, double t_star, double rho);

struct GrowthSeries {
    double rate_at_tmax = 0;                         // (1/t_max) log v(t_max)
    std::vector<std::pair<double, double>> series;   // (t, (1/t) log v(t)) where v > 0
};

/// Requires at least 3 rows with v > 0; throws "no orbits" when v(t_max) = 0.
GrowthSeries growth_rate(const OrbitCensus& census);

struct GrowthBoundVerdict {
    bool pass = false;
    double growth = 0;
    double entropy_estimate = 0;
    double slack = 0;

    Json to_json() const;
};

/// Growth-bound check: growth rate of v against an entropy estimate
/// computed on the same suspension fixture, up to `slack`.
GrowthBoundVerdict check_growth_bound(const OrbitCensus& census, const EntropyReport& entropy,
                                      double slack);

/// Moebius mu for inversion of the trace identities.
int moebius(int n);

}  // namespace texflow
