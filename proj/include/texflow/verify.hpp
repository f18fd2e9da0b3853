#pragma once

#include <string>
#include <vector>

#include "texflow/entropy.hpp"
#include "texflow/expansivity.hpp"
#include "texflow/orbits.hpp"

namespace texflow {

/// One pass/fail line of a verification suite.
struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    bool pass = true;
    std::vector<CheckLine> checks;

    void add(const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({name, ok, detail});
        pass = pass && ok;
    }
    Json to_json() const;
};

// Desk-scale verification suites. Every tolerance below is pinned here:
//   entropy recovery   : classical estimate in [0.62, 0.77] (full 2-shift,
//                        target log 2) and [0.40, 0.55] (golden mean,
//                        target log golden ratio), t up to 12,
//                        delta grid {2^-2 .. 2^-6}, <= 5e4 sample points
//   sa2 compact        : |e* - classical| <= 0.05 on matched sweeps
//   sa3 time rescale   : e*(a=2)/e* in [1.8, 2.2]
//   sa1 conjugacy      : both conjugate-pair estimates |.| <= 0.05, agree
//                        within 0.05 on h-matched compacts
//   sa4 spanning       : spanning vs separating e* within 0.05
//   thB growth bound   : (1/t) log v(t) <= e* + 0.05 at t_max = 12, census
//                        v(1..4) exact
//   lemma suites       : Dowker midpoints on 1e3 instances; refine_scale
//                        << checks on 1e4 pairs x 3 scales; R <= S and
//                        le1/le2 sandwiches on 1e2 exact instances
//   falsification      : punctured-sphere witnesses at delta {0.1, 0.05,
//                        0.01} within 1e5 iterations, margin > 1e-3,
//                        tails verified; translation zero witnesses over
//                        1e3 screened pairs

SuiteResult verify_sa1(std::uint64_t seed, int jobs, double tol = 0.05);
SuiteResult verify_sa2(const std::string& variant, std::uint64_t seed, int jobs,
                       double tol = 0.05);  // full2|golden
SuiteResult verify_sa3(double a, std::uint64_t seed, int jobs);
SuiteResult verify_sa4(std::uint64_t seed, int jobs, double tol = 0.05);
SuiteResult verify_thB(const std::string& variant, std::uint64_t seed, int jobs,
                       double slack = 0.05);
SuiteResult verify_lemmas(std::uint64_t seed);
SuiteResult verify_entropy_recovery(const std::string& variant, std::uint64_t seed, int jobs);
SuiteResult verify_falsification(std::uint64_t seed, int jobs);

/// The classical/e*/spanning estimator run behind the suites, exposed so
/// commands and tests share one pinned configuration path.
EntropyReport acceptance_estimate(const std::string& variant, const std::string& mode,
                                  std::uint64_t seed, int jobs);

}  // namespace texflow
