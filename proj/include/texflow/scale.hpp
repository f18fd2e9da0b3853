#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "texflow/metric.hpp"
#include "texflow/point.hpp"

namespace texflow {

/// A scale function on a fixture space: strictly positive continuous
/// (C+) or vanishing exactly on the singular set (C_phi).
struct ScaleFn {
    enum class Kind { positive_continuous, vanishing_on_singularities };

    Kind kind = Kind::positive_continuous;
    std::string id;
    std::function<double(const Point&)> eval;
    bool is_constant = false;
    double constant_value = 0.0;

    double operator()(const Point& x) const { return eval(x); }

    static ScaleFn constant(double c, std::string name = "");
};

/// Nodes with values of a semicontinuous function, parameterized along a
/// 1-D grid (params strictly increasing). Off-node values are read by
/// piecewise-linear interpolation in the parameter.
struct SemicontinuousSample {
    enum class Sense { lower, upper };

    Sense sense = Sense::lower;
    std::vector<Point> nodes;
    std::vector<double> params;
    std::vector<double> values;

    double interpolate(double t) const;
};

/// Grid-interpolated scale function produced by dowker_interpolate.
struct GridScaleFn {
    std::vector<Point> nodes;
    std::vector<double> params;
    std::vector<double> values;

    double interpolate(double t) const;
    ScaleFn as_scale_fn(std::string id) const;  // nearest-node evaluation on Points

    void save_csv(const std::string& path) const;
    static GridScaleFn load_csv(const std::string& path);
};

/// True iff gamma(x) < rho(x) on every sample (strict).
bool check_strict_order(const ScaleFn& gamma, const ScaleFn& rho, std::span<const Point> samples);

struct LLViolation {
    Point x, y;
    double dist, gamma_x, rho_y;
};

/// Sampled evidence for gamma << rho: for every pair with d(x,y) < gamma(x),
/// gamma(x) < rho(y) must hold. Returns the violations found (possibly none).
std::vector<LLViolation> check_ll(const ScaleFn& gamma, const ScaleFn& rho,
                                  const MetricSpace& space,
                                  std::span<const std::pair<Point, Point>> pairs);

/// Constructive refinement gamma(x) = (1/2) inf { rho(y) : d(x,y) <= rho(x)/2 },
/// infimum over the given sample cloud plus x itself. By construction,
/// d(x,y) <= gamma(x) with y in the cloud implies gamma(x) <= rho(y)/2 < rho(y).
ScaleFn refine_scale(const ScaleFn& rho, const MetricSpace& space, std::span<const Point> cloud);

/// Pointwise scaling c * rho.
ScaleFn scale_by(const ScaleFn& rho, double c);

/// Continuous function strictly between an upper-semicontinuous gamma and a
/// lower-semicontinuous beta with gamma < beta at every node: the node
/// midpoint, extended piecewise-linearly. Throws on any order violation.
GridScaleFn dowker_interpolate(const SemicontinuousSample& beta_lower,
                               const SemicontinuousSample& gamma_upper);

}  // namespace texflow
