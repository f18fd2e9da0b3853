#pragma once

#include <functional>
#include <string>

#include "texflow/point.hpp"

namespace texflow {

/// A metric space a fixture lives on. `dist` must be evaluable on any two
/// points of the fixture's domain.
struct MetricSpace {
    enum class Discreteness { none, discrete, uniformly_discrete };

    std::string id;
    std::function<double(const Point&, const Point&)> dist;
    Discreteness tag = Discreteness::none;
    // for uniformly_discrete: B(x, uniform_radius) = {x} on all samples
    double uniform_radius = 0.0;
    // set by the suspension fixtures: dist is exactly suspension_distance,
    // so bulk engines may evaluate it without indirection
    bool suspension_native = false;

    double operator()(const Point& a, const Point& b) const { return dist(a, b); }
};

}  // namespace texflow
