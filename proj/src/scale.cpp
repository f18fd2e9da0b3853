#include "texflow/scale.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "texflow/common.hpp"

namespace texflow {

ScaleFn ScaleFn::constant(double c, std::string name) {
    if (!(c > 0)) throw InvalidArgument("ScaleFn::constant: value must be positive");
    ScaleFn s;
    s.kind = Kind::positive_continuous;
    s.id = name.empty() ? "const_" + fp17(c) : std::move(name);
    s.eval = [c](const Point&) { return c; };
    s.is_constant = true;
    s.constant_value = c;
    return s;
}

namespace {
double interp(const std::vector<double>& params, const std::vector<double>& values, double t) {
    if (params.empty()) throw InvalidArgument("interpolate: empty grid");
    if (t <= params.front()) return values.front();
    if (t >= params.back()) return values.back();
    auto it = std::upper_bound(params.begin(), params.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - params.begin());
    const double t0 = params[i - 1], t1 = params[i];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * values[i - 1] + w * values[i];
}
}  // namespace

double SemicontinuousSample::interpolate(double t) const { return interp(params, values, t); }
double GridScaleFn::interpolate(double t) const { return interp(params, values, t); }

ScaleFn GridScaleFn::as_scale_fn(std::string id) const {
    ScaleFn s;
    s.kind = ScaleFn::Kind::positive_continuous;
    s.id = std::move(id);
    auto nodes_c = nodes;
    auto values_c = values;
    s.eval = [nodes_c, values_c](const Point& x) {
        // nearest node in the space the nodes live in (vector fixtures)
        double best = std::numeric_limits<double>::infinity();
        double val = values_c.front();
        for (std::size_t i = 0; i < nodes_c.size(); ++i) {
            const double d = (nodes_c[i].vec() - x.vec()).norm();
            if (d < best) { best = d; val = values_c[i]; }
        }
        return val;
    };
    return s;
}

void GridScaleFn::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("GridScaleFn::save_csv: cannot open " + path);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const VecPoint& p = nodes[i].vec();
        for (Eigen::Index j = 0; j < p.size(); ++j) out << fp17(p[j]) << ",";
        out << fp17(values[i]) << "\n";
    }
}

GridScaleFn GridScaleFn::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("GridScaleFn::load_csv: cannot open " + path);
    GridScaleFn g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                cols.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: " + cell);
            }
        }
        if (cols.size() < 2)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": need coordinates and a value");
        VecPoint p(static_cast<Eigen::Index>(cols.size() - 1));
        for (std::size_t j = 0; j + 1 < cols.size(); ++j) p[static_cast<Eigen::Index>(j)] = cols[j];
        g.nodes.push_back(Point(std::move(p)));
        g.values.push_back(cols.back());
        g.params.push_back(double(g.params.size()));
    }
    return g;
}

bool check_strict_order(const ScaleFn& gamma, const ScaleFn& rho, std::span<const Point> samples) {
    for (const Point& x : samples)
        if (!(gamma(x) < rho(x))) return false;
    return true;
}

std::vector<LLViolation> check_ll(const ScaleFn& gamma, const ScaleFn& rho,
                                  const MetricSpace& space,
                                  std::span<const std::pair<Point, Point>> pairs) {
    std::vector<LLViolation> out;
    for (const auto& [x, y] : pairs) {
        const double gx = gamma(x);
        const double d = space(x, y);
        if (d < gx && !(gx < rho(y))) out.push_back({x, y, d, gx, rho(y)});
    }
    return out;
}

ScaleFn refine_scale(const ScaleFn& rho, const MetricSpace& space, std::span<const Point> cloud) {
    if (rho.kind != ScaleFn::Kind::positive_continuous)
        throw InvalidArgument("refine_scale: rho must be positive_continuous");
    if (cloud.empty()) throw InvalidArgument("refine_scale: empty sample cloud");
    auto cloud_copy = std::make_shared<std::vector<Point>>(cloud.begin(), cloud.end());
    auto rho_eval = rho.eval;
    auto dist = space.dist;
    ScaleFn out;
    out.kind = ScaleFn::Kind::positive_continuous;
    out.id = "refine(" + rho.id + ")";
    out.eval = [cloud_copy, rho_eval, dist](const Point& x) {
        const double radius = rho_eval(x) / 2.0;
        double inf = rho_eval(x);  // x itself is in the ball
        for (const Point& y : *cloud_copy)
            if (dist(x, y) <= radius) inf = std::min(inf, rho_eval(y));
        return inf / 2.0;
    };
    return out;
}

ScaleFn scale_by(const ScaleFn& rho, double c) {
    if (!(c > 0)) throw InvalidArgument("scale_by: factor must be positive");
    ScaleFn out = rho;
    out.id = fp17(c) + "*" + rho.id;
    auto inner = rho.eval;
    out.eval = [inner, c](const Point& x) { return c * inner(x); };
    if (rho.is_constant) out.constant_value = c * rho.constant_value;
    return out;
}

GridScaleFn dowker_interpolate(const SemicontinuousSample& beta_lower,
                               const SemicontinuousSample& gamma_upper) {
    if (beta_lower.sense != SemicontinuousSample::Sense::lower ||
        gamma_upper.sense != SemicontinuousSample::Sense::upper)
        throw InvalidArgument("dowker_interpolate: expected (lower, upper) samples");
    const std::size_t n = beta_lower.values.size();
    if (n == 0 || gamma_upper.values.size() != n || beta_lower.nodes.size() != n)
        throw InvalidArgument("dowker_interpolate: node sets must match and be nonempty");
    GridScaleFn alpha;
    alpha.nodes = beta_lower.nodes;
    alpha.params = beta_lower.params;
    alpha.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = gamma_upper.values[i], b = beta_lower.values[i];
        if (!(g < b))
            throw InvalidArgument("dowker_interpolate: order violated at node " + std::to_string(i) +
                                  " (gamma=" + fp17(g) + " >= beta=" + fp17(b) + ")");
        alpha.values[i] = 0.5 * (g + b);
    }
    return alpha;
}

}  // namespace texflow
