#pragma once

#include <optional>
#include <string>
#include <vector>

#include "texflow/flow.hpp"
#include "texflow/sft.hpp"

namespace texflow {

// ---------------------------------------------------------------------------
// Built-in fixtures. Every flow here has a closed-form map; RK4 integration
// exists only as a fallback path for vector-field definitions.
// ---------------------------------------------------------------------------

/// phi_t(w) = e^t w on the punctured plane R^2 \ {0}, Euclidean metric.
FlowSpec radial_plane();

/// Conjugate of radial_plane on the sphere minus both poles, via
/// stereographic projection from the north pole; chordal metric of R^3.
FlowSpec punctured_sphere();

/// phi_t(x) = x + t v on R^2.
FlowSpec translation(const Eigen::Vector2d& v);

/// phi_t(x, y) = (x + t, e^t y), the flow of the field (1, y).
FlowSpec colina();

/// Trivial flow on the lattice Z^2 restricted to [-extent, extent]^2.
/// Uniformly discrete; every point is a singularity.
FlowSpec trivial_discrete(int extent = 10);

/// Trivial flow on {n, n + 1/n : n >= 2} up to `count` values of n.
/// Discrete but not uniformly discrete.
FlowSpec trivial_nonuniform(int count = 500);

/// Negative control: trivial flow on {0} u {1/n : n >= 2}. The singularity
/// at 0 is an accumulation point, so it is not isolated.
FlowSpec trivial_accumulation(int count = 500);

/// Suspension flow over `sft` with constant roof. Points are periodic
/// cylinder representatives (word, phase, height); the metric is
/// max(2^-central_block, |height difference|).
FlowSpec suspension(const SFT& sft, int sample_word_length = 8);

/// phi^(a)_t = phi_{a t}.
FlowSpec time_scaled(FlowSpec base, double a);

// ---------------------------------------------------------------------------
// Catalog (CLI surface)
// ---------------------------------------------------------------------------

struct FixtureInfo {
    std::string name;
    std::string summary;
    std::string params;  // human-readable parameter schema
};

std::vector<FixtureInfo> list_fixtures();

struct FixtureParams {
    // generic knobs; each fixture reads the ones it understands
    std::optional<Eigen::Vector2d> v;
    std::optional<double> a;
    std::optional<SFT> sft;
    std::optional<int> word_length;
    std::optional<int> extent;
    std::optional<std::string> base;  // for time_scaled
};

/// Build a fixture by catalog name ("radial_plane", "suspension:full2",
/// "suspension:golden", "time_scaled", ...). Hyphens and underscores in
/// names are interchangeable.
FlowSpec make_fixture(const std::string& name, const FixtureParams& params = {});

// ---------------------------------------------------------------------------
// Compact sample builders
// ---------------------------------------------------------------------------

/// Seeded sample of an annulus r0 <= |x| <= r1 (plane fixtures), mapped
/// through `chart` when given (e.g. onto the sphere).
CompactSample annulus_sample(double r0, double r1, int count, std::uint64_t seed,
                             const std::function<Point(const Point&)>& chart = nullptr);

/// All admissible cyclic words of length L at the given heights:
/// one representative per depth-L cylinder.
CompactSample cylinder_sample(const SFT& sft, int word_length,
                              const std::vector<double>& heights = {0.0});

/// Largest L whose admissible cyclic-word count stays within max_points.
int max_cylinder_word_length(const SFT& sft, long long max_points);

/// All lattice points of trivial_discrete's domain.
CompactSample lattice_sample(int extent);

/// Count of admissible cyclic words of length L (closed walks in the
/// transition graph), as a double for sizing decisions.
double cyclic_word_count(const SFT& sft, int word_length);

}  // namespace texflow
