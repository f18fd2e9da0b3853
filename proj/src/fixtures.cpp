#include "texflow/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace texflow {

namespace {

constexpr double kPunctureGuard = 1e-12;   // chart radius below this is "at the puncture"
constexpr double kPoleGuardInv = 1e12;     // chart radius above this is "at the other pole"

MetricSpace euclidean_space(std::string id, MetricSpace::Discreteness tag = MetricSpace::Discreteness::none,
                            double uniform_radius = 0.0) {
    MetricSpace m;
    m.id = std::move(id);
    m.dist = [](const Point& a, const Point& b) { return (a.vec() - b.vec()).norm(); };
    m.tag = tag;
    m.uniform_radius = uniform_radius;
    return m;
}

Point gaussian_perturb(const Point& x, double scale, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    VecPoint y = x.vec();
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += scale * g(rng);
    return Point(std::move(y));
}

// chart of the punctured sphere: stereographic projection from the north pole
Eigen::Vector2d sphere_to_plane(const Point& p) {
    const VecPoint& s = p.vec();
    if (s.size() != 3) throw InvalidArgument("punctured_sphere: points are 3-vectors");
    const double one_minus_z = 1.0 - s[2];
    if (!(one_minus_z > 8 * std::numeric_limits<double>::epsilon()))
        throw DomainEscape("punctured_sphere: point at the north pole within tolerance");
    Eigen::Vector2d w(s[0] / one_minus_z, s[1] / one_minus_z);
    const double r = w.norm();
    if (r < kPunctureGuard) throw DomainEscape("punctured_sphere: point at the south pole within tolerance");
    if (r > kPoleGuardInv) throw DomainEscape("punctured_sphere: point at the north pole within tolerance");
    return w;
}

Point plane_to_sphere(const Eigen::Vector2d& w) {
    const double r2 = w.squaredNorm();
    VecPoint s(3);
    s[0] = 2.0 * w[0] / (1.0 + r2);
    s[1] = 2.0 * w[1] / (1.0 + r2);
    s[2] = (r2 - 1.0) / (1.0 + r2);
    return Point(std::move(s));
}

std::vector<std::uint8_t> random_cyclic_word(const SFT& sft, int length, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, sft.alphabet - 1);
    for (int attempt = 0; attempt < 4096; ++attempt) {
        std::vector<std::uint8_t> w(static_cast<std::size_t>(length));
        w[0] = static_cast<std::uint8_t>(pick(rng));
        bool ok = true;
        for (int i = 1; i < length; ++i) {
            // choose uniformly among allowed successors
            int allowed[64];
            int na = 0;
            for (int a = 0; a < sft.alphabet; ++a)
                if (sft.adjacency(w[static_cast<std::size_t>(i - 1)], a)) allowed[na++] = a;
            if (na == 0) { ok = false; break; }
            std::uniform_int_distribution<int> pa(0, na - 1);
            w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(allowed[pa(rng)]);
        }
        if (ok && sft.adjacency(w.back(), w.front())) return w;
    }
    throw InvalidArgument("suspension: could not sample an admissible cyclic word");
}

}  // namespace

FlowSpec radial_plane() {
    FlowSpec f;
    f.id = "radial_plane";
    f.space = euclidean_space("punctured_plane");
    f.map = [](const Point& x, double t) {
        const VecPoint& w = x.vec();
        const double r = w.norm();
        if (r < kPunctureGuard) throw DomainEscape("radial_plane: point at the puncture within tolerance");
        if (!(r < kPoleGuardInv)) throw DomainEscape("radial_plane: point escaped to infinity");
        return Point(VecPoint(std::exp(t) * w));
    };
    f.sample_point = [](Rng& rng) {
        std::uniform_real_distribution<double> ulog(std::log(0.2), std::log(5.0));
        std::uniform_real_distribution<double> uang(0.0, 2.0 * std::numbers::pi);
        const double r = std::exp(ulog(rng));
        const double th = uang(rng);
        return Point::of({r * std::cos(th), r * std::sin(th)});
    };
    f.perturb = gaussian_perturb;
    // the unit circle meets every orbit (all orbits are rays from the origin)
    CompactSample w;
    w.region = "unit circle, 64 points";
    for (int i = 0; i < 64; ++i) {
        const double th = 2.0 * std::numbers::pi * i / 64;
        w.points.push_back(Point::of({std::cos(th), std::sin(th)}));
    }
    f.infinity_witness = std::move(w);
    return f;
}

FlowSpec punctured_sphere() {
    FlowSpec f;
    f.id = "punctured_sphere";
    MetricSpace m;
    m.id = "sphere_minus_poles";
    m.dist = [](const Point& a, const Point& b) { return (a.vec() - b.vec()).norm(); };
    f.space = std::move(m);
    f.map = [](const Point& p, double t) {
        const Eigen::Vector2d w = sphere_to_plane(p);
        return plane_to_sphere(std::exp(t) * w);
    };
    f.sample_point = [](Rng& rng) {
        std::uniform_real_distribution<double> ulog(std::log(0.2), std::log(5.0));
        std::uniform_real_distribution<double> uang(0.0, 2.0 * std::numbers::pi);
        const double r = std::exp(ulog(rng));
        const double th = uang(rng);
        return plane_to_sphere(Eigen::Vector2d(r * std::cos(th), r * std::sin(th)));
    };
    f.perturb = [](const Point& p, double scale, Rng& rng) {
        // perturb in the (log r, angle) chart so near pairs share a parallel
        const Eigen::Vector2d w = sphere_to_plane(p);
        std::normal_distribution<double> g(0.0, 1.0);
        const double r = w.norm() * std::exp(0.10 * scale * g(rng));
        const double th = std::atan2(w[1], w[0]) + 0.35 * scale * g(rng);
        return plane_to_sphere(Eigen::Vector2d(r * std::cos(th), r * std::sin(th)));
    };
    CompactSample w;
    w.region = "equator, 64 points";
    for (int i = 0; i < 64; ++i) {
        const double th = 2.0 * std::numbers::pi * i / 64;
        w.points.push_back(plane_to_sphere(Eigen::Vector2d(std::cos(th), std::sin(th))));
    }
    f.infinity_witness = std::move(w);
    return f;
}

FlowSpec translation(const Eigen::Vector2d& v) {
    if (v.norm() == 0) throw InvalidArgument("translation: v must be nonzero");
    FlowSpec f;
    f.id = "translation";
    f.space = euclidean_space("plane");
    const Eigen::Vector2d vv = v;
    f.map = [vv](const Point& x, double t) { return Point(VecPoint(x.vec() + t * VecPoint(vv))); };
    f.sample_point = [](Rng& rng) {
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const double a = u(rng), b = u(rng);
        return Point::of({a, b});
    };
    f.perturb = gaussian_perturb;
    return f;
}

FlowSpec colina() {
    FlowSpec f;
    f.id = "colina";
    f.space = euclidean_space("plane");
    f.map = [](const Point& p, double t) {
        const VecPoint& x = p.vec();
        return Point::of({x[0] + t, std::exp(t) * x[1]});
    };
    f.sample_point = [](Rng& rng) {
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const double a = u(rng), b = u(rng);
        return Point::of({a, b});
    };
    f.perturb = gaussian_perturb;
    return f;
}

FlowSpec trivial_discrete(int extent) {
    FlowSpec f;
    f.id = "trivial_discrete";
    f.space = euclidean_space("lattice_Z2", MetricSpace::Discreteness::uniformly_discrete, 0.5);
    f.map = [](const Point& x, double) { return x; };
    for (int i = -extent; i <= extent; ++i)
        for (int j = -extent; j <= extent; ++j)
            f.singularities.push_back(Point::of({double(i), double(j)}));
    f.isolation_radius = 0.5;
    const int e = extent;
    f.sample_point = [e](Rng& rng) {
        std::uniform_int_distribution<int> u(-e, e);
        const double a = u(rng), b = u(rng);
        return Point::of({a, b});
    };
    f.perturb = [e](const Point& x, double, Rng& rng) {
        std::uniform_int_distribution<int> u(-1, 1);
        int di = 0, dj = 0;
        while (di == 0 && dj == 0) { di = u(rng); dj = u(rng); }
        const VecPoint& p = x.vec();
        const double a = std::clamp(p[0] + di, double(-e), double(e));
        const double b = std::clamp(p[1] + dj, double(-e), double(e));
        return Point::of({a, b});
    };
    return f;
}

namespace {
FlowSpec trivial_line_fixture(std::string id, std::vector<double> xs, double isolation_radius) {
    FlowSpec f;
    f.id = std::move(id);
    MetricSpace m;
    m.id = f.id + "_space";
    m.dist = [](const Point& a, const Point& b) { return std::abs(a.vec()[0] - b.vec()[0]); };
    m.tag = MetricSpace::Discreteness::discrete;
    f.space = std::move(m);
    f.map = [](const Point& x, double) { return x; };
    for (double x : xs) f.singularities.push_back(Point::of({x}));
    f.isolation_radius = isolation_radius;
    auto pts = std::make_shared<std::vector<double>>(std::move(xs));
    f.sample_point = [pts](Rng& rng) {
        std::uniform_int_distribution<std::size_t> u(0, pts->size() - 1);
        return Point::of({(*pts)[u(rng)]});
    };
    f.perturb = [pts](const Point& x, double, Rng& rng) {
        // nearest-neighbour hop in the sorted point list
        const double v = x.vec()[0];
        auto it = std::lower_bound(pts->begin(), pts->end(), v);
        std::size_t i = static_cast<std::size_t>(it - pts->begin());
        std::uniform_int_distribution<int> u(0, 1);
        if (i == 0) ++i;
        else if (i + 1 >= pts->size()) --i;
        else i += u(rng) ? 1 : -1;
        return Point::of({(*pts)[i]});
    };
    return f;
}
}  // namespace

FlowSpec trivial_nonuniform(int count) {
    std::vector<double> xs;
    for (int n = 2; n < 2 + count; ++n) {
        xs.push_back(double(n));
        xs.push_back(double(n) + 1.0 / double(n));
    }
    std::sort(xs.begin(), xs.end());
    // smallest pairwise gap on the sample is 1/(count+1); stay below half of it
    const double iso = 0.4 / double(count + 1);
    return trivial_line_fixture("trivial_nonuniform", std::move(xs), iso);
}

FlowSpec trivial_accumulation(int count) {
    std::vector<double> xs{0.0};
    for (int n = 2; n < 2 + count; ++n) xs.push_back(1.0 / double(n));
    std::sort(xs.begin(), xs.end());
    // declared radius is deliberately honest: B(0, 0.01) contains 1/n for
    // n > 100, so the isolation check must fail at the accumulation point
    return trivial_line_fixture("trivial_accumulation", std::move(xs), 0.01);
}

FlowSpec suspension(const SFT& sft, int sample_word_length) {
    sft.validate();
    FlowSpec f;
    f.id = "suspension";
    MetricSpace m;
    m.id = "suspension_space";
    m.dist = [](const Point& a, const Point& b) { return suspension_distance(a.sym(), b.sym()); };
    m.suspension_native = true;
    f.space = std::move(m);
    const double roof = sft.roof;
    f.map = [roof](const Point& p, double t) {
        SymbolicPoint s = p.sym();
        const double total = s.height + t;
        double shifts = std::floor(total / roof);
        double h = total - shifts * roof;
        if (h >= roof) { h -= roof; shifts += 1; }  // fp edge
        if (h < 0) { h += roof; shifts -= 1; }
        const long long L = s.block_length();
        const long long ph = (static_cast<long long>(s.phase) + static_cast<long long>(shifts)) % L;
        s.phase = static_cast<int>(ph < 0 ? ph + L : ph);
        s.height = h;
        return Point(std::move(s));
    };
    const SFT sft_copy = sft;
    const int L = sample_word_length;
    f.sample_point = [sft_copy, L, roof](Rng& rng) {
        SymbolicPoint s;
        s.word = random_cyclic_word(sft_copy, L, rng);
        std::uniform_real_distribution<double> uh(0.0, roof);
        s.height = std::min(uh(rng), std::nextafter(roof, 0.0));
        return Point(std::move(s));
    };
    f.perturb = [sft_copy](const Point& p, double, Rng& rng) {
        SymbolicPoint s = p.sym();
        const int len = s.block_length();
        std::uniform_int_distribution<int> upos(0, len - 1);
        std::uniform_int_distribution<int> usym(0, sft_copy.alphabet - 1);
        for (int attempt = 0; attempt < 256; ++attempt) {
            SymbolicPoint q = s;
            const int i = upos(rng);
            q.word[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(usym(rng));
            bool ok = true;
            for (int j = 0; j < len; ++j)
                if (!sft_copy.adjacency(q.word[static_cast<std::size_t>(j)],
                                        q.word[static_cast<std::size_t>((j + 1) % len)])) { ok = false; break; }
            if (ok && q.word != s.word) return Point(std::move(q));
        }
        return p;
    };
    // the whole suspension space is compact; a cylinder sample stands in for it
    CompactSample w = cylinder_sample(sft, std::min(sample_word_length, 8));
    w.region = "whole suspension space (cylinder representatives)";
    f.infinity_witness = std::move(w);
    return f;
}

FlowSpec time_scaled(FlowSpec base, double a) {
    if (!(a > 0)) throw InvalidArgument("time_scaled: a must be positive");
    FlowSpec f = base;
    f.id = base.id + "_x" + fp17(a);
    auto inner = base.map;
    f.map = [inner, a](const Point& x, double t) { return inner(x, a * t); };
    return f;
}

std::vector<FixtureInfo> list_fixtures() {
    return {
        {"radial_plane", "phi_t(w) = e^t w on R^2 minus the origin", "none"},
        {"punctured_sphere", "radial flow conjugated onto S^2 minus the poles", "none"},
        {"translation", "phi_t(x) = x + t v on R^2", "v: 2-vector (default 1,0)"},
        {"colina", "phi_t(x,y) = (x+t, e^t y), flow of the field (1, y)", "none"},
        {"trivial_discrete", "trivial flow on the lattice Z^2 (uniformly discrete)", "extent: int (default 10)"},
        {"trivial_nonuniform", "trivial flow on {n, n+1/n : n >= 2} (discrete, not uniformly)", "count: int (default 500)"},
        {"trivial_accumulation", "negative control: trivial flow on {0} u {1/n}", "count: int (default 500)"},
        {"suspension", "suspension flow over a subshift of finite type, constant roof",
         "alphabet: int, adjacency: 0/1 matrix, roof: seconds (default 1), word_length: int; aliases full2, golden"},
        {"time_scaled", "phi^(a)_t = phi_{a t} of a base fixture", "base: fixture name, a: positive real"},
    };
}

namespace {
std::string normalize(std::string s) {
    for (char& c : s) if (c == '-') c = '_';
    return s;
}
}  // namespace

FlowSpec make_fixture(const std::string& raw_name, const FixtureParams& params) {
    std::string name = normalize(raw_name);
    std::string variant;
    if (auto pos = name.find(':'); pos != std::string::npos) {
        variant = name.substr(pos + 1);
        name = name.substr(0, pos);
    }
    if (name == "radial_plane") return radial_plane();
    if (name == "punctured_sphere") return punctured_sphere();
    if (name == "translation") return translation(params.v.value_or(Eigen::Vector2d(1.0, 0.0)));
    if (name == "colina") return colina();
    if (name == "trivial_discrete") return trivial_discrete(params.extent.value_or(10));
    if (name == "trivial_nonuniform") return trivial_nonuniform(params.extent.value_or(500));
    if (name == "trivial_accumulation") return trivial_accumulation(params.extent.value_or(500));
    if (name == "suspension") {
        SFT sft;
        if (params.sft) sft = *params.sft;
        else if (variant == "full2" || variant.empty()) sft = SFT::full_shift(2);
        else if (variant == "golden") sft = SFT::golden_mean();
        else throw ConfigError("unknown suspension variant: " + variant);
        return suspension(sft, params.word_length.value_or(8));
    }
    if (name == "time_scaled") {
        if (!params.base) throw ConfigError("time_scaled: missing base fixture name");
        FixtureParams inner = params;
        inner.base.reset();
        inner.a.reset();
        return time_scaled(make_fixture(*params.base, inner), params.a.value_or(2.0));
    }
    throw ConfigError("unknown fixture: " + raw_name);
}

CompactSample annulus_sample(double r0, double r1, int count, std::uint64_t seed,
                             const std::function<Point(const Point&)>& chart) {
    if (!(0 < r0 && r0 < r1)) throw InvalidArgument("annulus_sample: need 0 < r0 < r1");
    CompactSample k;
    k.region = "annulus [" + fp17(r0) + ", " + fp17(r1) + "], n=" + std::to_string(count);
    k.seed = seed;
    Rng rng = make_rng(seed, 11);
    std::uniform_real_distribution<double> ur(r0 * r0, r1 * r1);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < count; ++i) {
        const double r = std::sqrt(ur(rng));
        const double th = ua(rng);
        Point p = Point::of({r * std::cos(th), r * std::sin(th)});
        k.points.push_back(chart ? chart(p) : p);
    }
    return k;
}

namespace {
void enumerate_cyclic(const SFT& sft, int length, std::vector<std::uint8_t>& w, int depth,
                      std::vector<std::vector<std::uint8_t>>& out) {
    if (depth == length) {
        if (sft.adjacency(w[static_cast<std::size_t>(length - 1)], w[0])) out.push_back(w);
        return;
    }
    for (int a = 0; a < sft.alphabet; ++a) {
        if (depth > 0 && !sft.adjacency(w[static_cast<std::size_t>(depth - 1)], a)) continue;
        w[static_cast<std::size_t>(depth)] = static_cast<std::uint8_t>(a);
        enumerate_cyclic(sft, length, w, depth + 1, out);
    }
}
}  // namespace

CompactSample cylinder_sample(const SFT& sft, int word_length, const std::vector<double>& heights) {
    sft.validate();
    if (word_length < 1) throw InvalidArgument("cylinder_sample: word_length must be >= 1");
    std::vector<std::vector<std::uint8_t>> words;
    std::vector<std::uint8_t> w(static_cast<std::size_t>(word_length));
    enumerate_cyclic(sft, word_length, w, 0, words);
    CompactSample k;
    k.region = "depth-" + std::to_string(word_length) + " cylinder representatives";
    for (const auto& word : words)
        for (double h : heights) {
            SymbolicPoint s;
            s.word = word;
            s.height = h;
            k.points.push_back(Point(std::move(s)));
        }
    return k;
}

double cyclic_word_count(const SFT& sft, int word_length) {
    Eigen::MatrixXd a = sft.adjacency.cast<double>();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(sft.alphabet, sft.alphabet);
    for (int i = 0; i < word_length; ++i) p = p * a;
    return p.trace();
}

int max_cylinder_word_length(const SFT& sft, long long max_points) {
    int best = 1;
    for (int L = 1; L <= 64; ++L) {
        if (cyclic_word_count(sft, L) <= double(max_points)) best = L;
        else break;
    }
    return best;
}

CompactSample lattice_sample(int extent) {
    CompactSample k;
    k.region = "lattice [-" + std::to_string(extent) + ", " + std::to_string(extent) + "]^2";
    for (int i = -extent; i <= extent; ++i)
        for (int j = -extent; j <= extent; ++j)
            k.points.push_back(Point::of({double(i), double(j)}));
    return k;
}

}  // namespace texflow
