#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "stokeslip/diagnostics.hpp"
#include "stokeslip/errors.hpp"
#include "stokeslip/geometry.hpp"
#include "stokeslip/mesh.hpp"

using namespace stokeslip;

namespace {

constexpr double kPi = std::numbers::pi;

// Ellipse x^2/4 + y^2 = 1. The curvature bound is chosen below the true
// maximum (2, at the sharp ends) to widen the tubular neighborhood enough for
// the mid-depth queries exercised here; the Newton projection itself does not
// depend on it.
SmoothDomain make_ellipse() {
  return SmoothDomain::level_set([](Vec2 p) { return p.x * p.x / 4.0 + p.y * p.y - 1.0; },
                                 [](Vec2 p) { return Vec2{p.x / 2.0, 2.0 * p.y}; }, 0.8);
}

// Unit circle expressed as a level set, to cross-check the analytic fast path.
SmoothDomain circle_level_set() {
  return SmoothDomain::level_set([](Vec2 p) { return p.x * p.x + p.y * p.y - 1.0; },
                                 [](Vec2 p) { return Vec2{2.0 * p.x, 2.0 * p.y}; }, 1.0);
}

// Nearest point on the ellipse: dense parametric sampling, then a ternary
// search on the bracketing interval.
ProjectionResult brute_force_ellipse_projection(Vec2 q) {
  auto dist2 = [&](double t) {
    const Vec2 p{2.0 * std::cos(t), std::sin(t)};
    const Vec2 d = q - p;
    return dot(d, d);
  };
  const int n = 200'000;
  double best = 1e300, t_best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    if (dist2(t) < best) {
      best = dist2(t);
      t_best = t;
    }
  }
  double lo = t_best - 2.0 * kPi / n, hi = t_best + 2.0 * kPi / n;
  for (int k = 0; k < 200; ++k) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    (dist2(m1) < dist2(m2) ? hi : lo) = (dist2(m1) < dist2(m2) ? m2 : m1);
  }
  const double t = 0.5 * (lo + hi);
  const Vec2 foot{2.0 * std::cos(t), std::sin(t)};
  const double phi = q.x * q.x / 4.0 + q.y * q.y - 1.0;
  const double dist = norm(q - foot) * (phi < 0.0 ? -1.0 : 1.0);
  return {foot, dist, normalized(Vec2{foot.x / 2.0, 2.0 * foot.y})};
}

double fd_gradient_norm(const SmoothDomain& domain, Vec2 x) {
  // Five-point stencil: truncation O(step^4) keeps the check meaningful at
  // tight tolerances.
  const double s = 1e-5;
  auto d = [&](Vec2 p) { return domain.signed_distance(p); };
  const double gx = (-d({x.x + 2 * s, x.y}) + 8 * d({x.x + s, x.y}) - 8 * d({x.x - s, x.y}) +
                     d({x.x - 2 * s, x.y})) /
                    (12 * s);
  const double gy = (-d({x.x, x.y + 2 * s}) + 8 * d({x.x, x.y + s}) - 8 * d({x.x, x.y - s}) +
                     d({x.x, x.y - 2 * s})) /
                    (12 * s);
  return std::hypot(gx, gy);
}

}  // namespace

TEST_CASE("unit disk signed distance at reference points") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  CHECK(disk.signed_distance({0.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(disk.signed_distance({0.6, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(disk.signed_distance({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("unit disk projection at reference points") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  const ProjectionResult p = disk.project({0.5, 0.0});
  CHECK(p.foot.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.foot.y == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.distance == doctest::Approx(-0.5).epsilon(1e-14));

  const ProjectionResult q = SmoothDomain::unit_disk().project({0.0, -1.5});
  CHECK(q.foot.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(q.foot.y == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(q.distance == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("unit disk outward normal is radial") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  const Vec2 n1 = disk.outward_normal({1.0, 0.0});
  CHECK(n1.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n1.y == doctest::Approx(0.0).epsilon(1e-14));
  const Vec2 n2 = disk.outward_normal({0.6, 0.8});
  CHECK(n2.x == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(n2.y == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(norm(n2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projection error paths") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  CHECK_THROWS_AS(disk.project({0.0, 0.0}), OutsideTubularNeighborhood);
  CHECK_THROWS_AS(disk.project({2.5, 0.0}), OutsideTubularNeighborhood);
  CHECK_THROWS_AS(disk.outward_normal({0.5, 0.0}), NotOnBoundary);
  CHECK_THROWS_AS(SmoothDomain::level_set([](Vec2) { return 0.0; },
                                          [](Vec2) { return Vec2{1.0, 0.0}; }, 0.0),
                  ConfigError);
  // A vanishing supplied gradient leaves the Newton solve without a descent
  // direction.
  const SmoothDomain broken = SmoothDomain::level_set(
      [](Vec2 p) { return p.x * p.x + p.y * p.y - 1.0; }, [](Vec2) { return Vec2{0.0, 0.0}; },
      1.0);
  CHECK_THROWS_AS(broken.project({0.7, 0.0}), NonConvergence);
}

TEST_CASE("ellipse projection matches brute-force nearest point") {
  const SmoothDomain ellipse = make_ellipse();
  const Vec2 q{0.0, 0.5};
  const ProjectionResult got = ellipse.project(q);
  const ProjectionResult want = brute_force_ellipse_projection(q);
  CHECK(std::abs(got.foot.x - want.foot.x) <= 1e-6);
  CHECK(std::abs(got.foot.y - want.foot.y) <= 1e-6);
  CHECK(got.distance == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(want.distance == doctest::Approx(-0.5).epsilon(1e-6));

  // An off-axis query, same oracle.
  const Vec2 q2{1.1, 0.4};
  const ProjectionResult got2 = ellipse.project(q2);
  const ProjectionResult want2 = brute_force_ellipse_projection(q2);
  CHECK(std::abs(got2.foot.x - want2.foot.x) <= 1e-6);
  CHECK(std::abs(got2.foot.y - want2.foot.y) <= 1e-6);
  CHECK(std::abs(got2.distance - want2.distance) <= 1e-6);
}

TEST_CASE("ellipse outward normal at the top") {
  const SmoothDomain ellipse = make_ellipse();
  const Vec2 n = ellipse.outward_normal({0.0, 1.0});
  CHECK(n.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(n.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decomposition identity on random points near the boundary") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> radius(0.56, 1.44);  // |d| < delta/2
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const double r = radius(rng), th = angle(rng);
    const Vec2 x{r * std::cos(th), r * std::sin(th)};
    const ProjectionResult p = disk.project(x);
    const Vec2 back = p.foot + p.distance * p.normal_at_foot;
    CHECK(norm(x - back) <= 1e-9);
    // Idempotence: the foot projects to itself.
    CHECK(norm(disk.project(p.foot).foot - p.foot) <= 1e-9);
  }

  const SmoothDomain ellipse = make_ellipse();
  std::uniform_real_distribution<double> bump(-0.25, 0.25);
  for (int i = 0; i < 300; ++i) {
    const double t = angle(rng);
    const Vec2 on{2.0 * std::cos(t), std::sin(t)};
    const Vec2 n = normalized(Vec2{on.x / 2.0, 2.0 * on.y});
    const Vec2 x = on + bump(rng) * n;
    const ProjectionResult p = ellipse.project(x);
    CHECK(norm(x - (p.foot + p.distance * p.normal_at_foot)) <= 1e-9);
    CHECK(norm(ellipse.project(p.foot).foot - p.foot) <= 1e-9);
  }
}

TEST_CASE("analytic disk path agrees with the level-set Newton path") {
  const SmoothDomain fast = SmoothDomain::unit_disk();
  const SmoothDomain slow = circle_level_set();
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> radius(0.6, 1.4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const double r = radius(rng), th = angle(rng);
    const Vec2 x{r * std::cos(th), r * std::sin(th)};
    CHECK(std::abs(fast.signed_distance(x)) - std::abs(r - 1.0) == doctest::Approx(0.0));
    CHECK(std::abs(fast.signed_distance(x) - slow.signed_distance(x)) <= 1e-10);
    const ProjectionResult a = fast.project(x), b = slow.project(x);
    CHECK(norm(a.foot - b.foot) <= 1e-10);
    CHECK(norm(a.normal_at_foot - b.normal_at_foot) <= 1e-10);
  }
}

TEST_CASE("signed distance has unit gradient in the tubular neighborhood") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int i = 0; i < 50; ++i) {
    const double r = radius(rng), th = angle(rng);
    CHECK(std::abs(fd_gradient_norm(disk, {r * std::cos(th), r * std::sin(th)}) - 1.0) <= 1e-10);
  }
  const SmoothDomain ellipse = make_ellipse();
  for (int i = 0; i < 20; ++i) {
    const double t = angle(rng);
    const Vec2 on{2.0 * std::cos(t), std::sin(t)};
    const Vec2 n = normalized(Vec2{on.x / 2.0, 2.0 * on.y});
    const Vec2 x = on + 0.15 * n;
    CHECK(std::abs(fd_gradient_norm(ellipse, x) - 1.0) <= 1e-5);
  }
}

TEST_CASE("distance sign convention by sampling") {
  const SmoothDomain ellipse = make_ellipse();
  CHECK(ellipse.signed_distance({0.0, 0.55}) < 0.0);   // inside
  CHECK(ellipse.signed_distance({0.0, 1.3}) > 0.0);    // outside
  CHECK(std::abs(ellipse.signed_distance({0.0, 1.0})) <= 1e-10);
}

TEST_CASE("boundary edge Gauss distance decays quadratically") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  Mesh mesh = build_disk_mesh(2);
  std::vector<double> hs, ds;
  for (int l = 0; l < 5; ++l) {
    if (l > 0) mesh = refine(mesh, disk);
    hs.push_back(mesh_stats(mesh).h);
    ds.push_back(boundary_gauss_max_distance(mesh, disk));
  }
  for (size_t i = 0; i + 1 < hs.size(); ++i) {
    const double rate = std::log(ds[i] / ds[i + 1]) / std::log(hs[i] / hs[i + 1]);
    CHECK(rate >= 1.9);
  }
}

TEST_CASE("facet normal defect: first order along edges") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  Mesh mesh = build_disk_mesh(2);
  std::vector<double> hs, edgewise;
  double midpoint_worst = 0.0;
  for (int l = 0; l < 5; ++l) {
    if (l > 0) mesh = refine(mesh, disk);
    const NormalDefect nd = normal_defect(mesh, disk);
    hs.push_back(mesh_stats(mesh).h);
    edgewise.push_back(nd.max_over_edges);
    midpoint_worst = std::max(midpoint_worst, nd.max_at_midpoints);
  }
  for (size_t i = 0; i + 1 < hs.size(); ++i) {
    const double rate = std::log(edgewise[i] / edgewise[i + 1]) / std::log(hs[i] / hs[i + 1]);
    CHECK(rate >= 0.8);
    CHECK(rate <= 1.2);
  }
  // Every chord of a circle is bisected perpendicularly through the center,
  // so the midpoint normal matches the facet normal exactly on disk meshes.
  CHECK(midpoint_worst <= 1e-12);
}

TEST_CASE("facet normal defect: second order at midpoints on the ellipse") {
  const SmoothDomain ellipse = SmoothDomain::level_set(
      [](Vec2 p) { return p.x * p.x / 2.25 + p.y * p.y - 1.0; },
      [](Vec2 p) { return Vec2{2.0 * p.x / 2.25, 2.0 * p.y}; }, 1.5);
  Mesh mesh = scale_mesh(build_disk_mesh(2), 1.5, 1.0);
  std::vector<double> hs, mids;
  for (int l = 0; l < 5; ++l) {
    if (l > 0) mesh = refine(mesh, ellipse);
    const NormalDefect nd = normal_defect(mesh, ellipse);
    hs.push_back(mesh_stats(mesh).h);
    mids.push_back(nd.max_at_midpoints);
  }
  const double first = std::log(mids.front() / mids.back()) / std::log(hs.front() / hs.back());
  CHECK(first >= 1.8);
  CHECK(first <= 2.2);
}

TEST_CASE("chord normal defect closed form on a huge circle") {
  // Radius 1000, chord length 0.1: the angle between chord and arc normals is
  // about h / (2R) = 5e-5 along the whole chord.
  const double R = 1000.0;
  const SmoothDomain big = SmoothDomain::level_set(
      [R](Vec2 p) { return p.x * p.x + p.y * p.y - R * R; },
      [](Vec2 p) { return Vec2{2.0 * p.x, 2.0 * p.y}; }, 1.0 / R);
  const double half = 0.05;
  const double yc = std::sqrt(R * R - half * half);
  // Counterclockwise traversal runs in -x at the top of the circle, keeping
  // the domain on the left of a -> b.
  const Vec2 a{half, yc}, b{-half, yc};
  const Vec2 nh = normalized(right_perp(b - a));
  double worst = 0.0;
  for (const double t : {0.2113248654051871, 0.7886751345948129, 0.5}) {
    const Vec2 x = a + t * (b - a);
    worst = std::max(worst, norm(big.project(x).normal_at_foot - nh));
  }
  CHECK(worst < 1e-3);
  CHECK(worst < 2.0 * half / R * 1.5);
}

TEST_CASE("surface integral defect against closed forms") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  const auto one = [](Vec2) { return 1.0; };
  const auto zero = [](Vec2) { return 0.0; };
  const auto x2 = [](Vec2 p) { return p.x * p.x; };

  Mesh mesh = build_disk_mesh(2);
  std::vector<double> hs, d1, dx2;
  for (int l = 0; l < 5; ++l) {
    if (l > 0) mesh = refine(mesh, disk);
    // These are boundary-facet quantities; the interior diagonals that set
    // the global h shrink at a different pre-asymptotic ratio.
    hs.push_back(mesh_stats(mesh).boundary_edge_max);
    d1.push_back(surface_integral_defect(mesh, disk, one));
    dx2.push_back(surface_integral_defect(mesh, disk, x2));
    CHECK(surface_integral_defect(mesh, disk, zero) == 0.0);

    // f = 1: the facet integral is the perimeter of the inscribed polygon.
    const int sides = static_cast<int>(mesh.boundary_edges.size());
    const double perimeter = 2.0 * sides * std::sin(kPi / sides);
    CHECK(d1.back() == doctest::Approx(2.0 * kPi - perimeter).epsilon(1e-9));
    CHECK(d1.back() > 0.0);
  }
  for (size_t i = 0; i + 1 < hs.size(); ++i) {
    const double r1 = std::log(d1[i] / d1[i + 1]) / std::log(hs[i] / hs[i + 1]);
    const double r2 = std::log(dx2[i] / dx2[i + 1]) / std::log(hs[i] / hs[i + 1]);
    CHECK(r1 >= 1.8);
    CHECK(r1 <= 2.2);
    CHECK(r2 >= 1.8);
    CHECK(r2 <= 2.2);
  }
}

TEST_CASE("projection injectivity on disk meshes") {
  const SmoothDomain disk = SmoothDomain::unit_disk();
  for (int rings = 1; rings <= 3; ++rings) {
    CHECK(projection_injectivity_check(build_disk_mesh(rings), disk));
  }
}

TEST_CASE("projection injectivity rejects a reentrant boundary") {
  // Square inscribed in the circle with one vertex pulled inward past its
  // neighbor's polar angle, so consecutive samples project backwards.
  Mesh mesh;
  mesh.vertices = {Vec2{0.5 * std::cos(2.0 * kPi / 3.0), 0.5 * std::sin(2.0 * kPi / 3.0)},
                   Vec2{0.0, 1.0}, Vec2{-1.0, 0.0}, Vec2{0.0, -1.0}};
  mesh.boundary_edges = {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}};
  mesh.is_boundary_vertex = {1, 1, 1, 1};
  CHECK_FALSE(projection_injectivity_check(mesh, SmoothDomain::unit_disk()));
}
