#include "chemotaxis/chemo.hpp"
#include "chemotaxis/stationary.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chemotaxis;

namespace {

const ModelParams kFig{1.0, 2.0, 10.0, 1.0, 0.1, 20.0, 10.0, 1};
const ModelParams kUnit{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1};
// Lengths for which the free boundary lies on the face L / 16 (kFig) and L / 2 (kUnit).
constexpr double kFigAligned = 1.00935833856711;
constexpr double kUnitAligned = 0.835911357724936;

// Free-boundary equation multiplied through by cos(sqrt(w) x) cosh(s (x - L)),
// solved by plain bisection; shares nothing with the library solver but the equation.
double oracle_xbar(const ModelParams& p, double L)
{
    const double w = (p.a * p.chi / (2.0 * p.kappa) - p.b) / p.D;
    const double k = std::sqrt(w), s = std::sqrt(p.b / p.D), c = std::sqrt(p.b / (w * p.D));
    auto f = [&](double x) { return c * std::sin(k * x) * std::cosh(s * (x - L)) - std::sinh(s * (x - L)) * std::cos(k * x); };
    double lo = 0.5 * std::numbers::pi / k, hi = std::numbers::pi / k;
    const double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0.0) == (flo > 0.0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson on [0, xbar] of the analytic density.
double simpson_mass(const StationaryProfile& prof, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double s = prof.rho(a) + prof.rho(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * prof.rho(a + i * h);
    return s * h / 3.0;
}

ModelParams random_admissible(std::mt19937& rng, double& L)
{
    std::uniform_real_distribution<double> chi(2.0, 60.0), D(0.05, 2.0), a(0.5, 20.0), b(0.5, 10.0), kappa(0.5, 2.0),
        stretch(1.05, 4.0);
    for (;;) {
        ModelParams p{kappa(rng), 2.0, chi(rng), 1.0, D(rng), a(rng), b(rng), 1};
        const double w = p.omega();
        if (!(w > 1.0)) continue;
        L = stretch(rng) * std::numbers::pi / std::sqrt(w);
        return p;
    }
}

}  // namespace

TEST_CASE("constant states")
{
    const StationaryProfile c = constant_state(1.0, 10.0, kFig);
    CHECK(c.rho(0.3) == 10.0);
    CHECK(c.phi(0.7) == 20.0);
    CHECK(c.orientation() == Orientation::Constant);
    const StationaryProfile d = constant_state(3.0, 4.5, kFig);
    CHECK(d.rho(1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(d.phi(1.0) == doctest::Approx(3.0).epsilon(1e-15));
    const Grid g(3.0, 30);
    CHECK(total_mass(d.sample_rho(g)) == doctest::Approx(4.5).epsilon(1e-14));
}

TEST_CASE("free boundary for the two reference parameter sets")
{
    const double x1 = solve_xbar(kFig, 1.0);
    CHECK(x1 > std::numbers::pi / 60.0);
    CHECK(x1 < std::numbers::pi / 30.0);
    CHECK(std::abs(xbar_residual(kFig, 1.0, x1)) <= 1e-12);
    CHECK(x1 == doctest::Approx(oracle_xbar(kFig, 1.0)).epsilon(1e-12));

    const double x2 = solve_xbar(kUnit, 1.0);
    CHECK(x2 > 0.3206);
    CHECK(x2 < 0.6413);
    CHECK(std::abs(xbar_residual(kUnit, 1.0, x2)) <= 1e-12);
    CHECK(x2 == doctest::Approx(oracle_xbar(kUnit, 1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(solve_xbar(kFig, 0.05), NoHalfBump);
    ModelParams flat = kFig;
    flat.a = 1.0;  // omega < 0
    CHECK_THROWS_AS(solve_xbar(flat, 1.0), NoHalfBump);
    CHECK_THROWS_AS(half_bump(1.0, 1.0, flat, Orientation::LeftAnchored), NoHalfBump);
}

TEST_CASE("free boundary for random admissible parameters")
{
    std::mt19937 rng(2718);
    for (int k = 0; k < 20; ++k) {
        double L = 0.0;
        const ModelParams p = random_admissible(rng, L);
        const double sw = std::sqrt(p.omega());
        const double x = solve_xbar(p, L);
        CAPTURE(p.omega());
        CAPTURE(L);
        CHECK(x > 0.5 * std::numbers::pi / sw);
        CHECK(x < std::numbers::pi / sw);
        CHECK(std::abs(xbar_residual(p, L, x)) <= 1e-12);
        CHECK(x == doctest::Approx(oracle_xbar(p, L)).epsilon(1e-11));
    }
}

TEST_CASE("support length does not depend on the mass")
{
    const StationaryProfile m1 = half_bump(1.0, 1.0, kUnit, Orientation::LeftAnchored);
    const StationaryProfile m3 = half_bump(1.0, 3.0, kUnit, Orientation::LeftAnchored);
    CHECK(m1.xbar() == m3.xbar());
    CHECK(m3.K() == doctest::Approx(3.0 * m1.K()).epsilon(1e-14));
}

TEST_CASE("half bump: constant, continuity and the on-support identity")
{
    std::mt19937 rng(99);
    for (int k = 0; k < 20; ++k) {
        double L = 0.0;
        const ModelParams p = random_admissible(rng, L);
        const double M = 0.5 + k;
        const StationaryProfile prof = half_bump(L, M, p, Orientation::LeftAnchored);
        const double sw = std::sqrt(p.omega());
        const double xb = prof.xbar();
        const double K = p.D / p.b * M * p.omega() * sw / (std::tan(sw * xb) - sw * xb);
        CHECK(prof.K() == doctest::Approx(K).epsilon(1e-12));
        CHECK(prof.K() < 0.0);
        CHECK(std::abs(prof.rho(xb)) <= 1e-12 * prof.rho(0.0));
        const double h = 1e-9 * xb;
        CHECK(prof.phi(xb - h) == doctest::Approx(prof.phi(xb + h)).epsilon(1e-7));
        CHECK(prof.phi(xb) == doctest::Approx(-2.0 * p.kappa * K / p.chi).epsilon(1e-10));
        CHECK(prof.rho(xb + 0.1 * (L - xb)) == 0.0);
        CHECK(prof.rho(L) == 0.0);

        const Grid g(L, 257);
        const CellField rho = prof.sample_rho(g);
        const CellField phi = prof.sample_phi(g);
        const double scale = std::max(1.0, rho.max());
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(rho[i] >= 0.0);
            if (g.center(i) < xb) CHECK(std::abs(rho[i] - p.chi / (2.0 * p.kappa) * phi[i] - K) <= 1e-12 * scale);
        }
        CHECK(simpson_mass(prof, 0.0, xb) == doctest::Approx(M).epsilon(1e-9));
    }
}

TEST_CASE("sampled half-bump mass converges at second order on face-aligned grids")
{
    struct Case {
        ModelParams p;
        double L, M;
        std::size_t n0;
    };
    for (const Case& c : {Case{kFig, kFigAligned, 10.0, 64}, Case{kUnit, kUnitAligned, 1.0, 16}}) {
        const StationaryProfile prof = half_bump(c.L, c.M, c.p, Orientation::LeftAnchored);
        std::vector<double> err;
        for (std::size_t n = c.n0; n <= 16 * c.n0; n *= 2)
            err.push_back(std::abs(total_mass(prof.sample_rho(Grid(c.L, n))) - c.M));
        for (std::size_t k = 0; k + 1 < err.size(); ++k) {
            CAPTURE(k);
            CHECK(err[k] / err[k + 1] >= 3.0);
            CHECK(err[k] / err[k + 1] <= 5.0);
        }
    }
}

TEST_CASE("sampled pair satisfies the concentration equation to second order")
{
    const StationaryProfile prof = half_bump(kFigAligned, 10.0, kFig, Orientation::LeftAnchored);
    std::vector<double> l1, far;
    for (std::size_t n : {800, 1600, 3200, 6400}) {
        const Grid g(kFigAligned, n);
        const CellField r = chemo_residual(prof.sample_phi(g), prof.sample_rho(g), kFig);
        double s = 0.0, m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += std::abs(r[i]) * g.dx();
            // The second difference straddles the density kink in the two cells at the free boundary.
            if (std::abs(g.center(i) - prof.xbar()) > 2.0 * g.dx()) m = std::max(m, std::abs(r[i]));
        }
        l1.push_back(s);
        far.push_back(m);
    }
    for (std::size_t k = 0; k + 1 < l1.size(); ++k) {
        CHECK(l1[k] / l1[k + 1] == doctest::Approx(4.0).epsilon(0.1));
        CHECK(far[k] / far[k + 1] == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("right-anchored and central bumps")
{
    const double L = 1.0;
    const StationaryProfile left = half_bump(L, 10.0, kFig, Orientation::LeftAnchored);
    const StationaryProfile right = half_bump(L, 10.0, kFig, Orientation::RightAnchored);
    for (double x : {0.0, 0.01, 0.05, 0.3, 0.9}) {
        CHECK(right.rho(L - x) == doctest::Approx(left.rho(x)).epsilon(1e-13));
        CHECK(right.phi(L - x) == doctest::Approx(left.phi(x)).epsilon(1e-13));
    }

    const StationaryProfile central = central_bump(L, 10.0, kFig);
    CHECK(central.rho(0.0) == 0.0);
    CHECK(central.rho(L) == 0.0);
    CHECK(central.rho(0.5 * L) > 0.0);
    const Grid g(L, 400);
    const CellField rho = central.sample_rho(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(rho[i] - rho[g.size() - 1 - i]) <= 1e-13 * rho.max());
    CHECK(total_mass(rho) == doctest::Approx(10.0).epsilon(1e-3));
    const double edge = 0.5 * L - central.xbar();
    CHECK(central.rho(edge - 1e-9) == 0.0);
    CHECK(simpson_mass(central, edge, 0.5 * L) + simpson_mass(central, 0.5 * L, L - edge) ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK_THROWS_AS(central_bump(1.5 * std::numbers::pi / 30.0, 1.0, kFig), NoHalfBump);
}

TEST_CASE("only gamma = 2 has closed-form bumps")
{
    ModelParams p = kFig;
    p.gamma = 3.0;
    CHECK_THROWS(half_bump(1.0, 1.0, p, Orientation::LeftAnchored));
}

TEST_CASE("concatenation")
{
    const Grid g(4.0, 400);
    const std::vector<Placement> pieces{{half_bump(1.0, 1.0, kUnit, Orientation::LeftAnchored), 0.0},
                                        {half_bump(1.0, 3.0, kUnit, Orientation::RightAnchored), 3.0}};
    const auto [rho, phi] = concatenate(pieces, g);
    CHECK(total_mass(rho) == doctest::Approx(4.0).epsilon(1e-3));
    for (std::size_t i = 100; i < 300; ++i) {
        CHECK(rho[i] == 0.0);
        CHECK(phi[i] == 0.0);
    }
    CHECK(rho[0] > 0.0);
    CHECK(rho[399] > rho[0]);

    const Grid g1(1.0, 100);
    const StationaryProfile single = half_bump(1.0, 10.0, kFig, Orientation::LeftAnchored);
    const auto [r1, p1] = concatenate({{single, 0.0}}, g1);
    CHECK(max_abs_diff(r1.values(), single.sample_rho(g1).values()) == 0.0);
    CHECK(max_abs_diff(p1.values(), single.sample_phi(g1).values()) == 0.0);

    const auto [rs, ps] = concatenate({{half_bump(0.5, 5.0, kFig, Orientation::RightAnchored), 0.0},
                                       {half_bump(0.5, 5.0, kFig, Orientation::LeftAnchored), 0.5}},
                                      g1);
    for (std::size_t i = 0; i < 100; ++i) CHECK(rs[i] == doctest::Approx(rs[99 - i]).epsilon(1e-12));

    CHECK_THROWS_AS(concatenate({{single, 0.0}, {single, 0.5}}, Grid(2.0, 100)), std::invalid_argument);
    CHECK_THROWS_AS(concatenate({{single, 0.5}}, g1), std::invalid_argument);
}
