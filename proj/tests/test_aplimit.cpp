#include "chemotaxis/aplimit.hpp"
#include "chemotaxis/chemo.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chemotaxis;

namespace {

const ModelParams kProbe{1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1};

ApProbeResult probe(std::size_t cells, ReconstructionKind kind, const std::vector<double>& eps,
                    const ModelParams& p = kProbe)
{
    const ApProfile prof = sinusoidal_probe_profile(Grid(1.0, cells), p);
    return ap_flux_probe(prof.r, prof.v, prof.phi, p, eps, kind);
}

RescaledState smooth_state(double eps, std::size_t cells)
{
    const Grid g(1.0, cells);
    const double k = 2.0 * std::numbers::pi;
    return RescaledState(eps, CellField::sample(g, [k](double x) { return 1.5 + 0.5 * std::cos(k * x); }),
                         CellField::sample(g, [k](double x) { return 0.3 * std::sin(k * x); }),
                         CellField::sample(g, [k](double x) { return 0.2 * std::cos(k * x); }));
}

}  // namespace

TEST_CASE("physical and rescaled variables are inverse maps")
{
    const RescaledState rs = smooth_state(0.05, 64);
    const HydroState h = rs.physical();
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(h.mom[i] == doctest::Approx(h.rho[i] * 0.05 * rs.v[i]).epsilon(1e-15));
    const RescaledState back = RescaledState::from_physical(0.05, h, rs.phi, 2.0);
    CHECK(back.tau == doctest::Approx(0.1));
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(back.v[i] == doctest::Approx(rs.v[i]).epsilon(1e-14));
    CHECK_THROWS_AS(RescaledState(0.0, rs.rho, rs.v, rs.phi), std::invalid_argument);
    CHECK_THROWS_AS(RescaledState(-1.0, rs.rho, rs.v, rs.phi), std::invalid_argument);
    CHECK_THROWS_AS(RescaledState(1.0, rs.rho, CellField(Grid(1.0, 10)), rs.phi), std::invalid_argument);
    CHECK(damped_params(kProbe, 0.25).alpha == 4.0);
}

TEST_CASE("unit epsilon is one physical step with unit damping")
{
    const RescaledState rs = smooth_state(1.0, 80);
    SchemeConfig scheme;
    const double dt = 0.5 * rescaled_cfl_dt(rs, kProbe, scheme);
    const RescaledState next = rescaled_step(rs, kProbe, dt, scheme, Execution::Serial);
    const HydroState h = hyperbolic_step(rs.physical(), rs.phi, kProbe, dt, scheme, Execution::Serial);
    const CellField phi = chemo_update(rs.phi, rs.rho, kProbe, dt);
    CHECK(next.tau == doctest::Approx(dt));
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(next.rho[i] == h.rho[i]);
        CHECK(next.phi[i] == phi[i]);
        CHECK(next.physical().mom[i] == doctest::Approx(h.mom[i]).epsilon(1e-14));
    }
}

TEST_CASE("rescaled step scales the physical interval by one over epsilon")
{
    const double eps = 0.02;
    const RescaledState rs = smooth_state(eps, 60);
    SchemeConfig scheme;
    const double dt_tau = 0.5 * rescaled_cfl_dt(rs, kProbe, scheme);
    const RescaledState next = rescaled_step(rs, kProbe, dt_tau, scheme, Execution::Serial);
    const HydroState h = hyperbolic_step(rs.physical(), rs.phi, damped_params(kProbe, eps), dt_tau / eps, scheme,
                                         Execution::Serial);
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(next.rho[i] == h.rho[i]);
    CHECK_THROWS_AS(rescaled_step(rs, kProbe, 0.0, scheme), std::invalid_argument);
}

TEST_CASE("constant equilibrium is a fixed point for small epsilon")
{
    for (double eps : {1.0, 1e-2, 1e-4}) {
        const Grid g(1.0, 50);
        RescaledState rs(eps, CellField(g, 1.3), CellField(g, 0.0), CellField(g, kProbe.a * 1.3 / kProbe.b));
        SchemeConfig scheme;
        for (int step = 0; step < 50; ++step) rs = rescaled_step(rs, kProbe, rescaled_cfl_dt(rs, kProbe, scheme), scheme);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(rs.rho[i] == doctest::Approx(1.3).epsilon(1e-14));
            CHECK(std::abs(rs.v[i]) < 1e-12);
        }
    }
}

TEST_CASE("rescaled steps conserve mass and positivity")
{
    for (double eps : {1e-1, 1e-3}) {
        RescaledState rs = smooth_state(eps, 100);
        const double m0 = total_mass(rs.rho);
        SchemeConfig scheme;
        for (int step = 0; step < 200; ++step) {
            rs = rescaled_step(rs, kProbe, rescaled_cfl_dt(rs, kProbe, scheme), scheme);
            REQUIRE(rs.rho.min() > 0.0);
        }
        CHECK(total_mass(rs.rho) == doctest::Approx(m0).epsilon(1e-12));
    }
}

TEST_CASE("limit fluxes match direct formulas")
{
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(0.2, 3.0);
    for (double gamma : {2.0, 3.0}) {
        const ModelParams p{1.7, gamma, 2.5, 1.0, 1.0, 1.0, 1.0, 1};
        const Grid g(2.0, 40);
        CellField r(g), phi(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            r[i] = dist(gen);
            phi[i] = dist(gen);
        }
        const auto G = conservative_limit_flux(r, phi, p);
        const auto H = nonconservative_limit_flux(r, phi, p);
        REQUIRE(G.size() == 41);
        CHECK(G.front() == 0.0);
        CHECK(G.back() == 0.0);
        CHECK(H.front() == 0.0);
        CHECK(H.back() == 0.0);
        const double dx = g.dx();
        for (std::size_t k = 1; k < g.size(); ++k) {
            const double pl = 1.7 * std::pow(r[k - 1], gamma), pr = 1.7 * std::pow(r[k], gamma);
            const double sl = 1.7 * gamma / (gamma - 1.0) * std::pow(r[k - 1], gamma - 1.0);
            const double sr = 1.7 * gamma / (gamma - 1.0) * std::pow(r[k], gamma - 1.0);
            const double g_ref = -(pr - pl - 2.5 * 0.5 * (r[k - 1] + r[k]) * (phi[k] - phi[k - 1])) / dx;
            const double h_ref = -r[k - 1] * (sr - sl - 2.5 * (phi[k] - phi[k - 1])) / dx;
            CHECK(G[k] == doctest::Approx(g_ref).epsilon(1e-12));
            CHECK(H[k] == doctest::Approx(h_ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("Darcy velocity balances the conservative flux on the probe profile")
{
    const ApProfile prof = sinusoidal_probe_profile(Grid(1.0, 1000), kProbe);
    const auto G = conservative_limit_flux(prof.r, prof.phi, kProbe);
    std::size_t balanced = 0;
    for (std::size_t k = 1; k < 1000; ++k) {
        const double lhs = prof.r[k - 1] * std::max(prof.v[k - 1], 0.0) + prof.r[k] * std::min(prof.v[k], 0.0);
        if (std::abs(lhs - G[k]) <= 1e-12 * (1.0 + std::abs(G[k]))) ++balanced;
    }
    CHECK(balanced >= 990);

    const Grid g(1.0, 30);
    const CellField flat(g, 2.0);
    const CellField phi(g, 0.7);
    const CellField v = darcy_velocity(flat, phi, kProbe);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(v[i] == 0.0);
}

TEST_CASE("zero velocity equilibrium gives zero limit flux and zero scheme flux")
{
    const Grid g(1.0, 100);
    const double c = 0.4;
    // Psi(r) - chi phi = c with Psi = 2 r for gamma = 2, kappa = 1.
    const CellField phi = CellField::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x); });
    CellField r(g);
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = 0.5 * (c + kProbe.chi * phi[i]);
    const auto H = nonconservative_limit_flux(r, phi, kProbe);
    for (double h : H) CHECK(std::abs(h) < 1e-12);
    const ApProbeResult res = ap_flux_probe(r, CellField(g), phi, kProbe, {1e-2, 1e-4}, ReconstructionKind::E);
    CHECK(res.interfaces_used == 99);
    for (const ApProbeRow& row : res.rows) CHECK(row.error_nonconservative < 1e-13);
}

TEST_CASE("pressure reconstruction flux recovers eps G at first order in eps dx")
{
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    const ApProbeResult coarse = probe(1000, ReconstructionKind::P, eps);
    const ApProbeResult fine = probe(2000, ReconstructionKind::P, eps);
    CHECK(coarse.strongly_consistent);
    CHECK(coarse.interfaces_used >= 990);
    CHECK(coarse.interfaces_excluded <= 9);
    CHECK(coarse.closed_form_gap > 1e-2);
    for (std::size_t j = 0; j + 1 < eps.size(); ++j) {
        const double decade = coarse.rows[j].error_conservative / coarse.rows[j + 1].error_conservative;
        CHECK(decade >= 9.0);
        CHECK(decade <= 11.0);
    }
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const double halving = coarse.rows[j].error_conservative / fine.rows[j].error_conservative;
        CHECK(halving >= 1.8);
        CHECK(halving <= 2.2);
        // the pressure form tracks G, not H: the residual against H is larger by O(gap)
        CHECK(coarse.rows[j].error_conservative < coarse.rows[j].error_nonconservative);
    }
}

TEST_CASE("enthalpy reconstruction stagnates at the closed-form floor")
{
    const std::vector<double> eps{1e-1, 1e-3, 1e-5, 1e-6};
    const ApProbeResult e = probe(1000, ReconstructionKind::E, eps);
    const ApProbeResult p = probe(1000, ReconstructionKind::P, eps);
    const ApProbeResult e_fine = probe(2000, ReconstructionKind::E, eps);
    CHECK(e.strongly_consistent);
    CHECK(e.nonconservative_floor > 0.0);
    for (std::size_t j : {std::size_t{2}, std::size_t{3}}) {
        CHECK(e.rows[j].error_conservative >= 0.5 * e.nonconservative_floor);
        CHECK(e.rows[j].error_conservative <= 2.0 * e.nonconservative_floor);
        CHECK(e.rows[j].error_conservative > 5.0 * p.rows[j].error_conservative);
    }
    CHECK(e.rows[2].error_conservative / e.rows[3].error_conservative < 2.0);
    // at moderate eps both reconstructions agree to leading order
    CHECK(e.rows[0].error_conservative == doctest::Approx(p.rows[0].error_conservative).epsilon(1e-3));
    const double floor_ratio = e.nonconservative_floor / e_fine.nonconservative_floor;
    CHECK(floor_ratio >= 3.8);
    CHECK(floor_ratio <= 4.2);
}

TEST_CASE("probe rejects invalid data")
{
    const Grid g(1.0, 20);
    CHECK_THROWS_AS(ap_flux_probe(CellField(g, 0.0), CellField(g), CellField(g), kProbe, {1e-2}, ReconstructionKind::P),
                    DomainError);
    CHECK_THROWS_AS(ap_flux_probe(CellField(g, 1.0), CellField(Grid(1.0, 10)), CellField(g), kProbe, {1e-2},
                                  ReconstructionKind::P),
                    std::invalid_argument);
}
