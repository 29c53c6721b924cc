#include "chemotaxis/core.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace chemotaxis;

TEST_CASE("grid spacing and centers")
{
    const Grid g(3.0, 300);
    CHECK(g.dx() * 300 == doctest::Approx(3.0).epsilon(1e-15));
    const auto x = g.centers();
    CHECK(x.front() > 0.0);
    CHECK(x.back() < 3.0);
    CHECK(std::is_sorted(x.begin(), x.end()));
    CHECK(std::adjacent_find(x.begin(), x.end()) == x.end());
    CHECK(x[0] == doctest::Approx(0.005));
    CHECK_THROWS_AS(Grid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("field length must match the grid")
{
    const Grid g(1.0, 4);
    CHECK_THROWS_AS(CellField(g, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    const CellField f(g, std::vector<double>{1.0, -2.0, 5.0, 0.0});
    CHECK(f.max() == 5.0);
    CHECK(f.min() == -2.0);
}

TEST_CASE("pressure law values")
{
    const PressureLaw g2(1.0, 2.0);
    const PressureLaw g3(1.0, 3.0);
    CHECK(g2.pressure(0.0) == 0.0);
    CHECK(g2.pressure(3.0) == 9.0);
    CHECK(g3.pressure(2.0) == 8.0);
    CHECK(g2.enthalpy(3.0) == 6.0);
    CHECK(g2.enthalpy(0.0) == 0.0);
    CHECK(g3.enthalpy(0.0) == 0.0);
    CHECK(g2.inverse_pressure(9.0) == 3.0);
    CHECK(g2.dpressure(4.0) == 8.0);
    CHECK(g3.dpressure(2.0) == 12.0);
    CHECK_THROWS_AS(g2.pressure(-1.0), DomainError);
    CHECK_THROWS_AS(g2.enthalpy(-1.0), DomainError);
    CHECK_THROWS_AS(g2.inverse_pressure(-1.0), DomainError);
    CHECK_THROWS_AS(g2.inverse_enthalpy(-1.0), DomainError);
    CHECK_THROWS_AS(PressureLaw(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PressureLaw(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("pressure and enthalpy are monotone and invert for several laws")
{
    for (double gamma : {1.4, 2.0, 2.5, 3.0, 5.0}) {
        for (double kappa : {0.5, 1.0, 3.0}) {
            const PressureLaw law(kappa, gamma);
            double prev_p = -1.0, prev_psi = -1.0;
            for (int k = 0; k <= 1000; ++k) {
                const double rho = 10.0 * k / 1000.0;
                const double p = law.pressure(rho);
                const double psi = law.enthalpy(rho);
                CHECK(p > prev_p);
                CHECK(psi > prev_psi);
                prev_p = p;
                prev_psi = psi;
                if (rho > 0.0) {
                    CHECK(law.inverse_pressure(p) == doctest::Approx(rho).epsilon(1e-12));
                    CHECK(law.inverse_enthalpy(psi) == doctest::Approx(rho).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("enthalpy is internal energy plus P / rho, with e' = P / rho^2")
{
    for (double gamma : {1.5, 2.0, 3.0}) {
        const PressureLaw law(2.0, gamma);
        for (double rho : {0.1, 1.0, 3.7, 9.0}) {
            CHECK(law.enthalpy(rho) ==
                  doctest::Approx(law.internal_energy(rho) + law.pressure(rho) / rho).epsilon(1e-13));
            const double h = 1e-5 * rho;
            const double de = (law.internal_energy(rho + h) - law.internal_energy(rho - h)) / (2.0 * h);
            CHECK(de == doctest::Approx(law.pressure(rho) / (rho * rho)).epsilon(1e-8));
        }
    }
}

TEST_CASE("model parameters")
{
    ModelParams fig{1.0, 2.0, 10.0, 1.0, 0.1, 20.0, 10.0, 1};
    CHECK(fig.omega() == doctest::Approx(900.0).epsilon(1e-14));
    ModelParams unit{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1};
    CHECK(unit.omega() == 24.0);
    ModelParams threshold{1.0, 2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1};
    CHECK(threshold.omega() == 0.0);
    ModelParams bad = unit;
    bad.delta = 2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = unit;
    bad.D = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("total mass")
{
    const Grid g(1.0, 50);
    CHECK(total_mass(CellField(g, 10.0)) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(total_mass(CellField(g, 0.0)) == 0.0);
}

TEST_CASE("total mass does not depend on the order of the cells")
{
    const Grid g(2.0, 64);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<double> v(64);
    for (double& x : v) x = u(rng);
    const double m = total_mass(CellField(g, v));
    for (int k = 0; k < 10; ++k) {
        std::shuffle(v.begin(), v.end(), rng);
        CHECK(total_mass(CellField(g, v)) == doctest::Approx(m).epsilon(1e-14));
    }
}

TEST_CASE("vacuum threshold and momentum clamp")
{
    const std::vector<double> small{0.1, 0.5};
    CHECK(vacuum_threshold(small) == kVacuumFactor);
    const std::vector<double> big{100.0, 2.0};
    CHECK(vacuum_threshold(big) == doctest::Approx(100.0 * kVacuumFactor));

    const Grid g(1.0, 3);
    HydroState s(CellField(g, std::vector<double>{0.0, 1e-15, 2.0}), CellField(g, std::vector<double>{1.0, 1.0, 1.0}));
    s.enforce_vacuum();
    CHECK(s.mom[0] == 0.0);
    CHECK(s.mom[1] == 0.0);
    CHECK(s.mom[2] == 1.0);
    const CellField u = s.velocity();
    CHECK(u[0] == 0.0);
    CHECK(u[2] == 0.5);

    HydroState bad(CellField(g, std::vector<double>{-1.0, 1.0, 1.0}), CellField(g));
    CHECK_THROWS_AS(bad.enforce_vacuum(), DomainError);
}

TEST_CASE("max_abs_diff")
{
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{1.0, 2.5, 3.0};
    CHECK(max_abs_diff(a, a) == 0.0);
    CHECK(max_abs_diff(a, b) == 0.5);
}
