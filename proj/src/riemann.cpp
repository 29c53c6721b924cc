#include "chemotaxis/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemotaxis {

namespace {

constexpr double kDegenerateSpeedGap = 1e-14;

void check_states(FluidState left, FluidState right)
{
    if (left.rho < 0.0 || right.rho < 0.0) throw DomainError("Riemann solver received negative density");
}

/// Two-speed HLL average with c1 <= 0 <= c2 already enforced.
FluxValue hll_combine(FluidState left, FluidState right, double c1, double c2,
                      const PressureLaw& law)
{
    const FluxValue fl = physical_flux(left, law);
    if (c2 - c1 < kDegenerateSpeedGap) return {fl.f_rho, fl.f_mom, std::max(-c1, c2)};
    const FluxValue fr = physical_flux(right, law);
    const double inv = 1.0 / (c2 - c1);
    const double d_rho = right.rho - left.rho;
    const double d_mom = right.rho * right.u - left.rho * left.u;
    return {(c2 * fl.f_rho - c1 * fr.f_rho + c1 * c2 * d_rho) * inv,
            (c2 * fl.f_mom - c1 * fr.f_mom + c1 * c2 * d_mom) * inv, std::max(-c1, c2)};
}

}  // namespace

std::string to_string(FluxType type)
{
    switch (type) {
    case FluxType::HLL: return "hll";
    case FluxType::HLLRoe: return "hll-roe";
    case FluxType::SuliciuVacuum: return "suliciu";
    }
    return "unknown";
}

FluxType flux_type_from_string(const std::string& name)
{
    if (name == "hll") return FluxType::HLL;
    if (name == "hll-roe" || name == "hllroe") return FluxType::HLLRoe;
    if (name == "suliciu") return FluxType::SuliciuVacuum;
    throw std::invalid_argument("unknown flux '" + name + "' (expected hll, hll-roe, suliciu)");
}

FluxValue physical_flux(FluidState s, const PressureLaw& law)
{
    const double m = s.rho * s.u;
    return {m, m * s.u + law.pressure(s.rho), std::abs(s.u) + law.sound_speed(s.rho)};
}

FluxValue hll_flux(FluidState left, FluidState right, const PressureLaw& law)
{
    check_states(left, right);
    const double al = law.sound_speed(left.rho);
    const double ar = law.sound_speed(right.rho);
    const double c1 = std::min({left.u - al, right.u - ar, 0.0});
    const double c2 = std::max({left.u + al, right.u + ar, 0.0});
    return hll_combine(left, right, c1, c2, law);
}

FluxValue hll_roe_flux(FluidState left, FluidState right, const PressureLaw& law)
{
    check_states(left, right);
    const double sl = std::sqrt(left.rho);
    const double sr = std::sqrt(right.rho);
    if (sl + sr == 0.0) return {};
    const double al = law.sound_speed(left.rho);
    const double ar = law.sound_speed(right.rho);
    const double u_roe = (sl * left.u + sr * right.u) / (sl + sr);
    const double c_roe =
        std::sqrt((sr * law.dpressure(right.rho) + sl * law.dpressure(left.rho)) / (sl + sr));
    const double c1 = std::min({left.u - al, u_roe - c_roe, 0.0});
    const double c2 = std::max({u_roe + c_roe, right.u + ar, 0.0});
    return hll_combine(left, right, c1, c2, law);
}

FluxValue suliciu_vacuum_flux(FluidState left, FluidState right, const PressureLaw& law,
                              double alpha_s)
{
    check_states(left, right);
    if (!(alpha_s > 0.0)) throw std::invalid_argument("Suliciu correction factor must be positive");

    const double rl = left.rho, rr = right.rho;
    if (rl == 0.0 && rr == 0.0) return {};

    const double ul = rl > 0.0 ? left.u : 0.0;
    const double ur = rr > 0.0 ? right.u : 0.0;
    const double pl = law.pressure(rl);
    const double pr = law.pressure(rr);
    const double al0 = law.sound_speed(rl);
    const double ar0 = law.sound_speed(rr);

    // Eulerian relaxation speeds a = c / rho.
    double al = al0, ar = ar0;
    if (rl == 0.0) {
        ar = ar0;
    } else if (rr == 0.0) {
        al = al0;
    } else if (pr - pl >= 0.0) {
        al = al0 + alpha_s * std::max((pr - pl) / (rr * ar0) + ul - ur, 0.0);
        ar = ar0 + alpha_s * std::max((pl - pr) / (rl * al) + ul - ur, 0.0);
    } else {
        ar = ar0 + alpha_s * std::max((pl - pr) / (rl * al0) + ul - ur, 0.0);
        al = al0 + alpha_s * std::max((pr - pl) / (rr * ar) + ul - ur, 0.0);
    }
    const double cl = rl * al;
    const double cr = rr * ar;
    const double csum = cl + cr;

    const double u_star = (cl * ul + cr * ur + pl - pr) / csum;
    const double pi_star = (cr * pl + cl * pr - cl * cr * (ur - ul)) / csum;

    const double lambda1 = rl > 0.0 ? ul - al : u_star;
    const double lambda3 = rr > 0.0 ? ur + ar : u_star;
    const double sigma = std::max(std::abs(lambda1), std::abs(lambda3));

    if (lambda1 >= 0.0) {
        const FluxValue f = physical_flux({rl, ul}, law);
        return {f.f_rho, f.f_mom, sigma};
    }
    if (lambda3 <= 0.0) {
        const FluxValue f = physical_flux({rr, ur}, law);
        return {f.f_rho, f.f_mom, sigma};
    }
    if (u_star >= 0.0) {
        // Left intermediate state; vacuum when the left state is vacuum.
        if (rl == 0.0) return {0.0, 0.0, sigma};
        const double tau = 1.0 / rl + (cr * (ur - ul) + pl - pr) / (cl * csum);
        const double rho_star = tau > 0.0 ? 1.0 / tau : 0.0;
        return {rho_star * u_star, rho_star * u_star * u_star + pi_star, sigma};
    }
    if (rr == 0.0) return {0.0, 0.0, sigma};
    const double tau = 1.0 / rr + (cl * (ur - ul) + pr - pl) / (cr * csum);
    const double rho_star = tau > 0.0 ? 1.0 / tau : 0.0;
    return {rho_star * u_star, rho_star * u_star * u_star + pi_star, sigma};
}

FluxValue numerical_flux(const FluxKind& kind, FluidState left, FluidState right,
                         const PressureLaw& law)
{
    switch (kind.type) {
    case FluxType::HLL: return hll_flux(left, right, law);
    case FluxType::HLLRoe: return hll_roe_flux(left, right, law);
    case FluxType::SuliciuVacuum: return suliciu_vacuum_flux(left, right, law, kind.correction(law));
    }
    throw std::logic_error("unhandled flux type");
}

StrongConsistencyReport strong_consistency_probe(const FluxKind& kind, const PressureLaw& law,
                                                 std::span<const double> r_grid,
                                                 std::span<const double> R_grid,
                                                 double separation_tol)
{
    StrongConsistencyReport report;
    report.worst_separation = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        for (double R : R_grid) {
            ++report.pairs_checked;
            const double f = numerical_flux(kind, {r, 0.0}, {R, 0.0}, law).f_mom;
            const double pr = law.pressure(r);
            const double pR = law.pressure(R);
            if (r == R) {
                const double err = std::abs(f - pr) / pr;
                report.worst_diagonal_error = std::max(report.worst_diagonal_error, err);
                if (err > 1e-12) ++report.violations;
                continue;
            }
            if (std::abs(r - R) < 1e-8) continue;
            const double sep = std::min(std::abs(f - pr), std::abs(f - pR)) / std::max(pr, pR);
            report.worst_separation = std::min(report.worst_separation, sep);
            if (sep <= separation_tol) ++report.violations;
        }
    }
    report.passed = report.violations == 0;
    return report;
}

}  // namespace chemotaxis
