// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "heunlab/josephson/josephson.hpp"
#include "heunlab/monodromy/monodromy.hpp"
#include "heunlab/numeric/format.hpp"
#include "heunlab/numeric/parallel.hpp"
#include "heunlab/painleve/painleve.hpp"
#include "heunlab/polysol/polysol.hpp"
#include "heunlab/spectral/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace heunlab;
using spectral::MPoly;
using spectral::Rational;
using spectral::Sign;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const std::string &id, const std::function<Outcome()> &body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception &e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass)
        ++failures;
    std::ostringstream time;
    time.precision(3);
    time << secs;
    std::cout << (out.pass ? "PASS " : "FAIL ") << id << ": " << out.detail << " [" << time.str() << " s]"
              << std::endl;
}

std::string fmt(double x) { return numeric::format_double(x); }

const spectral::VarList &CAS = spectral::surface_vars();
MPoly var(std::string_view n) { return MPoly::variable(CAS, n); }
MPoly num(const Rational &q) { return MPoly::constant(CAS, q); }

// (a +- s)(1 - 4 chi^2) + 4 chi
MPoly display_l1(Sign sign) {
    const MPoly chi = var("chi");
    return (var("a") + var("s").scaled(sign_value(sign))) * (num(1) - chi.pow(2).scaled(4)) + chi.scaled(4);
}

// (2chi +- 1)^2 (2chi -+ 1)(a^2 - s^2) - 2a(2chi +- 1)(6chi -+ 1) + 16 chi
MPoly display_l2(Sign sign) {
    const int sg = sign_value(sign);
    const MPoly chi = var("chi"), a = var("a"), s = var("s");
    const MPoly p = chi.scaled(2) + num(sg);
    const MPoly m = chi.scaled(2) - num(sg);
    return p.pow(2) * m * (a * a - s * s) - a.scaled(2) * p * (chi.scaled(6) - num(sg)) + chi.scaled(16);
}

bool same_up_to_sign(const MPoly &x, const MPoly &y) { return x == y || x == -y; }

Outcome all_reports(const std::vector<spectral::IdentityReport> &reports) {
    for (const auto &r : reports)
        if (!r.pass)
            return {false, r.line()};
    return {true, std::to_string(reports.size()) + " exact identities"};
}

std::vector<polysol::SurfacePoint> sample_points(const spectral::SurfaceSpec &spec, std::size_t want,
                                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<polysol::SurfacePoint> pts;
    while (pts.size() < want) {
        const cplx chi(u(rng), u(rng));
        const cplx s = std::polar(0.5 + 0.75 * (u(rng) + 1), 3.0 * u(rng));
        for (const auto &p : polysol::sample_surface(spec, chi, s))
            if (pts.size() < want)
                pts.push_back(p);
    }
    return pts;
}

} // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);

    criterion("1a Gcal^2 = mu^2 Id - H, ell <= 10", [] {
        std::vector<spectral::IdentityReport> r;
        for (int ell = 1; ell <= 10; ++ell)
            r.push_back(spectral::verify_gcal_square(ell));
        return all_reports(r);
    });

    criterion("1b Q(r^2 - mu^2, mu^2) = (-1)^ell Q+ Q-, ell <= 10", [] {
        std::vector<spectral::IdentityReport> r;
        for (int ell = 1; ell <= 10; ++ell)
            r.push_back(spectral::verify_factorization(ell));
        return all_reports(r);
    });

    criterion("1c P(0, a, s) = c Q_pm(s/2, a/2), ell <= 10", [] {
        std::vector<spectral::IdentityReport> r;
        for (int ell = 1; ell <= 10; ++ell)
            for (Sign sg : {Sign::plus, Sign::minus}) {
                r.push_back(spectral::verify_restriction(ell, sg));
                if (!r.back().scalar || *r.back().scalar == 0)
                    return Outcome{false, "zero or missing scalar: " + r.back().line()};
            }
        return all_reports(r);
    });

    criterion("1d 4 P_1 and 8 P_2 match the displayed formulas up to sign", [] {
        for (Sign sg : {Sign::plus, Sign::minus}) {
            if (!same_up_to_sign(spectral::build_P(1, sg).scaled(4), display_l1(sg)))
                return Outcome{false, "ell=1 sign=" + spectral::to_string(sg)};
            if (!same_up_to_sign(spectral::build_P(2, sg).scaled(8), display_l2(sg)))
                return Outcome{false, "ell=2 sign=" + spectral::to_string(sg)};
        }
        return Outcome{true, "4 polynomials equal term for term"};
    });

    criterion("1e Lie derivative divisibility, ell <= 8; h_1, h_2 exact", [] {
        for (int ell = 1; ell <= 8; ++ell)
            for (Sign sg : {Sign::plus, Sign::minus})
                painleve::multiplier({ell, sg}); // throws on failure, re-multiplication included
        const MPoly chi = var("chi"), a = var("a"), s = var("s");
        for (Sign sg : {Sign::plus, Sign::minus}) {
            const int e = sign_value(sg);
            if (painleve::multiplier({1, sg}) != num(1) - chi.scaled(2) * (a + s.scaled(e)))
                return Outcome{false, "h_1 mismatch"};
            if (painleve::multiplier({2, sg}) != num(2) - a * (chi.scaled(2) - num(e)))
                return Outcome{false, "h_2 mismatch"};
        }
        return Outcome{true, "16 exact divisions, h_1 and h_2 match"};
    });

    criterion("1f ell = 2 discriminant and branch points", [] {
        double worst = 0;
        std::string detail;
        for (Sign sg : {Sign::plus, Sign::minus}) {
            const auto chk = spectral::verify_l2_discriminant(sg, 1);
            if (!chk.report.pass || !chk.res_scalar)
                return Outcome{false, chk.report.line()};
            if (chk.branch_points.size() != 2)
                return Outcome{false, "expected two odd-multiplicity roots"};
            worst = std::max(worst, chk.max_deviation);
            detail += spectral::to_string(sg) + ": Res = " + chk.res_scalar->get_str() + " * lc * form; ";
        }
        return Outcome{worst < 1e-10, detail + "root deviation " + fmt(worst)};
    });

    criterion("1g degree, top monomial, s-axis value, genus", [] {
        const spectral::VarList s1{"s"};
        for (int ell = 1; ell <= 10; ++ell)
            for (Sign sg : {Sign::plus, Sign::minus}) {
                const MPoly p = spectral::build_P(ell, sg);
                const auto [deg, count] = spectral::top_in_chi_a(p);
                const unsigned top[] = {static_cast<unsigned>(ell + 1), static_cast<unsigned>(ell), 0};
                if (p.total_degree() != 2 * ell + 1 || deg != static_cast<unsigned>(2 * ell + 1) || count != 1 ||
                    p.coefficient(top) == 0)
                    return Outcome{false, "degree/top monomial at ell=" + std::to_string(ell)};
                const MPoly axis = p.subst({{"chi", MPoly(s1)}, {"a", MPoly(s1)}}, s1);
                Rational c(1);
                c /= mpz_class(1) << static_cast<mp_bitcnt_t>(ell + 1);
                const unsigned e[] = {static_cast<unsigned>(ell)};
                if (axis != MPoly::monomial(s1, e, c))
                    return Outcome{false, "P(0,0,s) at ell=" + std::to_string(ell)};
            }
        const int table[] = {0, 0, 0, 1, 2, 4};
        for (int ell = 1; ell <= 6; ++ell)
            if (spectral::genus(ell) != table[ell - 1])
                return Outcome{false, "genus at ell=" + std::to_string(ell)};
        return Outcome{true, "ell <= 10 both signs; genus table 1..6"};
    });

    criterion("2 polynomial solutions on sampled surface points", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto z = polysol::unit_circle_samples(8);
        double worst = 0;
        std::size_t count = 0;
        for (int ell = 1; ell <= 6; ++ell)
            for (Sign sg : {Sign::plus, Sign::minus})
                for (const auto &p : sample_points({ell, sg}, 20, 1000u * static_cast<unsigned>(ell) + (sg == Sign::plus))) {
                    const auto sol = polysol::solve_polynomial_solution(p);
                    if (sol.degree() != ell)
                        return Outcome{false, "degree " + std::to_string(sol.degree()) + " at ell=" + std::to_string(ell)};
                    worst = std::max(worst, polysol::verify_solution(p, sol, z));
                    ++count;
                }
        const auto hand = polysol::solve_polynomial_solution({1.0, 1.0 / 3.0, 1.0, {1, Sign::plus}});
        const double hand_err = std::abs(hand.coeffs[1] / hand.coeffs[0] + 2.0);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return Outcome{worst < 1e-9 && hand_err < 1e-12 && secs < 60,
                       std::to_string(count) + " points, max residual " + fmt(worst) + ", hand example error " +
                           fmt(hand_err)};
    });

    criterion("3 flow conservation on S_{3,+} and Painleve III residual", [] {
        const spectral::SurfaceSpec spec{3, Sign::plus};
        std::optional<polysol::SurfacePoint> start;
        for (const auto &p : polysol::sample_surface(spec, 1.0, 1.0))
            if (std::abs(p.a.imag()) < 1e-12 && p.a.real() > 2 && p.a.real() < 3)
                start = p;
        if (!start)
            return Outcome{false, "no start point"};
        const auto traj = painleve::flow({start->chi, start->a, 1.0, 3.0}, painleve::Path::radial(1.0, 2.0), 1e-10);
        const auto m = painleve::membership_along(traj, spec);
        const double member = *std::max_element(m.begin(), m.end());
        const double coarse = painleve::p3_residual(traj, 1.0, 2.0, 0.025).residual;
        const double fine = painleve::p3_residual(traj, 1.0, 2.0, 0.0125).residual;
        const double ratio = coarse / fine;
        return Outcome{member < 1e-6 && fine < 1e-4 && ratio > 12 && ratio < 20,
                       "start a=" + fmt(start->a.real()) + ", membership " + fmt(member) + ", P3 residual " +
                           fmt(coarse) + " -> " + fmt(fine) + " (ratio " + fmt(ratio) + ")"};
    });

    criterion("4 monodromy laws", [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double det_err = 0;
        for (int k = 0; k < 10; ++k) {
            const auto spec = monodromy::LinearSystemSpec::extended(0.3, {u(rng), u(rng)}, {u(rng), u(rng)},
                                                                    {1.0 + 0.5 * u(rng), u(rng)});
            det_err = std::max(det_err, std::abs(monodromy::monodromy_matrix(spec).det - std::exp(2 * pi * cplx(0, 0.3))));
        }
        std::vector<polysol::SurfacePoint> pts;
        for (int ell = 1; ell <= 4; ++ell)
            for (Sign sg : {Sign::plus, Sign::minus})
                for (const auto &p : sample_points({ell, sg}, 3, 77u * static_cast<unsigned>(ell) + (sg == Sign::plus)))
                    pts.push_back(p);
        std::vector<double> tr_err(pts.size());
        numeric::parallel_for(pts.size(), [&](std::size_t i) {
            const auto &p = pts[i];
            polysol::solve_polynomial_solution(p);
            const auto m = monodromy::monodromy_matrix(
                monodromy::LinearSystemSpec::extended(static_cast<double>(p.spec.ell), p.chi, p.a, p.s));
            tr_err[i] = std::abs(m.trace - 2.0);
        });
        const double tr_worst = *std::max_element(tr_err.begin(), tr_err.end());
        const auto st = monodromy::stokes_product_check();
        const double psi_tr = std::abs(st.monodromy.trace - 2.0);
        const double c_err = std::abs(st.c0c1 + 4.0);
        const bool ok = det_err < 1e-8 && pts.size() >= 20 && tr_worst < 1e-6 && psi_tr < 1e-6 &&
                        st.monodromy.gap > 0.1 && c_err < 1e-5;
        return Outcome{ok, "det error " + fmt(det_err) + "; " + std::to_string(pts.size()) +
                               " surface points, max |tr M - 2| " + fmt(tr_worst) + "; psisys |tr - 2| " +
                               fmt(psi_tr) + ", gap " + fmt(st.monodromy.gap) + ", c0c1 = " +
                               numeric::format_complex(st.c0c1)};
    });

    criterion("5 residue quadrature, 256 nodes, ell <= 4, s = 1", [] {
        double worst = 0;
        for (int ell = 1; ell <= 4; ++ell)
            worst = std::max(worst, std::abs(monodromy::residue_quadrature(ell, 1.0, 256) -
                                             monodromy::residue_closed_form(ell, 1.0)));
        return Outcome{worst < 1e-10, "max error " + fmt(worst)};
    });

    criterion("6 Josephson growth points, A = 0 rotation numbers, 150x150 scan", [] {
        const double g1 = josephson::growth_point(1, 1.0);
        const double g2 = josephson::growth_point(2, 1.0);
        const bool growth_ok = std::abs(g1 - std::sqrt(2.0)) < 1e-2 && std::abs(g2 - std::sqrt(5.0)) < 1e-2;

        constexpr int n = 150;
        constexpr int periods = 100;
        constexpr double step = 0.04;
        std::vector<double> B, A;
        for (int i = 0; i < n; ++i) {
            B.push_back((i - (n - 1) / 2.0) * step);
            A.push_back(i * step);
        }
        const auto rows = josephson::scan(B, A, 1.0, periods, 1e-8, numeric::default_threads());
        const auto at = [&](int i, int j) -> const josephson::RotationEstimate & {
            return rows[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)].estimate;
        };

        int a0_bad = 0;
        for (int i = 0; i < n; ++i) {
            const double b = B[static_cast<std::size_t>(i)];
            const double exact = std::copysign(std::sqrt(std::max(b * b - 1.0, 0.0)), b);
            if (std::abs(at(i, 0).rho - exact) > at(i, 0).bound)
                ++a0_bad;
        }

        int symmetry_bad = 0, non_integer_plateau = 0, locked = 0;
        std::set<long> plateaus;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const auto &e = at(i, j);
                const auto &mirror = at(n - 1 - i, j);
                if (std::abs(e.rho + mirror.rho) > e.bound + mirror.bound)
                    ++symmetry_bad;
                if (e.locked()) {
                    ++locked;
                    plateaus.insert(std::lround(e.rho));
                }
                if (i == 0 || i == n - 1)
                    continue;
                const auto &l = at(i - 1, j);
                const auto &r = at(i + 1, j);
                const bool flat = std::abs(e.rho - l.rho) <= e.bound + l.bound && std::abs(e.rho - r.rho) <= e.bound + r.bound;
                if (flat && std::abs(e.rho - std::round(e.rho)) > e.bound + std::max(l.bound, r.bound))
                    ++non_integer_plateau;
            }
        const bool plateaus_ok = plateaus.count(0) && plateaus.count(1) && plateaus.count(-1) && plateaus.count(2) &&
                                 plateaus.count(-2);
        std::string seen;
        for (long p : plateaus)
            seen += (seen.empty() ? "" : ",") + std::to_string(p);
        return Outcome{growth_ok && a0_bad == 0 && symmetry_bad == 0 && non_integer_plateau == 0 && plateaus_ok,
                       "B*(1) = " + fmt(g1) + ", B*(2) = " + fmt(g2) + "; A=0 row outside bounds: " +
                           std::to_string(a0_bad) + "; locked cells " + std::to_string(locked) + " at rho in {" + seen +
                           "}; non-integer plateaus " + std::to_string(non_integer_plateau) +
                           "; symmetry violations " + std::to_string(symmetry_bad)};
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
