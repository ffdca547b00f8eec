#include "heunlab/errors.hpp"
#include "heunlab/josephson/josephson.hpp"
#include "heunlab/monodromy/monodromy.hpp"
#include "heunlab/numeric/format.hpp"
#include "heunlab/numeric/parallel.hpp"
#include "heunlab/painleve/painleve.hpp"
#include "heunlab/polysol/polysol.hpp"
#include "heunlab/spectral/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

using namespace heunlab;
using cplx = std::complex<double>;
using nlohmann::json;
using numeric::format_complex;
using numeric::format_double;

namespace {

/// Raised when a requested check ran but did not pass.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string &out_path, const std::string &text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + out_path);
    f << text;
}

json complex_list(const std::vector<cplx> &xs) {
    json out = json::array();
    for (const cplx x : xs)
        out.push_back(format_complex(x));
    return out;
}

unsigned pool_size(unsigned flag) { return flag > 0 ? flag : numeric::default_threads(); }

const std::map<std::string, spectral::Sign> kSigns{{"plus", spectral::Sign::plus}, {"minus", spectral::Sign::minus}};

// Verification suite: returns one report per check, in a fixed order.
std::vector<spectral::IdentityReport> verify_suite(int ell_max, unsigned threads) {
    using spectral::IdentityReport;
    using spectral::Sign;
    std::vector<std::function<IdentityReport()>> checks;
    for (int ell = 1; ell <= ell_max; ++ell) {
        checks.emplace_back([ell] { return spectral::verify_gcal_square(ell); });
        checks.emplace_back([ell] { return spectral::verify_factorization(ell); });
        for (Sign sg : {Sign::plus, Sign::minus})
            checks.emplace_back([ell, sg] { return spectral::verify_restriction(ell, sg); });
        checks.emplace_back([ell] { return spectral::verify_involution(ell); });
        checks.emplace_back([ell] {
            for (Sign sg : {Sign::plus, Sign::minus})
                painleve::multiplier({ell, sg});
            return IdentityReport{"tangency", ell, true, std::nullopt, "both signs"};
        });
        checks.emplace_back([ell] {
            std::mt19937_64 rng(static_cast<std::uint64_t>(ell));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            const auto z = polysol::unit_circle_samples(8);
            double worst_sol = 0, worst_tr = 0;
            int points = 0;
            for (Sign sg : {Sign::plus, Sign::minus})
                while (points < (sg == Sign::plus ? 3 : 6)) {
                    for (const auto &p : polysol::sample_surface({ell, sg}, {u(rng), u(rng)}, {1.0 + 0.3 * u(rng), 0.3 * u(rng)})) {
                        const auto sol = polysol::solve_polynomial_solution(p);
                        if (sol.degree() != ell)
                            return IdentityReport{"solutions", ell, false, std::nullopt, "wrong degree"};
                        worst_sol = std::max(worst_sol, polysol::verify_solution(p, sol, z));
                        const auto m = monodromy::monodromy_matrix(
                            monodromy::LinearSystemSpec::extended(static_cast<double>(ell), p.chi, p.a, p.s));
                        worst_tr = std::max(worst_tr, std::abs(m.trace - 2.0));
                        ++points;
                    }
                }
            return IdentityReport{"solutions+monodromy", ell, worst_sol < 1e-9 && worst_tr < 1e-6, std::nullopt,
                                  "points=" + std::to_string(points) + " residual=" + format_double(worst_sol) +
                                      " |trM-2|=" + format_double(worst_tr)};
        });
    }
    if (ell_max >= 2)
        for (Sign sg : {Sign::plus, Sign::minus})
            checks.emplace_back([sg] {
                auto chk = spectral::verify_l2_discriminant(sg, 1);
                chk.report.pass = chk.report.pass && chk.max_deviation < 1e-10;
                chk.report.detail += " branch_deviation=" + format_double(chk.max_deviation);
                return chk.report;
            });
    std::vector<IdentityReport> reports(checks.size());
    numeric::parallel_for(
        checks.size(),
        [&](std::size_t i) {
            try {
                reports[i] = checks[i]();
            } catch (const std::exception &e) {
                reports[i] = IdentityReport{"check#" + std::to_string(i), 0, false, std::nullopt, e.what()};
            }
        },
        threads);
    return reports;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"heunlab: determinantal surfaces, polynomial solutions, isomonodromic flow and phase-lock tools"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker pool size (default: HEUNLAB_THREADS or CPU count)");

    int ell = 1;
    std::string sign = "plus", out;
    const auto add_ell_sign = [&](CLI::App *cmd) {
        cmd->add_option("--ell", ell, "ell")->required()->check(CLI::NonNegativeNumber);
        cmd->add_option("--sign", sign, "plus or minus")->required()->check(CLI::IsMember({"plus", "minus"}));
    };

    auto *surface = app.add_subcommand("surface", "polynomial JSON of the surface P_{ell,sign}");
    add_ell_sign(surface);
    surface->add_option("--out", out, "output file (default stdout)");

    auto *spec_cmd = app.add_subcommand("spectral", "polynomial JSON of Q_ell over (u, v)");
    spec_cmd->add_option("--ell", ell, "ell")->required()->check(CLI::PositiveNumber);
    spec_cmd->add_option("--out", out, "output file (default stdout)");

    int ell_max = 6;
    auto *verify = app.add_subcommand("verify", "identity, tangency, solution and monodromy checks");
    verify->add_option("--ell-max", ell_max, "largest ell")->check(CLI::Range(1, 10));

    std::string chi_text, a_text, s_text;
    std::size_t index = 0;
    auto *polysolve = app.add_subcommand("polysolve", "vector polynomial solution at a point of a slice");
    add_ell_sign(polysolve);
    polysolve->add_option("--chi", chi_text, "chi as RE+IMi")->required();
    polysolve->add_option("--s", s_text, "s as RE+IMi")->required();
    polysolve->add_option("--index", index, "which slice point, ordered by (Re a, Im a)");

    std::string a0_text, s0_text, s1_text, system = "primed";
    double tol = 1e-10;
    auto *flow_cmd = app.add_subcommand("flow", "isomonodromic flow along the ray from s0 to s1, as CSV");
    add_ell_sign(flow_cmd);
    flow_cmd->add_option("--chi0", chi_text, "initial chi")->required();
    flow_cmd->add_option("--a0", a0_text, "initial a")->required();
    flow_cmd->add_option("--s0", s0_text, "initial s")->required();
    flow_cmd->add_option("--s1", s1_text, "final s")->required();
    flow_cmd->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);
    flow_cmd->add_option("--system", system, "primed or unprimed")->check(CLI::IsMember({"primed", "unprimed"}));
    flow_cmd->add_option("--out", out, "output file (default stdout)");

    auto *mult = app.add_subcommand("multiplier", "polynomial JSON of h with dP/dv = h P");
    add_ell_sign(mult);

    std::string ell_text = "1";
    double radius = 1.0;
    auto *mono = app.add_subcommand("monodromy", "monodromy around |z| = radius as JSON");
    mono->add_option("--system", system, "mchoyn, tty or psisys")->required()->check(CLI::IsMember({"mchoyn", "tty", "psisys"}));
    mono->add_option("--ell", ell_text, "ell (complex allowed)");
    mono->add_option("--chi", chi_text, "chi");
    mono->add_option("--a", a_text, "a");
    mono->add_option("--s", s_text, "s");
    mono->add_option("--radius", radius, "loop radius")->check(CLI::PositiveNumber);

    double omega = 1.0, B = 0.0, A = 0.0;
    int periods = 200;
    auto *rho = app.add_subcommand("rho", "rotation number of the torus flow as JSON");
    rho->add_option("--omega", omega, "omega")->required()->check(CLI::PositiveNumber);
    rho->add_option("--B", B, "B")->required();
    rho->add_option("--A", A, "A")->required();
    rho->add_option("--periods", periods, "Poincare iterations")->check(CLI::PositiveNumber);
    rho->add_option("--tol", tol, "absolute tolerance")->check(CLI::PositiveNumber);

    std::string b_range, a_range;
    auto *scan = app.add_subcommand("scan", "rotation numbers on a (B, A) grid as CSV");
    scan->add_option("--omega", omega, "omega")->required()->check(CLI::PositiveNumber);
    scan->add_option("--B", b_range, "lo:hi:step")->required();
    scan->add_option("--A", a_range, "lo:hi:step")->required();
    scan->add_option("--periods", periods, "Poincare iterations")->check(CLI::PositiveNumber);
    scan->add_option("--tol", tol, "absolute tolerance")->check(CLI::PositiveNumber);
    scan->add_option("--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto sg = kSigns.at(sign);
        if (*surface) {
            if (ell < 1)
                throw std::invalid_argument("surface needs ell >= 1");
            emit(out, spectral::build_P(ell, sg).to_json().dump() + "\n");
        } else if (*spec_cmd) {
            emit(out, spectral::to_uv(spectral::build_Q(ell)).to_json().dump() + "\n");
        } else if (*verify) {
            bool ok = true;
            for (const auto &r : verify_suite(ell_max, pool_size(threads))) {
                std::cout << r.line() << "\n";
                ok = ok && r.pass;
            }
            if (!ok)
                throw CheckFailed("verification failed");
        } else if (*polysolve) {
            const cplx chi = numeric::parse_complex(chi_text);
            const cplx s = numeric::parse_complex(s_text);
            auto pts = polysol::sample_surface({ell, sg}, chi, s);
            std::sort(pts.begin(), pts.end(), [](const auto &x, const auto &y) {
                return std::pair(x.a.real(), x.a.imag()) < std::pair(y.a.real(), y.a.imag());
            });
            if (index >= pts.size())
                throw std::invalid_argument("slice has " + std::to_string(pts.size()) + " points; --index out of range");
            const auto &p = pts[index];
            const auto sol = polysol::solve_polynomial_solution(p);
            const double res = polysol::verify_solution(p, sol, polysol::unit_circle_samples(8));
            json j;
            j["ell"] = ell;
            j["sign"] = sign;
            j["chi"] = format_complex(chi);
            j["s"] = format_complex(s);
            j["a"] = format_complex(p.a);
            j["slice_points"] = pts.size();
            j["index"] = index;
            j["y1"] = complex_list(sol.y1());
            j["y2"] = complex_list(sol.coeffs);
            j["degree"] = sol.degree();
            j["residual"] = format_double(res);
            std::cout << j.dump() << "\n";
        } else if (*flow_cmd) {
            const cplx s0 = numeric::parse_complex(s0_text);
            const auto traj = painleve::flow(
                {numeric::parse_complex(chi_text), numeric::parse_complex(a0_text), s0, static_cast<double>(ell)},
                painleve::Path::radial(s0, numeric::parse_complex(s1_text)), tol,
                system == "primed" ? painleve::FlowSystem::primed : painleve::FlowSystem::unprimed);
            const auto member = painleve::membership_along(traj, {ell, sg});
            std::string csv = "s_re,s_im,chi_re,chi_im,a_re,a_im,membership_residual\n";
            const auto nodes = traj.nodes();
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const auto st = traj.at(nodes[k]);
                for (const double x : {st.s.real(), st.s.imag(), st.chi.real(), st.chi.imag(), st.a.real(), st.a.imag()})
                    csv += format_double(x) + ",";
                csv += format_double(member[k]) + "\n";
            }
            emit(out, csv);
        } else if (*mult) {
            std::cout << painleve::multiplier({ell, sg}).to_json().dump() << "\n";
        } else if (*mono) {
            monodromy::LinearSystemSpec spec;
            if (system == "psisys") {
                spec = monodromy::LinearSystemSpec::psisys();
            } else {
                if (a_text.empty() || s_text.empty() || (system == "mchoyn" && chi_text.empty()))
                    throw std::invalid_argument(system + " needs --a, --s" + (system == "mchoyn" ? " and --chi" : ""));
                const cplx l = numeric::parse_complex(ell_text);
                spec = system == "mchoyn"
                           ? monodromy::LinearSystemSpec::extended(l, numeric::parse_complex(chi_text),
                                                                   numeric::parse_complex(a_text), numeric::parse_complex(s_text))
                           : monodromy::LinearSystemSpec::tty(l, numeric::parse_complex(a_text), numeric::parse_complex(s_text));
            }
            const auto m = monodromy::monodromy_matrix(spec, radius);
            json j;
            j["system"] = system;
            j["trace"] = format_complex(m.trace);
            j["det"] = format_complex(m.det);
            j["gap"] = format_double(m.gap);
            j["M"] = json::array({complex_list({m.M(0, 0), m.M(0, 1)}), complex_list({m.M(1, 0), m.M(1, 1)})});
            std::cout << j.dump() << "\n";
        } else if (*rho) {
            const auto e = josephson::rotation_number({B, A, omega}, periods, tol);
            json j;
            j["B"] = format_double(B);
            j["A"] = format_double(A);
            j["omega"] = format_double(omega);
            j["rho"] = format_double(e.rho);
            j["bound"] = format_double(e.bound);
            j["lo"] = format_double(e.lo);
            j["hi"] = format_double(e.hi);
            j["n_periods"] = e.n_periods;
            j["locked"] = e.locked();
            std::cout << j.dump() << "\n";
        } else if (*scan) {
            const auto rows = josephson::scan(numeric::parse_range(b_range), numeric::parse_range(a_range), omega,
                                              periods, tol, pool_size(threads));
            std::ostringstream csv;
            josephson::write_scan_csv(csv, rows);
            emit(out, csv.str());
        }
    } catch (const CheckFailed &e) {
        std::cerr << "heunlab: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument &e) {
        std::cerr << "heunlab: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "heunlab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
