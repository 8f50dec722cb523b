#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gpfp/fid.hpp"
#include "gpfp/holomorphic.hpp"
#include "gpfp/io.hpp"
#include "gpfp/moments.hpp"
#include "gpfp/sampling.hpp"

namespace gpfp {

namespace cli_detail {

struct Grid {
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

inline Grid parse_grid(const std::string& s) {
    Grid g;
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::domain_error("grid must be lo:hi:n");
    try {
        g.lo = std::stod(s.substr(0, c1));
        g.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        g.n = std::stoi(s.substr(c2 + 1));
    } catch (const std::exception&) {
        throw std::domain_error("grid must be lo:hi:n with numeric fields");
    }
    if (g.n < 1 || !(g.hi > g.lo)) throw std::domain_error("grid needs n >= 1 and lo < hi");
    return g;
}

inline int resolve_threads(int configured) {
    if (const char* env = std::getenv("GPFP_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (configured > 0) return configured;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Deterministic fan-out: fixed index chunks into a preallocated vector,
// assembled in order regardless of thread count.
template <class F>
std::vector<double> parallel_map(int count, int threads, F&& f) {
    std::vector<double> out(static_cast<std::size_t>(count));
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) out[static_cast<std::size_t>(i)] = f(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace cli_detail

// Full command-line surface; returns the process exit code. Kept in a
// header so the test suite can drive it in-process.
//
// Exit codes: 0 success, 2 malformed spec or usage, 3 normalization failure,
// 4 exact path unavailable / outside proven regime, 5 winding violation,
// 1 anything else.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"generalized power distributions with free Poisson term"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration");
    auto* tol_opt = app.add_option("--tol", cfg.tol, "quadrature tolerance");
    auto* nodes_opt = app.add_option("--nodes", cfg.quad_nodes, "initial quadrature nodes");
    auto* seed_opt = app.add_option("--seed", cfg.seed, "sampling seed");
    auto* threads_opt = app.add_option("--threads", cfg.threads, "worker threads (0 = auto)");

    // pdf
    auto* pdf_cmd = app.add_subcommand("pdf", "density values on a grid (CSV)");
    std::string pdf_spec;
    std::string pdf_grid = "0:1:101";
    pdf_cmd->add_option("spec", pdf_spec, "spec JSON file")->required();
    pdf_cmd->add_option("--grid", pdf_grid, "lo:hi:n");

    // cumulants
    auto* cum_cmd = app.add_subcommand("cumulants", "moments and free cumulants (JSON)");
    std::string cum_spec;
    int cum_n = 5;
    bool cum_exact = false, cum_quad = false;
    cum_cmd->add_option("spec", cum_spec, "spec JSON file")->required();
    cum_cmd->add_option("--n", cum_n, "highest order");
    cum_cmd->add_flag("--exact", cum_exact, "require the exact rational path");
    cum_cmd->add_flag("--quad", cum_quad, "force the quadrature path");

    // hankel
    auto* han_cmd = app.add_subcommand("hankel", "Hankel non-divisibility verdict (JSON)");
    std::string han_spec;
    double han_eta = -1.0, han_sigma = -1.0;
    int han_order = 2;
    han_cmd->add_option("spec", han_spec, "spec JSON file");
    han_cmd->add_option("--eta", han_eta, "eta family at this alpha2");
    han_cmd->add_option("--sigma-inv", han_sigma, "inverse-sigma family at this alpha2");
    han_cmd->add_option("--order", han_order, "Hankel matrix order");

    // threshold
    auto* thr_cmd = app.add_subcommand("threshold", "eta determinant root (JSON)");

    // ui-verify
    auto* ui_cmd = app.add_subcommand("ui-verify", "winding verification report (JSON)");
    std::string ui_spec, ui_trace;
    double ui_power = 1.0;
    double ui_eps = 1e-2;
    int ui_probes = 0;
    bool ui_force = false;
    ui_cmd->add_option("spec", ui_spec, "spec JSON file")->required();
    ui_cmd->add_option("--power", ui_power, "exponent r with |r| >= 1");
    auto* ui_eps_opt = ui_cmd->add_option("--epsilon", ui_eps, "probe annulus parameter");
    ui_cmd->add_option("--probes", ui_probes, "probe count (rounded to a grid)");
    ui_cmd->add_option("--trace", ui_trace, "write the contour image CSV here");
    ui_cmd->add_flag("--force", ui_force, "run outside the proven regime");

    // repro
    auto* rep_cmd = app.add_subcommand("repro", "determinant sweeps behind figures 2-3 (CSV)");
    std::string rep_which;
    rep_cmd->add_option("figure", rep_which, "fig2 | fig3")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: code=2: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!config_path.empty()) {
            RunConfig file_cfg = load_config(config_path);
            // explicit flags win over the file
            if (!*tol_opt) cfg.tol = file_cfg.tol;
            if (!*nodes_opt) cfg.quad_nodes = file_cfg.quad_nodes;
            if (!*seed_opt) cfg.seed = file_cfg.seed;
            if (!*threads_opt) cfg.threads = file_cfg.threads;
            cfg.probes = file_cfg.probes;
            cfg.epsilon = file_cfg.epsilon;
            cfg.output = file_cfg.output;
        }
        const int threads = cli_detail::resolve_threads(cfg.threads);
        QuadratureOptions qopt;
        qopt.tol = cfg.tol;
        qopt.initial_nodes = cfg.quad_nodes;

        if (*pdf_cmd) {
            const auto grid = cli_detail::parse_grid(pdf_grid);
            GpfpSpec s = load_spec(pdf_spec);
            auto values = cli_detail::parallel_map(grid.n, threads, [&](int i) {
                const double x =
                    grid.n == 1 ? grid.lo
                                : grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
                return gpfp_pdf(s, x);
            });
            out << "x,pdf\n";
            for (int i = 0; i < grid.n; ++i) {
                const double x = grid.n == 1
                                     ? grid.lo
                                     : grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
                out << cli_detail::format_double(x) << ','
                    << cli_detail::format_double(values[static_cast<std::size_t>(i)]) << '\n';
            }
            return 0;
        }

        if (*cum_cmd) {
            if (cum_n < 1 || cum_n > kNcEnumerationCap)
                throw std::domain_error("cumulants: --n must be in [1, " +
                                        std::to_string(kNcEnumerationCap) + "]");
            if (cum_exact && cum_quad)
                throw std::domain_error("cumulants: --exact and --quad are exclusive");
            GpfpSpec s = load_spec(cum_spec);
            Json j;
            const bool aligned = try_align_fp(s).has_value();
            if (cum_exact && !aligned)
                throw ExactUnavailableError("cumulants: exact path unavailable for this spec");
            if ((cum_exact || aligned) && !cum_quad) {
                auto [m, kappa] = cumulant_pipeline_exact(s, cum_n);
                Json jm = Json::array(), jk = Json::array();
                for (const auto& v : m) jm.push_back(to_double(v));
                for (const auto& v : kappa) jk.push_back(to_double(v));
                j["method"] = "exact";
                j["moments"] = std::move(jm);
                j["cumulants"] = std::move(jk);
            } else {
                auto [m, kappa] = cumulant_pipeline_quadrature(s, cum_n, qopt);
                j["method"] = "quadrature";
                j["moments"] = m;
                j["cumulants"] = kappa;
            }
            out << j.dump(2) << "\n";
            return 0;
        }

        if (*han_cmd) {
            if (han_order < 1) throw std::domain_error("hankel: order must be positive");
            FIDReport rep;
            std::vector<Rational> kappa;
            bool quad_path = false;
            if (han_eta >= 0.0) {
                rep.measure = "eta";
                rep.alpha2 = han_eta;
                kappa = cumulants_eta(exact_rational(han_eta));
            } else if (han_sigma >= 0.0) {
                rep.measure = "sigma-inverse";
                rep.alpha2 = han_sigma;
                kappa = cumulants_sigma_inverse(exact_rational(han_sigma));
            } else if (!han_spec.empty()) {
                rep.measure = han_spec;
                GpfpSpec s = load_spec(han_spec);
                const int need = std::min(2 * han_order, kNcEnumerationCap);
                if (try_align_fp(s)) {
                    auto [m, kap] = cumulant_pipeline_exact(s, need);
                    kappa.assign(kap.begin() + 1, kap.end());
                } else {
                    quad_path = true;
                    auto [m, kap] = cumulant_pipeline_quadrature(s, need, qopt);
                    for (std::size_t i = 1; i < kap.size(); ++i)
                        kappa.push_back(exact_rational(kap[i]));
                }
            } else {
                throw std::domain_error("hankel: provide a spec file, --eta, or --sigma-inv");
            }
            FidResult<Rational> res;
            if (quad_path) {
                std::vector<double> kd;
                kd.reserve(kappa.size());
                for (const auto& v : kappa) kd.push_back(to_double(v));
                const auto fres = fid_necessary_float(kd, han_order);
                res.verdict = fres.verdict;
                if (fres.witness) {
                    auto w = hankel_witness(kappa, fres.witness->order);
                    res.witness = std::move(w);
                }
            } else {
                res = fid_necessary(kappa, han_order);
            }
            if (res.verdict == FidVerdict::FailWithWitness) {
                rep.order = res.witness->order;
                rep.det = to_double(res.witness->det);
                rep.verdict = "fail";
            } else {
                const int kmax =
                    std::min<int>(han_order, static_cast<int>((kappa.size() + 1) / 2));
                const auto wit = hankel_witness(kappa, kmax);
                rep.order = wit.order;
                rep.det = to_double(wit.det);
                rep.verdict = "inconclusive";
            }
            out << fid_report_to_json(rep).dump(2) << "\n";
            return 0;
        }

        if (*thr_cmd) {
            const auto t = eta_threshold();
            Json j;
            j["root"] = t.root;
            j["bracket"] = {t.lo, t.hi};
            j["tol"] = t.tol;
            out << j.dump(2) << "\n";
            return 0;
        }

        if (*ui_cmd) {
            GpfpSpec s = load_spec(ui_spec);
            PowerSpec ps = PowerSpec::from(s, ui_power);
            UIVerifyOptions vopt;
            vopt.force = ui_force;
            const int nprobe = ui_probes > 0 ? ui_probes : cfg.probes;
            const int per_side = std::max(1, static_cast<int>(std::lround(std::sqrt(
                                              static_cast<double>(nprobe)))));
            const double eps = *ui_eps_opt ? ui_eps : cfg.epsilon;
            const auto probes = log_polar_probes(eps, per_side, per_side);
            Contour trace;
            const UIReport rep = ui_verify(ps, eps, std::span<const Complex>(probes), vopt,
                                           ui_trace.empty() ? nullptr : &trace);
            out << ui_report_to_json(rep).dump(2) << "\n";
            if (!ui_trace.empty()) {
                std::ofstream tf(ui_trace);
                if (!tf) throw SpecFormatError("cannot open trace file: " + ui_trace);
                write_contour_csv(tf, trace);
            }
            return rep.verdict == "consistent-with-UI" ? 0 : 5;
        }

        if (*rep_cmd) {
            if (rep_which != "fig2" && rep_which != "fig3")
                throw std::domain_error("repro: figure must be fig2 or fig3");
            const bool fig2 = rep_which == "fig2";
            const int count = 200;
            auto dets = cli_detail::parallel_map(count, threads, [&](int i) {
                const Rational a2 = Rational(i + 1) / Rational(2 * (count + 1));
                return to_double(fig2 ? sigma_inverse_hankel_det(a2) : eta_hankel_det(a2));
            });
            out << "alpha2,det\n";
            for (int i = 0; i < count; ++i) {
                const double a2 = static_cast<double>(i + 1) / (2.0 * (count + 1));
                out << cli_detail::format_double(a2) << ','
                    << cli_detail::format_double(dets[static_cast<std::size_t>(i)]) << '\n';
            }
            return 0;
        }

        err << "error: code=2: no subcommand\n";
        return 2;
    } catch (const SpecFormatError& e) {
        err << "error: code=2: " << e.what() << "\n";
        return 2;
    } catch (const NormalizationError& e) {
        err << "error: code=3: " << e.what() << "\n";
        return 3;
    } catch (const ExactUnavailableError& e) {
        err << "error: code=4: " << e.what() << "\n";
        return 4;
    } catch (const RegimeError& e) {
        err << "error: code=4: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        err << "error: code=2: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: code=1: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gpfp
