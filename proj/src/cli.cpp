#include "ptamp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "ptamp/errors.hpp"
#include "ptamp/io.hpp"
#include "ptamp/metric.hpp"
#include "ptamp/pipeline.hpp"
#include "ptamp/wigner.hpp"

namespace ptamp::cli {

namespace {

using io::g17;

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

ep::ToyBranch parse_branch(const std::string& s) {
    if (s == "1+") return ep::ToyBranch::one_plus;
    if (s == "1-") return ep::ToyBranch::one_minus;
    if (s == "2+") return ep::ToyBranch::two_plus;
    if (s == "2-") return ep::ToyBranch::two_minus;
    throw ConfigError("ep.branch: expected one of 1+, 1-, 2+, 2-");
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::filesystem::create_directories(p.parent_path().empty() ? "." : p.parent_path());
    std::ofstream os(p);
    if (!os) throw Error("cannot open output file " + p.string());
    return os;
}

// Hermitian-oscillator signals M0(t), Omega0^2(t) from the pipeline
// source: the power-law model directly, or pointwise metric re-solves on
// a sampling grid wrapped in tabulated signals.
struct HermitianSignals {
    signals::ParameterSignal M0;
    signals::ParameterSignal Om0sq;
    std::vector<std::size_t> branch_jumps;
};

HermitianSignals hermitian_signals(const RunConfig& cfg) {
    if (cfg.ep.source == "toy") {
        return HermitianSignals{
            signals::ParameterSignal::toy_power(cfg.ep.eta0, 1.0),
            signals::ParameterSignal::toy_power(cfg.ep.eta0 * cfg.ep.eta0, -2.0),
            {}};
    }
    const int n = 257;
    std::vector<double> ts(n), m0(n), w2(n);
    for (int i = 0; i < n; ++i)
        ts[static_cast<std::size_t>(i)] = cfg.ep.t0 + (cfg.ep.t1 - cfg.ep.t0) * i / (n - 1);
    const auto track = metric::solve_metric_track(cfg.spec, cfg.kappa, ts, cfg.tol.metric);
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const auto hc = metric::hermitized_coeffs(cfg.spec, track.params[k], ts[k]);
        const auto ho = metric::hermitian_oscillator(hc, cfg.spec, ts[k]);
        m0[k] = ho.M0;
        w2[k] = ho.Omega0_sq;
    }
    return HermitianSignals{signals::ParameterSignal::table(ts, m0),
                            signals::ParameterSignal::table(std::move(ts), std::move(w2)),
                            track.branch_jumps};
}

ep::EPSolution solve_ep(const RunConfig& cfg, const HermitianSignals& hs) {
    if (cfg.ep.source == "toy")
        return ep::toy_solution(cfg.ep.c1, cfg.ep.c2, cfg.ep.branch, cfg.ep.variant, cfg.ep.t0,
                                cfg.ep.t1);
    const auto [e0, ed0] =
        ep::default_initial_conditions(hs.M0, hs.Om0sq, cfg.ep.eta0, cfg.ep.t0);
    return ep::ep_integrate(hs.M0, hs.Om0sq, cfg.ep.eta0, e0, ed0, {cfg.ep.t0, cfg.ep.t1},
                            cfg.tol.ode);
}

void write_ep_csv(const std::filesystem::path& file, const ep::EPSolution& sol,
                  const signals::ParameterSignal& M0, const signals::ParameterSignal& Om0sq,
                  double t0, double t1, double step) {
    auto os = open_out(file);
    os << "t,eta,etadot,g1,g2,g3,residual\n";
    for (double t = t0; t <= t1 + step * 1e-9; t += step) {
        const auto v = sol.eval(t);
        const auto g = ep::g_from_eta(sol, M0, t);
        const double res = ep::ep_residual(sol, M0, Om0sq, t);
        os << g17(t) << ',' << g17(v.eta) << ',' << g17(v.etadot) << ',' << g17(g.g1) << ','
           << g17(g.g2) << ',' << g17(g.g3) << ',' << g17(res) << "\n";
    }
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig cfg;
    cfg.spec = signals::AmplifierSpec{
        signals::ParameterSignal::constant(1.0), signals::ParameterSignal::constant(0.1),
        signals::ParameterSignal::constant(0.2), signals::ParameterSignal::constant(1.0)};
    return cfg;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    reject_unknown(j,
                   {"spec", "kappa", "ep", "cat", "times", "grid", "out_dir", "tolerances"},
                   "config");
    RunConfig cfg = defaults();
    if (j.contains("spec")) cfg.spec = signals::AmplifierSpec::from_json(j.at("spec"));
    if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<double>();
    if (j.contains("ep")) {
        const auto& e = j.at("ep");
        reject_unknown(e, {"source", "c1", "c2", "branch", "variant", "eta0", "t0", "t1", "step"},
                       "config.ep");
        if (e.contains("source")) {
            cfg.ep.source = e.at("source").get<std::string>();
            if (cfg.ep.source != "toy" && cfg.ep.source != "numeric")
                throw ConfigError("ep.source: expected \"toy\" or \"numeric\"");
        }
        cfg.ep.c1 = e.value("c1", cfg.ep.c1);
        cfg.ep.c2 = e.value("c2", cfg.ep.c2);
        if (e.contains("branch")) cfg.ep.branch = parse_branch(e.at("branch").get<std::string>());
        if (e.contains("variant")) {
            const auto v = e.at("variant").get<std::string>();
            if (v == "signed")
                cfg.ep.variant = ep::ToyVariant::signed_sin;
            else if (v == "abs")
                cfg.ep.variant = ep::ToyVariant::abs_sin;
            else
                throw ConfigError("ep.variant: expected \"signed\" or \"abs\"");
        }
        cfg.ep.eta0 = e.value("eta0", cfg.ep.eta0);
        cfg.ep.t0 = e.value("t0", cfg.ep.t0);
        cfg.ep.t1 = e.value("t1", cfg.ep.t1);
        cfg.ep.step = e.value("step", cfg.ep.step);
    }
    if (j.contains("cat")) {
        const auto& c = j.at("cat");
        reject_unknown(c, {"x0", "p0"}, "config.cat");
        cfg.cat_x0 = c.value("x0", cfg.cat_x0);
        cfg.cat_p0 = c.value("p0", cfg.cat_p0);
    }
    if (j.contains("times")) cfg.times = j.at("times").get<std::vector<double>>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"nx", "np", "density_nx", "density_nt"}, "config.grid");
        cfg.grid_nx = g.value("nx", cfg.grid_nx);
        cfg.grid_np = g.value("np", cfg.grid_np);
        cfg.density_nx = g.value("density_nx", cfg.density_nx);
        cfg.density_nt = g.value("density_nt", cfg.density_nt);
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        reject_unknown(t, {"metric", "ode", "quad", "oracle"}, "config.tolerances");
        cfg.tol.metric = t.value("metric", cfg.tol.metric);
        cfg.tol.ode = t.value("ode", cfg.tol.ode);
        cfg.tol.quad = t.value("quad", cfg.tol.quad);
        cfg.tol.oracle = t.value("oracle", cfg.tol.oracle);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot read config file " + file.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

int cmd_pt_region(std::pair<double, double> alpha_range, std::pair<double, double> beta_range,
                  int n, const std::filesystem::path& out_file, std::ostream& log) {
    const auto grid = signals::pt_region_scan(alpha_range, beta_range, n);
    auto os = open_out(out_file);
    os << "alpha,beta,unbroken\n";
    for (std::size_t i = 0; i < grid.alpha.size(); ++i)
        for (std::size_t j = 0; j < grid.beta.size(); ++j)
            os << g17(grid.alpha[i]) << ',' << g17(grid.beta[j]) << ','
               << (grid.at(i, j) ? 1 : 0) << "\n";
    std::size_t inside = 0;
    for (auto v : grid.unbroken) inside += v;
    log << "pt-region: " << inside << "/" << grid.unbroken.size() << " points unbroken -> "
        << out_file.string() << "\n";
    return kExitOk;
}

int cmd_metric_solve(const RunConfig& cfg, double t, std::ostream& log) {
    const auto eq = signals::equivalent_form(cfg.spec, t);
    if (eq.nu_minus == 0.0) {
        log << "metric-solve: alpha = beta, Hamiltonian already Hermitian; identity metric\n";
        const auto hc = metric::hermitized_coeffs(cfg.spec, metric::MetricParams::identity_metric(), t);
        const auto ho = metric::hermitian_oscillator(hc, cfg.spec, t);
        log << "  omega0 = " << g17(hc.omega0) << "  alpha0 = " << g17(hc.alpha0)
            << "  M0 = " << g17(ho.M0) << "  Omega0^2 = " << g17(ho.Omega0_sq) << "\n";
        return kExitOk;
    }
    const double al = cfg.spec.alpha(t), be = cfg.spec.beta(t);
    const auto e = signals::pt_bilinear_unit(al, be);
    if (!signals::pt_unbroken(e.h11, e.h22, e.h12, e.h21)) {
        log << "metric-solve refused: (alpha, beta) = (" << g17(al) << ", " << g17(be)
            << ") lies outside the unbroken region alpha*beta*(1-alpha-beta) >= 0\n";
        throw DomainError("metric-solve: parameters outside the unbroken-symmetry region");
    }

    metric::MetricParams p;
    try {
        p = metric::solve_metric(cfg.spec, cfg.kappa, t, cfg.tol.metric);
    } catch (const NoMetricError& err) {
        log << "metric-solve failed: " << err.what() << "\n";
        const auto F = metric::kappa0_constraint(cfg.spec, cfg.kappa, t);
        const double lo = 2.0 * std::abs(cfg.kappa) * (1.0 + 1e-6);
        log << "  scanned bracket report: F(" << g17(lo) << ") = " << g17(F(lo)) << ", F("
            << g17(100.0 * std::abs(cfg.kappa) + 100.0) << ") = "
            << g17(F(100.0 * std::abs(cfg.kappa) + 100.0)) << "\n";
        if (const auto pole = metric::kappa0_pole(cfg.spec, cfg.kappa, t))
            log << "  excluded pole at kappa0 = " << g17(*pole) << "\n";
        throw;
    }
    const auto hc = metric::hermitized_coeffs(cfg.spec, p, t);
    const auto ho = metric::hermitian_oscillator(hc, cfg.spec, t);
    log << "metric-solve at t = " << g17(t) << " (kappa = " << g17(cfg.kappa) << ")\n"
        << "  kappa0 = " << g17(p.kappa0) << "\n"
        << "  theta  = " << g17(p.theta) << "\n"
        << "  omega0 = " << g17(hc.omega0) << "\n"
        << "  alpha0 = " << g17(hc.alpha0) << "\n"
        << "  M0 = " << g17(ho.M0) << "  Omega0^2 = " << g17(ho.Omega0_sq) << "\n"
        << "  hermiticity residual |alpha0 - beta0| = " << g17(hc.hermiticity_residual) << "\n";
    if (const auto pole = metric::kappa0_pole(cfg.spec, cfg.kappa, t))
        log << "  constraint pole excluded at kappa0 = " << g17(*pole) << "\n";
    return kExitOk;
}

int cmd_ep(const RunConfig& cfg, std::ostream& log) {
    const auto hs = hermitian_signals(cfg);
    if (!hs.branch_jumps.empty())
        log << "warning: metric root branch jumped at " << hs.branch_jumps.size()
            << " sample(s)\n";

    if (cfg.ep.source == "toy") {
        // emit the two positive branches; report which variant is smooth
        const auto verdict = ep::select_smooth_variant(cfg.ep.c1, cfg.ep.c2, cfg.ep.branch,
                                                       cfg.ep.t0, cfg.ep.t1);
        log << "ep toy: smooth variant on [" << g17(cfg.ep.t0) << ", " << g17(cfg.ep.t1)
            << "] is "
            << (verdict.smooth == ep::ToyVariant::signed_sin ? "signed-sin" : "abs-sin")
            << " (max residual abs-sin " << g17(verdict.abs_sin_max_residual) << ", signed-sin "
            << g17(verdict.signed_sin_max_residual) << ")\n";
        for (const auto branch : {ep::ToyBranch::one_plus, ep::ToyBranch::two_plus}) {
            const auto sol =
                ep::toy_solution(cfg.ep.c1, cfg.ep.c2, branch, cfg.ep.variant, cfg.ep.t0,
                                 cfg.ep.t1);
            const auto file =
                cfg.out_dir / ("ep_toy_branch" + std::string(branch == ep::ToyBranch::one_plus
                                                                  ? "1p"
                                                                  : "2p") +
                               ".csv");
            write_ep_csv(file, sol, hs.M0, hs.Om0sq, cfg.ep.t0, cfg.ep.t1, cfg.ep.step);
            log << "  wrote " << file.string() << "\n";
        }
        return kExitOk;
    }

    const auto sol = solve_ep(cfg, hs);
    const auto file = cfg.out_dir / "ep_numeric.csv";
    write_ep_csv(file, sol, hs.M0, hs.Om0sq, cfg.ep.t0, cfg.ep.t1, cfg.ep.step);
    log << "ep numeric: wrote " << file.string() << "\n";
    return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
    const auto hs = hermitian_signals(cfg);
    const auto sol = solve_ep(cfg, hs);
    states::ModeSeries series(sol, hs.M0, hs.Om0sq);

    const double t0 = cfg.ep.t0, t1 = cfg.ep.t1;
    write_ep_csv(cfg.out_dir / "evolve_ep.csv", sol, hs.M0, hs.Om0sq, t0, t1, cfg.ep.step);

    // phases for the ground level on a coarse grid
    {
        auto os = open_out(cfg.out_dir / "evolve_phases.csv");
        os << "t,theta_d,theta_g_im,theta_g_im_closed\n";
        const int nt = cfg.density_nt;
        for (int i = 0; i < nt; ++i) {
            const double t = t0 + (t1 - t0) * i / (nt - 1);
            const auto tg = series.theta_g(0, t);
            os << g17(t) << ',' << g17(series.theta_d(0, t)) << ',' << g17(tg.imag()) << ','
               << g17(series.theta_g_im_closed0(t)) << "\n";
        }
    }

    // |psi_0|^2 density over (t, x)
    {
        states::PsiAssembler psi(series, {1.0});
        auto os = open_out(cfg.out_dir / "evolve_density.csv");
        os << "t,x,re_psi,im_psi,abs2\n";
        const int nt = cfg.density_nt, nx = cfg.density_nx;
        double eta_max = 0.0;
        for (int i = 0; i < nt; ++i) {
            const double t = t0 + (t1 - t0) * i / (nt - 1);
            eta_max = std::max(eta_max, sol.eval(t).eta);
        }
        const double half = 5.0 * eta_max;
        for (int i = 0; i < nt; ++i) {
            const double t = t0 + (t1 - t0) * i / (nt - 1);
            const auto ph = psi.phases_at(t);
            for (int k = 0; k < nx; ++k) {
                const double x = -half + 2.0 * half * k / (nx - 1);
                const auto v = psi.psi(x, ph);
                os << g17(t) << ',' << g17(x) << ',' << g17(v.real()) << ',' << g17(v.imag())
                   << ',' << g17(std::norm(v)) << "\n";
            }
        }
    }

    // covariance and uncertainty margins per time
    {
        auto os = open_out(cfg.out_dir / "evolve_covariance.csv");
        os << "t,V11,V22,V12,detV,rsup_margin,eta_form_margin,"
              "V11_textbook,V22_textbook,V12_textbook,detV_textbook\n";
        const int nt = cfg.density_nt;
        for (int i = 0; i < nt; ++i) {
            const double t = t0 + (t1 - t0) * i / (nt - 1);
            const auto st = series.at(t);
            const auto phys = states::covariance_physical(0, st.g);
            const double theta_im = series.theta_g(0, t).imag();
            const auto textbook = states::covariance(0, st.g, theta_im, st.M0, st.etadot, st.eta);
            const auto r1 = states::rsup_check(phys);
            const auto r2 = states::rsup_eta_form(st.M0, st.eta, st.etadot);
            os << g17(t) << ',' << g17(phys.V11) << ',' << g17(phys.V22) << ',' << g17(phys.V12)
               << ',' << g17(phys.det()) << ',' << g17(r1.margin) << ',' << g17(r2.margin) << ','
               << g17(textbook.V11) << ',' << g17(textbook.V22) << ',' << g17(textbook.V12) << ','
               << g17(textbook.det()) << "\n";
        }
    }
    log << "evolve: wrote evolve_ep.csv, evolve_phases.csv, evolve_density.csv, "
           "evolve_covariance.csv under "
        << cfg.out_dir.string() << "\n";
    return kExitOk;
}

int cmd_wigner(const RunConfig& cfg, bool oracle_check, std::ostream& log) {
    if (cfg.times.empty()) throw ConfigError("wigner: empty time list");
    // widen the pipeline window so every requested time is covered
    RunConfig wide = cfg;
    wide.ep.t0 = std::min(cfg.ep.t0, *std::min_element(cfg.times.begin(), cfg.times.end()));
    wide.ep.t1 = std::max(cfg.ep.t1, *std::max_element(cfg.times.begin(), cfg.times.end()));
    const auto hs = hermitian_signals(wide);
    const ep::EPSolution sol = solve_ep(wide, hs);
    states::ModeSeries series(sol, hs.M0, hs.Om0sq);
    const wigner::CatSpec cat{cfg.cat_x0, cfg.cat_p0};

    auto origin_csv = open_out(cfg.out_dir / "wigner_origin.csv");
    origin_csv << "t,W00\n";
    double worst_dev = 0.0;
    for (double t : cfg.times) {
        const auto g = series.gmode(t);
        const auto bounds = wigner::default_bounds(g, cat);
        auto grid = wigner::wigner_grid(g, cat, cfg.grid_nx, cfg.grid_np, bounds, t);
        auto os = open_out(cfg.out_dir / ("wigner_t" + time_tag(t) + ".csv"));
        wigner::write_wigner_csv(os, grid);
        const double w00 = wigner::origin_interference(g, cat);
        origin_csv << g17(t) << ',' << g17(w00) << "\n";
        log << "wigner t = " << g17(t) << ": W(0,0) = " << g17(w00) << "\n";

        if (oracle_check) {
            // spot-check the closed form against the Fourier oracle
            double dev = 0.0;
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) {
                    const double x = bounds.x_lo + (bounds.x_hi - bounds.x_lo) * i / 4.0;
                    const double p = bounds.p_lo + (bounds.p_hi - bounds.p_lo) * j / 4.0;
                    dev = std::max(dev, std::abs(wigner::wigner_closed(x, p, g, cat) -
                                                 wigner::wigner_numeric(x, p, g, cat)));
                }
            worst_dev = std::max(worst_dev, dev);
            log << "  oracle check: max |closed - numeric| = " << g17(dev) << "\n";
        }
    }
    if (oracle_check) {
        log << "oracle check overall: " << g17(worst_dev) << "\n";
        if (worst_dev > cfg.tol.oracle)
            throw AccuracyError("wigner oracle deviation above tolerance", worst_dev,
                                cfg.tol.oracle);
    }
    return kExitOk;
}

int cmd_figures(const RunConfig& cfg, std::ostream& log) {
    cmd_pt_region({0.0, 1.0}, {0.0, 1.0}, 201, cfg.out_dir / "pt_region.csv", log);
    cmd_metric_solve(cfg, cfg.ep.t0, log);
    cmd_ep(cfg, log);
    cmd_evolve(cfg, log);
    cmd_wigner(cfg, false, log);
    log << "figures: all outputs under " << cfg.out_dir.string() << "\n";
    return kExitOk;
}

int run_guarded(const std::function<int()>& body, std::ostream& log) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AccuracyError& e) {
        log << "accuracy failure: " << e.what() << "\n";
        return kExitAccuracy;
    } catch (const ConvergenceError& e) {
        log << "accuracy failure: " << e.what() << "\n";
        return kExitAccuracy;
    } catch (const DomainError& e) {
        log << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const SingularityError& e) {
        log << "domain error: " << e.what() << " (reached t = " << e.reached_time << ")\n";
        return kExitDomain;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace ptamp::cli
