#include "ptamp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include "ptamp/errors.hpp"
#include "ptamp/io.hpp"
#include "ptamp/numerics/quad.hpp"

namespace ptamp::wigner {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

cplx psi_tilde(double p, cplx g, double eta, double x0) {
    if (!(g.real() > 0.0)) throw NonNormalizable("psi_tilde: Re g must be positive");
    const double eta2 = eta * eta;
    const cplx kg = std::pow(g / (kPi * eta2 * eta2 * std::norm(g)), 0.25);
    return kg / std::sqrt(g) * std::exp(-p * p / (2.0 * g) - cplx(0.0, p * x0));
}

cplx cat_state(double p, cplx g, const CatSpec& spec) {
    const double eta = 1.0 / std::sqrt(g.real());
    return (psi_tilde(p - spec.p0, g, eta, spec.x0) + psi_tilde(p + spec.p0, g, eta, -spec.x0)) /
           std::sqrt(2.0);
}

double wigner_closed(double x, double p, cplx g, const CatSpec& spec, CosineArg arg) {
    const double gr = g.real(), gi = g.imag();
    if (!(gr > 0.0)) throw NonNormalizable("wigner_closed: Re g must be positive");
    const double ga = std::abs(g);
    const double ga2 = ga * ga;
    const double x0 = spec.x0, p0 = spec.p0;

    const double lobe1 = std::exp(-(p - p0) * (p - p0) / gr - ga2 * (x + x0) * (x + x0) / gr +
                                  2.0 * gi * (p - p0) * (x + x0) / gr);
    const double lobe2 = std::exp(-(p + p0) * (p + p0) / gr - ga2 * (x - x0) * (x - x0) / gr +
                                  2.0 * gi * (p + p0) * (x - x0) / gr);
    const double cos_arg =
        arg == CosineArg::corrected ? 2.0 * x0 * p + 2.0 * p0 * x : 2.0 * x0 * p + 2.0 * p * x0;
    const double cross = 2.0 *
                         std::exp(-p * p / gr - gr * x * x - gi * (gi * x * x - 2.0 * x * p) / gr) *
                         std::cos(cos_arg);
    return std::sqrt(gr / (kTwoPi * ga)) * (lobe1 + cross + lobe2);
}

cplx wigner_numeric_full(double x, double p, cplx g, const CatSpec& spec, double tol) {
    const double gr = g.real();
    if (!(gr > 0.0)) throw NonNormalizable("wigner_numeric: Re g must be positive");
    // each factor decays like exp(-gr q^2/(2|g|^2)) around its center
    const double s = std::abs(g) / std::sqrt(gr);
    const double reach = 2.0 * (std::abs(spec.p0) + 8.0 * s + std::abs(p)) + 2.0;
    auto integrand = [&](double pp) {
        return cat_state(p - 0.5 * pp, g, spec) * std::conj(cat_state(p + 0.5 * pp, g, spec)) *
               std::exp(cplx(0.0, pp * x));
    };
    return num::quad_complex(integrand, -reach, reach, tol) / std::sqrt(kTwoPi);
}

double wigner_numeric(double x, double p, cplx g, const CatSpec& spec, double tol) {
    return wigner_numeric_full(x, p, g, spec, tol).real();
}

Rect default_bounds(cplx g, const CatSpec& spec) {
    const double gr = g.real();
    const double ga2 = std::norm(g);
    const double sigma2 = std::max({1.0 / (2.0 * gr), gr / (2.0 * ga2), gr / 2.0});
    const double pad = 6.0 * std::sqrt(sigma2);
    return Rect{-(std::abs(spec.x0) + pad), std::abs(spec.x0) + pad, -(std::abs(spec.p0) + pad),
                std::abs(spec.p0) + pad};
}

WignerGrid wigner_grid(cplx g, const CatSpec& spec, int nx, int np, const Rect& bounds,
                       double t_stamp, bool parallel) {
    if (nx < 16 || np < 16) throw InvalidArgument("wigner_grid: nx, np >= 16 required");
    WignerGrid grid;
    grid.t = t_stamp;
    grid.nx = nx;
    grid.np = np;
    grid.x.resize(static_cast<std::size_t>(nx));
    grid.p.resize(static_cast<std::size_t>(np));
    for (int i = 0; i < nx; ++i)
        grid.x[static_cast<std::size_t>(i)] =
            bounds.x_lo + (bounds.x_hi - bounds.x_lo) * i / (nx - 1);
    for (int j = 0; j < np; ++j)
        grid.p[static_cast<std::size_t>(j)] =
            bounds.p_lo + (bounds.p_hi - bounds.p_lo) * j / (np - 1);
    grid.w.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(np));

    auto fill_rows = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i)
            for (int j = 0; j < np; ++j)
                grid.w[static_cast<std::size_t>(i) * static_cast<std::size_t>(np) +
                       static_cast<std::size_t>(j)] =
                    wigner_closed(grid.x[static_cast<std::size_t>(i)],
                                  grid.p[static_cast<std::size_t>(j)], g, spec);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (!parallel || hw == 1 || nx < 32) {
        fill_rows(0, nx);
    } else {
        const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
        std::vector<std::future<void>> jobs;
        const int chunk = (nx + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(nx, lo + chunk);
            if (lo >= hi) break;
            jobs.push_back(std::async(std::launch::async, fill_rows, lo, hi));
        }
        for (auto& j : jobs) j.get();
    }
    return grid;
}

void normalize_grid(WignerGrid& grid) {
    // trapezoid weights over both axes
    double total = 0.0;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.np; ++j) {
            const double wx = (i == 0 || i == grid.nx - 1) ? 0.5 : 1.0;
            const double wp = (j == 0 || j == grid.np - 1) ? 0.5 : 1.0;
            total += wx * wp * grid.at(i, j);
        }
    const double dx = (grid.x.back() - grid.x.front()) / (grid.nx - 1);
    const double dp = (grid.p.back() - grid.p.front()) / (grid.np - 1);
    total *= dx * dp;
    if (total == 0.0) throw DomainError("normalize_grid: zero integral");
    for (auto& v : grid.w) v /= total;
}

double origin_interference(cplx g, const CatSpec& spec) {
    return wigner_closed(0.0, 0.0, g, spec);
}

void write_wigner_csv(std::ostream& os, const WignerGrid& grid) {
    os << "# t=" << io::g17(grid.t) << " nx=" << grid.nx << " np=" << grid.np << "\n";
    os << "x,p,W\n";
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.np; ++j)
            os << io::g17(grid.x[static_cast<std::size_t>(i)]) << ','
               << io::g17(grid.p[static_cast<std::size_t>(j)]) << ',' << io::g17(grid.at(i, j))
               << "\n";
}

}  // namespace ptamp::wigner
