#include "ptamp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptamp/errors.hpp"

namespace ptamp::signals {

ParameterSignal ParameterSignal::constant(double value) {
    ParameterSignal s;
    s.kind_ = SignalKind::constant;
    s.a_ = value;
    return s;
}

ParameterSignal ParameterSignal::cosine(double amp, double freq, double phase) {
    ParameterSignal s;
    s.kind_ = SignalKind::cosine;
    s.a_ = amp;
    s.b_ = freq;
    s.c_ = phase;
    return s;
}

ParameterSignal ParameterSignal::toy_power(double coeff, double power) {
    ParameterSignal s;
    s.kind_ = SignalKind::toy_power;
    s.a_ = coeff;
    s.b_ = power;
    const bool whole = power >= 0.0 && power == std::floor(power);
    if (!whole) s.t_min_ = 0.0;  // open at zero in practice
    return s;
}

ParameterSignal ParameterSignal::table(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.size() < 2)
        throw InvalidArgument("ParameterSignal::table: need matching grids with >= 2 nodes");
    ParameterSignal s;
    s.kind_ = SignalKind::tabulated;
    s.t_min_ = t.front();
    s.t_max_ = t.back();
    s.table_ = std::make_shared<num::Trajectory>(
        num::Trajectory::from_samples(std::move(t), std::move(v), 1));
    return s;
}

void ParameterSignal::check_domain(double t) const {
    if (t < t_min_ || t > t_max_ || (kind_ == SignalKind::toy_power && t_min_ == 0.0 && t <= 0.0)) {
        std::ostringstream msg;
        msg << "ParameterSignal: t=" << t << " outside domain [" << t_min_ << ", " << t_max_
            << "]";
        throw InvalidArgument(msg.str());
    }
}

double ParameterSignal::base_value(double t) const {
    switch (kind_) {
        case SignalKind::constant:
            return a_;
        case SignalKind::cosine:
            return a_ * std::cos(b_ * t + c_);
        case SignalKind::toy_power:
            return a_ * std::pow(t, b_);
        case SignalKind::tabulated:
            return table_->eval_component(t, 0);
    }
    return 0.0;
}

double ParameterSignal::base_derivative(double t) const {
    switch (kind_) {
        case SignalKind::constant:
            return 0.0;
        case SignalKind::cosine:
            return -a_ * b_ * std::sin(b_ * t + c_);
        case SignalKind::toy_power:
            return b_ == 0.0 ? 0.0 : a_ * b_ * std::pow(t, b_ - 1.0);
        case SignalKind::tabulated:
            return table_->eval_derivative(t)[0];
    }
    return 0.0;
}

double ParameterSignal::operator()(double t) const {
    check_domain(t);
    return offset_ + scale_ * base_value(t);
}

double ParameterSignal::derivative(double t) const {
    check_domain(t);
    return scale_ * base_derivative(t);
}

ParameterSignal ParameterSignal::affine(double offset, double scale) const {
    ParameterSignal s = *this;
    s.offset_ = offset + scale * offset_;
    s.scale_ = scale * scale_;
    return s;
}

double ParameterSignal::evenness_defect(int samples) const {
    const double span = std::min(std::abs(t_min_), std::abs(t_max_));
    if (!(span > 0.0) || !std::isfinite(span)) {
        // unbounded or one-sided domain: probe a unit window when possible
        if (t_min_ > 0.0 || t_max_ < 0.0) return std::numeric_limits<double>::quiet_NaN();
    }
    const double w = std::isfinite(span) && span > 0.0 ? span : 1.0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = w * (i + 0.5) / samples;
        worst = std::max(worst, std::abs((*this)(t) - (*this)(-t)));
    }
    return worst;
}

ParameterSignal ParameterSignal::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("signal descriptor: expected object with \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    static const std::vector<std::string> common{"kind", "offset", "scale"};
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            if (std::find(common.begin(), common.end(), key) != common.end()) continue;
            if (std::find_if(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; }) == allowed.end())
                throw ConfigError("signal descriptor: unknown key \"" + key + "\"");
        }
    };
    ParameterSignal s;
    if (kind == "constant") {
        reject_unknown({"value"});
        s = constant(j.at("value").get<double>());
    } else if (kind == "cosine") {
        reject_unknown({"amp", "freq", "phase"});
        s = cosine(j.at("amp").get<double>(), j.at("freq").get<double>(),
                   j.value("phase", 0.0));
    } else if (kind == "toy") {
        reject_unknown({"coeff", "power"});
        s = toy_power(j.at("coeff").get<double>(), j.at("power").get<double>());
    } else if (kind == "table") {
        reject_unknown({"t", "v"});
        s = table(j.at("t").get<std::vector<double>>(), j.at("v").get<std::vector<double>>());
    } else {
        throw ConfigError("signal descriptor: unknown kind \"" + kind + "\"");
    }
    if (j.contains("offset") || j.contains("scale"))
        s = s.affine(j.value("offset", 0.0), j.value("scale", 1.0));
    return s;
}

nlohmann::json ParameterSignal::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case SignalKind::constant:
            j = {{"kind", "constant"}, {"value", a_}};
            break;
        case SignalKind::cosine:
            j = {{"kind", "cosine"}, {"amp", a_}, {"freq", b_}, {"phase", c_}};
            break;
        case SignalKind::toy_power:
            j = {{"kind", "toy"}, {"coeff", a_}, {"power", b_}};
            break;
        case SignalKind::tabulated: {
            std::vector<double> vals;
            for (double t : table_->times()) vals.push_back(table_->eval_component(t, 0));
            j = {{"kind", "table"}, {"t", table_->times()}, {"v", vals}};
            break;
        }
    }
    if (offset_ != 0.0) j["offset"] = offset_;
    if (scale_ != 1.0) j["scale"] = scale_;
    return j;
}

double AmplifierSpec::t_min() const {
    return std::max({omega.t_min(), alpha.t_min(), beta.t_min(), mass.t_min()});
}

double AmplifierSpec::t_max() const {
    return std::min({omega.t_max(), alpha.t_max(), beta.t_max(), mass.t_max()});
}

void AmplifierSpec::validate(double t_lo, double t_hi, int samples) const {
    if (!(t_hi > t_lo)) throw InvalidArgument("AmplifierSpec: empty validation window");
    for (int i = 0; i <= samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / samples;
        if (!(mass(t) > 0.0)) throw DomainError("AmplifierSpec: mass must stay positive");
        if (!(omega(t) > 0.0)) throw DomainError("AmplifierSpec: omega must stay positive");
    }
}

AmplifierSpec AmplifierSpec::from_json(const nlohmann::json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key != "omega" && key != "alpha" && key != "beta" && key != "mass")
            throw ConfigError("amplifier spec: unknown key \"" + key + "\"");
    }
    return AmplifierSpec{ParameterSignal::from_json(j.at("omega")),
                         ParameterSignal::from_json(j.at("alpha")),
                         ParameterSignal::from_json(j.at("beta")),
                         ParameterSignal::from_json(j.at("mass"))};
}

nlohmann::json AmplifierSpec::to_json() const {
    return {{"omega", omega.to_json()},
            {"alpha", alpha.to_json()},
            {"beta", beta.to_json()},
            {"mass", mass.to_json()}};
}

EquivalentForm equivalent_form(const AmplifierSpec& spec, double t) {
    const double om = spec.omega(t);
    const double al = spec.alpha(t);
    const double be = spec.beta(t);
    const double m = spec.mass(t);
    const double nu_p = al + be;
    const double nu_m = al - be;
    if (std::abs(om - nu_p) < 1e-14 * std::max(1.0, std::abs(om)))
        throw DegenerateMassError("equivalent_form: omega equals alpha+beta, mass diverges");
    const double Minv = (1.0 - nu_p / om) / m;
    return EquivalentForm{1.0 / Minv, om * om - nu_p * nu_p, nu_p, nu_m};
}

bool pt_unbroken(double h11, double h22, std::complex<double> h12, std::complex<double> h21) {
    if (!std::isfinite(h11) || !std::isfinite(h22) || !std::isfinite(h12.real()) ||
        !std::isfinite(h12.imag()) || !std::isfinite(h21.real()) || !std::isfinite(h21.imag()))
        throw InvalidArgument("pt_unbroken: non-finite entry");
    const double tau_re = h11 + h22;
    const double delta_re = h11 * h22 - (h12 * h21).real();
    return tau_re * tau_re - 4.0 * delta_re >= 0.0;
}

BilinearEntries pt_bilinear_unit(double alpha, double beta) {
    // traceless form: coupling product in one entry, mass-positivity
    // factor in the other, so the test value is 4 alpha beta (1-alpha-beta)
    // with no diagonal terms that could absorb a near-zero product
    return BilinearEntries{0.0, 0.0, {alpha * beta, 0.0}, {1.0 - alpha - beta, 0.0}};
}

PtRegionGrid pt_region_scan(std::pair<double, double> alpha_range,
                            std::pair<double, double> beta_range, int n) {
    if (n < 2) throw InvalidArgument("pt_region_scan: n >= 2 required");
    PtRegionGrid grid;
    grid.alpha.resize(static_cast<std::size_t>(n));
    grid.beta.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid.alpha[static_cast<std::size_t>(i)] =
            alpha_range.first + (alpha_range.second - alpha_range.first) * i / (n - 1);
        grid.beta[static_cast<std::size_t>(i)] =
            beta_range.first + (beta_range.second - beta_range.first) * i / (n - 1);
    }
    grid.unbroken.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto e = pt_bilinear_unit(grid.alpha[static_cast<std::size_t>(i)],
                                            grid.beta[static_cast<std::size_t>(j)]);
            grid.unbroken[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(j)] =
                pt_unbroken(e.h11, e.h22, e.h12, e.h21) ? 1 : 0;
        }
    return grid;
}

ModulatedSpec modulated_spec(double m0, double omega0, double eps, const ParameterSignal& f) {
    const bool warn = std::abs(eps) > 0.2;
    AmplifierSpec spec{
        f.affine(omega0, omega0 * eps / 2.0),       // omega0 (1 + eps f/2)
        f.affine(0.0, omega0 * eps / 2.0),          // alpha = omega0 eps f/2
        f.affine(0.0, omega0 * eps / 2.0),          // beta  = alpha
        f.affine(m0, m0 * eps),                     // m0 (1 + eps f)
    };
    return ModulatedSpec{std::move(spec), warn};
}

}  // namespace ptamp::signals
