#include "ohmic/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ohmic/parallel.hpp"

namespace ohmic {

namespace {

struct Variation {
    double positive = 0.0;  ///< sum of rises
    double total = 0.0;     ///< sum of |changes|
};

// Cubic Hermite interpolant on one step, parameterised by u in [0, 1].
struct HermiteStep {
    double p0, p1, m0, m1;  // end values and end slopes (already scaled by h)

    double value(double u) const {
        const double u2 = u * u;
        const double u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
    }

    // Roots of the derivative a u^2 + b u + c inside (0, 1), ascending.
    std::array<double, 2> turning_points(std::size_t& count) const {
        const double a = 6.0 * (p0 - p1) + 3.0 * (m0 + m1);
        const double b = -6.0 * (p0 - p1) - 4.0 * m0 - 2.0 * m1;
        const double c = m0;
        std::array<double, 2> roots{};
        count = 0;
        auto keep = [&](double u) {
            if (u > 0.0 && u < 1.0) roots[count++] = u;
        };
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
        if (scale == 0.0) return roots;
        if (std::abs(a) <= 1e-14 * scale) {
            if (b != 0.0) keep(-c / b);
        } else {
            const double disc = b * b - 4.0 * a * c;
            if (disc > 0.0) {
                const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
                double r1 = q / a;
                double r2 = q != 0.0 ? c / q : r1;
                if (r1 > r2) std::swap(r1, r2);
                keep(r1);
                if (r2 != r1) keep(r2);
            }
        }
        return roots;
    }
};

// Positive and total variation of the piecewise-Hermite curve through
// (t_k, values[k]) with slopes[k].
Variation hermite_variation(const TimeGrid& grid, const std::vector<double>& values, const std::vector<double>& slopes) {
    Variation v;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double h = grid[k + 1] - grid[k];
        const HermiteStep step{values[k], values[k + 1], h * slopes[k], h * slopes[k + 1]};
        std::size_t n_turns = 0;
        const auto turns = step.turning_points(n_turns);
        double previous = values[k];
        auto add = [&](double next) {
            const double d = next - previous;
            if (d > 0.0) v.positive += d;
            v.total += std::abs(d);
            previous = next;
        };
        for (std::size_t i = 0; i < n_turns; ++i) add(step.value(turns[i]));
        add(values[k + 1]);
    }
    return v;
}

// Slopes of |p|^2 seen through the decoherence rate: -|p|^2 Gamma.
std::vector<double> rate_slopes(const AmplitudeTrajectory& traj) {
    const auto rates = rate_series(traj);
    std::vector<double> out(traj.size(), 0.0);
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (!rates.masked[k]) out[k] = -traj.pop[k] * rates.gamma[k];
    return out;
}

void check_density(const DensityMatrix& m, const char* name) {
    if (m.hermiticity_error() > 1e-12) throw InvalidArgument(std::string(name) + " is not Hermitian");
    if (std::abs(m.trace() - 1.0) > 1e-12) throw InvalidArgument(std::string(name) + " does not have unit trace");
}

}  // namespace

std::vector<double> trace_distance_optimal(const AmplitudeTrajectory& traj) { return traj.pop; }

double trace_distance_general(const DensityMatrix& a, const DensityMatrix& b) {
    check_density(a, "first state");
    check_density(b, "second state");
    const DensityMatrix diff{a.ee - b.ee, a.eg - b.eg, a.ge - b.ge, a.gg - b.gg};
    // Hermitian: singular values are the absolute eigenvalues.
    const auto ev = diff.eigenvalues();
    return 0.5 * (std::abs(ev[0]) + std::abs(ev[1]));
}

std::vector<double> sigma_series(const AmplitudeTrajectory& traj) {
    std::vector<double> out(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) out[k] = 2.0 * (std::conj(traj.p[k]) * traj.p_dot[k]).real();
    return out;
}

std::vector<double> sigma_sign_changes(const AmplitudeTrajectory& traj) {
    const auto sigma = sigma_series(traj);
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
        const double a = sigma[k];
        const double b = sigma[k + 1];
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
            const double t0 = traj.grid[k];
            const double t1 = traj.grid[k + 1];
            out.push_back(t0 + (t1 - t0) * a / (a - b));
        }
    }
    return out;
}

double gamma_sigma_consistency(const AmplitudeTrajectory& traj) {
    const auto rates = rate_series(traj);
    const auto sigma = sigma_series(traj);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (rates.masked[k]) continue;
        worst = std::max(worst, std::abs(rates.gamma[k] + sigma[k] / traj.pop[k]));
    }
    return worst;
}

double NonMarkovianity::residual() const { return std::abs(from_decoherence_rate - from_total_variation); }

double total_variation(const AmplitudeTrajectory& traj) {
    return hermite_variation(traj.grid, traj.pop, sigma_series(traj)).total;
}

NonMarkovianity non_markovianity(const AmplitudeTrajectory& traj) {
    NonMarkovianity n;
    n.from_decoherence_rate = hermite_variation(traj.grid, traj.pop, rate_slopes(traj)).positive;
    const double variation = total_variation(traj);
    n.from_total_variation = std::max(0.0, 0.5 * (variation + traj.pop.back() - 1.0));
    return n;
}

double qslt_ratio(const AmplitudeTrajectory& traj) {
    const double variation = total_variation(traj);
    if (!(variation > kVariationFloor)) throw UndefinedRatio("|p(t)|^2 is constant on [0, tau]; no evolution to bound");
    return (1.0 - traj.pop.back()) / variation;
}

double qslt_ratio_from_non_markovianity(const AmplitudeTrajectory& traj) {
    const double loss = 1.0 - traj.pop.back();
    const double denom = loss + 2.0 * non_markovianity(traj).from_total_variation;
    if (!(denom > kVariationFloor)) throw UndefinedRatio("|p(t)|^2 is constant on [0, tau]; no evolution to bound");
    return loss / denom;
}

double qslt_identity_residual(const AmplitudeTrajectory& traj) {
    return std::abs(qslt_ratio(traj) - qslt_ratio_from_non_markovianity(traj));
}

MeasureReport measure(const AmplitudeTrajectory& traj) {
    MeasureReport rep;
    const auto n = non_markovianity(traj);
    rep.n_markov = n.from_total_variation;
    rep.n_rate = n.from_decoherence_rate;
    rep.residual_n = n.residual();
    rep.pop_tau = traj.pop.back();
    rep.tau = traj.horizon();
    try {
        rep.qsl_ratio = qslt_ratio(traj);
        rep.residual_qsl = std::abs(rep.qsl_ratio - qslt_ratio_from_non_markovianity(traj));
    } catch (const UndefinedRatio&) {
        rep.qsl_defined = false;
        rep.qsl_ratio = std::numeric_limits<double>::quiet_NaN();
        rep.residual_qsl = 0.0;
    }
    return rep;
}

double non_markovianity_at(double coupling, const ReservoirSpec& r, double omega0, const TimeGrid& grid, RateModel model) {
    const auto traj = amplitude(SystemSpec{omega0, coupling}, r, grid, model);
    return non_markovianity(traj).from_total_variation;
}

CriticalScan critical_coupling(const ReservoirSpec& r, double omega0, const TimeGrid& grid, const CriticalOptions& opt) {
    r.validate();
    if (!(opt.coupling_lo >= 0.0 && opt.coupling_hi > opt.coupling_lo))
        throw InvalidArgument("coupling range must satisfy 0 <= lo < hi");
    if (!(opt.coarse_step > 0.0) || !(opt.bracket_width > 0.0)) throw InvalidArgument("scan steps must be positive");

    CriticalScan scan;
    scan.reservoir = r;
    scan.omega_c_ratio = r.omega_c / omega0;

    const auto intervals = static_cast<std::size_t>(std::ceil((opt.coupling_hi - opt.coupling_lo) / opt.coarse_step - 1e-9));
    const std::size_t count = std::max<std::size_t>(intervals, 1) + 1;
    scan.coarse.resize(count);
    parallel_for(count, opt.threads, [&](std::size_t i) {
        const double coupling =
            i + 1 == count ? opt.coupling_hi : opt.coupling_lo + opt.coarse_step * static_cast<double>(i);
        scan.coarse[i] = {coupling, non_markovianity_at(coupling, r, omega0, grid, opt.model)};
    });

    auto above = [&](double n) { return n > opt.eps_n; };
    for (std::size_t i = 0; i + 1 < count; ++i) {
        const bool a = above(scan.coarse[i].second);
        const bool b = above(scan.coarse[i + 1].second);
        if (a != b) scan.transitions.push_back({scan.coarse[i].first, scan.coarse[i + 1].first, b});
    }

    const auto rising = std::find_if(scan.transitions.rbegin(), scan.transitions.rend(),
                                     [](const Transition& t) { return t.rising; });
    if (rising == scan.transitions.rend()) throw CriticalNotFound(std::move(scan));

    double lo = rising->lo;
    double hi = rising->hi;
    double n_hi = 0.0;
    for (const auto& [coupling, n] : scan.coarse)
        if (coupling == hi) n_hi = n;
    while (hi - lo > opt.bracket_width) {
        const double mid = 0.5 * (lo + hi);
        const double n_mid = non_markovianity_at(mid, r, omega0, grid, opt.model);
        if (above(n_mid)) {
            hi = mid;
            n_hi = n_mid;
        } else {
            lo = mid;
        }
    }
    scan.bracket_lo = lo;
    scan.bracket_hi = hi;
    scan.critical_coupling = 0.5 * (lo + hi);
    scan.n_at_probe = n_hi;
    scan.found = true;
    return scan;
}

}  // namespace ohmic
