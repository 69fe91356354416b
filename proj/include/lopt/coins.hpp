/*
 * Quantum-walk coin family and coin realization on reversible devices.
 *
 *   coin()               Hadamard (d = 2^k tensor powers), Grover
 *                        (2/d - 1 diagonal, 2/d off-diagonal), DFT
 *                        (omega = e^{-2 pi i / d})
 *   verify_realization() builds a reversible device from a phase record and
 *                        compares against a target up to global phase
 *   fit_phases()         derivative-free (Nelder-Mead) multi-start search for
 *                        phases realizing a target; refuses targets that are
 *                        not self-transpose, since transpose-sandwich devices
 *                        reach only the symmetric unitaries
 *
 * Residual metric everywhere: max-norm after closed-form global-phase
 * alignment at the target's largest-magnitude entry.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lopt/devices.hpp"
#include "lopt/linalg.hpp"

namespace lopt {

enum class CoinKind { Hadamard, Grover, Dft };

struct CoinSpec {
    CoinKind kind = CoinKind::Grover;
    std::size_t d = 2;
};

inline CMatrix coin(const CoinSpec& spec) {
    const std::size_t d = spec.d;
    if (d < 2) throw std::invalid_argument("coin: dimension must be >= 2");
    switch (spec.kind) {
        case CoinKind::Hadamard: {
            if ((d & (d - 1)) != 0)
                throw std::invalid_argument("coin: Hadamard requires a power-of-two dimension, got " +
                                            std::to_string(d));
            const double s = 1.0 / std::sqrt(2.0);
            CMatrix h2{{s, s}, {s, -s}};
            CMatrix h = h2;
            for (std::size_t k = 2; k < d; k *= 2) h = kron(h, h2);
            return h;
        }
        case CoinKind::Grover: {
            CMatrix c(d, d);
            const double off = 2.0 / static_cast<double>(d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) c(i, j) = (i == j) ? off - 1.0 : off;
            return c;
        }
        case CoinKind::Dft: {
            CMatrix f(d, d);
            const double s = 1.0 / std::sqrt(static_cast<double>(d));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    f(i, j) = std::polar(s, -2.0 * kPi * static_cast<double>(i * j) /
                                                 static_cast<double>(d));
            return f;
        }
    }
    throw std::logic_error("coin: unknown kind");
}

// ---------------------------------------------------------------------------
// realization problems
// ---------------------------------------------------------------------------

enum class DeviceFamily { ReversibleTritter, ReversibleQuarter, Unbiased3Port, Unbiased4Port };

inline const char* device_family_name(DeviceFamily f) {
    switch (f) {
        case DeviceFamily::ReversibleTritter: return "reversible_tritter";
        case DeviceFamily::ReversibleQuarter: return "reversible_quarter";
        case DeviceFamily::Unbiased3Port: return "unbiased_3port";
        case DeviceFamily::Unbiased4Port: return "unbiased_4port";
    }
    return "?";
}

inline std::size_t device_family_dim(DeviceFamily f) {
    return (f == DeviceFamily::ReversibleQuarter || f == DeviceFamily::Unbiased4Port) ? 4 : 3;
}

struct RealizationProblem {
    DeviceFamily family = DeviceFamily::Unbiased3Port;
    CMatrix target;  // unitary, self-transpose
};

// Free parameters of one family, in a fixed layout:
//   mirrors: one phase per port
//   ports:   one entry/exit phase per port (traversed twice)
//   kz1:     coupling length (reversible tritter and quarter)
//   kz2:     diagonal coupling length (reversible quarter only)
struct PhaseSettings {
    std::vector<double> mirrors;
    std::vector<double> ports;
    double kz1 = 0.0;
    double kz2 = 0.0;
};

namespace detail {

inline void check_arity(DeviceFamily fam, const PhaseSettings& p) {
    const std::size_t d = device_family_dim(fam);
    if (p.mirrors.size() != d)
        throw std::invalid_argument(std::string("verify_realization: ") + device_family_name(fam) +
                                    " needs " + std::to_string(d) + " mirror phases, got " +
                                    std::to_string(p.mirrors.size()));
    if (!p.ports.empty() && p.ports.size() != d)
        throw std::invalid_argument(std::string("verify_realization: ") + device_family_name(fam) +
                                    " needs " + std::to_string(d) + " port phases, got " +
                                    std::to_string(p.ports.size()));
}

inline std::size_t num_free_params(DeviceFamily fam) {
    switch (fam) {
        case DeviceFamily::ReversibleTritter: return 3 + 3 + 1;
        case DeviceFamily::ReversibleQuarter: return 4 + 4 + 2;
        case DeviceFamily::Unbiased3Port: return 3 + 3;
        case DeviceFamily::Unbiased4Port: return 4 + 4;
    }
    return 0;
}

inline PhaseSettings unpack_params(DeviceFamily fam, const std::vector<double>& x) {
    const std::size_t d = device_family_dim(fam);
    PhaseSettings p;
    p.mirrors.assign(x.begin(), x.begin() + d);
    p.ports.assign(x.begin() + d, x.begin() + 2 * d);
    std::size_t k = 2 * d;
    if (fam == DeviceFamily::ReversibleTritter) p.kz1 = x[k];
    if (fam == DeviceFamily::ReversibleQuarter) { p.kz1 = x[k]; p.kz2 = x[k + 1]; }
    return p;
}

}  // namespace detail

// Build the device matrix for a family from a phase record (port phases
// applied on both sides; empty ports means no shifters).
inline CMatrix realize_device(DeviceFamily fam, const PhaseSettings& p) {
    detail::check_arity(fam, p);
    CMatrix core;
    switch (fam) {
        case DeviceFamily::ReversibleTritter:
            core = reversible_tritter(CouplerSpec::from_kz(p.kz1), MirrorPhases(p.mirrors));
            break;
        case DeviceFamily::ReversibleQuarter:
            core = reversible_quarter(CouplerSpec::from_kz2(p.kz1, p.kz2), MirrorPhases(p.mirrors));
            break;
        case DeviceFamily::Unbiased3Port:
            core = unbiased_multiport_closed_form(3, MirrorPhases(p.mirrors));
            break;
        case DeviceFamily::Unbiased4Port:
            core = unbiased_multiport_closed_form(4, MirrorPhases(p.mirrors));
            break;
    }
    if (p.ports.empty()) return core;
    return apply_port_phases(core, PortPhases(p.ports));
}

struct RealizationCheck {
    bool ok = false;
    double residual = HUGE_VAL;
};

inline RealizationCheck verify_realization(const RealizationProblem& prob, const PhaseSettings& p,
                                           Tolerance tol = Tolerance{1e-9}) {
    const std::size_t d = device_family_dim(prob.family);
    if (prob.target.rows() != d || prob.target.cols() != d)
        throw std::invalid_argument("verify_realization: target shape " + prob.target.shape_str() +
                                    " does not match family dimension " + std::to_string(d));
    const CMatrix dev = realize_device(prob.family, p);
    const double r = global_phase_residual(dev, prob.target);
    return {r <= tol.eps, r};
}

// ---------------------------------------------------------------------------
// derivative-free phase fitting
// ---------------------------------------------------------------------------

struct FitResult {
    PhaseSettings phases;
    double residual = HUGE_VAL;
    bool converged = false;
    std::uint64_t seed = 0;
    std::size_t evaluations = 0;
};

namespace detail {

inline double wrap_2pi(double x) {
    double y = std::fmod(x, 2.0 * kPi);
    if (y < 0) y += 2.0 * kPi;
    return y;
}

// Plain Nelder-Mead on [0, 2pi)^n (wrapping applied when evaluating).
// Function evaluations only; no gradients.
template <typename F>
std::pair<std::vector<double>, double> nelder_mead(F fn, std::vector<double> x0,
                                                   std::size_t max_evals, std::size_t& evals,
                                                   double simplex_scale = 0.5) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> val(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += simplex_scale;
    for (std::size_t i = 0; i <= n; ++i) { val[i] = fn(pts[i]); ++evals; }
    while (evals < max_evals) {
        std::vector<std::size_t> ord(n + 1);
        for (std::size_t i = 0; i <= n; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];
        if (val[worst] - val[best] < 1e-14) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
        auto lerp = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (centroid[k] - pts[worst][k]);
            return p;
        };
        std::vector<double> xr = lerp(1.0);
        double fr = fn(xr); ++evals;
        if (fr < val[best]) {
            std::vector<double> xe = lerp(2.0);
            double fe = fn(xe); ++evals;
            if (fe < fr) { pts[worst] = xe; val[worst] = fe; }
            else { pts[worst] = xr; val[worst] = fr; }
        } else if (fr < val[second]) {
            pts[worst] = xr; val[worst] = fr;
        } else {
            std::vector<double> xc = lerp(fr < val[worst] ? 0.5 : -0.5);
            double fc = fn(xc); ++evals;
            if (fc < std::min(fr, val[worst])) { pts[worst] = xc; val[worst] = fc; }
            else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k)
                        pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
                    val[i] = fn(pts[i]); ++evals;
                    if (evals >= max_evals) break;
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (val[i] < val[best]) best = i;
    return {pts[best], val[best]};
}

}  // namespace detail

// Multi-start Nelder-Mead minimization of the global-phase-aligned max-norm
// residual.  Deterministic for a fixed seed; restarts are independent and the
// merge is a pure min-reduction with a lexicographic tiebreak on the phases.
inline FitResult fit_phases(const RealizationProblem& prob, int restarts = 32, int budget = 20000,
                            std::uint64_t seed = 0x5eed) {
    const std::size_t d = device_family_dim(prob.family);
    if (prob.target.rows() != d || prob.target.cols() != d)
        throw std::invalid_argument("fit_phases: target shape does not match family dimension");
    if (unitarity_residual(prob.target) > 1e-9)
        throw std::invalid_argument("fit_phases: target is not unitary");
    const double sym_defect = self_transpose_residual(prob.target);
    if (sym_defect > 1e-10)
        throw std::invalid_argument(
            "fit_phases: target is not self-transpose (defect " + std::to_string(sym_defect) +
            "); transpose-sandwich reversible devices realize only symmetric unitary matrices");
    if (restarts < 1 || budget < 1)
        throw std::invalid_argument("fit_phases: restarts and budget must be positive");

    const std::size_t nfree = detail::num_free_params(prob.family);
    auto cost = [&](const std::vector<double>& x) {
        std::vector<double> w(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) w[i] = detail::wrap_2pi(x[i]);
        return global_phase_residual(realize_device(prob.family, detail::unpack_params(prob.family, w)),
                                     prob.target);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    FitResult out;
    out.seed = seed;
    std::vector<double> best_x;
    // keep a quarter of the budget for polishing the incumbent
    const std::size_t explore = 3 * static_cast<std::size_t>(budget) / 4;
    const std::size_t per_restart = explore / static_cast<std::size_t>(restarts);
    for (int r = 0; r < restarts && out.evaluations < explore; ++r) {
        std::vector<double> x0(nfree);
        for (double& v : x0) v = uni(rng);
        auto [x, f] = detail::nelder_mead(cost, x0, out.evaluations + std::max<std::size_t>(per_restart, 16),
                                          out.evaluations);
        for (double& v : x) v = detail::wrap_2pi(v);
        if (f < out.residual - 1e-15 ||
            (std::abs(f - out.residual) <= 1e-15 && (best_x.empty() || x < best_x))) {
            out.residual = f;
            best_x = x;
        }
        if (out.residual <= 1e-8) break;  // early out: polish cannot beat float noise usefully
    }
    // polish the incumbent with restarted, shrinking simplices (plain
    // Nelder-Mead stalls well above float precision on >6-dim landscapes)
    double scale = 0.1;
    while (!best_x.empty() && out.evaluations < static_cast<std::size_t>(budget) &&
           out.residual > 1e-10 && scale > 1e-9) {
        auto [x, f] = detail::nelder_mead(
            cost, best_x, std::min<std::size_t>(budget, out.evaluations + per_restart),
            out.evaluations, scale);
        if (f < out.residual) {
            out.residual = f;
            for (double& v : x) v = detail::wrap_2pi(v);
            best_x = x;
        } else {
            scale /= 8.0;
        }
    }
    out.phases = detail::unpack_params(prob.family, best_x);
    out.converged = out.residual <= 1e-6;
    return out;
}

}  // namespace lopt
