#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lopt/devices.hpp"

using namespace lopt;
using Catch::Approx;

namespace {

const cdouble I{0.0, 1.0};
const double s2 = 1.0 / std::sqrt(2.0);

// Independent oracle: RK4 integration of the coupled-mode system
// dA/dz = -i H A for the full transfer matrix (columns = basis inputs).
CMatrix integrate_coupled_modes(const std::vector<std::vector<double>>& h, double z,
                                int nsteps = 4000) {
    const std::size_t n = h.size();
    CMatrix u = CMatrix::identity(n);
    const double dz = z / nsteps;
    auto deriv = [&](const CMatrix& a) {
        CMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cdouble s{};
                for (std::size_t k = 0; k < n; ++k) s += h[i][k] * a(k, j);
                d(i, j) = -I * s;
            }
        return d;
    };
    auto axpy = [&](const CMatrix& a, const CMatrix& b, double w) {
        CMatrix r = a;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r(i, j) += w * b(i, j);
        return r;
    };
    for (int s = 0; s < nsteps; ++s) {
        const CMatrix k1 = deriv(u);
        const CMatrix k2 = deriv(axpy(u, k1, dz / 2));
        const CMatrix k3 = deriv(axpy(u, k2, dz / 2));
        const CMatrix k4 = deriv(axpy(u, k3, dz));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                u(i, j) += dz / 6.0 * (k1(i, j) + 2.0 * k2(i, j) + 2.0 * k3(i, j) + k4(i, j));
    }
    return u;
}

std::vector<std::vector<double>> coupler2_h(double beta, double kappa) {
    return {{beta, kappa}, {kappa, beta}};
}
std::vector<std::vector<double>> tritter_h(double beta, double kappa) {
    return {{beta, kappa, kappa}, {kappa, beta, kappa}, {kappa, kappa, beta}};
}
std::vector<std::vector<double>> quarter_h(double beta, double k1, double k2) {
    return {{beta, k1, k2, k1}, {k1, beta, k1, k2}, {k2, k1, beta, k1}, {k1, k2, k1, beta}};
}

}  // namespace

TEST_CASE("beam splitter: the two 50/50 conventions", "[devices]") {
    const CMatrix bs1 = beam_splitter(BeamSplitterSpec::real_5050());
    CHECK(max_abs_diff(bs1, CMatrix{{s2, s2}, {s2, -s2}}) < 1e-15);

    const CMatrix bs2 = beam_splitter(BeamSplitterSpec::symmetric_5050());
    CHECK(max_abs_diff(bs2, CMatrix{{s2, I * s2}, {I * s2, s2}}) < 1e-15);
    CHECK(is_unitary(bs2, Tolerance{1e-12}));
}

TEST_CASE("beam splitter: transparent limit and constraint checks", "[devices]") {
    // |T| = 1: no reflection, phases unconstrained
    const CMatrix d = beam_splitter({1.0, 0.3, 1.1, 0.0, 0.0});
    CHECK(max_abs_diff(d, CMatrix{{std::polar(1.0, 0.3), 0.0}, {0.0, std::polar(1.0, 1.1)}}) < 1e-15);

    BeamSplitterSpec bad{s2, 0.0, 0.0, 0.0, 0.0};  // sum of phases = 0, not +-pi
    CHECK_THROWS_WITH(beam_splitter(bad),
                      Catch::Matchers::ContainsSubstring("phi14 + phi23 - phi24 - phi13"));
}

TEST_CASE("beam splitter: unitarity across random valid specs", "[devices]") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
    std::uniform_real_distribution<double> ut(0.05, 0.999);
    for (int rep = 0; rep < 1000; ++rep) {
        BeamSplitterSpec s;
        s.t_mag = ut(rng);
        s.phi13 = uni(rng);
        s.phi24 = uni(rng);
        s.phi14 = uni(rng);
        s.phi23 = kPi + s.phi24 + s.phi13 - s.phi14;  // enforce the constraint
        CHECK(unitarity_residual(beam_splitter(s)) < 1e-12);
    }
}

TEST_CASE("Mach-Zehnder probabilities (1 - cos phi)/2 pattern", "[devices]") {
    auto probs = [](const CMatrix& u) {
        CMatrix p(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) p(i, j) = std::norm(u(i, j));
        return p;
    };
    CHECK(max_abs_diff(probs(mach_zehnder(0.0)), CMatrix{{0.0, 1.0}, {1.0, 0.0}}) < 1e-15);
    CHECK(max_abs_diff(probs(mach_zehnder(kPi / 2)), CMatrix{{0.5, 0.5}, {0.5, 0.5}}) < 1e-15);
    CHECK(max_abs_diff(probs(mach_zehnder(kPi)), CMatrix{{1.0, 0.0}, {0.0, 1.0}}) < 1e-15);
}

TEST_CASE("Mach-Zehnder closed form e^{i(phi/2+pi/2)} rotation", "[devices]") {
    for (double phi : {0.1, 1.0, 2.5, 4.0, 6.0}) {
        const cdouble pre = std::polar(1.0, phi / 2 + kPi / 2);
        const CMatrix expect{{pre * std::sin(phi / 2), pre * std::cos(phi / 2)},
                             {pre * std::cos(phi / 2), -pre * std::sin(phi / 2)}};
        CHECK(max_abs_diff(mach_zehnder(phi), expect) < 1e-14);
    }
}

TEST_CASE("Michelson: zero-phase swap, pi/2 split, edge-walk convention", "[devices]") {
    const auto bs2 = BeamSplitterSpec::symmetric_5050();
    const CMatrix m0 = michelson(MirrorPhases{0.0, 0.0}, bs2);
    CHECK(max_abs_diff(m0, CMatrix{{0.0, I}, {I, 0.0}}) < 1e-15);  // i * swap
    CHECK(self_transpose_residual(m0) < 1e-15);

    const CMatrix m1 = michelson(MirrorPhases{kPi / 2, -kPi / 2}, bs2);
    CHECK(std::norm(m1(0, 0)) == Approx(1.0).margin(1e-14));
    CHECK(std::abs(m1(0, 1)) < 1e-14);

    // the scattering-vertex convention (1/sqrt2)[[i,1],[1,i]] comes from the
    // real 50/50 splitter with mirror phases (pi/4, 3pi/4)
    const CMatrix mv = michelson(MirrorPhases{kPi / 4, 3 * kPi / 4}, BeamSplitterSpec::real_5050());
    CHECK(max_abs_diff(mv, CMatrix{{I * s2, s2}, {s2, I * s2}}) < 1e-14);
}

TEST_CASE("Michelson is self-transpose and unitary for random parameters", "[devices]") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
    std::uniform_real_distribution<double> ut(0.05, 0.999);
    for (int rep = 0; rep < 1000; ++rep) {
        BeamSplitterSpec s;
        s.t_mag = ut(rng);
        s.phi13 = uni(rng);
        s.phi24 = uni(rng);
        s.phi14 = uni(rng);
        s.phi23 = kPi + s.phi24 + s.phi13 - s.phi14;
        const CMatrix m = michelson(MirrorPhases{uni(rng), uni(rng)}, s);
        CHECK(unitarity_residual(m) < 1e-12);
        CHECK(self_transpose_residual(m) < 1e-10);
    }
}

TEST_CASE("coupler2 closed form and limits", "[devices]") {
    // kz = 0: pure propagation phase
    CHECK(max_abs_diff(coupler2({0.7, 0.0, 2.0, 0.0}),
                       scale(std::polar(1.0, -1.4), CMatrix::identity(2))) < 1e-15);
    // kz = pi/4: 50/50 with -i cross terms
    CHECK(max_abs_diff(coupler2(CouplerSpec::from_kz(kPi / 4)),
                       CMatrix{{s2, -I * s2}, {-I * s2, s2}}) < 1e-15);
    // kz = pi/2: full crossover
    CHECK(max_abs_diff(coupler2(CouplerSpec::from_kz(kPi / 2)),
                       CMatrix{{0.0, -I}, {-I, 0.0}}) < 1e-15);
}

TEST_CASE("coupler2 matches coupled-mode integration", "[devices][ode]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const double beta = uni(rng), kappa = uni(rng), z = uni(rng);
        CHECK(max_abs_diff(coupler2({beta, kappa, z, 0.0}),
                           integrate_coupled_modes(coupler2_h(beta, kappa), z)) < 1e-10);
    }
}

TEST_CASE("tritter closed form: identity limit, row norms, ODE cross-check", "[devices][ode]") {
    CHECK(max_abs_diff(tritter({0.4, 0.0, 1.0, 0.0}),
                       scale(std::polar(1.0, -0.4), CMatrix::identity(3))) < 1e-15);

    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const CMatrix u = tritter({uni(rng), uni(rng), uni(rng), 0.0});
        for (int r = 0; r < 3; ++r) {
            double row = 0.0;
            for (int c = 0; c < 3; ++c) row += std::norm(u(r, c));
            CHECK(row == Approx(1.0).margin(1e-12));
        }
    }
    CHECK(max_abs_diff(tritter(CouplerSpec::from_kz(2 * kPi / 9)),
                       integrate_coupled_modes(tritter_h(0.0, 2 * kPi / 9), 1.0)) < 1e-10);
    for (int rep = 0; rep < 10; ++rep) {
        const double beta = uni(rng), kappa = uni(rng), z = uni(rng);
        CHECK(max_abs_diff(tritter({beta, kappa, z, 0.0}),
                           integrate_coupled_modes(tritter_h(beta, kappa), z)) < 1e-10);
    }
}

TEST_CASE("quarter closed form: identity limit, unitarity, ODE cross-check", "[devices][ode]") {
    CHECK(max_abs_diff(quarter({0.9, 0.0, 1.0, 0.0}),
                       scale(std::polar(1.0, -0.9), CMatrix::identity(4))) < 1e-15);

    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int rep = 0; rep < 1000; ++rep) {
        CHECK(unitarity_residual(quarter({uni(rng), uni(rng), uni(rng), uni(rng)})) < 1e-12);
    }
    CHECK(max_abs_diff(quarter(CouplerSpec::from_kz2(kPi / 8, kPi / 8)),
                       integrate_coupled_modes(quarter_h(0.0, kPi / 8, kPi / 8), 1.0)) < 1e-10);
    for (int rep = 0; rep < 10; ++rep) {
        const double beta = uni(rng), k1 = uni(rng), k2 = uni(rng), z = uni(rng);
        CHECK(max_abs_diff(quarter({beta, k1, z, k2}),
                           integrate_coupled_modes(quarter_h(beta, k1, k2), z)) < 1e-10);
    }
}

TEST_CASE("reversible tritter/quarter: self-transpose unitarity sweep", "[devices]") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
    for (int rep = 0; rep < 1000; ++rep) {
        const CMatrix rt = reversible_tritter(CouplerSpec::from_kz(uni(rng)),
                                              MirrorPhases{uni(rng), uni(rng), uni(rng)});
        CHECK(unitarity_residual(rt) < 1e-12);
        CHECK(self_transpose_residual(rt) < 1e-10);

        const CMatrix rq = reversible_quarter(
            CouplerSpec::from_kz2(uni(rng), uni(rng)),
            MirrorPhases{uni(rng), uni(rng), uni(rng), uni(rng)});
        CHECK(unitarity_residual(rq) < 1e-12);
        CHECK(self_transpose_residual(rq) < 1e-10);
    }
}

TEST_CASE("reversible tritter limits", "[devices]") {
    // zero coupling, zero mirrors: pure double propagation phase
    CHECK(max_abs_diff(reversible_tritter({0.8, 0.0, 1.0, 0.0}, MirrorPhases{0.0, 0.0, 0.0}),
                       scale(std::polar(1.0, -1.6), CMatrix::identity(3))) < 1e-14);
}

TEST_CASE("apply_port_phases", "[devices]") {
    const CMatrix rt = reversible_tritter(CouplerSpec::from_kz(0.9), MirrorPhases{0.1, 0.2, 0.3});
    CHECK(max_abs_diff(apply_port_phases(rt, PortPhases{0.0, 0.0, 0.0}), rt) == 0.0);

    const CMatrix dressed = apply_port_phases(rt, PortPhases{0.4, 1.3, 2.2});
    CHECK(self_transpose_residual(dressed) < 1e-12);  // D M D keeps symmetry
    CHECK(unitarity_residual(dressed) < 1e-12);
    CHECK_THROWS_AS(apply_port_phases(rt, PortPhases{0.1, 0.2}), std::invalid_argument);
}
