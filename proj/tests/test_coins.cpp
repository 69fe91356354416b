#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lopt/coins.hpp"

using namespace lopt;
using Catch::Approx;

namespace {
const cdouble I{0.0, 1.0};
}

TEST_CASE("Grover coins: printed matrices, symmetry, d=4 unbiasedness", "[coins]") {
    const CMatrix c3 = coin({CoinKind::Grover, 3});
    CHECK(max_abs_diff(c3, CMatrix{{-1.0 / 3, 2.0 / 3, 2.0 / 3},
                                   {2.0 / 3, -1.0 / 3, 2.0 / 3},
                                   {2.0 / 3, 2.0 / 3, -1.0 / 3}}) < 1e-15);

    const CMatrix c4 = coin({CoinKind::Grover, 4});
    CHECK(max_abs_diff(c4, CMatrix{{-0.5, 0.5, 0.5, 0.5},
                                   {0.5, -0.5, 0.5, 0.5},
                                   {0.5, 0.5, -0.5, 0.5},
                                   {0.5, 0.5, 0.5, -0.5}}) < 1e-15);
    // unbiased in magnitude for d = 4 only (all entries 1/2)
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(c4(i, j)) == Approx(0.5));

    // permutation symmetry: conjugation by any permutation fixes C_d
    for (std::size_t d : {std::size_t{3}, std::size_t{4}, std::size_t{5}, std::size_t{7}}) {
        const CMatrix c = coin({CoinKind::Grover, d});
        CHECK(unitarity_residual(c) < 1e-12);
        CHECK(self_transpose_residual(c) == 0.0);
        std::mt19937_64 rng(d);
        std::vector<std::size_t> perm(d);
        for (std::size_t i = 0; i < d; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        CMatrix conj_by_perm(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) conj_by_perm(i, j) = c(perm[i], perm[j]);
        CHECK(max_abs_diff(conj_by_perm, c) == 0.0);
    }
}

TEST_CASE("DFT coins: printed d=3,4 and column orthonormality", "[coins]") {
    const cdouble w3 = std::polar(1.0, -2 * kPi / 3);
    const CMatrix f3 = coin({CoinKind::Dft, 3});
    CHECK(max_abs_diff(f3, scale(1.0 / std::sqrt(3.0),
                                 CMatrix{{1.0, 1.0, 1.0},
                                         {1.0, w3, w3 * w3},
                                         {1.0, w3 * w3, w3}})) < 1e-14);

    const CMatrix f4 = coin({CoinKind::Dft, 4});
    CHECK(max_abs_diff(f4, scale(0.5, CMatrix{{1.0, 1.0, 1.0, 1.0},
                                              {1.0, -I, -1.0, I},
                                              {1.0, -1.0, 1.0, -1.0},
                                              {1.0, I, -1.0, -I}})) < 1e-14);
    for (std::size_t d : {std::size_t{2}, std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
        CHECK(unitarity_residual(coin({CoinKind::Dft, d})) < 1e-12);  // orthonormal columns
        CHECK(self_transpose_residual(coin({CoinKind::Dft, d})) < 1e-15);
    }
}

TEST_CASE("Hadamard coins: tensor powers only", "[coins]") {
    const CMatrix h4 = coin({CoinKind::Hadamard, 4});
    CHECK(max_abs_diff(h4, scale(0.5, CMatrix{{1.0, 1.0, 1.0, 1.0},
                                              {1.0, -1.0, 1.0, -1.0},
                                              {1.0, 1.0, -1.0, -1.0},
                                              {1.0, -1.0, -1.0, 1.0}})) < 1e-15);
    CHECK(unitarity_residual(coin({CoinKind::Hadamard, 8})) < 1e-12);
    CHECK_THROWS_WITH(coin({CoinKind::Hadamard, 3}),
                      Catch::Matchers::ContainsSubstring("power-of-two"));
    CHECK_THROWS_AS(coin({CoinKind::Grover, 1}), std::invalid_argument);
}

TEST_CASE("verify_realization: the tabulated Grover settings", "[coins][realization]") {
    const CMatrix g3 = coin({CoinKind::Grover, 3});
    const CMatrix g4 = coin({CoinKind::Grover, 4});

    PhaseSettings rt;
    rt.mirrors = {11 * kPi / 6, 11 * kPi / 6, 11 * kPi / 6};
    rt.ports = {0, 0, 0};
    rt.kz1 = 11 * kPi / 6;
    auto chk = verify_realization({DeviceFamily::ReversibleTritter, g3}, rt);
    CHECK(chk.ok);
    CHECK(chk.residual < 1e-12);

    PhaseSettings u3;
    u3.mirrors = {3 * kPi / 2, 3 * kPi / 2, 3 * kPi / 2};
    u3.ports = {0, 0, 0};
    chk = verify_realization({DeviceFamily::Unbiased3Port, g3}, u3);
    CHECK(chk.ok);

    PhaseSettings rq;
    rq.mirrors = {0, 0, 0, 0};
    rq.ports = {0, 0, 0, 0};
    rq.kz1 = kPi / 8;
    rq.kz2 = kPi / 8;
    chk = verify_realization({DeviceFamily::ReversibleQuarter, g4}, rq);
    CHECK(chk.ok);

    PhaseSettings u4;
    u4.mirrors = {3 * kPi / 2, 3 * kPi / 2, 3 * kPi / 2, 3 * kPi / 2};
    u4.ports = {0, 0, 0, 0};
    chk = verify_realization({DeviceFamily::Unbiased4Port, g4}, u4);
    CHECK(chk.ok);
}

TEST_CASE("verify_realization: arity and target validation", "[coins][realization]") {
    const CMatrix g3 = coin({CoinKind::Grover, 3});
    PhaseSettings p;
    p.mirrors = {0.0, 0.0};  // wrong arity
    CHECK_THROWS_WITH(verify_realization({DeviceFamily::Unbiased3Port, g3}, p),
                      Catch::Matchers::ContainsSubstring("mirror phases"));
    p.mirrors = {0.0, 0.0, 0.0};
    p.ports = {0.0};
    CHECK_THROWS_WITH(verify_realization({DeviceFamily::Unbiased3Port, g3}, p),
                      Catch::Matchers::ContainsSubstring("port phases"));
    CHECK_THROWS_WITH(verify_realization({DeviceFamily::Unbiased4Port, g3}, PhaseSettings{}),
                      Catch::Matchers::ContainsSubstring("target shape"));
}

TEST_CASE("residuals reported by verify match a recomputation", "[coins][realization]") {
    const CMatrix g3 = coin({CoinKind::Grover, 3});
    PhaseSettings p;
    p.mirrors = {1.1, 2.2, 3.3};
    p.ports = {0.4, 0.5, 0.6};
    const auto a = verify_realization({DeviceFamily::Unbiased3Port, g3}, p);
    const auto b = verify_realization({DeviceFamily::Unbiased3Port, g3}, p);
    CHECK(a.residual == b.residual);
    CHECK_FALSE(a.ok);
}

TEST_CASE("fit_phases refuses non-self-transpose targets", "[coins][fit]") {
    // the 3x3 cyclic permutation is unitary but not symmetric
    const CMatrix cyc{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}};
    CHECK(unitarity_residual(cyc) < 1e-15);
    CHECK(self_transpose_residual(cyc) == 1.0);
    CHECK_THROWS_WITH(fit_phases({DeviceFamily::Unbiased3Port, cyc}, 4, 500),
                      Catch::Matchers::ContainsSubstring("symmetric unitary"));

    // and verify_realization reports a residual bounded below by the defect
    PhaseSettings p;
    p.mirrors = {0.1, 0.2, 0.3};
    p.ports = {0.0, 0.0, 0.0};
    const auto chk = verify_realization({DeviceFamily::Unbiased3Port, cyc}, p);
    // any self-transpose matrix is at least defect/2 away in max-norm
    CHECK(chk.residual >= 0.5 - 1e-12);
    CHECK_FALSE(chk.ok);
}

TEST_CASE("fit_phases recovers the Grover 3-port setting", "[coins][fit]") {
    const CMatrix g3 = coin({CoinKind::Grover, 3});
    const FitResult fit = fit_phases({DeviceFamily::Unbiased3Port, g3}, 32, 20000, 777);
    CHECK(fit.converged);
    CHECK(fit.residual <= 1e-6);
    const auto chk = verify_realization({DeviceFamily::Unbiased3Port, g3}, fit.phases,
                                        Tolerance{1e-6});
    CHECK(std::abs(chk.residual - fit.residual) < 1e-12);
}

TEST_CASE("fit_phases: identity target is trivially fit", "[coins][fit]") {
    const FitResult fit =
        fit_phases({DeviceFamily::ReversibleTritter, CMatrix::identity(3)}, 8, 4000, 3);
    CHECK(fit.converged);
    const auto chk = verify_realization({DeviceFamily::ReversibleTritter, CMatrix::identity(3)},
                                        fit.phases, Tolerance{1e-6});
    CHECK(chk.ok);
}

TEST_CASE("fit_phases finds a Fourier quarter setting", "[coins][fit]") {
    const CMatrix f4 = coin({CoinKind::Dft, 4});
    const FitResult fit = fit_phases({DeviceFamily::ReversibleQuarter, f4}, 48, 60000, 20240);
    CHECK(fit.residual <= 1e-6);
    const auto chk = verify_realization({DeviceFamily::ReversibleQuarter, f4}, fit.phases,
                                        Tolerance{1e-6});
    CHECK(chk.ok);
}

TEST_CASE("fit determinism: same seed, same result", "[coins][fit]") {
    const CMatrix g3 = coin({CoinKind::Grover, 3});
    const FitResult a = fit_phases({DeviceFamily::ReversibleTritter, g3}, 6, 3000, 99);
    const FitResult b = fit_phases({DeviceFamily::ReversibleTritter, g3}, 6, 3000, 99);
    CHECK(a.residual == b.residual);
    CHECK(a.phases.mirrors == b.phases.mirrors);
    CHECK(a.phases.ports == b.phases.ports);
}
