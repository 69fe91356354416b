/*
 * Transfer matrices of the linear-optical device catalog.
 *
 * Directionally-biased devices (input ports are never output ports):
 *   beam_splitter   general lossless 2x2 with the phase constraint
 *                   phi14 + phi23 - phi24 - phi13 = +-pi
 *   mach_zehnder    U_BS U_phase U_BS, a tunable variable beam splitter
 *   coupler2        2-mode evanescent coupler, e^{-i beta z} rotation in kz
 *   tritter         3-mode integrated coupler (circulant closed form)
 *   quarter         4-mode integrated coupler; nearest-neighbour coupling k1,
 *                   diagonal coupling k2 (closed form = coupled-mode solution)
 *
 * Directionally-unbiased devices (photons may exit the input port; all are
 * self-transpose by construction):
 *   michelson               U_BS^T U_phase U_BS
 *   reversible_tritter      U_tritter^T U_phase U_tritter
 *   reversible_quarter      U_quarter^T U_phase U_quarter
 *   unbiased_multiport_*    ring of N 50/50 beam splitters with mirror units;
 *                           truncated coherent path sum and exact loop-operator
 *                           closed form D + C (I - A)^{-1} B
 *
 * Multiport geometry (fixed by matching the printed transfer-amplitude series
 * term-by-term and by the known Grover/Fourier phase settings):
 *   vertices 0..N-1 on a ring, vertex v adjacent to v+-1 mod N.  Each vertex
 *   carries one 50/50 beam splitter in the i-on-reflection convention
 *   BS2 = (1/sqrt2)[[1, i],[i, 1]], faces (external, mirror) <-> (edge to
 *   v+1, edge to v-1), and one mirror unit contributing e^{i phi_v} per
 *   bounce.  The backward pass through a face is the transpose.
 */
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lopt/linalg.hpp"

namespace lopt {

// ---------------------------------------------------------------------------
// parameter records
// ---------------------------------------------------------------------------

struct BeamSplitterSpec {
    double t_mag = 1.0 / std::sqrt(2.0);  // |T| in [0,1]; |R| = sqrt(1 - |T|^2)
    double phi13 = 0.0, phi24 = 0.0, phi14 = 0.0, phi23 = 0.0;

    double r_mag() const {
        const double r2 = 1.0 - t_mag * t_mag;
        return r2 > 0.0 ? std::sqrt(r2) : 0.0;
    }

    // 50/50 with all transmission phases zero and phi24 = pi (real symmetric)
    static BeamSplitterSpec real_5050() {
        return BeamSplitterSpec{1.0 / std::sqrt(2.0), 0.0, kPi, 0.0, 0.0};
    }
    // 50/50 with phi_T = 0, phi_R = pi/2 (i on reflection)
    static BeamSplitterSpec symmetric_5050() {
        return BeamSplitterSpec{1.0 / std::sqrt(2.0), 0.0, 0.0, kPi / 2, kPi / 2};
    }
};

struct CouplerSpec {
    double beta = 0.0;    // propagation constant (rad per unit length)
    double kappa = 0.0;   // coupling constant (rad per unit length)
    double z = 1.0;       // propagation length
    double kappa2 = 0.0;  // diagonal coupling, quarter only

    static CouplerSpec from_kz(double kz, double beta = 0.0) { return {beta, kz, 1.0, 0.0}; }
    static CouplerSpec from_kz2(double k1z, double k2z, double beta = 0.0) {
        return {beta, k1z, 1.0, k2z};
    }
};

struct MirrorPhases {
    std::vector<double> phi;  // one per port
    MirrorPhases() = default;
    MirrorPhases(std::initializer_list<double> p) : phi(p) {}
    explicit MirrorPhases(std::vector<double> p) : phi(std::move(p)) {}
    static MirrorPhases uniform(std::size_t n, double value) {
        return MirrorPhases(std::vector<double>(n, value));
    }
};

struct PortPhases {
    std::vector<double> phi;  // applied at entry AND exit
    PortPhases() = default;
    PortPhases(std::initializer_list<double> p) : phi(p) {}
    explicit PortPhases(std::vector<double> p) : phi(std::move(p)) {}
};

// ---------------------------------------------------------------------------
// directionally-biased devices
// ---------------------------------------------------------------------------

// [[T13, R23],[R14, T24]].  The unitarity-forced relation between the four
// phases is phi14 + phi23 - phi24 - phi13 = +-pi; it is vacuous in the fully
// transmitting (|R| = 0) and fully reflecting (|T| = 0) limits.
inline CMatrix beam_splitter(const BeamSplitterSpec& s) {
    if (s.t_mag < 0.0 || s.t_mag > 1.0 + 1e-15)
        throw std::invalid_argument("beam_splitter: |T| must lie in [0,1]");
    const double t = std::min(s.t_mag, 1.0), r = s.r_mag();
    if (t > 1e-12 && r > 1e-12) {
        const double sum = s.phi14 + s.phi23 - s.phi24 - s.phi13;
        const double defect = std::abs(std::remainder(sum - kPi, 2.0 * kPi));
        if (defect > 1e-12)
            throw std::invalid_argument(
                "beam_splitter: phase constraint phi14 + phi23 - phi24 - phi13 = +-pi violated "
                "(got " + std::to_string(sum) + " rad)");
    }
    const cdouble I{0.0, 1.0};
    return CMatrix{{t * std::exp(I * s.phi13), r * std::exp(I * s.phi23)},
                   {r * std::exp(I * s.phi14), t * std::exp(I * s.phi24)}};
}

inline CMatrix phase_diagonal(const std::vector<double>& phases) {
    std::vector<cdouble> d(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) d[i] = std::polar(1.0, phases[i]);
    return CMatrix::diagonal(d);
}

// U_MZ = U_BS U_phase U_BS with the symmetric 50/50 splitter and the relative
// phase on the first arm.  Equals e^{i(phi/2 + pi/2)} [[sin, cos],[cos, -sin]](phi/2).
inline CMatrix mach_zehnder(double phi) {
    const CMatrix bs = beam_splitter(BeamSplitterSpec::symmetric_5050());
    return bs * phase_diagonal({phi, 0.0}) * bs;
}

// Directionally-unbiased 2x2: forward pass, mirror phases, transposed return
// pass.  Self-transpose for every parameter choice.
inline CMatrix michelson(const MirrorPhases& mirror, const BeamSplitterSpec& bs) {
    if (mirror.phi.size() != 2)
        throw std::invalid_argument("michelson: expected 2 mirror phases, got " +
                                    std::to_string(mirror.phi.size()));
    const CMatrix u = beam_splitter(bs);
    return transpose(u) * phase_diagonal(mirror.phi) * u;
}

inline CMatrix coupler2(const CouplerSpec& s) {
    const double kz = s.kappa * s.z;
    const cdouble pre = std::polar(1.0, -s.beta * s.z);
    const cdouble c = std::cos(kz), ms = cdouble{0.0, -1.0} * std::sin(kz);
    return CMatrix{{pre * c, pre * ms}, {pre * ms, pre * c}};
}

// (e^{-i beta z}/3) circulant(A, B, B); A = 2 e^{i kz} + e^{-2i kz},
// B = -e^{i kz} + e^{-2i kz}.
inline CMatrix tritter(const CouplerSpec& s) {
    const double kz = s.kappa * s.z;
    const cdouble e1 = std::polar(1.0, kz), e2 = std::polar(1.0, -2.0 * kz);
    const cdouble pre = std::polar(1.0 / 3.0, -s.beta * s.z);
    const cdouble a = pre * (2.0 * e1 + e2), b = pre * (e2 - e1);
    return CMatrix{{a, b, b}, {b, a, b}, {b, b, a}};
}

// Coupled-mode solution for the 4-mode coupler with nearest-neighbour
// coupling kappa (k1) and diagonal coupling kappa2 (k2):
//   (e^{-i beta z}/4) circulant-symmetric [[A,B,C,B],[B,A,B,C],[C,B,A,B],[B,C,B,A]]
//   A = 2 e^{i k2 z} + e^{-i(2 k1 + k2) z} + e^{i(2 k1 - k2) z}
//   B =               e^{-i(2 k1 + k2) z} - e^{i(2 k1 - k2) z}
//   C = -2 e^{i k2 z} + e^{-i(2 k1 + k2) z} + e^{i(2 k1 - k2) z}
inline CMatrix quarter(const CouplerSpec& s) {
    const double k1z = s.kappa * s.z, k2z = s.kappa2 * s.z;
    const cdouble e0 = std::polar(1.0, k2z);
    const cdouble ep = std::polar(1.0, -(2.0 * k1z + k2z));
    const cdouble em = std::polar(1.0, 2.0 * k1z - k2z);
    const cdouble pre = std::polar(0.25, -s.beta * s.z);
    const cdouble a = pre * (2.0 * e0 + ep + em);
    const cdouble b = pre * (ep - em);
    const cdouble c = pre * (-2.0 * e0 + ep + em);
    return CMatrix{{a, b, c, b}, {b, a, b, c}, {c, b, a, b}, {b, c, b, a}};
}

inline CMatrix reversible_tritter(const CouplerSpec& s, const MirrorPhases& mirror) {
    if (mirror.phi.size() != 3)
        throw std::invalid_argument("reversible_tritter: expected 3 mirror phases");
    const CMatrix u = tritter(s);
    return transpose(u) * phase_diagonal(mirror.phi) * u;
}

inline CMatrix reversible_quarter(const CouplerSpec& s, const MirrorPhases& mirror) {
    if (mirror.phi.size() != 4)
        throw std::invalid_argument("reversible_quarter: expected 4 mirror phases");
    const CMatrix u = quarter(s);
    return transpose(u) * phase_diagonal(mirror.phi) * u;
}

// diag(e^{i phi}) core diag(e^{i phi}) -- the same diagonal on both sides,
// because a reversible device traverses the same shifters twice.
inline CMatrix apply_port_phases(const CMatrix& core, const PortPhases& ports) {
    if (!core.is_square() || core.rows() != ports.phi.size())
        throw std::invalid_argument("apply_port_phases: " + std::to_string(ports.phi.size()) +
                                    " phases for " + core.shape_str() + " core");
    const CMatrix d = phase_diagonal(ports.phi);
    return d * core * d;
}

// ---------------------------------------------------------------------------
// directionally-unbiased N-port multiport (N = 3, 4)
// ---------------------------------------------------------------------------

namespace detail {

// Forward face matrix, rows (edge to v+1, edge to v-1), cols (external, mirror).
// BS2: transmission 1/sqrt2, reflection i/sqrt2.  The backward pass is the
// transpose, which here equals the matrix itself.
inline cdouble face(int row, int col) {
    static const cdouble f[2][2] = {
        {cdouble{1.0 / std::sqrt(2.0), 0.0}, cdouble{0.0, 1.0 / std::sqrt(2.0)}},
        {cdouble{0.0, 1.0 / std::sqrt(2.0)}, cdouble{1.0 / std::sqrt(2.0), 0.0}}};
    return f[row][col];
}

struct MultiportBlocks {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // directed internal edges (u, v)
    CMatrix a;                               // internal -> internal (one mirror bounce)
    CMatrix b;                               // external-in -> internal
    CMatrix c;                               // internal -> external-out
    // d (direct external -> external) is identically zero for this geometry.
};

inline int ring_port(int at, int nb, int n) {  // 0: nb == at+1, 1: nb == at-1
    if (nb == (at + 1) % n) return 0;
    if (nb == (at + n - 1) % n) return 1;
    throw std::logic_error("multiport: vertices not adjacent");
}

inline MultiportBlocks multiport_blocks(int n_ports, const MirrorPhases& mirror) {
    if (n_ports != 3 && n_ports != 4)
        throw std::invalid_argument("unbiased multiport: n_ports must be 3 or 4, got " +
                                    std::to_string(n_ports));
    if (static_cast<int>(mirror.phi.size()) != n_ports)
        throw std::invalid_argument("unbiased multiport: expected " + std::to_string(n_ports) +
                                    " mirror phases, got " + std::to_string(mirror.phi.size()));
    MultiportBlocks blk;
    const int n = blk.n = n_ports;
    for (int u = 0; u < n; ++u) {
        blk.edges.emplace_back(u, (u + 1) % n);
        blk.edges.emplace_back(u, (u + n - 1) % n);
    }
    const int m = static_cast<int>(blk.edges.size());
    auto eidx = [&](int u, int v) {
        return 2 * u + ((v == (u + 1) % n) ? 0 : 1);
    };
    blk.a = CMatrix(m, m);
    blk.b = CMatrix(m, n);
    blk.c = CMatrix(n, m);
    for (int k = 0; k < m; ++k) {
        const auto [u, v] = blk.edges[k];
        const int pin = ring_port(v, u, n);
        blk.c(v, k) = face(pin, 0);
        const cdouble bounce = std::polar(1.0, mirror.phi[v]);
        for (int w : {(v + 1) % n, (v + n - 1) % n})
            blk.a(eidx(v, w), k) = face(pin, 1) * bounce * face(ring_port(v, w, n), 1);
    }
    for (int u = 0; u < n; ++u)
        for (int w : {(u + 1) % n, (u + n - 1) % n})
            blk.b(eidx(u, w), u) = face(ring_port(u, w, n), 0);
    return blk;
}

}  // namespace detail

// One term of the coherent path series: amplitude and the ordered list of
// mirror units visited (vertex indices).
struct MultiportPathTerm {
    cdouble amplitude;
    std::vector<int> mirrors;
};

struct MultiportPathSum {
    CMatrix matrix;  // truncated transfer matrix
    // terms[in][out]: ordered by bounce count, then lexicographically by
    // mirror sequence; only paths with <= trace_bounces mirror visits.
    std::vector<std::vector<std::vector<MultiportPathTerm>>> terms;
};

// Coherent superposition of all photon paths with at most max_bounces mirror
// visits, plus an explicit per-term trace of the leading paths.
inline MultiportPathSum unbiased_multiport_path_sum(int n_ports, const MirrorPhases& mirror,
                                                    int max_bounces, int trace_bounces = 3) {
    if (max_bounces < 1)
        throw std::invalid_argument("unbiased_multiport_path_sum: max_bounces must be >= 1");
    const auto blk = detail::multiport_blocks(n_ports, mirror);
    const int n = blk.n;

    // truncated Neumann sum: U_K = C (sum_{k<=K} A^k) B
    CMatrix term = blk.b;
    CMatrix acc = matmul(blk.c, term);
    for (int k = 0; k < max_bounces; ++k) {
        term = matmul(blk.a, term);
        const CMatrix add = matmul(blk.c, term);
        for (std::size_t i = 0; i < acc.rows(); ++i)
            for (std::size_t j = 0; j < acc.cols(); ++j) acc(i, j) += add(i, j);
    }

    MultiportPathSum out;
    out.matrix = acc;
    out.terms.assign(n, std::vector<std::vector<MultiportPathTerm>>(n));

    // explicit path enumeration for the trace
    const int depth = std::min(trace_bounces, max_bounces);
    std::function<void(int, int, cdouble, std::vector<int>&, int, int)> rec =
        [&](int u, int v, cdouble amp, std::vector<int>& labels, int bounces, int src) {
            const int pin = detail::ring_port(v, u, n);
            out.terms[src][v].push_back({amp * detail::face(pin, 0), labels});
            if (bounces == depth) return;
            for (int w : {(v + 1) % n, (v + n - 1) % n}) {
                labels.push_back(v);
                rec(v, w,
                    amp * detail::face(pin, 1) * std::polar(1.0, mirror.phi[v]) *
                        detail::face(detail::ring_port(v, w, n), 1),
                    labels, bounces + 1, src);
                labels.pop_back();
            }
        };
    for (int src = 0; src < n; ++src) {
        std::vector<int> labels;
        for (int w : {(src + 1) % n, (src + n - 1) % n})
            rec(src, w, detail::face(detail::ring_port(src, w, n), 0), labels, 0, src);
    }
    for (auto& row : out.terms)
        for (auto& cell : row)
            std::stable_sort(cell.begin(), cell.end(),
                             [](const MultiportPathTerm& x, const MultiportPathTerm& y) {
                                 if (x.mirrors.size() != y.mirrors.size())
                                     return x.mirrors.size() < y.mirrors.size();
                                 return x.mirrors < y.mirrors;
                             });
    return out;
}

// Dominant |eigenvalue| of the internal bounce operator, by power iteration
// on a fixed deterministic start vector.  Approximate (reporting only).
inline double multiport_internal_spectral_radius(int n_ports, const MirrorPhases& mirror,
                                                 int iterations = 300) {
    const auto blk = detail::multiport_blocks(n_ports, mirror);
    const std::size_t m = blk.a.rows();
    CMatrix x(m, 1);
    for (std::size_t i = 0; i < m; ++i) x(i, 0) = cdouble{1.0, 0.37 * static_cast<double>(i + 1)};
    double rho = 0.0;
    for (int it = 0; it < iterations; ++it) {
        CMatrix y = matmul(blk.a, x);
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(y(i, 0));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        rho = nrm;  // ||x|| is kept at 1
        for (std::size_t i = 0; i < m; ++i) x(i, 0) = y(i, 0) / nrm;
    }
    return rho;
}

// Exact long-time transfer matrix by the loop-operator method:
//   U = D + C (I - A)^{-1} B,  D = 0 for this geometry.
//
// Resonant mirror settings make A acquire unit-modulus internal modes.  Those
// modes are provably dark (they neither exit nor get excited from outside),
// so the minimal-norm solution of (I - A) X = B still yields the physical
// unitary limit; the solve drops the exactly-singular directions.  If trapped
// amplitude were visible the result would come out sub-unitary, which is
// refused as a non-decaying internal loop.
inline CMatrix unbiased_multiport_closed_form(int n_ports, const MirrorPhases& mirror) {
    const auto blk = detail::multiport_blocks(n_ports, mirror);
    const std::size_t m = blk.a.rows();
    CMatrix i_minus_a = CMatrix::identity(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) i_minus_a(i, j) -= blk.a(i, j);
    const CMatrix x = solve_min_norm(i_minus_a, blk.b);
    const CMatrix u = matmul(blk.c, x);
    if (unitarity_residual(u) > 1e-10) {
        const double rho = multiport_internal_spectral_radius(n_ports, mirror);
        throw std::runtime_error(
            "unbiased_multiport_closed_form: non-decaying internal loop (spectral radius ~" +
            std::to_string(rho) + "), trapped amplitude makes the long-time limit non-unitary");
    }
    return u;
}

}  // namespace lopt
