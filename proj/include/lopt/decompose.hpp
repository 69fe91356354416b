/*
 * Factorization of U(N) into two-mode mixing cells plus a diagonal phase
 * layer, in the triangular (Reck) and balanced rectangular (Clements)
 * orderings, with exact reconstruction.
 *
 * Cell convention (the tunable Mach-Zehnder cell with external phase theta,
 * internal phase phi): T_{ij}(theta, phi), i < j, is the identity except
 *
 *     rows/cols (i, j) = [ e^{i phi} cos theta   -sin theta ]
 *                        [ e^{i phi} sin theta    cos theta ]
 *
 * Reck:    U T^dag_{s1} ... T^dag_{sk} = D, nulling the lower-left triangle
 *          row by row from the bottom, columns right to left -- the cell
 *          order (N,N-1), (N,N-2), ..., (N,1), (N-1,N-2), ..., (2,1).
 *          Hence U = D T_{sk} ... T_{s1}.
 * Clements: zig-zag two-sided elimination; the left factors are pushed
 *          through the diagonal (T^dag D = D' T') so that the plan again
 *          reads U = D (ordered product of cells).
 *
 * A plan always reconstructs as  U = diag(plan.diag) * prod(plan.steps).
 */
#pragma once

#include <string>
#include <vector>

#include "lopt/linalg.hpp"

namespace lopt {

struct GivensStep {
    std::size_t i = 0, j = 0;  // mode indices, i < j
    double theta = 0.0;        // mixing angle
    double phi = 0.0;          // relative phase
};

enum class MeshKind { Reck, Clements };

inline const char* mesh_kind_name(MeshKind k) {
    return k == MeshKind::Reck ? "reck" : "clements";
}

struct DecompositionPlan {
    MeshKind kind = MeshKind::Reck;
    std::size_t n = 0;
    std::vector<GivensStep> steps;  // product order: U = diag * steps[0] * steps[1] * ...
    std::vector<cdouble> diag;      // unit-modulus phases
};

namespace detail {

inline CMatrix embed_cell(std::size_t n, const GivensStep& s) {
    CMatrix t = CMatrix::identity(n);
    const cdouble eip = std::polar(1.0, s.phi);
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    t(s.i, s.i) = eip * c;
    t(s.i, s.j) = -sn;
    t(s.j, s.i) = eip * sn;
    t(s.j, s.j) = c;
    return t;
}

// Right-multiply m by T^dag_{ij}(theta, phi) in place (mixes columns i, j).
inline void apply_tdag_right(CMatrix& m, const GivensStep& s) {
    const cdouble emip = std::polar(1.0, -s.phi);
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const cdouble xi = m(r, s.i), xj = m(r, s.j);
        m(r, s.i) = emip * c * xi - sn * xj;
        m(r, s.j) = emip * sn * xi + c * xj;
    }
}

// Left-multiply m by T_{ij}(theta, phi) in place (mixes rows i, j).
inline void apply_t_left(CMatrix& m, const GivensStep& s) {
    const cdouble eip = std::polar(1.0, s.phi);
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    for (std::size_t col = 0; col < m.cols(); ++col) {
        const cdouble xi = m(s.i, col), xj = m(s.j, col);
        m(s.i, col) = eip * c * xi - sn * xj;
        m(s.j, col) = eip * sn * xi + c * xj;
    }
}

// Parameters nulling m(r, i) by right-multiplication with T^dag_{ij}:
// e^{-i phi} cos(theta) m(r,i) = sin(theta) m(r,j).
inline GivensStep null_right(const CMatrix& m, std::size_t r, std::size_t i, std::size_t j) {
    GivensStep s{i, j, 0.0, 0.0};
    const cdouble a = m(r, i), b = m(r, j);
    if (std::abs(a) < 1e-300) return s;  // already zero: emit an identity cell
    if (std::abs(b) < 1e-300) {
        s.theta = kPi / 2;
        s.phi = 0.0;
        return s;
    }
    s.theta = std::atan2(std::abs(a), std::abs(b));
    s.phi = std::arg(a) - std::arg(b);
    return s;
}

// Parameters nulling m(j, c) by left-multiplication with T_{ij} (i = j - 1):
// e^{i phi} sin(theta) m(i,c) + cos(theta) m(j,c) = 0.
inline GivensStep null_left(const CMatrix& m, std::size_t c, std::size_t i, std::size_t j) {
    GivensStep s{i, j, 0.0, 0.0};
    const cdouble a = m(i, c), b = m(j, c);
    if (std::abs(b) < 1e-300) return s;  // already zero: identity cell
    if (std::abs(a) < 1e-300) {
        // theta = pi/2 sends m(j,c) <- e^{i phi} m(i,c) = 0 for any phi
        s.theta = kPi / 2;
        return s;
    }
    s.theta = std::atan2(std::abs(b), std::abs(a));
    s.phi = std::arg(-b) - std::arg(a);
    return s;
}

inline void require_unitary(const CMatrix& u, const char* who) {
    if (!u.is_square())
        throw std::invalid_argument(std::string(who) + ": input is not square (" + u.shape_str() + ")");
    const double res = unitarity_residual(u);
    if (res > 1e-10)
        throw std::invalid_argument(std::string(who) + ": input is not unitary, residual " +
                                    std::to_string(res));
}

}  // namespace detail

inline CMatrix reconstruct(const DecompositionPlan& plan) {
    const std::size_t n = plan.n;
    if (n < 1 || plan.diag.size() != n)
        throw std::invalid_argument("reconstruct: malformed plan (diag size)");
    for (const cdouble& d : plan.diag)
        if (std::abs(std::abs(d) - 1.0) > 1e-9)
            throw std::invalid_argument("reconstruct: diagonal entry is not unit-modulus");
    for (const GivensStep& s : plan.steps)
        if (!(s.i < s.j && s.j < n))
            throw std::invalid_argument("reconstruct: step indices out of range");
    CMatrix u = CMatrix::diagonal(plan.diag);
    for (const GivensStep& s : plan.steps) u = matmul(u, detail::embed_cell(n, s));
    return u;
}

// Triangular elimination.  Nulling order: row N-1 (0-based) columns
// N-2 .. 0, then row N-2, ..., finishing with element (1, 0).
inline DecompositionPlan reck_decompose(const CMatrix& u_in) {
    detail::require_unitary(u_in, "reck_decompose");
    const std::size_t n = u_in.rows();
    CMatrix w = u_in;
    std::vector<GivensStep> elim;  // in elimination order
    for (std::size_t r = n - 1; r >= 1; --r) {
        for (std::size_t c = r; c-- > 0;) {
            // mix columns (c, r) to null w(r, c)
            GivensStep s = detail::null_right(w, r, c, r);
            detail::apply_tdag_right(w, s);
            elim.push_back(s);
        }
        if (r == 1) break;
    }
    DecompositionPlan plan;
    plan.kind = MeshKind::Reck;
    plan.n = n;
    plan.steps.assign(elim.rbegin(), elim.rend());
    plan.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) plan.diag[i] = w(i, i) / std::abs(w(i, i));
    return plan;
}

// Balanced two-sided elimination with the left factors pushed through the
// diagonal, so the plan reconstructs with the same rule as the Reck plan.
inline DecompositionPlan clements_decompose(const CMatrix& u_in) {
    detail::require_unitary(u_in, "clements_decompose");
    const std::size_t n = u_in.rows();
    CMatrix w = u_in;
    std::vector<GivensStep> right_steps;  // applied as T^dag on the right, in order
    std::vector<GivensStep> left_steps;   // applied as T on the left, in order
    for (std::size_t diag = 1; diag < n; ++diag) {
        if (diag % 2 == 1) {
            for (std::size_t j = 0; j < diag; ++j) {
                const std::size_t row = n - 1 - j, col = diag - 1 - j;
                GivensStep s = detail::null_right(w, row, col, col + 1);
                detail::apply_tdag_right(w, s);
                right_steps.push_back(s);
            }
        } else {
            for (std::size_t j = 1; j <= diag; ++j) {
                const std::size_t row = n + j - diag - 1, col = j - 1;
                GivensStep s = detail::null_left(w, col, row - 1, row);
                detail::apply_t_left(w, s);
                left_steps.push_back(s);
            }
        }
    }
    // L_p ... L_1 U Tdag_1 ... Tdag_q = D  =>  U = L_1^dag ... L_p^dag D T_q ... T_1.
    // Push each L^dag through the diagonal: T^dag_{ij}(theta, phi) D =
    // D' T_{ij}(theta, phi') with d'_i = -e^{-i phi} d_j, d'_j = d_j and
    // e^{i phi'} = -d_i / d_j.
    std::vector<cdouble> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = w(i, i) / std::abs(w(i, i));
    std::vector<GivensStep> pushed;  // product order
    for (auto it = left_steps.rbegin(); it != left_steps.rend(); ++it) {
        GivensStep s = *it;
        if (std::abs(s.theta) < 1e-15) {
            // T(0, phi)^dag is itself diagonal: absorb it, emit an identity cell
            d[s.i] *= std::polar(1.0, -s.phi);
            pushed.insert(pushed.begin(), GivensStep{s.i, s.j, 0.0, 0.0});
            continue;
        }
        const cdouble di = d[s.i], dj = d[s.j];
        GivensStep out{s.i, s.j, s.theta, std::arg(-di / dj)};
        d[s.i] = -std::polar(1.0, -s.phi) * dj;
        d[s.j] = dj;
        pushed.insert(pushed.begin(), out);  // L_1 ends up first in the product
    }
    DecompositionPlan plan;
    plan.kind = MeshKind::Clements;
    plan.n = n;
    plan.steps = std::move(pushed);
    for (auto it = right_steps.rbegin(); it != right_steps.rend(); ++it) plan.steps.push_back(*it);
    plan.diag = std::move(d);
    return plan;
}

// ---------------------------------------------------------------------------
// mesh cost / depth report
// ---------------------------------------------------------------------------

struct MeshReport {
    std::size_t n = 0;
    MeshKind kind = MeshKind::Reck;
    std::size_t bs_count = 0;              // N(N-1)/2 fixed-ratio cells
    std::size_t bs_count_tunable = 0;      // N(N-1): each cell as a 2-splitter MZ
    std::size_t bs_count_table = 0;        // N(N+1): the device-table counting
    std::size_t unbiased_port_cost = 0;    // an unbiased N-port needs N splitters
    std::vector<std::size_t> depth_per_input;  // min cells crossed, per input port
    std::size_t layers = 0;                // crossing layers in the physical mesh
};

// Depth per input = the minimum number of cells any photon path entering that
// port must traverse, over the layered physical mesh (cells act input-first =
// reverse product order).
inline MeshReport mesh_report(const DecompositionPlan& plan) {
    MeshReport rep;
    rep.n = plan.n;
    rep.kind = plan.kind;
    rep.bs_count = plan.steps.size();
    rep.bs_count_tunable = 2 * plan.steps.size();
    rep.bs_count_table = plan.n * (plan.n + 1);
    rep.unbiased_port_cost = plan.n;

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> layer_cells;
    if (plan.kind == MeshKind::Clements) {
        // canonical rectangle: the k-th cell on wires (m, m+1) sits in column
        // (m mod 2) + 2k; same-parity columns never share wires
        std::vector<std::size_t> occurrence(plan.n, 0);
        for (const auto& s : plan.steps) {
            const std::size_t col = (s.i % 2) + 2 * occurrence[s.i]++;
            if (col >= layer_cells.size()) layer_cells.resize(col + 1);
            layer_cells[col].push_back({s.i, s.j});
        }
    } else {
        // greedy layer assignment in physical (input-first) order
        std::vector<std::size_t> wire_busy(plan.n, 0);  // next free layer per wire
        for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
            const std::size_t layer = std::max(wire_busy[it->i], wire_busy[it->j]);
            if (layer >= layer_cells.size()) layer_cells.resize(layer + 1);
            layer_cells[layer].push_back({it->i, it->j});
            wire_busy[it->i] = wire_busy[it->j] = layer + 1;
        }
    }
    rep.layers = layer_cells.size();

    // min crossings from each input: a photon on a cell's wire must cross it
    // (cost 1, may switch wires); wires without a cell pass the layer free.
    const std::size_t INF = static_cast<std::size_t>(-1);
    rep.depth_per_input.assign(plan.n, 0);
    for (std::size_t port = 0; port < plan.n; ++port) {
        std::vector<std::size_t> cost(plan.n, INF);
        cost[port] = 0;
        for (const auto& cells : layer_cells) {
            std::vector<std::size_t> next = cost;
            for (const auto& [wi, wj] : cells) {
                const std::size_t in = std::min(cost[wi], cost[wj]);
                next[wi] = next[wj] = (in == INF) ? INF : in + 1;
            }
            cost = next;
        }
        std::size_t best = INF;
        for (std::size_t w = 0; w < plan.n; ++w) best = std::min(best, cost[w]);
        rep.depth_per_input[port] = best == INF ? 0 : best;
    }
    return rep;
}

}  // namespace lopt
