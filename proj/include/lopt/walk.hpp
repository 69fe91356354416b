/*
 * Discrete-time quantum walks in both formalisms, their unitary equivalence,
 * and the search / hitting-time experiments, with exact classical baselines.
 *
 * Coin model   one step = coin on the internal index, then the direction
 *              shift: V = S (I (x) C).  Supported position spaces: the line
 *              (array of 2N+3 sites so boundaries are never reached), the
 *              n-cycle and the toroidal rectangular lattice.
 * Edge model   amplitudes live on directed edges; each step scatters the
 *              amplitude of (u -> v) at v through v's matrix into v's
 *              outgoing edges: columns index inputs by port order, rows index
 *              outputs by port order.
 *
 * Equivalence  E maps a directed edge to (head vertex) (x) (direction of
 *              motion): E|m-1,m> = |m>|R>, E|m,m,n-1,n> = |m,n>|U>, etc.
 *              E U = V E holds when the vertex scattering is the coin
 *              re-indexed by direction of motion, S = C Pi, where Pi is the
 *              port-reversal permutation (in from port p = moving opp(p)).
 *              scattering_from_coin() builds that S.  Device-faithful graphs
 *              (scattering = coin in port basis) are what the experiments
 *              use; the two choices coincide for any coin with C Pi = C.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lopt/graphs.hpp"
#include "lopt/linalg.hpp"

namespace lopt {

// ---------------------------------------------------------------------------
// coin-model states
// ---------------------------------------------------------------------------

enum class CoinSubstrate { Line, Cycle, Torus };

struct CoinWalkState {
    CoinSubstrate sub = CoinSubstrate::Line;
    std::size_t npos = 0;      // number of position sites
    std::size_t origin = 0;    // Line: array index of site 0
    std::size_t width = 0, height = 0;  // Torus
    std::size_t coin_dim = 2;
    std::vector<cdouble> amp;  // position-major, coin-minor

    cdouble& at(std::size_t pos, std::size_t c) { return amp[pos * coin_dim + c]; }
    const cdouble& at(std::size_t pos, std::size_t c) const { return amp[pos * coin_dim + c]; }

    double norm_sq() const {
        double s = 0.0;
        for (const cdouble& z : amp) s += std::norm(z);
        return s;
    }

    // Line walk for n_steps: sites -(N+1) .. +(N+1), so t <= N never touches
    // the ends; the step asserts the boundary amplitudes stay exactly zero.
    static CoinWalkState line(std::size_t n_steps, std::size_t coin_dim = 2) {
        CoinWalkState s;
        s.sub = CoinSubstrate::Line;
        s.npos = 2 * n_steps + 3;
        s.origin = n_steps + 1;
        s.coin_dim = coin_dim;
        s.amp.assign(s.npos * coin_dim, cdouble{});
        return s;
    }
    static CoinWalkState cycle(std::size_t n, std::size_t coin_dim = 2) {
        CoinWalkState s;
        s.sub = CoinSubstrate::Cycle;
        s.npos = n;
        s.coin_dim = coin_dim;
        s.amp.assign(n * coin_dim, cdouble{});
        return s;
    }
    static CoinWalkState torus(std::size_t w, std::size_t h) {
        CoinWalkState s;
        s.sub = CoinSubstrate::Torus;
        s.npos = w * h;
        s.width = w;
        s.height = h;
        s.coin_dim = 4;
        s.amp.assign(w * h * 4, cdouble{});
        return s;
    }
};

// Coin then shift.  Line/Cycle coin basis (R, L); torus coin basis
// (L, U, R, D) with |U> moving +y, |R> moving +x (periodic).
inline CoinWalkState coin_step(const CoinWalkState& state, const CMatrix& c) {
    if (c.rows() != state.coin_dim || c.cols() != state.coin_dim)
        throw std::invalid_argument("coin_step: coin " + c.shape_str() + " does not match coin dim " +
                                    std::to_string(state.coin_dim));
    CoinWalkState out = state;
    std::fill(out.amp.begin(), out.amp.end(), cdouble{});
    // coin
    std::vector<cdouble> mixed(state.amp.size());
    for (std::size_t p = 0; p < state.npos; ++p)
        for (std::size_t i = 0; i < state.coin_dim; ++i) {
            cdouble s{};
            for (std::size_t j = 0; j < state.coin_dim; ++j) s += c(i, j) * state.at(p, j);
            mixed[p * state.coin_dim + i] = s;
        }
    // shift
    switch (state.sub) {
        case CoinSubstrate::Line: {
            const std::size_t last = state.npos - 1;
            if (std::abs(mixed[0 * 2 + 1]) > 0.0 || std::abs(mixed[last * 2 + 0]) > 0.0)
                throw std::runtime_error(
                    "coin_step: amplitude reached the line boundary; allocate more steps or use the "
                    "edge model on an explicit graph");
            for (std::size_t p = 0; p < state.npos; ++p) {
                if (p + 1 < state.npos) out.at(p + 1, 0) += mixed[p * 2 + 0];  // R moves +1
                if (p >= 1) out.at(p - 1, 1) += mixed[p * 2 + 1];              // L moves -1
            }
            break;
        }
        case CoinSubstrate::Cycle: {
            const std::size_t n = state.npos;
            for (std::size_t p = 0; p < n; ++p) {
                out.at((p + 1) % n, 0) += mixed[p * 2 + 0];
                out.at((p + n - 1) % n, 1) += mixed[p * 2 + 1];
            }
            break;
        }
        case CoinSubstrate::Torus: {
            const std::size_t w = state.width, h = state.height;
            auto vid = [&](std::size_t x, std::size_t y) { return y * w + x; };
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const std::size_t p = vid(x, y);
                    out.at(vid((x + w - 1) % w, y), 0) += mixed[p * 4 + 0];  // L
                    out.at(vid(x, (y + 1) % h), 1) += mixed[p * 4 + 1];      // U
                    out.at(vid((x + 1) % w, y), 2) += mixed[p * 4 + 2];      // R
                    out.at(vid(x, (y + h - 1) % h), 3) += mixed[p * 4 + 3];  // D
                }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// edge-model states
// ---------------------------------------------------------------------------

struct EdgeWalkState {
    const Graph* g = nullptr;
    std::vector<cdouble> amp;  // indexed by the graph's directed-edge index

    explicit EdgeWalkState(const Graph& graph)
        : g(&graph), amp(graph.num_directed_edges(), cdouble{}) {}

    double norm_sq() const {
        double s = 0.0;
        for (const cdouble& z : amp) s += std::norm(z);
        return s;
    }

    static EdgeWalkState uniform(const Graph& graph) {
        EdgeWalkState s(graph);
        const double a = 1.0 / std::sqrt(static_cast<double>(graph.num_directed_edges()));
        std::fill(s.amp.begin(), s.amp.end(), cdouble{a, 0.0});
        return s;
    }
    static EdgeWalkState from_vertex(const Graph& graph, std::size_t v) {
        EdgeWalkState s(graph);
        const auto& ports = graph.vertex(v).ports;
        const double a = 1.0 / std::sqrt(static_cast<double>(ports.size()));
        for (std::size_t u : ports) s.amp[graph.edge_index(v, u)] = a;
        return s;
    }
};

// Scatter every directed edge (u -> v) at its head vertex.
inline EdgeWalkState edge_step(const EdgeWalkState& state, const Graph& g) {
    if (state.g != &g && state.amp.size() != g.num_directed_edges())
        throw std::invalid_argument("edge_step: state is not indexed by this graph's edges");
    EdgeWalkState out(g);
    for (std::size_t k = 0; k < state.amp.size(); ++k) {
        const cdouble a = state.amp[k];
        if (a == cdouble{}) continue;
        const auto [u, v] = g.edge(k);
        const auto& vx = g.vertex(v);
        const std::size_t pin = g.port_of(v, u);
        for (std::size_t q = 0; q < vx.ports.size(); ++q)
            out.amp[g.edge_index(v, vx.ports[q])] += vx.scatter(q, pin) * a;
    }
    return out;
}

// Adjoint of edge_step (time reversal); used by the reversibility checks.
// U^dag: amp_in(u->v) = sum_q conj(S_v(q, pin)) amp_out(v->w_q)
inline EdgeWalkState edge_step_adjoint(const EdgeWalkState& state, const Graph& g) {
    EdgeWalkState out(g);
    for (std::size_t k = 0; k < out.amp.size(); ++k) {
        const auto [u, v] = g.edge(k);
        const auto& vx = g.vertex(v);
        const std::size_t pin = g.port_of(v, u);
        cdouble s{};
        for (std::size_t q = 0; q < vx.ports.size(); ++q)
            s += std::conj(vx.scatter(q, pin)) * state.amp[g.edge_index(v, vx.ports[q])];
        out.amp[k] = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// equivalence map E and the motion-convention scattering
// ---------------------------------------------------------------------------

// Port-reversal permutation: arriving from the neighbour at port p means
// moving in direction opp(p).  Defined for substrates whose ports are
// directions (cycle, toroidal rectangle).
inline std::vector<std::size_t> opposite_ports(const Graph& g) {
    switch (g.kind()) {
        case SubstrateKind::Line:
        case SubstrateKind::Cycle:
            return {1, 0};         // next <-> prev  (coin R <-> L)
        case SubstrateKind::RectLattice:
            return {2, 3, 0, 1};   // L<->R, U<->D
        default:
            throw std::invalid_argument("opposite_ports: substrate has no direction pairing");
    }
}

// S = C Pi: the vertex scattering matrix whose edge walk is E-equivalent to
// the coin walk with coin c.
inline CMatrix scattering_from_coin(const CMatrix& c, const Graph& g) {
    const auto opp = opposite_ports(g);
    if (c.rows() != opp.size() || c.cols() != opp.size())
        throw std::invalid_argument("scattering_from_coin: coin " + c.shape_str() +
                                    " does not match substrate direction count");
    CMatrix s(c.rows(), c.cols());
    for (std::size_t q = 0; q < c.rows(); ++q)
        for (std::size_t p = 0; p < c.cols(); ++p) s(q, p) = c(q, opp[p]);
    return s;
}

// E: edge state -> coin state.  |u -> v| maps to |v> (x) |direction of u->v|.
inline CoinWalkState e_map(const EdgeWalkState& state, const Graph& g) {
    const auto opp = opposite_ports(g);
    CoinWalkState out;
    if (g.kind() == SubstrateKind::Cycle) {
        out = CoinWalkState::cycle(g.num_vertices());
    } else if (g.kind() == SubstrateKind::RectLattice) {
        // infer torus shape from the spec-built port structure
        // (vertex v = y*w + x; right neighbour of 0 is 1 unless w == 1)
        throw std::invalid_argument("e_map: use the (graph, width, height) overload for lattices");
    } else {
        throw std::invalid_argument("e_map: unsupported substrate (line-as-cycle and toroidal "
                                    "rectangular lattices only)");
    }
    for (std::size_t k = 0; k < state.amp.size(); ++k) {
        const auto [u, v] = g.edge(k);
        const std::size_t dir = opp[g.port_of(v, u)];  // direction of motion
        out.at(v, dir) += state.amp[k];
    }
    return out;
}

inline CoinWalkState e_map(const EdgeWalkState& state, const Graph& g, std::size_t w, std::size_t h) {
    if (g.kind() != SubstrateKind::RectLattice || g.num_vertices() != w * h)
        throw std::invalid_argument("e_map: graph is not a w x h rectangular lattice");
    const auto opp = opposite_ports(g);
    CoinWalkState out = CoinWalkState::torus(w, h);
    for (std::size_t k = 0; k < state.amp.size(); ++k) {
        const auto [u, v] = g.edge(k);
        out.at(v, opp[g.port_of(v, u)]) += state.amp[k];
    }
    return out;
}

// E^-1: coin state -> edge state on the matching graph.
inline EdgeWalkState e_map_inverse(const CoinWalkState& state, const Graph& g) {
    const auto opp = opposite_ports(g);
    EdgeWalkState out(g);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        for (std::size_t dir = 0; dir < state.coin_dim; ++dir) {
            const cdouble a = state.at(v, dir);
            if (a == cdouble{}) continue;
            // moving in direction dir means it came from the neighbour at port opp(dir)
            const std::size_t u = g.vertex(v).ports[opp[dir]];
            out.amp[g.edge_index(u, v)] += a;
        }
    return out;
}

// ---------------------------------------------------------------------------
// runs and experiment drivers
// ---------------------------------------------------------------------------

enum class WalkModel { Coin, Edge };

struct WalkRun {
    WalkModel model = WalkModel::Coin;
    std::size_t steps = 0;
    // per-step position distributions, distributions[t] for t = 0..steps,
    // indexed by site (Line: array index with `origin`; graphs: vertex id)
    std::vector<std::vector<double>> distributions;
    bool is_line = false;
    std::size_t line_origin = 0;  // Line runs: array index of position 0
    bool retained = true;
};

inline std::vector<double> position_distribution_of(const CoinWalkState& s) {
    std::vector<double> p(s.npos, 0.0);
    for (std::size_t pos = 0; pos < s.npos; ++pos)
        for (std::size_t c = 0; c < s.coin_dim; ++c) p[pos] += std::norm(s.at(pos, c));
    return p;
}

inline std::vector<double> position_distribution_of(const EdgeWalkState& s, const Graph& g) {
    // marginal over incoming directions: probability of "arriving at v"
    std::vector<double> p(g.num_vertices(), 0.0);
    for (std::size_t k = 0; k < s.amp.size(); ++k) p[g.edge(k).second] += std::norm(s.amp[k]);
    return p;
}

inline WalkRun run_coin_walk(CoinWalkState state, const CMatrix& c, std::size_t steps,
                             bool retain = true) {
    WalkRun run;
    run.model = WalkModel::Coin;
    run.steps = steps;
    run.is_line = state.sub == CoinSubstrate::Line;
    run.line_origin = state.origin;
    run.retained = retain;
    if (retain) run.distributions.push_back(position_distribution_of(state));
    for (std::size_t t = 0; t < steps; ++t) {
        state = coin_step(state, c);
        if (retain) run.distributions.push_back(position_distribution_of(state));
    }
    if (!retain) run.distributions.push_back(position_distribution_of(state));
    return run;
}

inline WalkRun run_edge_walk(EdgeWalkState state, const Graph& g, std::size_t steps,
                             bool retain = true) {
    WalkRun run;
    run.model = WalkModel::Edge;
    run.steps = steps;
    run.retained = retain;
    if (retain) run.distributions.push_back(position_distribution_of(state, g));
    for (std::size_t t = 0; t < steps; ++t) {
        state = edge_step(state, g);
        if (retain) run.distributions.push_back(position_distribution_of(state, g));
    }
    if (!retain) run.distributions.push_back(position_distribution_of(state, g));
    return run;
}

inline const std::vector<double>& position_distribution(const WalkRun& run, std::size_t t) {
    if (t > run.steps)
        throw std::invalid_argument("position_distribution: step " + std::to_string(t) +
                                    " out of range");
    if (!run.retained && t != run.steps)
        throw std::invalid_argument("position_distribution: step " + std::to_string(t) +
                                    " was not retained");
    return run.distributions[run.retained ? t : 0];
}

// standard deviation of position per retained step (line runs)
inline std::vector<double> spread_stddev(const WalkRun& run) {
    if (!run.is_line)
        throw std::invalid_argument("spread_stddev: line substrate required");
    std::vector<double> out;
    out.reserve(run.distributions.size());
    for (const auto& dist : run.distributions) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            const double x = static_cast<double>(i) - static_cast<double>(run.line_origin);
            mean += dist[i] * x;
            m2 += dist[i] * x * x;
        }
        out.push_back(std::sqrt(std::max(0.0, m2 - mean * mean)));
    }
    return out;
}

// Exact distribution of the classical +-1 random walk after t steps
// (binomial); support on {-t, -t+2, ..., t}.  sigma(t) = sqrt(t).
inline std::map<long long, double> classical_line_distribution(std::size_t t) {
    std::map<long long, double> dist;
    std::vector<double> logfact(t + 1, 0.0);
    for (std::size_t i = 1; i <= t; ++i) logfact[i] = logfact[i - 1] + std::log(static_cast<double>(i));
    for (std::size_t k = 0; k <= t; ++k) {
        const double logp = logfact[t] - logfact[k] - logfact[t - k] -
                            static_cast<double>(t) * std::log(2.0);
        dist[2 * static_cast<long long>(k) - static_cast<long long>(t)] = std::exp(logp);
    }
    return dist;
}

inline double classical_line_stddev(std::size_t t) {
    const auto dist = classical_line_distribution(t);
    double mean = 0.0, m2 = 0.0;
    for (const auto& [x, p] : dist) {
        mean += p * static_cast<double>(x);
        m2 += p * static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(m2 - mean * mean);
}

// ---------------------------------------------------------------------------
// spatial search
// ---------------------------------------------------------------------------

struct SearchResult {
    std::vector<double> marked_probability;  // P_marked(t), t = 0..steps
    double baseline = 0.0;                   // uniform value deg(v) * 2 / (2E)
    double max_probability = 0.0;
    std::size_t argmax = 0;
};

// Uniform superposition over all directed edges; per-step total probability
// on the directed edges incident to the marked vertex (either direction).
inline SearchResult spatial_search(const Graph& g, std::size_t steps) {
    if (g.marked().size() != 1)
        throw std::invalid_argument("spatial_search: exactly one marked vertex required, got " +
                                    std::to_string(g.marked().size()));
    const std::size_t mv = g.marked()[0];
    std::vector<std::size_t> incident;
    for (std::size_t k = 0; k < g.num_directed_edges(); ++k) {
        const auto [u, v] = g.edge(k);
        if (u == mv || v == mv) incident.push_back(k);
    }
    SearchResult res;
    res.baseline = static_cast<double>(incident.size()) /
                   static_cast<double>(g.num_directed_edges());
    EdgeWalkState s = EdgeWalkState::uniform(g);
    for (std::size_t t = 0; t <= steps; ++t) {
        double p = 0.0;
        for (std::size_t k : incident) p += std::norm(s.amp[k]);
        res.marked_probability.push_back(p);
        if (p > res.max_probability) { res.max_probability = p; res.argmax = t; }
        if (t < steps) s = edge_step(s, g);
    }
    return res;
}

// ---------------------------------------------------------------------------
// hitting times
// ---------------------------------------------------------------------------

struct HittingResult {
    std::vector<double> quantum;    // P(arriving at target), t = 0..steps
    std::vector<double> classical;  // Markov-chain P(at target), t = 0..steps
    std::optional<std::size_t> quantum_first;    // first t with P >= threshold
    std::optional<std::size_t> classical_first;
    std::size_t quantum_argmax = 0;              // alternative definition
    std::size_t classical_argmax = 0;
    double threshold = 0.0;
};

// Exact classical baseline: power iteration of the uniform-transition Markov
// chain (walker hops to a uniformly random neighbour).
inline std::vector<double> classical_hitting_series(const Graph& g, std::size_t start,
                                                    std::size_t target, std::size_t steps) {
    std::vector<double> p(g.num_vertices(), 0.0), q(g.num_vertices(), 0.0);
    p[start] = 1.0;
    std::vector<double> series{p[target]};
    for (std::size_t t = 0; t < steps; ++t) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t v = 0; v < g.num_vertices(); ++v) {
            if (p[v] == 0.0) continue;
            const auto& ports = g.vertex(v).ports;
            const double share = p[v] / static_cast<double>(ports.size());
            for (std::size_t u : ports) q[u] += share;
        }
        std::swap(p, q);
        series.push_back(p[target]);
    }
    return series;
}

// Monte-Carlo classical baseline (validation of the exact chain): fraction of
// walkers at the target per step, seeded blocks of trials.
inline std::vector<double> classical_hitting_monte_carlo(const Graph& g, std::size_t start,
                                                         std::size_t target, std::size_t steps,
                                                         std::size_t trials, std::uint64_t seed) {
    std::vector<std::size_t> hits(steps + 1, 0);
    const std::size_t block = 4096;
    for (std::size_t done = 0; done < trials;) {
        const std::size_t m = std::min(block, trials - done);
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (done / block + 1)));
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t v = start;
            if (v == target) ++hits[0];
            for (std::size_t t = 1; t <= steps; ++t) {
                const auto& ports = g.vertex(v).ports;
                v = ports[rng() % ports.size()];
                if (v == target) ++hits[t];
            }
        }
        done += m;
    }
    std::vector<double> series(steps + 1);
    for (std::size_t t = 0; t <= steps; ++t)
        series[t] = static_cast<double>(hits[t]) / static_cast<double>(trials);
    return series;
}

// Quantum series: edge walk from the start vertex's outgoing edges (uniform);
// P_target(t) = total probability on directed edges arriving at the target.
inline HittingResult hitting_time(const Graph& g, std::size_t start, std::size_t target,
                                  std::size_t steps, double threshold) {
    if (start == target)
        throw std::invalid_argument("hitting_time: start and target must differ");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("hitting_time: threshold must lie in (0, 1]");
    HittingResult res;
    res.threshold = threshold;
    EdgeWalkState s = EdgeWalkState::from_vertex(g, start);
    for (std::size_t t = 0; t <= steps; ++t) {
        double p = 0.0;
        for (std::size_t u : g.vertex(target).ports) p += std::norm(s.amp[g.edge_index(u, target)]);
        res.quantum.push_back(p);
        if (t < steps) s = edge_step(s, g);
    }
    res.classical = classical_hitting_series(g, start, target, steps);
    for (std::size_t t = 0; t <= steps; ++t) {
        if (!res.quantum_first && res.quantum[t] >= threshold) res.quantum_first = t;
        if (!res.classical_first && res.classical[t] >= threshold) res.classical_first = t;
        if (res.quantum[t] > res.quantum[res.quantum_argmax]) res.quantum_argmax = t;
        if (res.classical[t] > res.classical[res.classical_argmax]) res.classical_argmax = t;
    }
    return res;
}

}  // namespace lopt
