/*
 * Walk substrates: vertices with ordered ports, one unitary scattering matrix
 * per vertex (dimension = degree), and a dense directed-edge index space.
 *
 * Port ordering conventions (port k = "the neighbour in direction k"; on
 * substrates with a notion of direction the port order equals the coin basis
 * order, so the coin/edge equivalence map is index-stable):
 *
 *   Line / Cycle     (next, prev)              coin basis (R, L)
 *   RectLattice      (left, up, right, down)   coin basis (L, U, R, D)
 *   HexLattice       brick-wall honeycomb on a torus, two sublattices a/b;
 *                    a(x,y): (b(x,y), b(x-1,y), b(x,y-1))
 *                    b(x,y): (a(x,y), a(x+1,y), a(x,y+1))
 *   Hypercube(d)     port k = neighbour across bit k
 *   GluedTree(depth) two complete binary trees of the given depth joined by a
 *                    seeded random alternating cycle over the two leaf layers
 *                    (every leaf gains exactly two cross edges -> degree 3);
 *                    roots keep degree 2 and get the 2x2 Grover coin (= swap)
 *
 * Unless an explicit coin matrix is supplied, every vertex receives the
 * Grover coin of its degree (boundary vertices of open lattices therefore get
 * reduced-dimension Grover coins).  Graphs are immutable after construction;
 * mark_vertex returns a new value.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <random>
#include <vector>

#include "lopt/coins.hpp"
#include "lopt/linalg.hpp"

namespace lopt {

enum class SubstrateKind { Line, Cycle, RectLattice, HexLattice, Hypercube, GluedTree };

inline const char* substrate_name(SubstrateKind k) {
    switch (k) {
        case SubstrateKind::Line: return "line";
        case SubstrateKind::Cycle: return "cycle";
        case SubstrateKind::RectLattice: return "rect_lattice";
        case SubstrateKind::HexLattice: return "hex_lattice";
        case SubstrateKind::Hypercube: return "hypercube";
        case SubstrateKind::GluedTree: return "glued_tree";
    }
    return "?";
}

struct GraphSpec {
    SubstrateKind kind = SubstrateKind::Line;
    std::size_t n = 0;          // Line / Cycle
    std::size_t width = 0, height = 0;  // RectLattice / HexLattice
    bool toroidal = false;      // RectLattice
    std::size_t dim = 0;        // Hypercube
    std::size_t depth = 0;      // GluedTree
    std::uint64_t seed = 0;     // GluedTree
    std::optional<CMatrix> coin;  // explicit scattering matrix for every vertex
};

class Graph {
  public:
    struct Vertex {
        std::vector<std::size_t> ports;  // neighbour ids, in port order
        CMatrix scatter;                 // degree x degree unitary
    };

    Graph(SubstrateKind kind, std::vector<Vertex> vertices)
        : kind_(kind), vertices_(std::move(vertices)) {
        build_edge_index();
        validate();
    }

    SubstrateKind kind() const { return kind_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
    std::size_t degree(std::size_t v) const { return vertices_[v].ports.size(); }
    std::size_t num_directed_edges() const { return edges_.size(); }
    std::size_t num_edges() const { return edges_.size() / 2; }

    // dense directed-edge index space
    const std::pair<std::size_t, std::size_t>& edge(std::size_t idx) const { return edges_[idx]; }
    std::size_t edge_index(std::size_t tail, std::size_t head) const {
        auto it = edge_to_idx_.find({tail, head});
        if (it == edge_to_idx_.end())
            throw std::invalid_argument("edge_index: no directed edge " + std::to_string(tail) +
                                        " -> " + std::to_string(head));
        return it->second;
    }
    // port index of neighbour u in v's port list
    std::size_t port_of(std::size_t v, std::size_t u) const {
        const auto& ps = vertices_[v].ports;
        for (std::size_t k = 0; k < ps.size(); ++k)
            if (ps[k] == u) return k;
        throw std::invalid_argument("port_of: " + std::to_string(u) + " is not adjacent to " +
                                    std::to_string(v));
    }

    const std::vector<std::size_t>& marked() const { return marked_; }
    Graph with_marked(std::size_t v, CMatrix marked_coin) const {
        if (v >= vertices_.size()) throw std::invalid_argument("mark_vertex: no such vertex");
        const std::size_t d = degree(v);
        if (marked_coin.rows() != d || marked_coin.cols() != d)
            throw std::invalid_argument("mark_vertex: coin " + marked_coin.shape_str() +
                                        " does not match degree " + std::to_string(d) +
                                        " of vertex " + std::to_string(v));
        if (unitarity_residual(marked_coin) > 1e-12)
            throw std::invalid_argument("mark_vertex: marked coin is not unitary");
        Graph g = *this;
        g.vertices_[v].scatter = std::move(marked_coin);
        g.marked_.push_back(v);
        return g;
    }

  private:
    void build_edge_index() {
        for (std::size_t v = 0; v < vertices_.size(); ++v)
            for (std::size_t u : vertices_[v].ports) {
                edge_to_idx_[{v, u}] = edges_.size();
                edges_.emplace_back(v, u);
            }
    }
    void validate() const {
        for (std::size_t v = 0; v < vertices_.size(); ++v) {
            const auto& vx = vertices_[v];
            if (vx.scatter.rows() != vx.ports.size() || vx.scatter.cols() != vx.ports.size())
                throw std::invalid_argument("graph: scattering matrix " + vx.scatter.shape_str() +
                                            " does not match degree " +
                                            std::to_string(vx.ports.size()) + " of vertex " +
                                            std::to_string(v));
            if (unitarity_residual(vx.scatter) > 1e-12)
                throw std::invalid_argument("graph: scattering matrix of vertex " +
                                            std::to_string(v) + " is not unitary");
            for (std::size_t u : vx.ports)
                if (edge_to_idx_.find({u, v}) == edge_to_idx_.end())
                    throw std::invalid_argument("graph: edge " + std::to_string(v) + " -> " +
                                                std::to_string(u) + " has no reverse");
        }
    }

    SubstrateKind kind_;
    std::vector<Vertex> vertices_;
    std::vector<std::size_t> marked_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_to_idx_;
};

namespace detail {

inline CMatrix default_scatter(const GraphSpec& spec, std::size_t degree, std::size_t vertex_id) {
    if (spec.coin) {
        if (spec.coin->rows() != degree || spec.coin->cols() != degree)
            throw std::invalid_argument("build_graph: coin " + spec.coin->shape_str() +
                                        " does not match degree " + std::to_string(degree) +
                                        " of vertex " + std::to_string(vertex_id));
        return *spec.coin;
    }
    if (degree == 1) return CMatrix{{1.0}};  // dead end reflects
    return coin(CoinSpec{CoinKind::Grover, degree});
}

}  // namespace detail

inline Graph build_graph(const GraphSpec& spec) {
    std::vector<Graph::Vertex> vs;
    switch (spec.kind) {
        case SubstrateKind::Line: {
            if (spec.n < 2) throw std::invalid_argument("build_graph: line needs n >= 2");
            vs.resize(spec.n);
            for (std::size_t v = 0; v < spec.n; ++v) {
                if (v + 1 < spec.n) vs[v].ports.push_back(v + 1);  // next first (coin R)
                if (v >= 1) vs[v].ports.push_back(v - 1);
            }
            break;
        }
        case SubstrateKind::Cycle: {
            if (spec.n < 3) throw std::invalid_argument("build_graph: cycle needs n >= 3");
            vs.resize(spec.n);
            for (std::size_t v = 0; v < spec.n; ++v)
                vs[v].ports = {(v + 1) % spec.n, (v + spec.n - 1) % spec.n};
            break;
        }
        case SubstrateKind::RectLattice: {
            const std::size_t w = spec.width, h = spec.height;
            if (w < 1 || h < 1) throw std::invalid_argument("build_graph: lattice needs w,h >= 1");
            if (spec.toroidal && (w < 3 || h < 3))
                throw std::invalid_argument("build_graph: toroidal lattice needs w,h >= 3");
            vs.resize(w * h);
            auto vid = [&](std::size_t x, std::size_t y) { return y * w + x; };
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    auto& ports = vs[vid(x, y)].ports;
                    if (spec.toroidal) {
                        ports = {vid((x + w - 1) % w, y), vid(x, (y + 1) % h),
                                 vid((x + 1) % w, y), vid(x, (y + h - 1) % h)};  // L U R D
                    } else {
                        if (x >= 1) ports.push_back(vid(x - 1, y));
                        if (y + 1 < h) ports.push_back(vid(x, y + 1));
                        if (x + 1 < w) ports.push_back(vid(x + 1, y));
                        if (y >= 1) ports.push_back(vid(x, y - 1));
                    }
                }
            break;
        }
        case SubstrateKind::HexLattice: {
            const std::size_t w = spec.width, h = spec.height;
            if (w < 2 || h < 2) throw std::invalid_argument("build_graph: hex lattice needs w,h >= 2");
            vs.resize(2 * w * h);
            auto a = [&](std::size_t x, std::size_t y) { return 2 * ((y % h) * w + (x % w)); };
            auto b = [&](std::size_t x, std::size_t y) { return 2 * ((y % h) * w + (x % w)) + 1; };
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    vs[a(x, y)].ports = {b(x, y), b((x + w - 1) % w, y), b(x, (y + h - 1) % h)};
                    vs[b(x, y)].ports = {a(x, y), a((x + 1) % w, y), a(x, (y + 1) % h)};
                }
            break;
        }
        case SubstrateKind::Hypercube: {
            if (spec.dim < 1 || spec.dim > 20)
                throw std::invalid_argument("build_graph: hypercube dimension out of range");
            const std::size_t n = std::size_t{1} << spec.dim;
            vs.resize(n);
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t bit = 0; bit < spec.dim; ++bit)
                    vs[v].ports.push_back(v ^ (std::size_t{1} << bit));
            break;
        }
        case SubstrateKind::GluedTree: {
            if (spec.depth < 1) throw std::invalid_argument("build_graph: glued tree needs depth >= 1");
            const std::size_t n1 = (std::size_t{1} << (spec.depth + 1)) - 1;  // per tree, heap order
            vs.resize(2 * n1);
            auto t1 = [&](std::size_t i) { return i; };
            auto t2 = [&](std::size_t i) { return n1 + i; };
            for (std::size_t i = 0; i < n1; ++i) {
                const std::size_t l = 2 * i + 1, r = 2 * i + 2;
                if (l >= n1) break;
                for (auto [p, c] : {std::pair{t1(i), t1(l)}, {t1(i), t1(r)},
                                    {t2(i), t2(l)}, {t2(i), t2(r)}}) {
                    vs[p].ports.push_back(c);
                    vs[c].ports.push_back(p);
                }
            }
            const std::size_t first_leaf = (std::size_t{1} << spec.depth) - 1;
            std::vector<std::size_t> leaves1, leaves2;
            for (std::size_t i = first_leaf; i < n1; ++i) {
                leaves1.push_back(t1(i));
                leaves2.push_back(t2(i));
            }
            std::mt19937_64 rng(spec.seed);
            std::shuffle(leaves1.begin(), leaves1.end(), rng);
            std::shuffle(leaves2.begin(), leaves2.end(), rng);
            // alternating cycle l1[0] l2[0] l1[1] l2[1] ... back to l1[0]
            const std::size_t k = leaves1.size();
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t x = leaves1[i], y = leaves2[i], z = leaves1[(i + 1) % k];
                vs[x].ports.push_back(y);
                vs[y].ports.push_back(x);
                vs[y].ports.push_back(z);
                vs[z].ports.push_back(y);
            }
            break;
        }
    }
    for (std::size_t v = 0; v < vs.size(); ++v)
        vs[v].scatter = detail::default_scatter(spec, vs[v].ports.size(), v);
    return Graph(spec.kind, std::move(vs));
}

inline Graph mark_vertex(const Graph& g, std::size_t v, const CMatrix& marked_coin) {
    return g.with_marked(v, marked_coin);
}

}  // namespace lopt
