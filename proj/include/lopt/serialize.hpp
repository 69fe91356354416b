/*
 * JSON serialization of the library's value types (nlohmann::json).
 *
 * Conventions: complex numbers as [re, im] pairs, angles in radians, doubles
 * rendered by the caller with 17 significant digits (see write_json_file).
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lopt/coins.hpp"
#include "lopt/decompose.hpp"
#include "lopt/devices.hpp"
#include "lopt/graphs.hpp"
#include "lopt/linalg.hpp"
#include "lopt/walk.hpp"

namespace lopt {

using json = nlohmann::ordered_json;

inline json to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json: expected row array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    std::vector<cdouble> data;
    data.reserve(rows * cols);
    for (const auto& row : j) {
        if (row.size() != cols) throw std::invalid_argument("matrix json: ragged rows");
        for (const auto& e : row) {
            if (e.is_array() && e.size() == 2)
                data.emplace_back(e[0].get<double>(), e[1].get<double>());
            else if (e.is_number())
                data.emplace_back(e.get<double>(), 0.0);
            else
                throw std::invalid_argument("matrix json: entry must be [re, im] or a number");
        }
    }
    return CMatrix(rows, cols, std::move(data));
}

// {kind, parameters, matrix} device catalog record
inline json device_record(const std::string& kind, json parameters, const CMatrix& m) {
    json j;
    j["kind"] = kind;
    j["parameters"] = std::move(parameters);
    j["matrix"] = to_json(m);
    j["unitarity_residual"] = unitarity_residual(m);
    j["self_transpose_residual"] = self_transpose_residual(m);
    return j;
}

inline json to_json(const DecompositionPlan& p) {
    json steps = json::array();
    for (const auto& s : p.steps)
        steps.push_back({{"i", s.i}, {"j", s.j}, {"theta", s.theta}, {"phi", s.phi}});
    json diag = json::array();
    for (const auto& d : p.diag) diag.push_back(std::arg(d));
    return json{{"kind", mesh_kind_name(p.kind)}, {"n", p.n}, {"steps", steps}, {"diag", diag}};
}

inline DecompositionPlan plan_from_json(const json& j) {
    DecompositionPlan p;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "reck") p.kind = MeshKind::Reck;
    else if (kind == "clements") p.kind = MeshKind::Clements;
    else throw std::invalid_argument("plan json: unknown kind '" + kind + "'");
    p.n = j.at("n").get<std::size_t>();
    for (const auto& s : j.at("steps"))
        p.steps.push_back({s.at("i").get<std::size_t>(), s.at("j").get<std::size_t>(),
                           s.at("theta").get<double>(), s.at("phi").get<double>()});
    for (const auto& d : j.at("diag")) p.diag.push_back(std::polar(1.0, d.get<double>()));
    return p;
}

inline json to_json(const FitResult& r, DeviceFamily family, const std::string& target_kind) {
    json j;
    j["family"] = device_family_name(family);
    j["target_kind"] = target_kind;
    j["phases"] = {{"mirrors", r.phases.mirrors}, {"ports", r.phases.ports},
                   {"kz1", r.phases.kz1}, {"kz2", r.phases.kz2}};
    j["residual"] = r.residual;
    j["converged"] = r.converged;
    j["seed"] = r.seed;
    j["evaluations"] = r.evaluations;
    return j;
}

inline json to_json(const Graph& g, json params) {
    json edges = json::array();
    for (std::size_t k = 0; k < g.num_directed_edges(); ++k) {
        const auto [u, v] = g.edge(k);
        if (u < v) edges.push_back({u, v});
    }
    json coins = json::array();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) coins.push_back(to_json(g.vertex(v).scatter));
    return json{{"kind", substrate_name(g.kind())}, {"params", std::move(params)},
                {"vertices", g.num_vertices()}, {"edges", edges},
                {"coins", coins}, {"marked", g.marked()}};
}

inline json to_json(const SearchResult& r) {
    return json{{"baseline", r.baseline}, {"max_probability", r.max_probability},
                {"argmax", r.argmax}, {"series", r.marked_probability}};
}

inline json to_json(const HittingResult& r) {
    json j{{"threshold", r.threshold},
           {"quantum", r.quantum}, {"classical", r.classical},
           {"quantum_argmax", r.quantum_argmax}, {"classical_argmax", r.classical_argmax}};
    j["quantum_first"] = r.quantum_first ? json(*r.quantum_first) : json(nullptr);
    j["classical_first"] = r.classical_first ? json(*r.classical_first) : json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// deterministic file output: serialize with 17 significant digits, write to a
// temp file in the destination directory, rename on success
// ---------------------------------------------------------------------------

inline std::string render_json(const json& j) {
    // nlohmann prints doubles with max_digits10 = 17 already; pin indentation
    return j.dump(2) + "\n";
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

}  // namespace lopt
