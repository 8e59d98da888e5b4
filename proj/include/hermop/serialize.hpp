#pragma once

#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "hermop/coeff_tensor.hpp"
#include "hermop/decay.hpp"
#include "hermop/factorize.hpp"
#include "hermop/phase_grid.hpp"
#include "hermop/schatten.hpp"
#include "hermop/weights.hpp"

namespace hermop {

using Json = nlohmann::json;

// ---------------------------------------------------------------- tensors --

inline Json to_json(const CoeffTensor& a) {
    Json entries = Json::array();
    for (const auto& [key, v] : a.entries())
        entries.push_back(Json::array(
            {key.first.entries(), key.second.entries(), v.real(), v.imag()}));
    return Json{{"d_left", a.d_left()},
                {"d_right", a.d_right()},
                {"trunc_left", a.trunc_left()},
                {"trunc_right", a.trunc_right()},
                {"entries", std::move(entries)}};
}

inline CoeffTensor coeff_tensor_from_json(const Json& j) {
    try {
        CoeffTensor out(j.at("d_left").get<int>(), j.at("d_right").get<int>(),
                        j.at("trunc_left").get<std::vector<int>>(),
                        j.at("trunc_right").get<std::vector<int>>());
        for (const Json& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 4)
                throw ValidationError("CoeffTensor JSON: malformed entry");
            out.set(MultiIndex(e[0].get<std::vector<int>>()),
                    MultiIndex(e[1].get<std::vector<int>>()),
                    Complex(e[2].get<double>(), e[3].get<double>()));
        }
        return out;
    } catch (const Json::exception& ex) {
        throw ValidationError(std::string("CoeffTensor JSON: ") + ex.what());
    }
}

// ---------------------------------------------------------------- factors --

inline Json to_json(const Partition& p) {
    Json blocks = Json::array();
    for (const auto& [beta, j] : p.blocks)
        blocks.push_back(Json::array({beta.entries(), j}));
    return Json{{"jmax", p.jmax}, {"theta", p.theta}, {"blocks", std::move(blocks)}};
}

inline Json to_json(const FactorPair& pair) {
    Json params = Json::object();
    if (pair.r)
        params["r"] = *pair.r;
    if (pair.partition) {
        params["jmax"] = pair.partition->jmax;
        params["theta"] = pair.partition->theta;
    }
    if (pair.tensor_order)
        params["tensor_order"] = pair.tensor_order->entries();
    return Json{{"branch", to_string(pair.branch)},
                {"params", std::move(params)},
                {"d0", pair.d0},
                {"B", to_json(pair.B)},
                {"C", to_json(pair.C)}};
}

// ------------------------------------------------------------------ grids --

inline Json to_json(const GridAxis& axis) {
    return Json{{"min", axis.min}, {"max", axis.max}, {"n", axis.n}};
}

inline GridAxis grid_axis_from_json(const Json& j) {
    return GridAxis{j.at("min").get<double>(), j.at("max").get<double>(),
                    j.at("n").get<int>()};
}

namespace detail {

inline Json grid_values_to_json(const PhaseGrid& grid, const std::vector<Complex>& values) {
    Json vals = Json::array();
    for (const Complex& v : values)
        vals.push_back(Json::array({v.real(), v.imag()}));
    return Json{{"axis1", to_json(grid.axis1)},
                {"axis2", to_json(grid.axis2)},
                {"values", std::move(vals)}};
}

inline void grid_values_from_json(const Json& j, PhaseGrid& grid,
                                  std::vector<Complex>& values) {
    try {
        grid.axis1 = grid_axis_from_json(j.at("axis1"));
        grid.axis2 = grid_axis_from_json(j.at("axis2"));
        values.clear();
        for (const Json& e : j.at("values")) {
            if (!e.is_array() || e.size() != 2)
                throw ValidationError("grid JSON: malformed value pair");
            values.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
    } catch (const Json::exception& ex) {
        throw ValidationError(std::string("grid JSON: ") + ex.what());
    }
}

} // namespace detail

inline Json to_json(const GridSymbol& a) {
    return detail::grid_values_to_json(a.grid, a.values);
}
inline Json to_json(const GridKernel& k) {
    return detail::grid_values_to_json(k.grid, k.values);
}

inline GridSymbol grid_symbol_from_json(const Json& j) {
    GridSymbol out;
    detail::grid_values_from_json(j, out.grid, out.values);
    out.validate();
    return out;
}

inline GridKernel grid_kernel_from_json(const Json& j) {
    GridKernel out;
    detail::grid_values_from_json(j, out.grid, out.values);
    out.validate();
    return out;
}

// ---------------------------------------------------------------- weights --

inline HermiteWeight weight_from_json(const Json& j) {
    try {
        HermiteWeight w(j.at("d").get<int>());
        for (const Json& e : j.at("weights")) {
            if (!e.is_array() || e.size() != 2)
                throw ValidationError("weight JSON: malformed entry");
            w.set(MultiIndex(e[0].get<std::vector<int>>()), e[1].get<double>());
        }
        return w;
    } catch (const Json::exception& ex) {
        throw ValidationError(std::string("weight JSON: ") + ex.what());
    }
}

inline Json to_json(const HermiteWeight& w) {
    Json entries = Json::array();
    for (const auto& [alpha, value] : w.stored())
        entries.push_back(Json::array({alpha.entries(), value}));
    return Json{{"d", w.dim()}, {"weights", std::move(entries)}};
}

// ---------------------------------------------------------------- reports --

inline Json to_json(const DecayProfile& p) {
    Json j{{"s", p.s},
           {"bound", p.bound},
           {"n_entries", p.n_entries},
           {"regression_rate", p.regression_rate}};
    if (p.r_hat_infinite())
        j["r_hat"] = "inf";
    else
        j["r_hat"] = p.r_hat;
    return j;
}

inline Json to_json(const SpaceClass& c) {
    return Json{{"class", to_string(c.tag)},
                {"s", c.s},
                {"t_or_r", c.t_or_r},
                {"reason", c.reason},
                {"diagnostics", c.diagnostics}};
}

// ------------------------------------------------------------------- I/O ---

// Compact, key-sorted, shortest round-trip decimals: byte-identical for
// identical inputs, and every double re-parses to the same bits.
inline std::string dump_canonical(const Json& j) { return j.dump() + "\n"; }

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open output file: " + path);
    out << dump_canonical(j);
    if (!out)
        throw ValidationError("failed writing output file: " + path);
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& ex) {
        throw ValidationError("malformed JSON in " + path + ": " + ex.what());
    }
}

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded; ties verify reports
/// to their exact inputs.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open input file: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace hermop
