// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/ensemble_io.hpp"

#include <fstream>
#include <utility>
#include <vector>

namespace pgmkit {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw Error(errc::parse_error, context + ": " + what);
}

std::string state_context(const std::string& context, std::size_t index) {
    return context + ", states[" + std::to_string(index) + "]";
}

Complex parse_complex(const nlohmann::json& node, const std::string& context) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() ||
        !node[1].is_number()) {
        fail(context, "a complex entry must be a [re, im] pair of numbers");
    }
    return Complex(node[0].get<double>(), node[1].get<double>());
}

Vector parse_amplitudes(const nlohmann::json& node, int dim,
                        const std::string& context) {
    if (!node.is_array()) {
        fail(context, "\"amplitudes\" must be an array of [re, im] pairs");
    }
    if (static_cast<int>(node.size()) != dim) {
        fail(context, "expected " + std::to_string(dim) + " amplitudes, got " +
                          std::to_string(node.size()));
    }
    Vector amplitudes(dim);
    for (int i = 0; i < dim; ++i) {
        amplitudes(i) = parse_complex(node[static_cast<std::size_t>(i)], context);
    }
    return amplitudes;
}

Matrix parse_matrix(const nlohmann::json& node, int dim, const std::string& context) {
    if (!node.is_array() || static_cast<int>(node.size()) != dim) {
        fail(context, "\"matrix\" must be an array of " + std::to_string(dim) +
                          " rows");
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const nlohmann::json& row = node[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            fail(context, "matrix row " + std::to_string(r) + " must have " +
                              std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], context);
        }
    }
    return m;
}

nlohmann::ordered_json complex_to_json(const Complex& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

} // namespace

Ensemble parse_ensemble(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) {
        fail(context, "the top level must be an object");
    }
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
        fail(context, "missing integer field \"dim\"");
    }
    const int dim = doc["dim"].get<int>();
    if (dim < 1) {
        fail(context, "\"dim\" must be positive");
    }
    if (!doc.contains("states") || !doc["states"].is_array()) {
        fail(context, "missing array field \"states\"");
    }
    const nlohmann::json& states_node = doc["states"];
    if (states_node.size() < 2) {
        fail(context, "an ensemble needs at least two states");
    }

    std::vector<DensityMatrix> states;
    states.reserve(states_node.size());
    for (std::size_t i = 0; i < states_node.size(); ++i) {
        const std::string ctx = state_context(context, i);
        const nlohmann::json& node = states_node[i];
        if (!node.is_object() || !node.contains("type") || !node["type"].is_string()) {
            fail(ctx, "each state must be an object with a string \"type\"");
        }
        const std::string type = node["type"].get<std::string>();
        try {
            if (type == "pure") {
                if (!node.contains("amplitudes")) {
                    fail(ctx, "a pure state needs an \"amplitudes\" field");
                }
                states.push_back(DensityMatrix::pure(
                    parse_amplitudes(node["amplitudes"], dim, ctx), kFileStateTol));
            } else if (type == "mixed") {
                if (!node.contains("matrix")) {
                    fail(ctx, "a mixed state needs a \"matrix\" field");
                }
                states.push_back(DensityMatrix::validate(
                    parse_matrix(node["matrix"], dim, ctx), kFileStateTol));
            } else {
                fail(ctx, "unknown state type \"" + type + "\"");
            }
        } catch (const Error& e) {
            if (e.code() == errc::parse_error) {
                throw;
            }
            // Re-tag validation failures with their location in the file.
            throw Error(e.code(), ctx + ": " + e.what());
        }
    }
    return Ensemble(std::move(states));
}

Ensemble read_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(errc::parse_error, path.string() + ": cannot open file");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::parse_error, path.string() + ": " + e.what());
    }
    return parse_ensemble(doc, path.string());
}

nlohmann::ordered_json ensemble_to_json(const Ensemble& s) {
    nlohmann::ordered_json doc;
    doc["dim"] = s.dim();
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    for (int i = 0; i < s.size(); ++i) {
        const DensityMatrix& state = s[i];
        nlohmann::ordered_json node;
        if (state.is_pure()) {
            node["type"] = "pure";
            nlohmann::ordered_json amplitudes = nlohmann::ordered_json::array();
            const Vector top = state.top_eigenvector();
            for (int a = 0; a < state.dim(); ++a) {
                amplitudes.push_back(complex_to_json(top(a)));
            }
            node["amplitudes"] = std::move(amplitudes);
        } else {
            node["type"] = "mixed";
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (int r = 0; r < state.dim(); ++r) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (int c = 0; c < state.dim(); ++c) {
                    row.push_back(complex_to_json(state.matrix()(r, c)));
                }
                rows.push_back(std::move(row));
            }
            node["matrix"] = std::move(rows);
        }
        states.push_back(std::move(node));
    }
    doc["states"] = std::move(states);
    return doc;
}

void write_ensemble(const std::filesystem::path& path, const Ensemble& s) {
    std::ofstream out(path);
    if (!out) {
        throw Error(errc::parse_error, path.string() + ": cannot open for writing");
    }
    out << ensemble_to_json(s).dump(2) << '\n';
    if (!out) {
        throw Error(errc::parse_error, path.string() + ": write failed");
    }
}

} // namespace pgmkit
