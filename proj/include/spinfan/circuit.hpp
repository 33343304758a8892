// Copyright 2026 The spinfan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinfan/common.hpp"
#include "spinfan/encoding.hpp"
#include "spinfan/statevector.hpp"

namespace spinfan {

enum class GateKind { H, X, Z, CNOT, E, E_dagger, V, V_dagger, R, R_dagger, Unitary, Evolve };

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
        case GateKind::E: return "E";
        case GateKind::E_dagger: return "E_dagger";
        case GateKind::V: return "V";
        case GateKind::V_dagger: return "V_dagger";
        case GateKind::R: return "R";
        case GateKind::R_dagger: return "R_dagger";
        case GateKind::Unitary: return "unitary";
        case GateKind::Evolve: return "evolve";
    }
    return "?";
}

/// One circuit element. Matrix-bearing kinds (V, R, Unitary) carry their
/// payload; Evolve carries a shared spectral decomposition of the Hamiltonian
/// plus the evolution time.
struct Gate {
    GateKind kind{};
    std::vector<int> targets;  // 1-based qubit indices; targets[0] = most significant local bit
    Matrix matrix;             // V/V_dagger/R/R_dagger/Unitary
    std::shared_ptr<const ExactEvolver> evolver;  // Evolve
    double time = 0.0;                            // Evolve

    static Gate make(GateKind kind, std::vector<int> targets, Matrix m = {}) {
        Gate g;
        g.kind = kind;
        g.targets = std::move(targets);
        g.matrix = std::move(m);
        return g;
    }
    static Gate h(int q) { return make(GateKind::H, {q}); }
    static Gate x(int q) { return make(GateKind::X, {q}); }
    static Gate z(int q) { return make(GateKind::Z, {q}); }
    static Gate cnot(int control, int target) { return make(GateKind::CNOT, {control, target}); }
    static Gate encode(int q1, int q2) { return make(GateKind::E, {q1, q2}); }
    static Gate decode(int q1, int q2) { return make(GateKind::E_dagger, {q1, q2}); }
    static Gate v(Matrix m, int q) { return make(GateKind::V, {q}, std::move(m)); }
    static Gate v_dagger(Matrix m, int q) { return make(GateKind::V_dagger, {q}, std::move(m)); }
    static Gate r(Matrix m, std::vector<int> qs) { return make(GateKind::R, std::move(qs), std::move(m)); }
    static Gate r_dagger(Matrix m, std::vector<int> qs) {
        return make(GateKind::R_dagger, std::move(qs), std::move(m));
    }
    static Gate unitary(Matrix m, std::vector<int> qs) {
        return make(GateKind::Unitary, std::move(qs), std::move(m));
    }
    static Gate evolve(std::shared_ptr<const ExactEvolver> ev, std::vector<int> qs, double t) {
        Gate g = make(GateKind::Evolve, std::move(qs));
        g.evolver = std::move(ev);
        g.time = t;
        return g;
    }
};

namespace detail {

inline const Matrix& hadamard_matrix() {
    static const Matrix m = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Matrix h(2, 2);
        h << s, s, s, -s;
        return h;
    }();
    return m;
}

inline const Matrix& pauli_x_matrix() {
    static const Matrix m = [] {
        Matrix x(2, 2);
        x << 0, 1, 1, 0;
        return x;
    }();
    return m;
}

inline const Matrix& pauli_z_matrix() {
    static const Matrix m = [] {
        Matrix z(2, 2);
        z << 1, 0, 0, -1;
        return z;
    }();
    return m;
}

inline const Matrix& cnot_matrix() {
    static const Matrix m = [] {
        Matrix c = Matrix::Zero(4, 4);
        c(0, 0) = c(1, 1) = c(3, 2) = c(2, 3) = 1.0;
        return c;
    }();
    return m;
}

}  // namespace detail

/// Dense matrix of a gate (Evolve excluded; its action is the evolver's).
inline Matrix gate_matrix(const Gate& g) {
    switch (g.kind) {
        case GateKind::H: return detail::hadamard_matrix();
        case GateKind::X: return detail::pauli_x_matrix();
        case GateKind::Z: return detail::pauli_z_matrix();
        case GateKind::CNOT: return detail::cnot_matrix();
        case GateKind::E: return encoder_unitary();
        case GateKind::E_dagger: return encoder_unitary().adjoint();
        case GateKind::V:
        case GateKind::V_dagger:
        case GateKind::R:
        case GateKind::R_dagger:
        case GateKind::Unitary: return g.matrix;
        case GateKind::Evolve:
            throw std::logic_error("gate_matrix: Evolve has no fixed matrix payload");
    }
    throw std::logic_error("gate_matrix: unknown kind");
}

/// Ordered gate list over a declared register. Ancilla wires start in |0>.
struct Circuit {
    int qubits = 0;
    std::vector<Gate> gates;
    std::vector<int> input_wires;
    std::vector<int> ancilla_wires;
    std::vector<int> target_wires;

    void append(Gate g) {
        for (int q : g.targets)
            if (q < 1 || q > qubits)
                throw std::out_of_range("Circuit: gate target " + std::to_string(q) +
                                        " outside register of " + std::to_string(qubits));
        gates.push_back(std::move(g));
    }
};

/// Apply one gate to every column of a 2^m x n amplitude block.
inline void apply_gate_in_place(Matrix& columns, const Gate& g, int m) {
    detail::SubsetIndexer idx(g.targets, m);
    const auto ncols = columns.cols();
    const auto nrest = static_cast<Eigen::Index>(idx.bases.size());
    const auto local = static_cast<Eigen::Index>(idx.offsets.size());
    Matrix block(local, nrest * ncols);
    for (Eigen::Index c = 0; c < ncols; ++c)
        for (Eigen::Index r = 0; r < nrest; ++r)
            for (Eigen::Index lt = 0; lt < local; ++lt)
                block(lt, c * nrest + r) = columns(idx.bases[r] + idx.offsets[lt], c);
    if (g.kind == GateKind::Evolve) {
        if (!g.evolver) throw std::logic_error("Evolve gate without evolver");
        if (g.evolver->dim() != local)
            throw std::invalid_argument("Evolve gate: evolver/target mismatch");
        g.evolver->evolve_block(block, g.time);
    } else {
        const Matrix u = gate_matrix(g);
        if (u.rows() != local) throw std::invalid_argument("gate/target arity mismatch");
        block = u * block;
    }
    for (Eigen::Index c = 0; c < ncols; ++c)
        for (Eigen::Index r = 0; r < nrest; ++r)
            for (Eigen::Index lt = 0; lt < local; ++lt)
                columns(idx.bases[r] + idx.offsets[lt], c) = block(lt, c * nrest + r);
}

inline Vector apply_gate(const Vector& state, const Gate& g) {
    const int m = qubit_count(state);
    Matrix columns = state;
    apply_gate_in_place(columns, g, m);
    return columns.col(0);
}

inline Vector run_circuit(const Circuit& circuit, Vector state) {
    const int m = qubit_count(state);
    if (m != circuit.qubits)
        throw std::invalid_argument("run_circuit: state register size mismatch");
    Matrix columns = std::move(state);
    for (const Gate& g : circuit.gates) apply_gate_in_place(columns, g, m);
    return columns.col(0);
}

/// Product of the embedded gate unitaries, in order. Capped at 12 qubits.
inline Matrix circuit_unitary(const Circuit& circuit) {
    if (circuit.qubits > 12)
        throw std::invalid_argument("circuit_unitary: capped at 12 qubits");
    Matrix u = Matrix::Identity(dim_for_qubits(circuit.qubits), dim_for_qubits(circuit.qubits));
    for (const Gate& g : circuit.gates) apply_gate_in_place(u, g, circuit.qubits);
    return u;
}

// Reproducibility artifact: circuits serialize to a JSON gate list, e.g.
//   [{"gate":"H","targets":[5]},
//    {"gate":"evolve","targets":[1,2,3,4],"t":1.0,"hamiltonian":"H_g"}, ...]
inline nlohmann::json to_json(const Circuit& circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : circuit.gates) {
        nlohmann::json entry{{"gate", gate_name(g.kind)}, {"targets", g.targets}};
        if (g.kind == GateKind::Evolve) {
            entry["t"] = g.time;
            entry["hamiltonian"] = "H_g";
        } else if (g.matrix.size() > 0) {
            nlohmann::json rows = nlohmann::json::array();
            for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (Eigen::Index c = 0; c < g.matrix.cols(); ++c)
                    row.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
                rows.push_back(row);
            }
            entry["matrix"] = rows;
        }
        gates.push_back(std::move(entry));
    }
    return {{"qubits", circuit.qubits},
            {"inputs", circuit.input_wires},
            {"ancillas", circuit.ancilla_wires},
            {"targets", circuit.target_wires},
            {"gates", gates}};
}

}  // namespace spinfan
