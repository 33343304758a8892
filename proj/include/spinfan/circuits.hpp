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

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "spinfan/circuit.hpp"
#include "spinfan/common.hpp"
#include "spinfan/constraints.hpp"
#include "spinfan/coupling.hpp"
#include "spinfan/encoding.hpp"
#include "spinfan/spin_ops.hpp"
#include "spinfan/statevector.hpp"

namespace spinfan {

// Parity register layout: [in_1, anc_1, in_2, anc_2, ..., in_p, anc_p, target],
// so pair a occupies physical slots (2a-1, 2a) and the coupling-matrix
// indexing carries over unchanged.
struct ParityWires {
    int p;
    explicit ParityWires(int p_) : p(p_) {}
    int input(int a) const { return 2 * a - 1; }
    int ancilla(int a) const { return 2 * a; }
    int target() const { return 2 * p + 1; }
    int total() const { return 2 * p + 1; }
};

/// Single-qubit phase correction applied to the decoded active wire:
///   V = diag(1, (-1)^qt * exp(i T c(g,active)))
/// with c(g,active) = 2 Jint(active) - g and qt = (p+1) mod 2. The (-1)^qt
/// absorbs the X that an even pair count would otherwise require (HX = ZH).
inline Matrix v_gate(const PairCouplings& c, double g, double t, int active) {
    if (active < 1 || active > c.pairs())
        throw std::out_of_range("v_gate: active pair out of range");
    const int qt = (c.pairs() + 1) % 2;
    const double phase = t * (2.0 * c.jint(active) - g);
    Matrix v = Matrix::Zero(2, 2);
    v(0, 0) = 1.0;
    v(1, 1) = (qt ? -1.0 : 1.0) * std::exp(Complex(0.0, phase));
    return v;
}

inline Matrix v_gate(const CouplingMatrix& c, double g, double t, int active) {
    return v_gate(require_pair_structure(c), g, t, active);
}

/// Inputs to the parity/fanout builders. The active pair carries the
/// superposition that accumulates the parity phase; any pair may be active
/// under the all-pairs coupling constraints.
struct ParityCircuitSpec {
    int p;
    CouplingMatrix couplings;
    double g;
    TimingPlan plan;
    int active;  // defaults to p

    ParityCircuitSpec(int p_, CouplingMatrix c, double g_, TimingPlan plan_, int active_ = 0)
        : p(p_), couplings(std::move(c)), g(g_), plan(plan_), active(active_ ? active_ : p_) {
        if (p < 2) throw std::invalid_argument("ParityCircuitSpec: p >= 2 required");
        if (couplings.pairs() != p)
            throw std::invalid_argument("ParityCircuitSpec: couplings must cover p pairs");
        if (active < 1 || active > p)
            throw std::invalid_argument("ParityCircuitSpec: active pair out of range");
    }
};

/// Builds the parity circuit without constraint checks. Used by the
/// perturbation experiments, which deliberately violate the congruences;
/// pair structure is still required (the V gate needs the reduced view).
inline Circuit build_parity_circuit_unchecked(const ParityCircuitSpec& spec) {
    const PairCouplings reduced = require_pair_structure(spec.couplings);
    const ParityWires w(spec.p);
    auto evolver = std::make_shared<const ExactEvolver>(build_hamiltonian(spec.couplings, spec.g));
    std::vector<int> physical(2 * spec.p);
    for (int i = 0; i < 2 * spec.p; ++i) physical[i] = i + 1;

    Circuit c;
    c.qubits = w.total();
    for (int a = 1; a <= spec.p; ++a) c.input_wires.push_back(w.input(a));
    for (int a = 1; a <= spec.p; ++a) c.ancilla_wires.push_back(w.ancilla(a));
    c.target_wires = {w.target()};

    const int act = w.input(spec.active);
    const Matrix v = v_gate(reduced, spec.g, spec.plan.T, spec.active);
    c.append(Gate::h(act));
    for (int a = 1; a <= spec.p; ++a) c.append(Gate::encode(w.input(a), w.ancilla(a)));
    c.append(Gate::evolve(evolver, physical, spec.plan.T));
    c.append(Gate::decode(w.input(spec.active), w.ancilla(spec.active)));
    c.append(Gate::v(v, act));
    c.append(Gate::h(act));
    c.append(Gate::cnot(act, w.target()));
    c.append(Gate::h(act));
    c.append(Gate::v_dagger(v.adjoint(), act));
    c.append(Gate::encode(w.input(spec.active), w.ancilla(spec.active)));
    c.append(Gate::evolve(evolver, physical, spec.plan.T_prime));
    for (int a = 1; a <= spec.p; ++a) c.append(Gate::decode(w.input(a), w.ancilla(a)));
    c.append(Gate::h(act));
    return c;
}

/// Parity circuit: flips the target iff the input wires have odd weight,
/// restoring inputs and ancillas, up to one input-independent global phase.
inline Circuit build_parity_circuit(const ParityCircuitSpec& spec) {
    const PairCouplings reduced = require_pair_structure(spec.couplings);
    ConstraintReport parity = check_parity_couplings(reduced, spec.plan);
    if (!parity.passed)
        throw std::invalid_argument("build_parity_circuit: parity coupling constraints violated");
    ConstraintReport uncompute = check_uncompute_constraints(reduced, spec.plan, spec.g);
    if (!uncompute.passed)
        throw std::invalid_argument("build_parity_circuit: uncompute constraints violated");
    return build_parity_circuit_unchecked(spec);
}

namespace detail {

inline Circuit hadamard_conjugate(Circuit c) {
    std::vector<Gate> bank;
    for (int q : c.input_wires) bank.push_back(Gate::h(q));
    for (int q : c.target_wires) bank.push_back(Gate::h(q));
    std::vector<Gate> gates;
    gates.reserve(c.gates.size() + 2 * bank.size());
    gates.insert(gates.end(), bank.begin(), bank.end());
    gates.insert(gates.end(), c.gates.begin(), c.gates.end());
    gates.insert(gates.end(), bank.begin(), bank.end());
    c.gates = std::move(gates);
    return c;
}

}  // namespace detail

/// Fanout: the parity circuit conjugated with Hadamards on the p input wires
/// and the target wire. Wire roles swap under the conjugation: the parity
/// target becomes the fanout control, and the p parity inputs become the
/// fanout targets, F|x_1..x_p, c> = |x_1+c, ..., x_p+c, c>.
inline Circuit build_fanout_circuit(const ParityCircuitSpec& spec) {
    return detail::hadamard_conjugate(build_parity_circuit(spec));
}

inline Circuit build_fanout_circuit_unchecked(const ParityCircuitSpec& spec) {
    return detail::hadamard_conjugate(build_parity_circuit_unchecked(spec));
}

/// Amplitudes h_j of the Mod_q ancilla register state sum_j h_j |A_j>,
/// |A_j> = |1^j 0^(q-1-j)>. Only |h_j|^2 = 1/q is constrained; the uniform
/// real choice is used throughout.
struct AncillaSpec {
    int q;
    std::vector<Complex> h;

    static AncillaSpec uniform(int q) {
        if (q < 2) throw std::invalid_argument("AncillaSpec: q >= 2 required");
        return {q, std::vector<Complex>(q, Complex(1.0 / std::sqrt(double(q)), 0.0))};
    }

    bool valid(double tol = 1e-12) const {
        if (static_cast<int>(h.size()) != q) return false;
        for (const Complex& a : h)
            if (std::abs(std::norm(a) - 1.0 / q) > tol) return false;
        return true;
    }
};

inline std::int64_t staircase_index(int j, int q) {
    // |A_j> = |1^j 0^(q-1-j)> with the first ancilla wire most significant.
    return (std::int64_t{1} << (q - 1)) - (std::int64_t{1} << (q - 1 - j));
}

namespace detail {

/// Columns of `given` extended to a full orthonormal basis by Gram-Schmidt
/// over the standard basis vectors.
inline Matrix complete_orthonormal(std::vector<Vector> given, Eigen::Index dim) {
    for (const Vector& v : given)
        if (v.size() != dim) throw std::invalid_argument("complete_orthonormal: dim mismatch");
    std::vector<Vector> basis = std::move(given);
    for (Eigen::Index i = 0; i < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++i) {
        Vector v = Vector::Zero(dim);
        v(i) = 1.0;
        for (const Vector& b : basis) v -= b * b.dot(v);
        const double n = v.norm();
        if (n > 1e-6) basis.push_back(v / n);
    }
    if (static_cast<Eigen::Index>(basis.size()) != dim)
        throw std::runtime_error("complete_orthonormal: failed to complete basis");
    Matrix out(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) out.col(c) = basis[c];
    return out;
}

}  // namespace detail

struct AncillaPreparation {
    Vector state;    // (1/sqrt(q)) sum_j |A_j> on q-1 qubits
    Matrix unitary;  // maps |0...0> to the state; completed by orthonormal extension
};

inline AncillaPreparation prepare_ancilla_state(int q) {
    const AncillaSpec spec = AncillaSpec::uniform(q);
    const Eigen::Index dim = dim_for_qubits(q - 1);
    Vector state = Vector::Zero(dim);
    for (int j = 0; j < q; ++j) state(staircase_index(j, q)) = spec.h[j];
    // Column 0 of the completion is the state itself, so U|0...0> prepares it.
    Matrix u = detail::complete_orthonormal({state}, dim);
    return {std::move(state), std::move(u)};
}

/// The ancilla-register state produced by encode -> evolve(T) -> decode for a
/// control string of weight u:
///   Phi_u = sum_j h_j exp(-iT(-lambda_{xA_j} + g(z-u-j))) |A_j>,
/// evaluated on the canonical representative x = 1^u 0^(p-u) over z = p+q-1
/// pairs. Under the Mod_q coupling constraints the state depends on x only
/// through u.
inline Vector compute_phi_state(const PairCouplings& c, double g, const ModqPlan& plan, int p,
                                int q, int u) {
    const int z = p + q - 1;
    if (c.pairs() != z)
        throw std::invalid_argument("compute_phi_state: couplings must cover z = p+q-1 pairs");
    if (u < 0 || u > p)
        throw std::invalid_argument("compute_phi_state: weight u must be realizable, 0 <= u <= p");
    const AncillaSpec anc = AncillaSpec::uniform(q);
    std::vector<int> bits(p, 0);
    for (int i = 0; i < u; ++i) bits[i] = 1;
    const BitString x(bits);
    Vector phi = Vector::Zero(dim_for_qubits(q - 1));
    for (int j = 0; j < q; ++j) {
        std::vector<int> abits(q - 1, 0);
        for (int i = 0; i < j; ++i) abits[i] = 1;
        const BitString xa = x.concat(BitString(abits));
        const double lambda = lambda_closed_form(c, xa);
        const double delta = -lambda + g * (z - u - j);
        phi(staircase_index(j, q)) = anc.h[j] * std::exp(Complex(0.0, -plan.T * delta));
    }
    return phi;
}

/// Phi_u for u = 0..min(q-1, p), the weights a p-bit control string can
/// realize. With p >= q-1 this is one state per residue class.
inline std::vector<Vector> compute_phi_states(const PairCouplings& c, double g,
                                              const ModqPlan& plan, int p, int q) {
    ConstraintReport check = check_modq_couplings(c, plan, g);
    if (!check.passed)
        throw std::invalid_argument("compute_phi_states: Mod_q coupling constraints violated");
    std::vector<Vector> phis;
    for (int u = 0; u <= std::min(q - 1, p); ++u)
        phis.push_back(compute_phi_state(c, g, plan, p, q, u));
    return phis;
}

inline std::vector<Vector> compute_phi_states(const CouplingMatrix& c, double g,
                                              const ModqPlan& plan, int p, int q) {
    return compute_phi_states(require_pair_structure(c), g, plan, p, q);
}

/// Unitary mapping phi_j to |A_j>, identity on the orthogonal complement of
/// span{phi_j}. Each phi_j's phase is first fixed so its <A_0| component is
/// real positive (that component has modulus 1/sqrt(q), never zero).
inline Matrix build_r_unitary(const std::vector<Vector>& phis, double orth_tol = 1e-8) {
    if (phis.empty()) throw std::invalid_argument("build_r_unitary: no states given");
    const Eigen::Index dim = phis.front().size();
    const int q = qubit_count(phis.front()) + 1;  // phis live on q-1 qubits
    if (static_cast<Eigen::Index>(phis.size()) > dim)
        throw std::invalid_argument("build_r_unitary: more states than dimensions");
    for (std::size_t i = 0; i < phis.size(); ++i) {
        if (phis[i].size() != dim) throw std::invalid_argument("build_r_unitary: dim mismatch");
        for (std::size_t j = i + 1; j < phis.size(); ++j)
            if (std::abs(phis[i].dot(phis[j])) > orth_tol)
                throw std::invalid_argument("build_r_unitary: states are not orthogonal");
    }
    std::vector<Vector> anchored;
    for (const Vector& phi : phis) {
        const Complex a0 = phi(0);  // <A_0|phi>, A_0 = |0...0>
        if (std::abs(a0) < 1e-12)
            throw std::invalid_argument("build_r_unitary: vanishing A_0 component");
        anchored.push_back(phi * (std::conj(a0) / std::abs(a0)) / phi.norm());
    }
    Matrix r = Matrix::Zero(dim, dim);
    for (std::size_t j = 0; j < anchored.size(); ++j)
        r += basis_state(q - 1, staircase_index(static_cast<int>(j), q)) * anchored[j].adjoint();
    // Identity on the complement, built from orthonormalized standard basis vectors.
    Matrix full = detail::complete_orthonormal(anchored, dim);
    for (Eigen::Index c = static_cast<Eigen::Index>(anchored.size()); c < dim; ++c)
        r += full.col(c) * full.col(c).adjoint();
    return r;
}

// Mod_q register layout: [controls 1..p | A-wires p+1..z | encoding ancillas
// z+1..2z | targets 2z+1..2z+q-1 | (standard only) final target 2z+q].
// Logical pair a couples wire a with wire z+a; the physical qubit 2a-1 of the
// coupling matrix is wire a and qubit 2a is wire z+a.
struct ModqWires {
    int p, q;
    ModqWires(int p_, int q_) : p(p_), q(q_) {}
    int z() const { return p + q - 1; }
    int control(int i) const { return i; }
    int a_wire(int j) const { return p + j; }       // j = 1..q-1
    int enc(int a) const { return z() + a; }        // a = 1..z
    int target(int j) const { return 2 * z() + j; }  // j = 1..q-1
    int final_target() const { return 2 * z() + q; }
    int total_generalized() const { return 2 * z() + q - 1; }
    int total_standard() const { return 2 * z() + q; }
};

struct ModqCircuitSpec {
    int p;
    int q;
    CouplingMatrix couplings;  // over z = p+q-1 pairs
    double g;
    ModqPlan plan;

    ModqCircuitSpec(int p_, int q_, CouplingMatrix c, double g_, ModqPlan plan_)
        : p(p_), q(q_), couplings(std::move(c)), g(g_), plan(plan_) {
        if (p < 1 || q < 2) throw std::invalid_argument("ModqCircuitSpec: need p >= 1, q >= 2");
        if (plan.q != q) throw std::invalid_argument("ModqCircuitSpec: plan/q mismatch");
        const int z = p + q - 1;
        if (z > 6) throw std::invalid_argument("ModqCircuitSpec: z = p+q-1 capped at 6");
        if (couplings.pairs() != z)
            throw std::invalid_argument("ModqCircuitSpec: couplings must cover z pairs");
    }
};

namespace detail {

// One generalized Mod_q block, assuming the A-register already holds its
// prepared state (the block restores it, so two blocks can share one
// preparation).
inline void append_generalized_modq(Circuit& c, const ModqCircuitSpec& spec,
                                    const std::shared_ptr<const ExactEvolver>& evolver,
                                    const Matrix& r) {
    const ModqWires w(spec.p, spec.q);
    const int z = w.z();
    std::vector<int> a_wires;
    for (int j = 1; j <= spec.q - 1; ++j) a_wires.push_back(w.a_wire(j));
    std::vector<int> physical;
    for (int a = 1; a <= z; ++a) {
        physical.push_back(a);          // qubit 2a-1
        physical.push_back(w.enc(a));   // qubit 2a
    }
    for (int a = 1; a <= z; ++a) c.append(Gate::encode(a, w.enc(a)));
    c.append(Gate::evolve(evolver, physical, spec.plan.T));
    for (int a = 1; a <= z; ++a) c.append(Gate::decode(a, w.enc(a)));
    c.append(Gate::r(r, a_wires));
    for (int j = 1; j <= spec.q - 1; ++j) c.append(Gate::cnot(w.a_wire(j), w.target(j)));
    c.append(Gate::r_dagger(r.adjoint(), a_wires));
    for (int a = 1; a <= z; ++a) c.append(Gate::encode(a, w.enc(a)));
    c.append(Gate::evolve(evolver, physical, spec.plan.T_prime()));
    for (int a = 1; a <= z; ++a) c.append(Gate::decode(a, w.enc(a)));
}

struct ModqParts {
    std::shared_ptr<const ExactEvolver> evolver;
    Matrix prep;
    Matrix r;
};

inline ModqParts make_modq_parts(const ModqCircuitSpec& spec) {
    const PairCouplings reduced = require_pair_structure(spec.couplings);
    ConstraintReport check = check_modq_couplings(reduced, spec.plan, spec.g);
    if (!check.passed)
        throw std::invalid_argument("Mod_q circuit: coupling constraints violated");
    ModqParts parts;
    parts.evolver =
        std::make_shared<const ExactEvolver>(build_hamiltonian(spec.couplings, spec.g));
    parts.prep = prepare_ancilla_state(spec.q).unitary;
    parts.r = build_r_unitary(compute_phi_states(reduced, spec.g, spec.plan, spec.p, spec.q));
    return parts;
}

}  // namespace detail

/// Generalized Mod_q gate: with the A-register prepared in-circuit, flips
/// targets t_1..t_i where i = weight(x) mod q, restoring the controls and
/// leaving the A-register back in its prepared state.
inline Circuit build_generalized_modq_circuit(const ModqCircuitSpec& spec) {
    const detail::ModqParts parts = detail::make_modq_parts(spec);
    const ModqWires w(spec.p, spec.q);
    Circuit c;
    c.qubits = w.total_generalized();
    for (int i = 1; i <= spec.p; ++i) c.input_wires.push_back(w.control(i));
    for (int j = 1; j <= spec.q - 1; ++j) c.ancilla_wires.push_back(w.a_wire(j));
    for (int a = 1; a <= w.z(); ++a) c.ancilla_wires.push_back(w.enc(a));
    for (int j = 1; j <= spec.q - 1; ++j) c.target_wires.push_back(w.target(j));
    std::vector<int> a_wires;
    for (int j = 1; j <= spec.q - 1; ++j) a_wires.push_back(w.a_wire(j));
    c.append(Gate::unitary(parts.prep, a_wires));
    detail::append_generalized_modq(c, spec, parts.evolver, parts.r);
    return c;
}

/// Standard Mod_q gate: two generalized Mod_q gates sandwiching a CNOT from
/// the first intermediate target onto the final target. The final target
/// flips iff weight(x) mod q != 0; the q-1 intermediate targets return to |0>.
inline Circuit build_standard_modq_circuit(const ModqCircuitSpec& spec) {
    const detail::ModqParts parts = detail::make_modq_parts(spec);
    const ModqWires w(spec.p, spec.q);
    Circuit c;
    c.qubits = w.total_standard();
    for (int i = 1; i <= spec.p; ++i) c.input_wires.push_back(w.control(i));
    for (int j = 1; j <= spec.q - 1; ++j) c.ancilla_wires.push_back(w.a_wire(j));
    for (int a = 1; a <= w.z(); ++a) c.ancilla_wires.push_back(w.enc(a));
    for (int j = 1; j <= spec.q - 1; ++j) c.ancilla_wires.push_back(w.target(j));
    c.target_wires = {w.final_target()};
    std::vector<int> a_wires;
    for (int j = 1; j <= spec.q - 1; ++j) a_wires.push_back(w.a_wire(j));
    c.append(Gate::unitary(parts.prep, a_wires));  // the blocks restore |A>, prepare once
    detail::append_generalized_modq(c, spec, parts.evolver, parts.r);
    c.append(Gate::cnot(w.target(1), w.final_target()));
    detail::append_generalized_modq(c, spec, parts.evolver, parts.r);
    return c;
}

}  // namespace spinfan
