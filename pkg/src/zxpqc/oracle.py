"""Numeric ground truth.

Nothing here touches the rewrite engine: diagrams are contracted as dense
spider tensors, and ansatz states are simulated gate by gate.
"""
from __future__ import annotations

import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .diagram import Z, Diagram
from .errors import ArityMismatch, SpecMismatch, TooLarge
from .problem import HwEffSU2, ProblemGraph, QAOA, RyProduct, check_arity
from .scalar import random_bindings

MAX_TENSOR = 1 << 26
MAX_QUBITS = 12
DEFAULT_SEED = 1234


# -- diagram contraction -------------------------------------------------------

def spider_tensor(kind: str, phase: float, degree: int) -> np.ndarray:
    """Dense tensor of a spider with ``degree`` legs."""
    if degree > 26:
        raise TooLarge(f"spider of degree {degree} is too large to tabulate")
    e = complex(math.cos(phase), math.sin(phase))
    if degree == 0:
        return np.array(1 + e)
    if kind == Z:
        t = np.zeros((2,) * degree, dtype=complex)
        t[(0,) * degree] = 1
        t[(1,) * degree] += e
        return t
    idx = np.indices((2,) * degree).sum(axis=0) % 2
    sign = 1 - 2 * idx
    return (1 + e * sign) * 2.0 ** (-degree / 2)


def _trace_repeated(t: np.ndarray, labels: List[int]) -> Tuple[np.ndarray, List[int]]:
    """Sum over labels appearing twice on the same tensor (self-loops)."""
    while True:
        seen = {}
        pair = None
        for i, lab in enumerate(labels):
            if lab in seen:
                pair = (seen[lab], i)
                break
            seen[lab] = i
        if pair is None:
            return t, labels
        a, b = pair
        t = np.trace(t, axis1=a, axis2=b)
        labels = [lab for i, lab in enumerate(labels) if i not in pair]


def contract_numeric(d: Diagram, binding: Optional[Mapping[str, float]] = None,
                     max_size: int = MAX_TENSOR) -> Union[complex, np.ndarray]:
    """Contract ``d`` at ``binding``.

    Closed diagrams give a complex number; open ones the
    ``2**len(outputs) x 2**len(inputs)`` matrix (first wire most significant).
    """
    binding = binding or {}
    if len(d.inputs) + len(d.outputs) > 10:
        raise TooLarge("open diagrams are limited to 10 boundary wires")
    labels_of: Dict[int, List[int]] = {v: [] for v in d.vertices()}
    next_label = 0
    for u, v in d.edges():
        labels_of[u].append(next_label)
        labels_of[v].append(next_label)
        next_label += 1
    tensors: List[Tuple[np.ndarray, List[int]]] = []
    for v in d.spiders():
        labs = labels_of[v]
        t = spider_tensor(d.kind(v), d.phase(v).value(binding), len(labs))
        tensors.append(_trace_repeated(t, list(labs)))
    # a boundary vertex contributes its single edge label as an open index
    open_labels = [labels_of[v][0] for v in d.outputs] + [labels_of[v][0] for v in d.inputs]
    result, labels = _contract_network(tensors, set(open_labels), max_size)
    if labels:
        order = [labels.index(lab) for lab in open_labels]
        result = np.transpose(result, order)
    scalar = complex(d.scalar.eval(binding))
    if d.is_closed:
        return complex(result) * scalar
    return result.reshape(2 ** len(d.outputs), 2 ** len(d.inputs)) * scalar


def _contract_network(tensors, open_labels, max_size):
    tensors = list(tensors)
    if not tensors:
        return np.array(1.0 + 0j), []
    while len(tensors) > 1:
        owners: Dict[int, List[int]] = {}
        for i, (_, labs) in enumerate(tensors):
            for lab in set(labs):
                owners.setdefault(lab, []).append(i)
        best = None
        for lab, ids in owners.items():
            if len(ids) != 2:
                continue
            i, j = ids
            la, lb = tensors[i][1], tensors[j][1]
            shared = set(la) & set(lb)
            out = len(la) + len(lb) - 2 * len(shared)
            key = (out - max(len(la), len(lb)), out, i, j)
            if best is None or key < best[0]:
                best = (key, i, j)
        if best is None:
            # no shared labels left: outer product of the two smallest tensors
            order = sorted(range(len(tensors)), key=lambda k: tensors[k][0].size)
            i, j = sorted(order[:2])
        else:
            _, i, j = best
        (ta, la), (tb, lb) = tensors[i], tensors[j]
        shared = [lab for lab in la if lab in lb]
        out_labels = [lab for lab in la if lab not in shared] + [lab for lab in lb if lab not in shared]
        if 2 ** len(out_labels) > max_size:
            raise TooLarge(f"intermediate tensor with {len(out_labels)} legs exceeds the size cap")
        tc = np.tensordot(ta, tb, axes=([la.index(s) for s in shared], [lb.index(s) for s in shared]))
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [(tc, out_labels)]
    t, labs = tensors[0]
    return t, labs


def semantics(obj, binding: Optional[Mapping[str, float]] = None):
    """Numeric value of a Diagram or a linear combination of diagrams."""
    if isinstance(obj, Diagram):
        return contract_numeric(obj, binding)
    total = None
    for coeff, diag in obj.terms:
        val = complex(coeff.eval(binding or {})) * contract_numeric(diag, binding)
        total = val if total is None else total + val
    if total is None:
        m, n = obj.arity
        return 0j if (m, n) == (0, 0) else np.zeros((2 ** n, 2 ** m), dtype=complex)
    return total


def _params_of(obj) -> set:
    if isinstance(obj, Diagram):
        return obj.params()
    out = set()
    for coeff, diag in obj.terms:
        out |= coeff.params() | diag.params()
    return out


def _arity_of(obj) -> Tuple[int, int]:
    return obj.arity


def soundness_check(before, after, trials: int = 16, tol: float = 1e-9,
                    seed: int = DEFAULT_SEED) -> bool:
    """True iff ``before`` and ``after`` agree numerically at random bindings."""
    if _arity_of(before) != _arity_of(after):
        raise ArityMismatch(f"arity {_arity_of(before)} vs {_arity_of(after)}")
    names = _params_of(before) | _params_of(after)
    for b in random_bindings(names, trials, seed):
        x = semantics(before, b)
        y = semantics(after, b)
        if np.max(np.abs(np.asarray(x) - np.asarray(y))) > tol:
            return False
    return True


# -- statevector simulation ----------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * _X


def ry(theta: float) -> np.ndarray:
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * _Y


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def apply_1q(state: np.ndarray, n: int, q: int, gate: np.ndarray) -> np.ndarray:
    psi = state.reshape((2,) * n)
    psi = np.tensordot(gate, psi, axes=([1], [q]))
    return np.moveaxis(psi, 0, q).reshape(-1)


def apply_cx(state: np.ndarray, n: int, c: int, t: int) -> np.ndarray:
    psi = state.reshape((2,) * n).copy()
    sl = [slice(None)] * n
    sl[c] = 1
    sub = psi[tuple(sl)]
    t_axis = t if t < c else t - 1
    psi[tuple(sl)] = np.flip(sub, axis=t_axis)
    return psi.reshape(-1)


def basis_bits(n: int) -> np.ndarray:
    """``(2**n, n)`` array of bits, first qubit most significant."""
    idx = np.arange(2 ** n)
    return (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1


def zz_diagonal(n: int, support: Sequence[int]) -> np.ndarray:
    bits = basis_bits(n)
    par = bits[:, list(support)].sum(axis=1) % 2 if support else np.zeros(2 ** n, dtype=int)
    return 1.0 - 2.0 * par


def cut_diagonal(g: ProblemGraph) -> np.ndarray:
    bits = basis_bits(g.n)
    out = np.zeros(2 ** g.n)
    for u, v in g.edges:
        out += bits[:, u] ^ bits[:, v]
    return out


def _check_qubits(n: int) -> None:
    if n > MAX_QUBITS:
        raise TooLarge(f"dense simulation is capped at {MAX_QUBITS} qubits (got {n})")


def _value(binding: Mapping[str, float], name: str) -> float:
    from .errors import MissingBinding
    try:
        return float(binding[name])
    except KeyError:
        raise MissingBinding(name) from None


def qaoa_state(g: ProblemGraph, a: QAOA, binding: Mapping[str, float], gates: bool = False) -> np.ndarray:
    """QAOA state with phase operator exp(-i gamma C) and mixer exp(i beta X/2) per qubit.

    ``gates=True`` compiles each edge term to CNOT-RZ-CNOT and the mixer to RX;
    otherwise the cost unitary is applied as a diagonal.
    """
    n = g.n
    _check_qubits(n)
    state = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    cost = cut_diagonal(g)
    for gname, bname in zip(a.gammas, a.betas):
        gamma, beta = _value(binding, gname), _value(binding, bname)
        if gates:
            for u, v in g.edges:
                # exp(-i gamma (1 - Z_u Z_v)/2) = e^{-i gamma/2} CX RZ_v(-gamma) CX
                state = apply_cx(state, n, u, v)
                state = apply_1q(state, n, v, rz(-gamma))
                state = apply_cx(state, n, u, v)
                state = state * np.exp(-0.5j * gamma)
            for q in range(n):
                state = apply_1q(state, n, q, rx(-beta))
        else:
            state = state * np.exp(-1j * gamma * cost)
            mixer = rx(-beta)
            for q in range(n):
                state = apply_1q(state, n, q, mixer)
    return state


def ry_state(a: RyProduct, binding: Mapping[str, float]) -> np.ndarray:
    _check_qubits(a.n)
    state = np.zeros(2 ** a.n, dtype=complex)
    state[0] = 1
    for q, name in enumerate(a.names):
        state = apply_1q(state, a.n, q, ry(_value(binding, name)))
    return state


# entangler of the 3-qubit hardware-efficient ansatz: (control, target) in order
HWEFF_ENTANGLER = ((1, 2), (0, 1))


def hweff_state(binding: Mapping[str, float]) -> np.ndarray:
    """RY then RZ on each qubit, CX entangler, RY then RZ again; tilde angles."""
    n = 3
    state = np.zeros(8, dtype=complex)
    state[0] = 1
    for layer in (1, 2):
        if layer == 2:
            for c, t in HWEFF_ENTANGLER:
                state = apply_cx(state, n, c, t)
        for q in range(n):
            state = apply_1q(state, n, q, ry(_value(binding, f"beta_{q + 1}{layer}")))
            state = apply_1q(state, n, q, rz(_value(binding, f"gamma_{q + 1}{layer}")))
    return state


def ansatz_state(g: ProblemGraph, a, binding: Mapping[str, float], gates: bool = False) -> np.ndarray:
    check_arity(g, a)
    if isinstance(a, QAOA):
        return qaoa_state(g, a, binding, gates=gates)
    if isinstance(a, RyProduct):
        return ry_state(a, binding)
    if isinstance(a, HwEffSU2):
        return hweff_state(binding)
    raise SpecMismatch(f"unknown ansatz {a!r}")


def diagonal_expectation(state: np.ndarray, diag: np.ndarray) -> float:
    return float(np.real(np.vdot(state, diag * state)))


def zz_expectation(g: ProblemGraph, a, binding: Mapping[str, float], support: Sequence[int],
                   gates: bool = False) -> float:
    state = ansatz_state(g, a, binding, gates=gates)
    return diagonal_expectation(state, zz_diagonal(g.n, support))


def statevector_expectation(g: ProblemGraph, a, binding: Mapping[str, float], gates: bool = False) -> float:
    """<C> for the MaxCut Hamiltonian C = sum over edges of (1 - Z_u Z_v)/2."""
    state = ansatz_state(g, a, binding, gates=gates)
    return diagonal_expectation(state, cut_diagonal(g))


def brute_force_maxcut(g: ProblemGraph) -> int:
    if g.n > 24:
        raise TooLarge("brute-force MaxCut is capped at 24 vertices")
    if g.n <= 1 or not g.edges:
        return 0
    # vertex n-1 is fixed to side 0 (cut values are symmetric under complement)
    k = g.n - 1
    idx = np.arange(2 ** k, dtype=np.int64)
    best = np.zeros(2 ** k, dtype=np.int64)
    side = lambda v: (idx >> v) & 1 if v < k else np.zeros_like(idx)
    for u, v in g.edges:
        best += side(u) ^ side(v)
    return int(best.max())
