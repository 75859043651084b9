"""Statevector simulation of the multi-angle QAOA circuit for MaxCut.

Conventions, fixed across the package:

* A state on n qubits is a numpy complex128 array of 2^n amplitudes. Bit v
  of the basis-state index is qubit (= graph vertex) v, bit 0 least
  significant.
* The circuit for p layers applies, per layer, one phase gate per edge with
  its own angle gamma, then one X rotation per vertex with its own angle
  beta. The start state is the uniform superposition.
* The edge phase gate multiplies every basis state whose endpoint bits
  differ by exp(-i*gamma). The vertex rotation is
  [[cos(beta), -i*sin(beta)], [-i*sin(beta), cos(beta)]].
* Flattened parameter order is layer-major, gammas before betas inside a
  layer, each block in edge / vertex index order.

The cost observable is the cut size: sum over edges of 1/2*(1 - Z_u Z_v),
diagonal in the computational basis with value = number of cut edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError
from .graphs import Graph

MAX_QUBITS = 24

# per-edge indicator tables are materialized as a dense (2^n, m) matrix up
# to this qubit count; above it, per-edge columns are built on the fly
_TABLE_LIMIT = 14

#: A statevector is a bare 1-D complex128 array of length 2^n.
StateVector = np.ndarray


@dataclass(frozen=True, eq=False)
class AngleVector:
    """Per-layer circuit angles: gamma has shape (p, edges), beta (p, vertices)."""

    gamma: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        gamma = np.atleast_2d(np.asarray(self.gamma, dtype=np.float64))
        beta = np.atleast_2d(np.asarray(self.beta, dtype=np.float64))
        if gamma.ndim != 2 or beta.ndim != 2:
            raise ValueError("gamma and beta must be 2-D (layers, angles)")
        if gamma.shape[0] != beta.shape[0]:
            raise ValueError(
                f"layer mismatch: gamma has {gamma.shape[0]}, beta {beta.shape[0]}"
            )
        if gamma.shape[0] < 1:
            raise ValueError("at least one layer is required")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)

    @property
    def p(self) -> int:
        return self.gamma.shape[0]

    @property
    def size(self) -> int:
        return self.gamma.size + self.beta.size

    def flatten(self) -> np.ndarray:
        """Flat view: [gamma_1, beta_1, gamma_2, beta_2, ...]."""
        return np.hstack([self.gamma, self.beta]).ravel()

    @classmethod
    def unflatten(
        cls, flat: np.ndarray, p: int, edge_count: int, vertex_count: int
    ) -> "AngleVector":
        flat = np.asarray(flat, dtype=np.float64)
        width = edge_count + vertex_count
        if flat.size != p * width:
            raise ValueError(
                f"expected {p * width} angles for p={p}, "
                f"{edge_count} edges, {vertex_count} vertices; got {flat.size}"
            )
        layers = flat.reshape(p, width)
        return cls(layers[:, :edge_count].copy(), layers[:, edge_count:].copy())


@lru_cache(maxsize=256)
def _edge_tables(g: Graph) -> tuple[np.ndarray | None, np.ndarray]:
    """(indicator matrix or None, cut value per basis state) for a graph."""
    dim = 1 << g.n
    index = np.arange(dim, dtype=np.uint32)
    if g.n <= _TABLE_LIMIT:
        table = np.empty((dim, g.edge_count), dtype=np.float64)
        for k, (u, v) in enumerate(g.edges):
            table[:, k] = ((index >> u) ^ (index >> v)) & 1
        return table, table.sum(axis=1)
    cuts = np.zeros(dim, dtype=np.float64)
    for u, v in g.edges:
        cuts += (((index >> u) ^ (index >> v)) & 1).astype(np.float64)
    return None, cuts


def _edge_indicator(g: Graph, k: int) -> np.ndarray:
    u, v = g.edges[k]
    index = np.arange(1 << g.n, dtype=np.uint32)
    return (((index >> u) ^ (index >> v)) & 1).astype(np.float64)


def cut_values(g: Graph) -> np.ndarray:
    """Cut size of every basis state, as a float array of length 2^n."""
    return _edge_tables(g)[1]


def prepare_plus_state(n_qubits: int) -> StateVector:
    """Uniform superposition over all 2^n basis states."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise CapacityError(
            f"qubit count must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )
    dim = 1 << n_qubits
    return np.full(dim, dim ** -0.5, dtype=np.complex128)


def _check_state(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if state.ndim != 1 or state.size != 1 << n:
        raise ValueError(f"state length {state.size} is not a power of two")
    return n


def apply_cost_phase(state: StateVector, edge: tuple[int, int], gamma: float) -> StateVector:
    """Multiply basis states where the edge endpoints' bits differ by exp(-i*gamma).

    Updates the array in place and returns it.
    """
    n = _check_state(state)
    u, v = edge
    if u == v or not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"edge {edge} invalid for {n} qubits")
    index = np.arange(state.size, dtype=np.uint32)
    differ = (((index >> u) ^ (index >> v)) & 1).astype(bool)
    state[differ] *= np.exp(-1j * gamma)
    return state


def apply_mixer_rotation(state: StateVector, vertex: int, beta: float) -> StateVector:
    """Apply the X rotation [[c, -is], [-is, c]] on one qubit, in place."""
    n = _check_state(state)
    if not 0 <= vertex < n:
        raise ValueError(f"vertex {vertex} invalid for {n} qubits")
    _rotate(state, vertex, beta)
    return state


def _rotate(state: np.ndarray, vertex: int, beta: float) -> None:
    c = np.cos(beta)
    s = np.sin(beta)
    view = state.reshape(-1, 2, 1 << vertex)
    lo = view[:, 0, :].copy()
    hi = view[:, 1, :]
    view[:, 0, :] = c * lo - 1j * s * hi
    view[:, 1, :] = c * hi - 1j * s * lo


def _cost_phase_sum(g: Graph, gammas: np.ndarray) -> np.ndarray:
    """Total phase per basis state contributed by one cost layer."""
    table, _ = _edge_tables(g)
    if table is not None:
        return table @ gammas
    dim = 1 << g.n
    phase = np.zeros(dim, dtype=np.float64)
    for k in range(g.edge_count):
        phase += gammas[k] * _edge_indicator(g, k)
    return phase


def _check_angles(g: Graph, angles: AngleVector) -> None:
    if angles.gamma.shape[1] != g.edge_count:
        raise ValueError(
            f"gamma width {angles.gamma.shape[1]} != edge count {g.edge_count}"
        )
    if angles.beta.shape[1] != g.n:
        raise ValueError(
            f"beta width {angles.beta.shape[1]} != vertex count {g.n}"
        )


def run_circuit(g: Graph, angles: AngleVector) -> StateVector:
    """Full circuit: plus state, then per layer all edge phases, all rotations."""
    _check_angles(g, angles)
    psi = prepare_plus_state(g.n)
    for layer in range(angles.p):
        if g.edge_count:
            psi *= np.exp(-1j * _cost_phase_sum(g, angles.gamma[layer]))
        for v in range(g.n):
            _rotate(psi, v, angles.beta[layer, v])
    return psi


def expectation(g: Graph, state: StateVector) -> float:
    """Expected cut size of a state: sum of |amplitude|^2 * cut value."""
    n = _check_state(state)
    if n != g.n:
        raise ValueError(f"state has {n} qubits, graph has {g.n} vertices")
    probs = state.real ** 2 + state.imag ** 2
    return float(probs @ cut_values(g))


def expectation_and_gradient(g: Graph, angles: AngleVector) -> tuple[float, np.ndarray]:
    """Expected cut size and its gradient in flattened angle order.

    The gradient is computed by reverse-mode (adjoint) differentiation: one
    forward pass, then a backward sweep holding two states. Every gate
    exp(-i*t*G) commutes with its generator G and with the rest of its
    layer, so all of a layer's derivatives are read off at the layer
    boundary as 2*Im(<bra|G|ket>) before both states are stepped back.
    """
    _check_angles(g, angles)
    p = angles.p
    m = g.edge_count
    n = g.n
    table, cuts = _edge_tables(g)

    psi = run_circuit(g, angles)
    probs = psi.real ** 2 + psi.imag ** 2
    value = float(probs @ cuts)

    bra = cuts * psi
    ket = psi
    grad_gamma = np.empty((p, m), dtype=np.float64)
    grad_beta = np.empty((p, n), dtype=np.float64)
    for layer in reversed(range(p)):
        for v in range(n):
            b = bra.reshape(-1, 2, 1 << v)
            k = ket.reshape(-1, 2, 1 << v)
            overlap = np.vdot(b[:, 0, :], k[:, 1, :]) + np.vdot(b[:, 1, :], k[:, 0, :])
            grad_beta[layer, v] = 2.0 * overlap.imag
        for v in range(n):
            beta = angles.beta[layer, v]
            _rotate(bra, v, -beta)
            _rotate(ket, v, -beta)
        if m:
            w = np.conj(bra) * ket
            if table is not None:
                grad_gamma[layer] = 2.0 * (table.T @ w).imag
            else:
                for k_e in range(m):
                    grad_gamma[layer, k_e] = 2.0 * float(
                        (_edge_indicator(g, k_e) * w).sum().imag
                    )
            if layer:
                # states below layer 0 are never read, skip the last undo
                back = np.exp(1j * _cost_phase_sum(g, angles.gamma[layer]))
                bra *= back
                ket *= back
    flat = np.hstack([grad_gamma, grad_beta]).ravel()
    return value, flat
