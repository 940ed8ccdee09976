"""Graph states, graph codes, and the dealer-extended resource state.

A graph state on n qudits is built constructively: every vertex starts
in the uniform superposition and a controlled-Z is applied along every
edge.  The result is the unique joint +1 eigenstate of the stabilizers

    K_i = X_i  prod_{j in N(i)} Z_j.

A GraphCode dresses the graph state into a logical basis: the word D
stored as `dressing` generates the orbit |i_L> = D^i |G>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .pauli import PauliString
from .state import QuantumState, apply_pauli
from .tensor import check_state_size, digit_table


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0 .. n_vertices-1."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise InputError(f"edge ({u}, {v}) outside vertex range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def neighbors(self, v: int) -> tuple[int, ...]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return tuple(sorted(out))

    def stabilizer(self, v: int, q: int) -> PauliString:
        """K_v = X_v with Z on every neighbor."""
        ops = {v: (0, 1)}
        for u in self.neighbors(v):
            ops[u] = (1, 0)
        return PauliString.from_site_ops(q, self.n_vertices, ops)

    def stabilizers(self, q: int) -> list[PauliString]:
        return [self.stabilizer(v, q) for v in range(self.n_vertices)]

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        """Parse the edge-list format: one 'u v' pair per line."""
        edges = []
        top = -1
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"malformed edge line {line!r}")
            u, v = int(parts[0]), int(parts[1])
            edges.append((u, v))
            top = max(top, u, v)
        return cls(top + 1, tuple(edges))

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)


def graph_state(graph: Graph, q: int) -> QuantumState:
    """Joint +1 eigenstate of all graph stabilizers, built edge by edge."""
    n = graph.n_vertices
    check_state_size(q, n)
    dim = q**n
    amps = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    digits = digit_table(q, n)
    omega = np.exp(2j * np.pi / q)
    phase_exp = np.zeros(dim, dtype=np.int64)
    for u, v in graph.edges:
        phase_exp += digits[u].astype(np.int64) * digits[v].astype(np.int64)
    amps = amps * omega ** (phase_exp % q)
    return QuantumState(q, vector=amps, validate=False)


@dataclass(frozen=True)
class GraphCode:
    """Graph state plus the dressing word generating the logical orbit."""

    q: int
    graph: Graph
    dressing: PauliString

    def __post_init__(self):
        if self.dressing.q != self.q or self.dressing.n_sites != self.graph.n_vertices:
            raise InputError("dressing word does not match the graph register")

    @property
    def n_sites(self) -> int:
        return self.graph.n_vertices

    def validate(self) -> None:
        """Check the dressing orbit is orthonormal (the logical-basis invariant)."""
        basis = logical_basis(self)
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                ov = abs(a.overlap(b))
                want = 1.0 if i == j else 0.0
                if abs(ov - want) > 1e-10:
                    raise InputError(
                        f"dressing orbit is not orthonormal: |<{j}|{i}>| = {ov:.3e}"
                    )


def logical_basis(code: GraphCode) -> list[QuantumState]:
    """States |i_L> = D^i |G> for i = 0 .. q-1."""
    zero = graph_state(code.graph, code.q)
    basis = [zero]
    for _ in range(code.q - 1):
        basis.append(apply_pauli(basis[-1], code.dressing))
    return basis


def epr_resource(code: GraphCode) -> QuantumState:
    """Maximally entangled dealer/player state (1/sqrt q) sum_i |i>_d |i_L>.

    The dealer occupies site 0; player vertex v of the code maps to
    site v + 1.
    """
    q = code.q
    basis = logical_basis(code)
    dim_p = basis[0].dim
    out = np.zeros(q * dim_p, dtype=complex)
    for i, st in enumerate(basis):
        out[i::q] = st.vector / np.sqrt(q)
    return QuantumState(q, vector=out, validate=False)
