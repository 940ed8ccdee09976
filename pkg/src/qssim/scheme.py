"""Secret sharing schemes: a graph code plus an access structure.

Players are numbered 1 .. n; player p lives on site p - 1 of the
logical register.  On the dealer-extended register used by protocols
the dealer occupies site 0 and player p moves to site p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError
from .graphs import Graph, GraphCode, epr_resource, graph_state, logical_basis
from .pauli import PauliString
from .state import QuantumState


@dataclass(frozen=True)
class SchemeSpec:
    """Graph code with the sets of players allowed to access the secret."""

    name: str
    q: int
    n_players: int
    graph: Graph
    dressing: PauliString
    threshold: int | None = None
    authorized_sets: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if self.graph.n_vertices != self.n_players:
            raise InputError("graph must have one vertex per player")
        if self.threshold is None and not self.authorized_sets:
            raise InputError("scheme needs a threshold or explicit authorized sets")
        for s in self.authorized_sets:
            if not s or any(not 1 <= p <= self.n_players for p in s):
                raise InputError(f"bad authorized set {sorted(s)}")
        self.code().validate()

    # -- access structure ------------------------------------------------------

    def is_authorized(self, players: frozenset[int] | set[int]) -> bool:
        players = frozenset(players)
        if any(not 1 <= p <= self.n_players for p in players):
            return False
        if self.threshold is not None:
            return len(players) >= self.threshold
        return any(s <= players for s in self.authorized_sets)

    def minimal_authorized_sets(self) -> list[frozenset[int]]:
        if self.threshold is not None:
            return [frozenset(c) for c in combinations(range(1, self.n_players + 1), self.threshold)]
        out = []
        for s in self.authorized_sets:
            if not any(t < s for t in self.authorized_sets):
                out.append(s)
        return sorted(out, key=sorted)

    def unauthorized_sets(self, max_size: int | None = None) -> list[frozenset[int]]:
        """All unauthorized subsets up to max_size (default: n_players)."""
        cap = self.n_players if max_size is None else max_size
        out = []
        for k in range(1, cap + 1):
            for c in combinations(range(1, self.n_players + 1), k):
                if not self.is_authorized(frozenset(c)):
                    out.append(frozenset(c))
        return out

    # -- code and states -------------------------------------------------------

    def code(self) -> GraphCode:
        return GraphCode(self.q, self.graph, self.dressing)

    def logical_basis(self) -> list[QuantumState]:
        return logical_basis(self.code())

    def logical_state(self, secret) -> QuantumState:
        """Encode a single-qudit secret into the logical basis."""
        import numpy as np

        amps = secret.vector if isinstance(secret, QuantumState) else np.asarray(secret, dtype=complex)
        if amps.size != self.q:
            raise InputError("secret must be a single-qudit amplitude vector")
        basis = self.logical_basis()
        vec = sum(amps[i] * basis[i].vector for i in range(self.q))
        return QuantumState(self.q, vector=vec)

    def resource_state(self) -> QuantumState:
        """Dealer-extended maximally entangled resource."""
        return epr_resource(self.code())

    def player_sites(self, players) -> tuple[int, ...]:
        """Logical-register sites of the given players, ascending."""
        return tuple(sorted(p - 1 for p in players))

    # -- protocol test set -------------------------------------------------------

    def test_set(self) -> tuple[tuple[int, int], ...]:
        """Exponent pairs (t1, t2) of the dealer word Z^t1 X^t2 per test kind.

        Qubit schemes test X and Z only; higher prime dimensions run the
        full set of q^2 selectors, including the trivial (0, 0) one.
        """
        if self.q == 2:
            return ((0, 1), (1, 0))
        return tuple((t1, t2) for t1 in range(self.q) for t2 in range(self.q))

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        obj = {
            "name": self.name,
            "q": self.q,
            "n_players": self.n_players,
            "edges": [list(e) for e in self.graph.edges],
            "dressing": self.dressing.to_string(),
        }
        if self.threshold is not None:
            obj["access"] = {"threshold": self.threshold}
        else:
            obj["access"] = {"authorized": [sorted(s) for s in self.authorized_sets]}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "SchemeSpec":
        q = int(obj["q"])
        n = int(obj["n_players"])
        graph = Graph(n, tuple(tuple(e) for e in obj["edges"]))
        dressing = PauliString.from_string(obj["dressing"], q, n)
        access = obj.get("access", {})
        threshold = access.get("threshold")
        authorized = tuple(frozenset(s) for s in access.get("authorized", []))
        return cls(
            name=obj.get("name", "scheme"),
            q=q,
            n_players=n,
            graph=graph,
            dressing=dressing,
            threshold=threshold,
            authorized_sets=authorized,
        )

    @classmethod
    def load(cls, path) -> "SchemeSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def threshold_3_5() -> SchemeSpec:
    """Five players on a cycle, any three can reconstruct the secret.

    The logical basis is the five-cycle graph state dressed by Z on
    every vertex.
    """
    graph = Graph.cycle(5)
    dressing = PauliString(2, (1, 1, 1, 1, 1), (0, 0, 0, 0, 0))
    return SchemeSpec(
        name="threshold-3-5", q=2, n_players=5, graph=graph,
        dressing=dressing, threshold=3,
    )


def threshold_2_3_qutrit() -> SchemeSpec:
    """Three qutrits on a triangle, any two can reconstruct the secret.

    Dressing Z on player 2 and Z^2 on player 3: distinct exponents make
    every single-player reduction secret independent.
    """
    graph = Graph(3, ((0, 1), (1, 2), (0, 2)))
    dressing = PauliString(3, (0, 1, 2), (0, 0, 0))
    return SchemeSpec(
        name="threshold-2-3", q=3, n_players=3, graph=graph,
        dressing=dressing, threshold=2,
    )


def trivial_scheme(q: int) -> SchemeSpec:
    """Single player holding the secret outright (authentication mode)."""
    graph = Graph(1, ())
    dressing = PauliString(q, (1,), (0,))
    return SchemeSpec(
        name=f"trivial-q{q}", q=q, n_players=1, graph=graph,
        dressing=dressing, threshold=1,
    )


_BUILTINS = {
    "threshold-3-5": threshold_3_5,
    "threshold-2-3": threshold_2_3_qutrit,
    "trivial-q2": lambda: trivial_scheme(2),
    "trivial-q3": lambda: trivial_scheme(3),
    "trivial-q5": lambda: trivial_scheme(5),
}


def builtin_scheme(name: str) -> SchemeSpec:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise InputError(f"unknown builtin scheme {name!r}; have {sorted(_BUILTINS)}") from None
