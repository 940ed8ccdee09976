"""Dense simulation of qudit registers.

States are value-semantic: every operation returns a fresh state and
never mutates its inputs.  Pure states are kept as amplitude vectors
and only promoted to density matrices when a multi-operator channel or
a partial trace forces it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InputError,
    NumericError,
    UnsupportedError,
)
from .pauli import PauliString
from .tensor import (
    apply_to_density,
    apply_to_vector,
    bell_vector,
    check_state_size,
    partial_trace_density,
    partial_trace_vector,
)

ATOL = 1e-10


def _sites_count(q: int, dim: int) -> int:
    n = 0
    d = 1
    while d < dim:
        d *= q
        n += 1
    if d != dim:
        raise InputError(f"dimension {dim} is not a power of {q}")
    return n


class QuantumState:
    """Pure or mixed state of an n-site register of qudits of dimension q."""

    def __init__(self, q: int, vector: np.ndarray | None = None,
                 rho: np.ndarray | None = None, validate: bool = True):
        if (vector is None) == (rho is None):
            raise InputError("provide exactly one of vector or rho")
        self.q = int(q)
        if vector is not None:
            vector = np.asarray(vector, dtype=complex).reshape(-1)
            self.n_sites = _sites_count(self.q, vector.size)
            check_state_size(self.q, self.n_sites)
            self.vector: np.ndarray | None = vector
            self.rho: np.ndarray | None = None
            if validate:
                norm = np.vdot(vector, vector).real
                if abs(norm - 1.0) > ATOL:
                    raise InputError(f"state vector norm deviates from 1 by {abs(norm-1):.2e}")
        else:
            rho = np.asarray(rho, dtype=complex)
            if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
                raise InputError("density matrix must be square")
            self.n_sites = _sites_count(self.q, rho.shape[0])
            check_state_size(self.q, self.n_sites)
            self.vector = None
            self.rho = rho
            if validate:
                if np.max(np.abs(rho - rho.conj().T)) > ATOL:
                    raise InputError("density matrix is not Hermitian")
                tr = np.trace(rho).real
                if abs(tr - 1.0) > ATOL:
                    raise InputError(f"density matrix trace deviates from 1 by {abs(tr-1):.2e}")
                if np.linalg.eigvalsh(rho).min() < -ATOL:
                    raise InputError("density matrix has a negative eigenvalue")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_vector(cls, q: int, vector: np.ndarray) -> "QuantumState":
        return cls(q, vector=vector)

    @classmethod
    def from_density(cls, q: int, rho: np.ndarray) -> "QuantumState":
        return cls(q, rho=rho)

    @classmethod
    def computational(cls, q: int, n_sites: int, digits: Sequence[int]) -> "QuantumState":
        if len(digits) != n_sites:
            raise InputError("one digit per site required")
        idx = sum((d % q) * q**s for s, d in enumerate(digits))
        vec = np.zeros(q**n_sites, dtype=complex)
        vec[idx] = 1.0
        return cls(q, vector=vec)

    @classmethod
    def uniform(cls, q: int, n_sites: int) -> "QuantumState":
        dim = q**n_sites
        return cls(q, vector=np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))

    @classmethod
    def maximally_mixed(cls, q: int, n_sites: int) -> "QuantumState":
        dim = q**n_sites
        return cls(q, rho=np.eye(dim, dtype=complex) / dim)

    # -- queries ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.q**self.n_sites

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density(self) -> np.ndarray:
        if self.rho is not None:
            return self.rho
        return np.outer(self.vector, self.vector.conj())

    def promoted(self) -> "QuantumState":
        if self.rho is not None:
            return self
        return QuantumState(self.q, rho=self.density(), validate=False)

    def expectation(self, op: np.ndarray | PauliString) -> complex:
        mat = op.to_matrix() if isinstance(op, PauliString) else op
        if self.is_pure:
            return complex(np.vdot(self.vector, mat @ self.vector))
        return complex(np.trace(mat @ self.rho))

    def overlap(self, other: "QuantumState") -> complex:
        """Inner product <other|self> for two pure states."""
        if not (self.is_pure and other.is_pure):
            raise UnsupportedError("overlap requires pure states")
        return complex(np.vdot(other.vector, self.vector))

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        if self.is_pure:
            data = [[float(a.real), float(a.imag)] for a in self.vector]
            return {"q": self.q, "n_sites": self.n_sites, "kind": "pure", "amplitudes": data}
        data = [[float(a.real), float(a.imag)] for a in self.rho.reshape(-1)]
        return {"q": self.q, "n_sites": self.n_sites, "kind": "mixed", "matrix": data}

    @classmethod
    def from_json(cls, obj: dict) -> "QuantumState":
        q, n = int(obj["q"]), int(obj["n_sites"])
        if obj["kind"] == "pure":
            vec = np.array([complex(re, im) for re, im in obj["amplitudes"]])
            return cls(q, vector=vec)
        dim = q**n
        rho = np.array([complex(re, im) for re, im in obj["matrix"]]).reshape(dim, dim)
        return cls(q, rho=rho)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map on a named subset of sites."""

    q: int
    sites: tuple[int, ...]
    operators: tuple[np.ndarray, ...]
    name: str = "channel"

    def __post_init__(self):
        dim = self.q ** len(self.sites)
        acc = np.zeros((dim, dim), dtype=complex)
        for k in self.operators:
            if k.shape != (dim, dim):
                raise InputError(f"Kraus operator shape {k.shape} does not match {dim}")
            acc += k.conj().T @ k
        if np.max(np.abs(acc - np.eye(dim))) > ATOL:
            raise InputError("Kraus operators are not trace preserving")

    # -- factories -------------------------------------------------------------

    @classmethod
    def identity(cls, q: int, sites: Sequence[int]) -> "KrausChannel":
        dim = q ** len(sites)
        return cls(q, tuple(sites), (np.eye(dim, dtype=complex),), name="identity")

    @classmethod
    def from_unitary(cls, q: int, sites: Sequence[int], unitary: np.ndarray,
                     name: str = "unitary") -> "KrausChannel":
        return cls(q, tuple(sites), (np.asarray(unitary, dtype=complex),), name=name)

    @classmethod
    def from_pauli(cls, word: PauliString, sites: Sequence[int] | None = None) -> "KrausChannel":
        """Unitary channel applying a Pauli word; sites default to the word's register."""
        if sites is None:
            sites = tuple(range(word.n_sites))
            mat = word.to_matrix()
        else:
            mat = word.restricted(tuple(sites)).to_matrix()
        return cls(word.q, tuple(sites), (mat,), name=f"pauli[{word}]")

    @classmethod
    def depolarizing(cls, q: int, sites: Sequence[int], p: float) -> "KrausChannel":
        """Mix toward the maximally mixed state on the given sites with weight p."""
        if not 0.0 <= p <= 1.0:
            raise InputError("depolarizing weight must lie in [0, 1]")
        sites = tuple(sites)
        k = len(sites)
        dim = q**k
        ops = []
        w0 = 1.0 - p + p / dim**2
        ident = PauliString.identity(q, k)
        ops.append(np.sqrt(w0) * ident.to_matrix())
        for code in range(1, dim**2):
            zx = [(code // q ** (2 * s)) % (q * q) for s in range(k)]
            word = PauliString(q, tuple(v // q for v in zx), tuple(v % q for v in zx))
            ops.append(np.sqrt(p) / dim * word.to_matrix())
        return cls(q, sites, tuple(ops), name=f"depolarizing(p={p})")

    @classmethod
    def replace_with(cls, q: int, sites: Sequence[int], state: QuantumState,
                     name: str = "replace") -> "KrausChannel":
        """Discard the input on `sites` and prepare the given state there."""
        sites = tuple(sites)
        dim = q ** len(sites)
        if state.dim != dim:
            raise DimensionMismatchError("replacement state does not match the site count")
        vals, vecs = np.linalg.eigh(state.density())
        ops = []
        for m in range(dim):
            if vals[m] < 1e-14:
                continue
            for i in range(dim):
                k = np.zeros((dim, dim), dtype=complex)
                k[:, i] = np.sqrt(max(vals[m], 0.0)) * vecs[:, m]
                ops.append(k)
        return cls(q, sites, tuple(ops), name=name)

    @classmethod
    def random(cls, q: int, sites: Sequence[int], n_kraus: int,
               rng: np.random.Generator, name: str = "random") -> "KrausChannel":
        """Random channel from a Haar-ish Stinespring isometry with n_kraus branches."""
        sites = tuple(sites)
        dim = q ** len(sites)
        g = rng.normal(size=(dim * n_kraus, dim)) + 1j * rng.normal(size=(dim * n_kraus, dim))
        iso, _ = np.linalg.qr(g)
        ops = tuple(iso[j * dim:(j + 1) * dim, :].copy() for j in range(n_kraus))
        return cls(q, sites, ops, name=name)


# -- operations ---------------------------------------------------------------


def apply_pauli(state: QuantumState, word: PauliString) -> QuantumState:
    """Apply a Pauli word as a unitary on the word's own register layout."""
    if word.n_sites != state.n_sites or word.q != state.q:
        raise DimensionMismatchError("Pauli word does not match the register")
    mat = word.to_matrix()
    if state.is_pure:
        return QuantumState(state.q, vector=mat @ state.vector, validate=False)
    return QuantumState(state.q, rho=mat @ state.rho @ mat.conj().T, validate=False)


def apply_channel(state: QuantumState, channel: KrausChannel) -> QuantumState:
    """Apply a Kraus channel to the named sites of the register."""
    if channel.q != state.q:
        raise DimensionMismatchError("channel dimension does not match the state")
    if any(not 0 <= s < state.n_sites for s in channel.sites):
        raise InputError("channel sites outside the register")
    q, n = state.q, state.n_sites
    if state.is_pure and len(channel.operators) == 1:
        vec = apply_to_vector(state.vector, channel.operators[0], channel.sites, q, n)
        return QuantumState(q, vector=vec, validate=False)
    rho = state.density()
    out = np.zeros_like(rho)
    for k in channel.operators:
        out += apply_to_density(rho, k, channel.sites, q, n)
    return QuantumState(q, rho=out, validate=False)


def pauli_eigenprojectors(obs: PauliString) -> list[np.ndarray]:
    """Spectral projectors P_y = (1/q) sum_k w^{-yk} obs^k of an order-q word."""
    q = obs.q
    if not obs.is_phase_free():
        raise InputError("observable must be a phase-free Pauli word")
    if not obs.power(q).is_identity():
        raise InputError("observable must have order q (obs^q = identity)")
    mat = obs.to_matrix()
    dim = mat.shape[0]
    powers = [np.eye(dim, dtype=complex)]
    for _ in range(q - 1):
        powers.append(powers[-1] @ mat)
    omega = np.exp(2j * np.pi / q)
    projs = []
    for y in range(q):
        p = sum(omega ** (-y * k) * powers[k] for k in range(q)) / q
        projs.append(p)
    return projs


def _sample_outcome(probs: np.ndarray, rng: np.random.Generator,
                    force_outcome: int | None) -> int:
    probs = np.clip(probs.real, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise NumericError(f"outcome probabilities sum to {total}")
    probs = probs / total
    if force_outcome is not None:
        if probs[force_outcome] < 1e-12:
            raise NumericError(f"requested outcome {force_outcome} has zero probability")
        return int(force_outcome)
    return int(rng.choice(len(probs), p=probs))


def measure_pauli(state: QuantumState, obs: PauliString, rng: np.random.Generator,
                  force_outcome: int | None = None) -> tuple[int, QuantumState]:
    """Projective measurement of a phase-free order-q Pauli observable.

    The outcome y in [0, q) labels the eigenvalue w^y; for q = 2 outcome
    0 is the +1 eigenspace and outcome 1 the -1 eigenspace.  Returns the
    outcome and the renormalized post-measurement state.
    """
    if obs.n_sites != state.n_sites or obs.q != state.q:
        raise DimensionMismatchError("observable does not match the register")
    projs = pauli_eigenprojectors(obs)
    q = state.q
    if state.is_pure:
        comps = [p @ state.vector for p in projs]
        probs = np.array([np.vdot(c, c).real for c in comps])
        y = _sample_outcome(probs, rng, force_outcome)
        post = comps[y] / np.sqrt(probs[y])
        return y, QuantumState(q, vector=post, validate=False)
    rho = state.rho
    probs = np.array([np.trace(p @ rho).real for p in projs])
    y = _sample_outcome(probs, rng, force_outcome)
    post = projs[y] @ rho @ projs[y] / probs[y]
    return y, QuantumState(q, rho=post, validate=False)


def measure_logical(state: QuantumState, op: PauliString, rng: np.random.Generator,
                    force_outcome: int | None = None) -> tuple[int, QuantumState]:
    """Measure a Pauli word carrying an exact omega-power phase.

    The word w^kappa W is measured by measuring the phase-free W and
    shifting the outcome by kappa, so the returned y again labels the
    eigenvalue w^y of the full operator.
    """
    kappa = op.omega_exponent()
    word = op.phase_free()
    target = None if force_outcome is None else (force_outcome - kappa) % op.q
    u, post = measure_pauli(state, word, rng, force_outcome=target)
    return (u + kappa) % op.q, post


def bell_projectors(q: int) -> dict[tuple[int, int], np.ndarray]:
    """Rank-one projectors onto the generalized Bell basis of two sites."""
    projs = {}
    for a in range(q):
        for b in range(q):
            v = bell_vector(q, a, b)
            projs[(a, b)] = np.outer(v, v.conj())
    return projs


def bell_measure(state: QuantumState, site_a: int, site_b: int,
                 rng: np.random.Generator,
                 force_outcome: tuple[int, int] | None = None
                 ) -> tuple[int, int, QuantumState]:
    """Measure two sites in the generalized Bell basis (I (x) X^x0 Z^x1)|Phi_00>.

    Returns both outcome digits and the collapsed full-register state.
    """
    if site_a == site_b:
        raise InputError("Bell measurement needs two distinct sites")
    q, n = state.q, state.n_sites
    if not (0 <= site_a < n and 0 <= site_b < n):
        raise InputError("sites outside the register")
    outcomes = [(a, b) for a in range(q) for b in range(q)]
    posts = []
    probs = []
    for a, b in outcomes:
        v = bell_vector(q, a, b)
        proj = np.outer(v, v.conj())
        if state.is_pure:
            comp = apply_to_vector(state.vector, proj, (site_a, site_b), q, n)
            probs.append(np.vdot(comp, comp).real)
            posts.append(comp)
        else:
            comp = apply_to_density(state.rho, proj, (site_a, site_b), q, n)
            probs.append(np.trace(comp).real)
            posts.append(comp)
    probs = np.array(probs)
    force = None if force_outcome is None else outcomes.index(tuple(force_outcome))
    pick = _sample_outcome(probs, rng, force)
    a, b = outcomes[pick]
    if state.is_pure:
        post = QuantumState(q, vector=posts[pick] / np.sqrt(probs[pick]), validate=False)
    else:
        post = QuantumState(q, rho=posts[pick] / probs[pick], validate=False)
    return a, b, post


def combine(low: QuantumState, high: QuantumState) -> QuantumState:
    """Tensor product with `low` occupying the faster-varying sites."""
    if low.q != high.q:
        raise DimensionMismatchError("tensor factors must share q")
    if low.is_pure and high.is_pure:
        return QuantumState(low.q, vector=np.kron(high.vector, low.vector), validate=False)
    return QuantumState(low.q, rho=np.kron(high.density(), low.density()), validate=False)


def partial_trace(state: QuantumState, keep_sites: Iterable[int]) -> QuantumState:
    """Reduced state on sorted(keep_sites)."""
    keep = sorted(set(keep_sites))
    if not keep:
        raise InputError("keep_sites must be nonempty")
    if any(not 0 <= s < state.n_sites for s in keep):
        raise InputError("keep_sites outside the register")
    q, n = state.q, state.n_sites
    if len(keep) == n:
        return state.promoted()
    if state.is_pure:
        rho = partial_trace_vector(state.vector, keep, q, n)
    else:
        rho = partial_trace_density(state.rho, keep, q, n)
    return QuantumState(q, rho=rho, validate=False)


def fidelity(state: QuantumState, target: QuantumState) -> float:
    """<target| rho |target> for a pure target."""
    if not target.is_pure:
        raise UnsupportedError("fidelity target must be pure")
    if state.q != target.q or state.n_sites != target.n_sites:
        raise DimensionMismatchError("states live on different registers")
    if state.is_pure:
        return float(abs(np.vdot(target.vector, state.vector)) ** 2)
    val = np.vdot(target.vector, state.rho @ target.vector).real
    return float(min(max(val, 0.0), 1.0))


def trace_distance(a: QuantumState, b: QuantumState) -> float:
    diff = a.density() - b.density()
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def teleport_branches(resource: QuantumState, secret: QuantumState, corrections
                      ) -> list[tuple[tuple[int, int], float, QuantumState]]:
    """All Bell branches of teleporting `secret` through `resource`.

    The resource holds the dealer on site 0 and the players above; the
    correction pair provides logical words X_L, Z_L on the player
    register.  Bell outcome (x0, x1) on (secret, dealer) is undone by
    applying X_L^{-x0} and then Z_L^{x1} on the player side.  Returns
    (outcome, probability, corrected player state) per branch.
    """
    if secret.n_sites != 1:
        raise InputError("secret must be a single-site state")
    if resource.q != secret.q:
        raise DimensionMismatchError("secret and resource dimensions differ")
    q = resource.q
    n_players = resource.n_sites - 1
    x_l, z_l = corrections.x_l, corrections.z_l
    branches = []
    for a in range(q):
        for b in range(q):
            corr = z_l.power(b) * x_l.power((q - a) % q)
            bv = bell_vector(q, a, b)
            if resource.is_pure and secret.is_pure:
                full = np.kron(resource.vector, secret.vector)
                comp = full.reshape(q**n_players, q * q) @ bv.conj()
                prob = np.vdot(comp, comp).real
                if prob < 1e-300:
                    branches.append(((a, b), 0.0, None))
                    continue
                out = corr.to_matrix() @ (comp / np.sqrt(prob))
                branches.append(((a, b), float(prob), QuantumState(q, vector=out, validate=False)))
            else:
                full = np.kron(resource.density(), secret.density())
                dim_p = q**n_players
                t = full.reshape(dim_p, q * q, dim_p, q * q)
                comp = np.einsum("arbs,r,s->ab", t, bv.conj(), bv)
                prob = np.trace(comp).real
                if prob < 1e-300:
                    branches.append(((a, b), 0.0, None))
                    continue
                mat = corr.to_matrix()
                out = mat @ (comp / prob) @ mat.conj().T
                branches.append(((a, b), float(prob), QuantumState(q, rho=out, validate=False)))
    return branches


def teleport_through(resource: QuantumState, secret: QuantumState, corrections,
                     rng: np.random.Generator) -> tuple[tuple[int, int], QuantumState]:
    """Teleport a single-site secret through the resource and correct.

    Samples one Bell outcome with its Born probability and returns
    (outcome pair, corrected player-register state).
    """
    branches = teleport_branches(resource, secret, corrections)
    probs = np.array([p for _, p, _ in branches])
    pick = _sample_outcome(probs, rng, None)
    outcome, _, post = branches[pick]
    return outcome, post


def haar_state(q: int, n_sites: int, rng: np.random.Generator) -> QuantumState:
    """Haar-random pure state on the register."""
    dim = q**n_sites
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return QuantumState(q, vector=v / np.linalg.norm(v))


def random_density(q: int, n_sites: int, rng: np.random.Generator,
                   rank: int | None = None) -> QuantumState:
    """Random mixed state from a Ginibre factor of the given rank."""
    dim = q**n_sites
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return QuantumState(q, rho=rho / np.trace(rho).real)
