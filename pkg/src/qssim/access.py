"""Authorized sets, logical operators, entanglement projector, acceptance POVM.

Logical operators for an authorized set B are found symbolically.  Any
product of graph stabilizers K_i fixes |G>, so with dressing word D and
logical basis |i_L> = D^i |G>:

  * Z_L = prod_i K_i^{a_i}  acts as w^i on |i_L> exactly when its
    commutation exponent with D is 1 and its support lies inside B;
  * X_L = D prod_i K_i^{b_i} maps |i_L> to |i+1_L> exactly when it
    commutes with D and is supported inside B.

The per-test observable pair is built from the same words.  For test
selector t = (t1, t2) the dealer measures the phase-free word
Z^{t1} X^{t2}; the word

    N(t) = Z_L^{-t1} X_L^{t2}

makes Z_d^{t1} X_d^{t2} (x) N(t) an exact stabilizer of the resource
state, so the accessing set measures the logical operator N(t)^{-1} and
accepts when its outcome equals the dealer's.  At q = 2 this reduces to
measuring X_L or Z_L and comparing outcomes directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product

import numpy as np

from .errors import InputError, UnauthorizedSetError
from .graphs import logical_basis
from .pauli import PauliString, product
from .scheme import SchemeSpec
from .state import QuantumState, apply_pauli, fidelity, partial_trace, trace_distance

ATOL = 1e-10


@dataclass(frozen=True)
class LogicalOperatorPair:
    """Logical X and Z words of an authorized set, on the logical register."""

    players: frozenset[int]
    x_l: PauliString
    z_l: PauliString

    @property
    def q(self) -> int:
        return self.x_l.q

    def extended(self) -> "LogicalOperatorPair":
        """Same pair shifted onto the dealer-extended register (dealer site 0)."""
        n = self.x_l.n_sites + 1
        return LogicalOperatorPair(
            self.players, self.x_l.shifted(1, n), self.z_l.shifted(1, n)
        )


def _solve_words(scheme: SchemeSpec, sites: tuple[int, ...]):
    """Exponent search for (Z_L, X_L) supported on the given vertex sites."""
    q, n = scheme.q, scheme.n_players
    stabs = scheme.graph.stabilizers(q)
    dressing = scheme.dressing
    site_set = set(sites)
    z_sol = x_sol = None
    for exps in iter_product(range(q), repeat=n):
        factors = []
        for i, e in enumerate(exps):
            if e:
                factors.append(stabs[i].power(e))
        word = product(factors, q, n)
        c = word.commutation_exponent(dressing)
        if (z_sol is None and c == 1 % q and not word.is_identity_word()
                and set(word.support()) <= site_set):
            z_sol = word
        if x_sol is None and c == 0:
            cand = dressing * word
            if set(cand.support()) <= site_set:
                x_sol = cand
        if z_sol is not None and x_sol is not None:
            break
    return z_sol, x_sol


def _verify_pair(scheme: SchemeSpec, pair: LogicalOperatorPair) -> None:
    basis = logical_basis(scheme.code())
    q = scheme.q
    omega = np.exp(2j * np.pi / q)
    for i in range(q):
        nxt = apply_pauli(basis[i], pair.x_l)
        if abs(nxt.overlap(basis[(i + 1) % q]) - 1.0) > ATOL:
            raise InputError(f"X_L action fails on basis state {i}")
        phz = apply_pauli(basis[i], pair.z_l)
        if abs(phz.overlap(basis[i]) - omega**i) > ATOL:
            raise InputError(f"Z_L action fails on basis state {i}")
    if pair.z_l.commutation_exponent(pair.x_l) != 1:
        raise InputError("Z_L X_L != w X_L Z_L")


@lru_cache(maxsize=256)
def _logical_ops_cached(scheme: SchemeSpec, players: frozenset[int]) -> LogicalOperatorPair:
    sites = scheme.player_sites(players)
    z_l, x_l = _solve_words(scheme, sites)
    if z_l is None or x_l is None:
        raise UnauthorizedSetError(
            f"no logical operator pair exists on players {sorted(players)}"
        )
    pair = LogicalOperatorPair(players, x_l, z_l)
    _verify_pair(scheme, pair)
    return pair


def logical_ops(scheme: SchemeSpec, players) -> LogicalOperatorPair:
    """Logical operator pair for an authorized set; error otherwise."""
    players = frozenset(players)
    if not scheme.is_authorized(players):
        raise UnauthorizedSetError(f"{sorted(players)} is not an authorized set")
    return _logical_ops_cached(scheme, players)


# -- test observables ----------------------------------------------------------


def dealer_word(q: int, t: tuple[int, int]) -> PauliString:
    """Phase-free dealer observable Z^t1 X^t2 on a single site."""
    return PauliString(q, (t[0],), (t[1],))


def resource_test_word(scheme: SchemeSpec, pair: LogicalOperatorPair,
                       t: tuple[int, int]) -> PauliString:
    """Stabilizing word Z_d^{t1} X_d^{t2} (x) Z_L^{-t1} X_L^{t2} on dealer+players."""
    q, n = scheme.q, scheme.n_players
    t1, t2 = t
    n_word = pair.z_l.power((q - t1) % q) * pair.x_l.power(t2)
    return dealer_word(q, t).tensor(n_word)


def accessor_test_operator(scheme: SchemeSpec, pair: LogicalOperatorPair,
                           t: tuple[int, int]) -> PauliString:
    """Logical word the accessing set measures for test t (outcome must equal
    the dealer's)."""
    q = scheme.q
    t1, t2 = t
    n_word = pair.z_l.power((q - t1) % q) * pair.x_l.power(t2)
    return n_word.inverse()


# -- stabilizer decomposition of the test observables ---------------------------


@dataclass(frozen=True)
class StabilizerDecomposition:
    """Product of resource stabilizer generators equal to a target word."""

    target: PauliString
    exponents: tuple[int, ...]          # dealer generator first, then one per vertex
    generators: tuple[PauliString, ...]
    residual_phase_exp: int             # 0 means verbatim equality

    @property
    def exact(self) -> bool:
        return self.residual_phase_exp == 0


def resource_stabilizer_generators(scheme: SchemeSpec) -> list[PauliString]:
    """Generators of the stabilizer group of the dealer-extended resource.

    The first generator is X_d (x) D; the rest pair each graph stabilizer
    K_j with the dealer Z power cancelling its commutation with D.
    """
    q, n = scheme.q, scheme.n_players
    dressing = scheme.dressing
    gens = [PauliString.x_on(q, 1, 0).tensor(dressing)]
    for j in range(n):
        k_j = scheme.graph.stabilizer(j, q)
        c = (-k_j.commutation_exponent(dressing)) % q
        gens.append(PauliString(q, (c,), (0,)).tensor(k_j))
    return gens


def decompose_over_stabilizers(scheme: SchemeSpec, target: PauliString) -> StabilizerDecomposition | None:
    """Search exponents with prod_g g^{e_g} matching the target word."""
    q, n = scheme.q, scheme.n_players
    gens = resource_stabilizer_generators(scheme)
    for exps in iter_product(range(q), repeat=len(gens)):
        factors = [g.power(e) for g, e in zip(gens, exps) if e]
        word = product(factors, q, n + 1)
        if word.z_exp == target.z_exp and word.x_exp == target.x_exp:
            residual = (target.phase_exp - word.phase_exp) % (2 * q)
            return StabilizerDecomposition(target, exps, tuple(gens), residual)
    return None


def test_operator_identity(scheme: SchemeSpec, players) -> dict[str, StabilizerDecomposition]:
    """Decompose both test observables of B over resource stabilizers.

    Returns the decompositions keyed by "X" (the X_d (x) X_L word) and
    "Z" (the Z_d (x) Z_L^{-1} word).  Falls back to a numeric stabilizer
    check and raises if a target fails even that.
    """
    pair = logical_ops(scheme, players)
    q = scheme.q
    targets = {
        "X": resource_test_word(scheme, pair, (0, 1)),
        "Z": resource_test_word(scheme, pair, (1, 0)),
    }
    out = {}
    resource = scheme.resource_state()
    for key, target in targets.items():
        dec = decompose_over_stabilizers(scheme, target)
        if dec is None or not dec.exact:
            expect = resource.expectation(target)
            if abs(expect - 1.0) > ATOL:
                raise InputError(
                    f"test observable {key} does not stabilize the resource "
                    f"(expectation {expect})"
                )
        if dec is None:
            raise InputError(f"no stabilizer decomposition found for target {key}")
        out[key] = dec
    return out


# -- entanglement projector and acceptance POVM ---------------------------------


def compact_sites(scheme: SchemeSpec, players) -> tuple[int, ...]:
    """Dealer-extended register sites of dealer + B, ascending."""
    return (0,) + tuple(sorted(p for p in players))


def _compact_word(scheme: SchemeSpec, pair: LogicalOperatorPair,
                  word: PauliString) -> PauliString:
    """Restrict a dealer+players word onto the dealer+B compact register."""
    return word.restricted(compact_sites(scheme, pair.players))


@dataclass(frozen=True, eq=False)
class EntanglementProjector:
    """Projector onto the maximally entangled dealer/B subspace."""

    players: frozenset[int]
    matrix: np.ndarray
    words: tuple[PauliString, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def fidelity_of(self, rho: np.ndarray) -> float:
        return float(np.trace(self.matrix @ rho).real)


def build_projector(scheme: SchemeSpec, players) -> EntanglementProjector:
    """Average of the q^2 stabilizing test words, an exact projector."""
    players = frozenset(players)
    pair = logical_ops(scheme, players)
    q = scheme.q
    words = []
    for t1 in range(q):
        for t2 in range(q):
            full = resource_test_word(scheme, pair, (t1, t2))
            words.append(_compact_word(scheme, pair, full))
    mats = [w.to_matrix() for w in words]
    matrix = sum(mats) / len(mats)
    herm = np.max(np.abs(matrix - matrix.conj().T))
    idem = np.max(np.abs(matrix @ matrix - matrix))
    if herm > ATOL or idem > ATOL:
        raise InputError(f"projector failed validation (herm {herm:.1e}, idem {idem:.1e})")
    return EntanglementProjector(players, matrix, tuple(words))


@dataclass(frozen=True, eq=False)
class AcceptancePOVM:
    """POVM element for passing one uniformly chosen test round."""

    players: frozenset[int]
    matrix: np.ndarray

    @property
    def complement(self) -> np.ndarray:
        return np.eye(self.matrix.shape[0]) - self.matrix


def acceptance_term(scheme: SchemeSpec, pair: LogicalOperatorPair,
                    t: tuple[int, int]) -> np.ndarray:
    """Equal-outcome projector sum for a single test t on dealer+B."""
    q = scheme.q
    word = _compact_word(scheme, pair, resource_test_word(scheme, pair, t))
    mat = word.to_matrix()
    dim = mat.shape[0]
    acc = np.eye(dim, dtype=complex)
    power = np.eye(dim, dtype=complex)
    for _ in range(q - 1):
        power = power @ mat
        acc += power
    return acc / q


def build_acceptance_povm(scheme: SchemeSpec, players) -> AcceptancePOVM:
    players = frozenset(players)
    pair = logical_ops(scheme, players)
    terms = [acceptance_term(scheme, pair, t) for t in scheme.test_set()]
    matrix = sum(terms) / len(terms)
    eig = np.linalg.eigvalsh(matrix)
    if eig.min() < -ATOL or eig.max() > 1 + ATOL:
        raise InputError("acceptance POVM outside [0, I]")
    return AcceptancePOVM(players, matrix)


# -- decoding -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LogicalDecoder:
    """Extracts the logical qudit from the accessing set's sites.

    The block matrices stack an orthonormal basis |j, m> of B's space in
    which Z_L acts as w^j and X_L shifts j; tracing out m yields the
    decoded qudit.
    """

    players: frozenset[int]
    sites: tuple[int, ...]          # logical-register sites of B
    blocks: tuple[np.ndarray, ...]  # one (dim_B x dim_junk) block per logical level

    @property
    def q(self) -> int:
        return len(self.blocks)

    def decode_reduced(self, rho_b: np.ndarray) -> QuantumState:
        q = self.q
        sigma = np.empty((q, q), dtype=complex)
        for j in range(q):
            for jp in range(q):
                sigma[j, jp] = np.trace(self.blocks[j].conj().T @ rho_b @ self.blocks[jp])
        sigma = 0.5 * (sigma + sigma.conj().T)
        return QuantumState(q, rho=sigma, validate=False)

    def decode(self, state: QuantumState) -> QuantumState:
        """Decode from a state on the full logical (player) register."""
        reduced = partial_trace(state, self.sites)
        return self.decode_reduced(reduced.density())


def build_decoder(scheme: SchemeSpec, players) -> LogicalDecoder:
    players = frozenset(players)
    pair = logical_ops(scheme, players)
    q = scheme.q
    sites = scheme.player_sites(players)
    z_c = pair.z_l.restricted(sites)
    x_c = pair.x_l.restricted(sites)
    # Projector onto the logical-outcome-0 eigenspace of Z_L.
    kappa = z_c.omega_exponent()
    word = z_c.phase_free()
    mat = word.to_matrix()
    dim = mat.shape[0]
    omega = np.exp(2j * np.pi / q)
    proj0 = np.zeros((dim, dim), dtype=complex)
    power = np.eye(dim, dtype=complex)
    for k in range(q):
        proj0 += omega ** (-((0 - kappa) % q) * k) * power
        power = power @ mat
    proj0 /= q
    vals, vecs = np.linalg.eigh(proj0)
    base = vecs[:, vals > 0.5]
    x_mat = x_c.to_matrix()
    blocks = [base]
    for _ in range(q - 1):
        blocks.append(x_mat @ blocks[-1])
    return LogicalDecoder(players, sites, tuple(blocks))


def decoded_fidelity(scheme: SchemeSpec, players, state: QuantumState,
                     secret_amps: np.ndarray) -> float:
    """Fidelity of B's decoded qudit against the intended secret."""
    dec = build_decoder(scheme, players)
    out = dec.decode(state)
    target = QuantumState(scheme.q, vector=np.asarray(secret_amps, dtype=complex))
    return fidelity(out, target)


# -- secrecy --------------------------------------------------------------------


def secrecy_check(scheme: SchemeSpec, unauthorized_set, secrets) -> float:
    """Max pairwise trace distance of the reduced encodings across secrets.

    The given player set must be unauthorized; passing an authorized set
    raises (the distance would be order one and signals misuse).
    """
    players = frozenset(unauthorized_set)
    if scheme.is_authorized(players):
        raise InputError(f"{sorted(players)} is authorized; secrecy check is meaningless")
    sites = scheme.player_sites(players)
    reduced = []
    for amps in secrets:
        enc = scheme.logical_state(amps)
        reduced.append(partial_trace(enc, sites))
    worst = 0.0
    for i in range(len(reduced)):
        for j in range(i + 1, len(reduced)):
            worst = max(worst, trace_distance(reduced[i], reduced[j]))
    return worst


def pad_average(scheme: SchemeSpec, players, secret_amps) -> QuantumState:
    """Logical one-time-pad twirl of an encoded secret, averaged over all pads."""
    pair = logical_ops(scheme, players)
    q = scheme.q
    enc = scheme.logical_state(secret_amps)
    dim = enc.dim
    acc = np.zeros((dim, dim), dtype=complex)
    for x0 in range(q):
        for x1 in range(q):
            pad = pair.x_l.power(x0) * pair.z_l.power(x1)
            padded = apply_pauli(enc, pad)
            acc += padded.density()
    return QuantumState(scheme.q, rho=acc / q**2, validate=False)
