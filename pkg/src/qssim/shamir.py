"""Classical sharing of protocol keys.

Threshold schemes share every key digit with a Shamir polynomial over
the smallest prime field that fits both the player count and the digit
alphabet.  General access structures fall back to replicated additive
sharing: every minimal authorized set receives an independent additive
split of each digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ReconstructionError
from .pauli import is_prime
from .scheme import SchemeSpec


def smallest_prime_at_least(n: int) -> int:
    p = max(2, n)
    while not is_prime(p):
        p += 1
    return p


def _poly_eval(coeffs: np.ndarray, x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + int(c)) % p
    return acc


def _lagrange_at_zero(xs: list[int], p: int) -> list[int]:
    """Interpolation weights at 0 for the sample points xs (distinct, nonzero)."""
    weights = []
    for i, xi in enumerate(xs):
        num = den = 1
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = (num * (-xj)) % p
            den = (den * (xi - xj)) % p
        weights.append((num * pow(den, p - 2, p)) % p)
    return weights


def share_digit(value: int, k: int, n: int, p: int, rng: np.random.Generator) -> list[int]:
    """Shamir shares of one digit at points 1..n, threshold k."""
    if not 0 <= value < p:
        raise InputError(f"digit {value} outside field GF({p})")
    if not 1 <= k <= n < p:
        raise InputError(f"invalid threshold ({k}, {n}) over GF({p})")
    coeffs = np.concatenate([[value], rng.integers(0, p, size=k - 1)])
    return [_poly_eval(coeffs, x, p) for x in range(1, n + 1)]


def reconstruct_digit(points: dict[int, int], k: int, p: int) -> int:
    """Recover the digit from at least k (x, share) points."""
    if len(points) < k:
        raise ReconstructionError(f"need {k} shares, got {len(points)}")
    xs = sorted(points)[:k]
    ws = _lagrange_at_zero(xs, p)
    return sum(w * points[x] for w, x in zip(ws, xs)) % p


@dataclass(frozen=True)
class KeyMaterial:
    """Classical keys of one non-interactive run.

    q_string is one-hot at the secret round r; t holds one selector pair
    per round; y one expected outcome digit per round; x the teleport
    pad.  All digits are reduced modulo the scheme dimension.
    """

    S: int
    q: int
    r: int
    t: tuple[tuple[int, int], ...]
    y: tuple[int, ...]
    x: tuple[int, int]

    def __post_init__(self):
        if not 0 <= self.r < self.S:
            raise InputError("secret round index out of range")
        if len(self.t) != self.S or len(self.y) != self.S:
            raise InputError("need one selector and one outcome digit per round")

    @property
    def q_string(self) -> tuple[int, ...]:
        return tuple(1 if i == self.r else 0 for i in range(self.S))

    @classmethod
    def generate(cls, scheme: SchemeSpec, S: int, rng: np.random.Generator) -> "KeyMaterial":
        tests = scheme.test_set()
        r = int(rng.integers(S))
        t = tuple(tests[int(rng.integers(len(tests)))] for _ in range(S))
        y = tuple(int(rng.integers(scheme.q)) for _ in range(S))
        x = (int(rng.integers(scheme.q)), int(rng.integers(scheme.q)))
        return cls(S=S, q=scheme.q, r=r, t=t, y=y, x=x)

    def digits(self) -> list[int]:
        out = list(self.q_string)
        for t1, t2 in self.t:
            out += [t1, t2]
        out += list(self.y)
        out += list(self.x)
        return out

    @classmethod
    def from_digits(cls, digits: list[int], S: int, q: int) -> "KeyMaterial":
        qs = digits[:S]
        if sum(qs) != 1:
            raise ReconstructionError("reconstructed round indicator is not one-hot")
        r = qs.index(1)
        t = tuple((digits[S + 2 * i], digits[S + 2 * i + 1]) for i in range(S))
        y = tuple(digits[3 * S:4 * S])
        x = (digits[4 * S], digits[4 * S + 1])
        return cls(S=S, q=q, r=r, t=t, y=y, x=x)


@dataclass(frozen=True)
class SharedKey:
    """Per-player share material for one KeyMaterial."""

    S: int
    q: int
    modulus: int
    mode: str                               # "shamir" or "replicated"
    threshold: int | None
    shares: dict[int, tuple[int, ...]]      # player -> share vector
    groups: tuple[frozenset[int], ...] = ()  # replicated mode only

    def reconstruct(self, players) -> KeyMaterial:
        players = frozenset(players)
        missing = players - set(self.shares)
        if missing:
            raise ReconstructionError(f"no shares held for players {sorted(missing)}")
        n_digits = len(next(iter(self.shares.values())))
        if self.mode == "shamir":
            if self.threshold is None or len(players) < self.threshold:
                raise ReconstructionError("not enough players to meet the threshold")
            digits = []
            for d in range(n_digits):
                points = {p: self.shares[p][d] for p in players}
                digits.append(reconstruct_digit(points, self.threshold, self.modulus))
        else:
            group = next((g for g in self.groups if g <= players), None)
            if group is None:
                raise ReconstructionError("players do not cover any authorized group")
            stride = n_digits // len(self.groups)
            gi = self.groups.index(group)
            digits = []
            for d in range(stride):
                total = sum(self.shares[p][gi * stride + d] for p in group)
                digits.append(total % self.modulus)
        return KeyMaterial.from_digits(digits, self.S, self.q)

    def to_json(self) -> dict:
        return {
            "S": self.S,
            "q": self.q,
            "modulus": self.modulus,
            "mode": self.mode,
            "threshold": self.threshold,
            "shares": {str(p): list(v) for p, v in sorted(self.shares.items())},
            "groups": [sorted(g) for g in self.groups],
        }


def share_key(key: KeyMaterial, scheme: SchemeSpec, rng: np.random.Generator) -> SharedKey:
    """Split the key across all players respecting the access structure."""
    digits = key.digits()
    p = smallest_prime_at_least(max(scheme.n_players + 1, scheme.q))
    n = scheme.n_players
    if scheme.threshold is not None:
        k = scheme.threshold
        rows = {player: [] for player in range(1, n + 1)}
        for d in digits:
            pts = share_digit(d, k, n, p, rng)
            for player in range(1, n + 1):
                rows[player].append(pts[player - 1])
        return SharedKey(
            S=key.S, q=key.q, modulus=p, mode="shamir", threshold=k,
            shares={pl: tuple(v) for pl, v in rows.items()},
        )
    groups = tuple(scheme.minimal_authorized_sets())
    rows = {player: [] for player in range(1, n + 1)}
    for group in groups:
        members = sorted(group)
        for d in digits:
            parts = rng.integers(0, p, size=len(members))
            parts[-1] = (d - int(parts[:-1].sum())) % p
            holder = dict(zip(members, parts))
            for player in range(1, n + 1):
                rows[player].append(int(holder.get(player, 0)))
    return SharedKey(
        S=key.S, q=key.q, modulus=p, mode="replicated", threshold=None,
        shares={pl: tuple(v) for pl, v in rows.items()}, groups=groups,
    )
