"""Exact algebra of generalized Pauli words over a prime dimension.

A word is a phase times a tensor product of per-site operators

    Z^z X^x        with   X|i> = |i + 1 mod q>,   Z|i> = w^i |i>,

where w = exp(2*pi*i/q).  The phase is stored as an integer exponent of
tau = exp(i*pi/q), reduced modulo 2q.  Even exponents are exactly the
powers of w; q = 2 additionally needs the odd exponents (+/-i) so that
Y-type letters close under multiplication.  One representation covers
all primes.

Multiplication is exact integer arithmetic: reordering X^x past Z^z on
one site costs w^(-x z), and exponent reduction modulo q is free of
phase because X^q = Z^q = I.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatchError, InputError
from .tensor import check_matrix_size, kron_sites

_SITE_RE = re.compile(r"^Z(\d+)X(\d+)\s*@\s*(\d+)$")


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % k for k in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class PauliString:
    """Phased generalized Pauli word on an n-site register of dimension q.

    Immutable; all operations return new values.
    """

    q: int
    z_exp: tuple[int, ...]
    x_exp: tuple[int, ...]
    phase_exp: int = 0

    def __post_init__(self):
        if not is_prime(self.q):
            raise InputError(f"dimension must be prime, got {self.q}")
        if len(self.z_exp) != len(self.x_exp):
            raise InputError("z_exp and x_exp must have equal length")
        object.__setattr__(self, "z_exp", tuple(int(z) % self.q for z in self.z_exp))
        object.__setattr__(self, "x_exp", tuple(int(x) % self.q for x in self.x_exp))
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % (2 * self.q))

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, q: int, n_sites: int) -> "PauliString":
        return cls(q, (0,) * n_sites, (0,) * n_sites, 0)

    @classmethod
    def from_site_ops(cls, q: int, n_sites: int, ops: dict[int, tuple[int, int]],
                      phase_exp: int = 0) -> "PauliString":
        """Word with (z, x) exponents on the listed sites, identity elsewhere."""
        z = [0] * n_sites
        x = [0] * n_sites
        for site, (zz, xx) in ops.items():
            if not 0 <= site < n_sites:
                raise InputError(f"site {site} outside register of {n_sites} sites")
            z[site], x[site] = zz, xx
        return cls(q, tuple(z), tuple(x), phase_exp)

    @classmethod
    def z_on(cls, q: int, n_sites: int, site: int, power: int = 1) -> "PauliString":
        return cls.from_site_ops(q, n_sites, {site: (power, 0)})

    @classmethod
    def x_on(cls, q: int, n_sites: int, site: int, power: int = 1) -> "PauliString":
        return cls.from_site_ops(q, n_sites, {site: (0, power)})

    # -- basic queries -----------------------------------------------------

    @property
    def n_sites(self) -> int:
        return len(self.z_exp)

    def support(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_sites) if self.z_exp[s] or self.x_exp[s])

    def is_identity_word(self) -> bool:
        return not self.support()

    def is_identity(self) -> bool:
        return self.is_identity_word() and self.phase_exp == 0

    def is_phase_free(self) -> bool:
        return self.phase_exp == 0

    def phase(self) -> complex:
        return np.exp(1j * np.pi * self.phase_exp / self.q)

    def has_omega_phase(self) -> bool:
        """True when the phase is an exact power of w (even tau exponent)."""
        return self.phase_exp % 2 == 0

    def omega_exponent(self) -> int:
        """k such that phase = w^k; requires an even tau exponent."""
        if not self.has_omega_phase():
            raise InputError(f"phase exponent {self.phase_exp} is not a power of omega")
        return (self.phase_exp // 2) % self.q

    # -- algebra -----------------------------------------------------------

    def _require_compatible(self, other: "PauliString") -> None:
        if self.q != other.q or self.n_sites != other.n_sites:
            raise DimensionMismatchError(
                f"operands differ: (q={self.q}, n={self.n_sites}) vs "
                f"(q={other.q}, n={other.n_sites})"
            )

    def __mul__(self, other: "PauliString") -> "PauliString":
        self._require_compatible(other)
        q = self.q
        phase = self.phase_exp + other.phase_exp
        for s in range(self.n_sites):
            # move X^{x_a} of the left word past Z^{z_b} of the right one
            phase -= 2 * self.x_exp[s] * other.z_exp[s]
        z = tuple(self.z_exp[s] + other.z_exp[s] for s in range(self.n_sites))
        x = tuple(self.x_exp[s] + other.x_exp[s] for s in range(self.n_sites))
        return PauliString(q, z, x, phase)

    def power(self, k: int) -> "PauliString":
        """k-fold product of the word with itself, k >= 0."""
        if k < 0:
            raise InputError("power requires a non-negative exponent")
        result = PauliString.identity(self.q, self.n_sites)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "PauliString":
        q = self.q
        phase = -self.phase_exp - 2 * sum(x * z for x, z in zip(self.x_exp, self.z_exp))
        z = tuple(-z for z in self.z_exp)
        x = tuple(-x for x in self.x_exp)
        return PauliString(q, z, x, phase)

    def dagger(self) -> "PauliString":
        return self.inverse()

    def commutation_exponent(self, other: "PauliString") -> int:
        """c with a b = w^c b a."""
        self._require_compatible(other)
        c = sum(self.z_exp[s] * other.x_exp[s] - self.x_exp[s] * other.z_exp[s]
                for s in range(self.n_sites))
        return c % self.q

    def commutes_with(self, other: "PauliString") -> bool:
        return self.commutation_exponent(other) == 0

    def phase_free(self) -> "PauliString":
        return PauliString(self.q, self.z_exp, self.x_exp, 0)

    # -- register plumbing ---------------------------------------------------

    def shifted(self, offset: int, n_sites: int) -> "PauliString":
        """Embed into a larger register, moving site s to site s + offset."""
        if offset < 0 or offset + self.n_sites > n_sites:
            raise InputError("shift target does not fit the new register")
        z = [0] * n_sites
        x = [0] * n_sites
        for s in range(self.n_sites):
            z[s + offset] = self.z_exp[s]
            x[s + offset] = self.x_exp[s]
        return PauliString(self.q, tuple(z), tuple(x), self.phase_exp)

    def restricted(self, sites: tuple[int, ...]) -> "PauliString":
        """Compress onto the listed sites (which must cover the support)."""
        if not set(self.support()) <= set(sites):
            raise InputError("restriction drops non-identity sites")
        z = tuple(self.z_exp[s] for s in sites)
        x = tuple(self.x_exp[s] for s in sites)
        return PauliString(self.q, z, x, self.phase_exp)

    def tensor(self, other: "PauliString") -> "PauliString":
        """Concatenate registers: self on the low sites, other above."""
        if self.q != other.q:
            raise DimensionMismatchError("tensor factors must share q")
        return PauliString(
            self.q,
            self.z_exp + other.z_exp,
            self.x_exp + other.x_exp,
            self.phase_exp + other.phase_exp,
        )

    # -- dense realization ---------------------------------------------------

    def site_matrix(self, site: int) -> np.ndarray:
        q = self.q
        omega = np.exp(2j * np.pi / q)
        Z = np.diag(omega ** np.arange(q))
        X = np.zeros((q, q), dtype=complex)
        X[(np.arange(q) + 1) % q, np.arange(q)] = 1.0
        return np.linalg.matrix_power(Z, self.z_exp[site]) @ np.linalg.matrix_power(X, self.x_exp[site])

    def to_matrix(self) -> np.ndarray:
        """Dense unitary on the full register (little-endian site order)."""
        check_matrix_size(self.q**self.n_sites)
        mats = [self.site_matrix(s) for s in range(self.n_sites)]
        return self.phase() * kron_sites(mats)

    # -- text form -----------------------------------------------------------

    def to_string(self) -> str:
        parts = [f"Z{self.z_exp[s]}X{self.x_exp[s]} @ {s}" for s in self.support()]
        body = " ; ".join(parts) if parts else "I"
        return f"w^{self.phase_exp} . {body}"

    def __str__(self) -> str:
        return self.to_string()

    @classmethod
    def from_string(cls, text: str, q: int, n_sites: int) -> "PauliString":
        head, _, body = text.partition(".")
        head = head.strip()
        if not head.startswith("w^"):
            raise InputError(f"malformed pauli string {text!r}")
        phase = int(head[2:])
        ops: dict[int, tuple[int, int]] = {}
        body = body.strip()
        if body != "I":
            for part in body.split(";"):
                m = _SITE_RE.match(part.strip())
                if not m:
                    raise InputError(f"malformed site term {part!r}")
                z, x, site = map(int, m.groups())
                if site in ops:
                    raise InputError(f"site {site} listed twice in {text!r}")
                ops[site] = (z, x)
        return cls.from_site_ops(q, n_sites, ops, phase)


def product(factors: list[PauliString], q: int | None = None, n_sites: int | None = None) -> PauliString:
    """Ordered product of words; identity for an empty list (q, n required then)."""
    if factors:
        return reduce(lambda a, b: a * b, factors)
    if q is None or n_sites is None:
        raise InputError("empty product needs explicit q and n_sites")
    return PauliString.identity(q, n_sites)
