"""Little-endian tensor helpers for qudit registers.

Basis convention used everywhere in this package: a register of n
qudits of dimension q is indexed by

    i = sum_s d_s * q**s

so site 0 varies fastest.  When an amplitude vector of length q**n is
reshaped to an n-axis tensor in C order, the axis belonging to site s
is therefore axis (n - 1 - s).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ResourceError

# Cap on q**n entries of a dense state vector; density matrices square this.
DENSE_STATE_CAP = 1 << 20
# Cap on the side of a dense operator matrix.
DENSE_MATRIX_CAP = 1 << 13


def check_state_size(q: int, n_sites: int) -> None:
    if q**n_sites > DENSE_STATE_CAP:
        raise ResourceError(
            f"register of {n_sites} sites at dimension {q} exceeds the dense cap "
            f"({q}**{n_sites} > {DENSE_STATE_CAP})"
        )


def check_matrix_size(dim: int) -> None:
    if dim > DENSE_MATRIX_CAP:
        raise ResourceError(f"dense matrix of side {dim} exceeds cap {DENSE_MATRIX_CAP}")


@lru_cache(maxsize=64)
def digit_table(q: int, n_sites: int) -> np.ndarray:
    """Array of shape (n_sites, q**n) with the site digits of every index."""
    check_state_size(q, n_sites)
    idx = np.arange(q**n_sites)
    return np.stack([(idx // q**s) % q for s in range(n_sites)])


def kron_sites(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of per-site matrices, site 0 fastest."""
    full = np.eye(1, dtype=complex)
    for m in reversed(list(mats)):
        full = np.kron(full, m)
    return full


def _site_axes(sites: Sequence[int], n_sites: int) -> list[int]:
    return [n_sites - 1 - s for s in sites]


def apply_to_vector(vec: np.ndarray, op: np.ndarray, sites: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    """Apply `op` (acting on `sites`, little-endian within the list) to a state vector."""
    k = len(sites)
    t = vec.reshape([q] * n_sites)
    # Block index of op is sum_j d_{sites[j]} q**j, so when flattening in C
    # order the axes must appear as (sites[k-1], ..., sites[0]).
    axes = _site_axes(list(reversed(sites)), n_sites)
    t = np.moveaxis(t, axes, range(k))
    shape = t.shape
    t = op @ t.reshape(q**k, -1)
    t = t.reshape(shape)
    t = np.moveaxis(t, range(k), axes)
    return np.ascontiguousarray(t.reshape(-1))


def apply_to_density(rho: np.ndarray, op: np.ndarray, sites: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    """Compute op rho op^dagger with op acting on `sites`."""
    # Apply on the row index (treat columns as a batch), then on the column index.
    out = _apply_axis0(rho, op, sites, q, n_sites)
    out = _apply_axis0(out.conj().T, op, sites, q, n_sites).conj().T
    return out


def _apply_axis0(mat: np.ndarray, op: np.ndarray, sites: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    k = len(sites)
    batch = mat.shape[1]
    t = mat.reshape([q] * n_sites + [batch])
    axes = _site_axes(list(reversed(sites)), n_sites)
    t = np.moveaxis(t, axes, range(k))
    shape = t.shape
    t = op @ t.reshape(q**k, -1)
    t = t.reshape(shape)
    t = np.moveaxis(t, range(k), axes)
    return t.reshape(q**n_sites, batch)


def embed_operator(op: np.ndarray, sites: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    """Dense matrix acting as `op` on `sites` and identity elsewhere."""
    dim = q**n_sites
    check_matrix_size(dim)
    return _apply_axis0(np.eye(dim, dtype=complex), op, sites, q, n_sites)


def partial_trace_vector(vec: np.ndarray, keep: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    """Reduced density matrix of a pure state on sorted(keep)."""
    keep = sorted(keep)
    k = len(keep)
    t = vec.reshape([q] * n_sites)
    axes = _site_axes(list(reversed(keep)), n_sites)
    t = np.moveaxis(t, axes, range(k))
    m = t.reshape(q**k, -1)
    return m @ m.conj().T


def partial_trace_density(rho: np.ndarray, keep: Sequence[int], q: int, n_sites: int) -> np.ndarray:
    """Reduced density matrix of a mixed state on sorted(keep)."""
    keep = sorted(keep)
    k = len(keep)
    rest = n_sites - k
    t = rho.reshape([q] * n_sites + [q] * n_sites)
    row_axes = _site_axes(list(reversed(keep)), n_sites)
    col_axes = [n_sites + a for a in row_axes]
    t = np.moveaxis(t, row_axes + col_axes, list(range(k)) + list(range(n_sites, n_sites + k)))
    t = t.reshape(q**k, q**rest, q**k, q**rest)
    return np.einsum("arbr->ab", t)


def bell_vector(q: int, a: int, b: int) -> np.ndarray:
    """Generalized Bell state (I (x) X^a Z^b)|Phi_00> on two sites, little-endian."""
    v = np.zeros(q * q, dtype=complex)
    omega = np.exp(2j * np.pi / q)
    for i in range(q):
        v[i + q * ((i + a) % q)] = omega ** (b * i) / np.sqrt(q)
    return v
