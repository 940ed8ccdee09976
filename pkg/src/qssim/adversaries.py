"""Adversarial channels on the dealer-to-players transmission.

Adversary channels are specified on player coordinates (players are
numbered 1..n); protocol runners translate them onto whichever register
the round state lives on.  Per-round adversaries act independently on
each round's transmission; a correlated adversary holds one channel
over the player sites of every round at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .access import logical_ops
from .errors import InputError, UnsupportedError
from .pauli import PauliString
from .rand import substream
from .scheme import SchemeSpec
from .state import KrausChannel, QuantumState

RoundChannels = tuple[KrausChannel | None, ...]


class AdversaryChannel:
    """Base adversary: identity on every round."""

    mode = "per-round"

    def __init__(self, name: str = "identity"):
        self.name = name

    def channel_at(self, round_index: int) -> KrausChannel | None:
        return None

    def round_channels(self, S: int) -> RoundChannels:
        return tuple(self.channel_at(i) for i in range(S))

    def branches(self, S: int) -> list[tuple[float, RoundChannels]]:
        """Decomposition into deterministic per-round channel assignments."""
        return [(1.0, self.round_channels(S))]

    def sample(self, rng: np.random.Generator, S: int) -> RoundChannels:
        return self.round_channels(S)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class IdentityAdversary(AdversaryChannel):
    pass


class PerRoundAdversary(AdversaryChannel):
    """Same channel every round, or an explicit per-round list."""

    def __init__(self, channels: KrausChannel | Sequence[KrausChannel | None],
                 name: str | None = None):
        if isinstance(channels, KrausChannel):
            self._fixed = channels
            self._list = None
            name = name or channels.name
        else:
            self._fixed = None
            self._list = tuple(channels)
            name = name or "per-round-list"
        super().__init__(name)

    def channel_at(self, round_index: int) -> KrausChannel | None:
        if self._fixed is not None:
            return self._fixed
        if round_index >= len(self._list):
            raise InputError(f"no channel defined for round {round_index}")
        return self._list[round_index]

    def round_channels(self, S: int) -> RoundChannels:
        if self._fixed is not None:
            return (self._fixed,) * S
        if len(self._list) != S:
            raise InputError(f"adversary defines {len(self._list)} rounds, run needs {S}")
        return self._list


class GeneratedAdversary(AdversaryChannel):
    """Channel produced by a round-indexed generator (unbounded protocols)."""

    def __init__(self, generator: Callable[[int], KrausChannel | None], name: str):
        super().__init__(name)
        self._generator = generator

    def channel_at(self, round_index: int) -> KrausChannel | None:
        return self._generator(round_index)


class OneRoundCorruptionAdversary(AdversaryChannel):
    """Applies a channel to exactly one uniformly chosen round."""

    def __init__(self, channel: KrausChannel, name: str | None = None):
        super().__init__(name or f"one-round[{channel.name}]")
        self.channel = channel

    def channel_at(self, round_index: int):
        raise UnsupportedError("one-round corruption needs a bounded round count")

    def round_channels(self, S: int) -> RoundChannels:
        raise UnsupportedError("one-round corruption is a mixture; use branches or sample")

    def branches(self, S: int) -> list[tuple[float, RoundChannels]]:
        out = []
        for j in range(S):
            chans: list[KrausChannel | None] = [None] * S
            chans[j] = self.channel
            out.append((1.0 / S, tuple(chans)))
        return out

    def sample(self, rng: np.random.Generator, S: int) -> RoundChannels:
        j = int(rng.integers(S))
        chans: list[KrausChannel | None] = [None] * S
        chans[j] = self.channel
        return tuple(chans)


class CorrelatedAdversary(AdversaryChannel):
    """One channel over the player sites of all S rounds jointly.

    Only the exact small-S evaluation paths accept this mode.
    """

    mode = "correlated"

    def __init__(self, S: int, channel: KrausChannel, name: str | None = None):
        super().__init__(name or f"correlated[{channel.name}]")
        self.S = S
        self.channel = channel

    def branches(self, S: int):
        raise UnsupportedError("correlated adversaries have no per-round decomposition")

    def sample(self, rng, S):
        raise UnsupportedError("correlated adversaries have no per-round decomposition")


# -- standard constructions ------------------------------------------------------


def displacement_channel(scheme: SchemeSpec, players, a: int, b: int) -> KrausChannel:
    """Unitary X_L^a Z_L^b on the accessing set's shares.

    For (a, b) != (0, 0) this maps the honest resource onto a state
    orthogonal to the entanglement projector while staying maximally
    entangled.
    """
    pair = logical_ops(scheme, players)
    word = pair.x_l.power(a % scheme.q) * pair.z_l.power(b % scheme.q)
    support = word.support()
    if not support:
        raise InputError("displacement (0, 0) is the identity; pick a nonzero pair")
    mat = word.restricted(support).to_matrix()
    player_ids = tuple(s + 1 for s in support)
    return KrausChannel(scheme.q, player_ids, (mat,),
                        name=f"displace[a={a},b={b},B={sorted(players)}]")


def one_round_corruption(scheme: SchemeSpec, players, a: int = 1, b: int = 0
                         ) -> OneRoundCorruptionAdversary:
    """Corrupt one uniformly guessed round with an orthogonal displacement."""
    return OneRoundCorruptionAdversary(displacement_channel(scheme, players, a, b))


def fixed_fidelity_adversary(scheme: SchemeSpec, players, f: float,
                             a: int = 1, b: int = 0) -> PerRoundAdversary:
    """Every round's resource keeps projector fidelity exactly f.

    Mixes the identity (weight f) with an orthogonal displacement
    (weight 1 - f) on the accessing set's shares.
    """
    if not 0.0 <= f <= 1.0:
        raise InputError("fidelity must lie in [0, 1]")
    disp = displacement_channel(scheme, players, a, b)
    dim = disp.operators[0].shape[0]
    ops = (np.sqrt(f) * np.eye(dim, dtype=complex), np.sqrt(1.0 - f) * disp.operators[0])
    ch = KrausChannel(scheme.q, disp.sites, ops, name=f"fixed-fidelity(f={f})")
    return PerRoundAdversary(ch)


def depolarizing_adversary(scheme: SchemeSpec, players, p: float) -> PerRoundAdversary:
    sites = tuple(sorted(players))
    return PerRoundAdversary(KrausChannel.depolarizing(scheme.q, sites, p))


def junk_replacement_adversary(scheme: SchemeSpec, players,
                               state: QuantumState | None = None) -> PerRoundAdversary:
    """Replace the listed players' shares with a fixed state (default maximally mixed)."""
    sites = tuple(sorted(players))
    if state is None:
        state = QuantumState.maximally_mixed(scheme.q, len(sites))
    ch = KrausChannel.replace_with(scheme.q, sites, state, name="junk-replace")
    return PerRoundAdversary(ch, name=f"junk[{sites}]")


def random_kraus_adversary(scheme: SchemeSpec, seed: int, S: int,
                           max_players: int = 2, n_kraus: int = 3) -> PerRoundAdversary:
    """Independent random channels, one per round, derived from the seed."""
    chans = []
    for i in range(S):
        rng = substream(seed, i)
        k = int(rng.integers(1, max_players + 1))
        players = tuple(sorted(rng.choice(np.arange(1, scheme.n_players + 1),
                                          size=min(k, scheme.n_players), replace=False)))
        chans.append(KrausChannel.random(scheme.q, players, n_kraus, rng,
                                         name=f"random[{seed},{i}]"))
    return PerRoundAdversary(chans, name=f"random-kraus[{seed}]")
