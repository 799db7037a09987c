"""Hamiltonian families and their crossing structure.

Two bands of N diabatic levels each. The down band (levels 1..N) is driven
by -f(t), the up band (levels N+1..2N) by +f(t), with static offsets a and
a coupling block b between the bands:

    H(t) = eta * diag(-f(t) + a_1, ..., -f(t) + a_N,
                      +f(t) + a_1, ..., +f(t) + a_N)
         + sqrt(eta) * [[0, b], [b^dagger, 0]]

with f(t) = v*t for the ramp (grid) family and f(t) = sin(v*t) for the
periodically driven family. Level indices in the public API are 1-based:
1 <= i <= N < j <= 2N, and b[i][j-N] couples level i to level j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DuplicateOffset,
    NonPositiveParameter,
    RealityViolation,
    ShapeMismatch,
)

__all__ = [
    "Crossing",
    "GridModel",
    "LzsmModel",
    "build_grid",
    "build_lzsm",
    "build_spin_boson",
    "build_interference_grid",
]


@dataclass(frozen=True)
class Crossing:
    """One anticrossing event of the pair (i, j).

    ``slope`` is the time derivative of (H_jj - H_ii)/eta at the crossing
    (the gap slope; its sign is retained). ``n`` is the pair-local ordinal:
    0 for the single grid crossing; for the driven family, ordinal 0 is the
    last crossing at time <= 0 and ordinals count forward from there.
    ``cluster`` labels the drive half-period containing the crossing
    (driven family only).
    """

    i: int
    j: int
    n: int
    time: float
    slope: float
    kappa: float
    p: float
    theta: float | None = None
    cluster: int | None = None

    def with_theta(self, theta: float) -> "Crossing":
        return replace(self, theta=float(theta))


def _validated_offsets(a, N) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (N,):
        raise ShapeMismatch(f"expected {N} band offsets, got shape {a.shape}")
    return a


def _validated_coupling(b, N) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    if b.shape != (N, N):
        raise ShapeMismatch(f"expected a {N}x{N} coupling block, got shape {b.shape}")
    return b


def _check_positive(**params):
    for name, value in params.items():
        if not value > 0:
            raise NonPositiveParameter(f"{name} must be positive, got {value}")


def _freeze(model, a, b):
    a.flags.writeable = False
    b.flags.writeable = False
    object.__setattr__(model, "a", a)
    object.__setattr__(model, "b", b)
    sign = np.concatenate([-np.ones(model.N), np.ones(model.N)])
    offs = np.concatenate([a, a])
    bfull = np.zeros((2 * model.N, 2 * model.N), dtype=complex)
    bfull[: model.N, model.N :] = b
    bfull[model.N :, : model.N] = b.conj().T
    object.__setattr__(model, "_sign", sign)
    object.__setattr__(model, "_offsets2", offs)
    object.__setattr__(model, "_coupling_term", math.sqrt(model.eta) * bfull)


class _TwoBandMixin:
    """Shared helpers; levels are 1-based in every public signature."""

    @property
    def dim(self) -> int:
        return 2 * self.N

    def coupling(self, i: int, j: int) -> complex:
        self._check_pair(i, j)
        return complex(self.b[i - 1, j - 1 - self.N])

    def offset_gap(self, i: int, j: int) -> float:
        """a_i - a_{j-N}: the static offset difference of the pair."""
        self._check_pair(i, j)
        return float(self.a[i - 1] - self.a[j - 1 - self.N])

    def coupled_pairs(self):
        """All (i, j) with nonzero coupling, 1 <= i <= N < j <= 2N."""
        down, up = np.nonzero(self.b)
        return [(int(i) + 1, int(m) + 1 + self.N) for i, m in zip(down, up)]

    def _check_pair(self, i: int, j: int):
        if not (1 <= i <= self.N < j <= 2 * self.N):
            raise ShapeMismatch(
                f"pair ({i}, {j}) out of range for N={self.N}: need 1<=i<=N<j<=2N"
            )

    def _diagonal(self, drive: float) -> np.ndarray:
        return self.eta * (self._sign * drive + self._offsets2)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True, eq=False)
class GridModel(_TwoBandMixin):
    """Linear-ramp two-band model: f(t) = v*t.

    Every coupled pair (i, j) crosses exactly once, at
    t = (a_i - a_{j-N}) / (2v), with gap slope 2v.
    """

    N: int
    v: float
    eta: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise NonPositiveParameter(f"N must be a positive integer, got {self.N}")
        _check_positive(v=self.v, eta=self.eta)
        a = _validated_offsets(self.a, self.N)
        b = _validated_coupling(self.b, self.N)
        for i in range(self.N):
            for k in range(i + 1, self.N):
                if a[i] == a[k]:
                    raise DuplicateOffset(
                        f"band offsets a[{i + 1}] and a[{k + 1}] are both {a[i]}; "
                        "levels within a band must be pairwise distinct"
                    )
        _freeze(self, a, b)

    def _key(self):
        return (self.N, self.v, self.eta, self.a.tobytes(), self.b.tobytes())

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self._coupling_term.copy()
        h[np.diag_indices_from(h)] += self._diagonal(self.v * t)
        return h

    def crossing_time(self, i: int, j: int) -> float:
        return self.offset_gap(i, j) / (2 * self.v)

    def crossing(self, i: int, j: int) -> Crossing:
        kappa = abs(self.coupling(i, j)) ** 2 / (2 * self.v)
        return Crossing(
            i=i,
            j=j,
            n=0,
            time=self.crossing_time(i, j),
            slope=2 * self.v,
            kappa=kappa,
            p=math.exp(-2 * math.pi * kappa),
        )

    def crossings(self) -> list[Crossing]:
        """Coupled-pair crossings, time-ordered (ties resolved by indices).

        Simultaneous crossings of a valid model never share a level index
        (equal times with a shared index would force equal offsets), so any
        order within a tie represents the same product.
        """
        events = [self.crossing(i, j) for i, j in self.coupled_pairs()]
        return sorted(events, key=lambda c: (c.time, c.i, c.j))


@dataclass(frozen=True, eq=False)
class LzsmModel(_TwoBandMixin):
    """Sinusoidally driven two-band model: f(t) = sin(v*t).

    A coupled pair (i, j) crosses where sin(v*t) = s := (a_i - a_{j-N})/2,
    which requires |s| < 1; the crossings come in two families per drive
    period with opposite gap slopes. ``n_crossings`` is the default number
    of crossing clusters (drive half-periods) a propagation traverses, and
    ``t_ref`` anchors the dynamical-phase antiderivative.
    """

    N: int
    v: float
    eta: float
    a: np.ndarray
    b: np.ndarray
    n_crossings: int = 20
    t_ref: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise NonPositiveParameter(f"N must be a positive integer, got {self.N}")
        _check_positive(v=self.v, eta=self.eta)
        if int(self.n_crossings) != self.n_crossings or self.n_crossings < 0:
            raise NonPositiveParameter(
                f"n_crossings must be a nonnegative integer, got {self.n_crossings}"
            )
        a = _validated_offsets(self.a, self.N)
        b = _validated_coupling(self.b, self.N)
        for i, m in zip(*np.nonzero(b)):
            gap = abs(a[i] - a[m])
            if gap >= 2:
                raise RealityViolation(
                    f"coupled pair ({i + 1}, {m + 1 + self.N}) has |a_i - a_j| = "
                    f"{gap} >= 2, so its gap never closes under the drive"
                )
        # Two coupled pairs sharing a level and a partner offset would cross
        # at identical times in every cluster: a degenerate multipoint
        # crossing the impulse product cannot order.
        for i in range(self.N):
            partners = np.nonzero(b[i])[0]
            offs = a[partners]
            if len(np.unique(offs)) != len(offs):
                raise DuplicateOffset(
                    f"level {i + 1} couples to two up-band levels with equal "
                    "offsets; their crossings coincide"
                )
        for m in range(self.N):
            partners = np.nonzero(b[:, m])[0]
            offs = a[partners]
            if len(np.unique(offs)) != len(offs):
                raise DuplicateOffset(
                    f"level {m + 1 + self.N} couples to two down-band levels "
                    "with equal offsets; their crossings coincide"
                )
        _freeze(self, a, b)

    def _key(self):
        return (
            self.N,
            self.v,
            self.eta,
            self.a.tobytes(),
            self.b.tobytes(),
            self.n_crossings,
            self.t_ref,
        )

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self._coupling_term.copy()
        h[np.diag_indices_from(h)] += self._diagonal(math.sin(self.v * t))
        return h

    def half_gap(self, i: int, j: int) -> float:
        """s = (a_i - a_{j-N})/2; crossings solve sin(v*t) = s."""
        return self.offset_gap(i, j) / 2

    def cluster_of_ordinal(self, i: int, j: int, n: int) -> int:
        """Map the pair-local ordinal n to the drive half-period cluster.

        Ordinal 0 is the last crossing at time <= 0: for s <= 0 that is the
        cluster-0 crossing at t = arcsin(s)/v, while for s > 0 cluster 0's
        crossing sits at t = arcsin(s)/v > 0 and ordinal 0 falls in cluster
        -1, shifting the map by one.
        """
        return n if self.half_gap(i, j) <= 0 else n - 1

    def crossing(self, i: int, j: int, n: int) -> Crossing:
        """The ordinal-n crossing of the coupled pair (i, j)."""
        s = self.half_gap(i, j)
        if not abs(s) < 1:
            raise RealityViolation(
                f"pair ({i}, {j}) has |a_i - a_j| >= 2 and never crosses"
            )
        m = self.cluster_of_ordinal(i, j, n)
        parity = -1.0 if m % 2 else 1.0
        time = (m * math.pi + parity * math.asin(s)) / self.v
        slope = parity * 2 * self.v * math.sqrt(1 - s * s)
        kappa = abs(self.coupling(i, j)) ** 2 / abs(slope)
        return Crossing(
            i=i,
            j=j,
            n=n,
            time=time,
            slope=slope,
            kappa=kappa,
            p=math.exp(-2 * math.pi * kappa),
            cluster=m,
        )

    def crossing_in_cluster(self, i: int, j: int, cluster: int) -> Crossing:
        """Each coupled pair crosses exactly once per half-period cluster."""
        s = self.half_gap(i, j)
        n = cluster if s <= 0 else cluster + 1
        return self.crossing(i, j, n)

    def cluster_crossings(self, cluster: int) -> list[Crossing]:
        """Time-ordered crossings of one cluster, all coupled pairs.

        Exactly simultaneous crossings never share a level index (the
        constructor rejected equal partner offsets), so ties commute and
        the index tiebreak is cosmetic.
        """
        events = [
            self.crossing_in_cluster(i, j, cluster) for i, j in self.coupled_pairs()
        ]
        return sorted(events, key=lambda c: (c.time, c.i, c.j))

    def period(self) -> float:
        return 2 * math.pi / self.v


def build_grid(N, v, eta, a, b) -> GridModel:
    """Validate and construct a linear-ramp model."""
    return GridModel(N=int(N), v=float(v), eta=float(eta), a=a, b=b)


def build_lzsm(N, v, eta, a, b, n_crossings=20, t_ref=0.0) -> LzsmModel:
    """Validate and construct a sinusoidally driven model."""
    return LzsmModel(
        N=int(N),
        v=float(v),
        eta=float(eta),
        a=a,
        b=b,
        n_crossings=int(n_crossings),
        t_ref=float(t_ref),
    )


def build_spin_boson(
    Delta, gamma, Omega, v, eta, n_boson=5, n_crossings=20
) -> LzsmModel:
    """Driven spin coupled to one boson mode, truncated at n_boson levels.

    Down band: spin down with n = 0..n_boson-1 bosons; up band: spin up.
    Offsets a_n = (n-1)*Omega; the coupling block is symmetric tridiagonal,
    Delta on the diagonal and gamma*sqrt(n) on the side diagonals (the
    ladder-operator matrix elements between neighboring boson numbers).
    """
    n_boson = int(n_boson)
    if n_boson < 1:
        raise NonPositiveParameter(f"n_boson must be >= 1, got {n_boson}")
    if Delta < 0 or gamma < 0:
        raise NonPositiveParameter("Delta and gamma must be >= 0")
    a = Omega * np.arange(n_boson, dtype=float)
    b = np.zeros((n_boson, n_boson), dtype=complex)
    b[np.diag_indices(n_boson)] = Delta
    roots = gamma * np.sqrt(np.arange(1, n_boson, dtype=float))
    b[np.arange(n_boson - 1), np.arange(1, n_boson)] = roots
    b[np.arange(1, n_boson), np.arange(n_boson - 1)] = roots
    return build_lzsm(n_boson, v, eta, a, b, n_crossings=n_crossings)


def build_interference_grid(Delta, gamma, a, v, eta) -> GridModel:
    """Two symmetric coupled pairs: the minimal grid with path interference.

    Levels (1, 3) and (2, 4) couple with Delta and cross at t = 0; levels
    (1, 4) and (2, 3) couple with gamma and cross at -a/(2v) and +a/(2v).
    """
    return build_grid(2, v, eta, [0.0, float(a)], [[Delta, gamma], [gamma, Delta]])
