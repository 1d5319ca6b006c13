"""Eigenvalue propagation over the K-type lattice.

The defining intertwining relation, compressed across a lattice edge
alpha -> beta, reduces to the purely numerical relation

    (h + r) mu_alpha = (h - r) mu_beta,

where h is half the Bochner eigenvalue jump across the edge.  For the four
quadrants h = sj*J + sk*K + 1 evaluated at alpha, so the eigenvalue ratio
across an edge is (h + r)/(h - r).  Propagating these ratios from a base
K-type fills a whole parity class; agreement along different lattice paths
is guaranteed and is rechecked here as a free consistency test.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import DIRECTIONS, STEPS, KType, Signature, doubled_shifts, neighbor

#: |2r - round(2r)| below this treats 2r as an exact integer, making edge
#: singularity detection exact for integer and half-integer orders.
TWO_R_TOL = 1e-9

#: Absolute tolerance for singularity detection at generic real orders.
POLE_TOL = 1e-12


class ZeroDenominator(ArithmeticError):
    """The edge denominator h - r vanished: the eigenvalue quotient is singular."""

    def __init__(self, message, alpha=None, direction=None):
        super().__init__(message)
        self.alpha = alpha
        self.direction = direction


class PathInconsistency(RuntimeError):
    """Two lattice paths produced incompatible eigenvalues (implementation bug)."""


@dataclass(frozen=True)
class SpectralOrder:
    """The order parameter r (the operator has order 2r)."""

    r: float

    @classmethod
    def coerce(cls, value) -> "SpectralOrder":
        if isinstance(value, SpectralOrder):
            return value
        return cls(float(value))

    @property
    def two_r(self) -> int | None:
        """round(2r) when 2r is (numerically) an integer, else None."""
        t = 2.0 * self.r
        rt = round(t)
        return rt if abs(t - rt) <= TWO_R_TOL else None

    @property
    def is_positive_integer(self) -> bool:
        t = self.two_r
        return t is not None and t > 0 and t % 2 == 0

    @property
    def as_integer(self) -> int:
        if not self.is_positive_integer:
            raise ValueError(f"r = {self.r} is not a positive integer")
        return self.two_r // 2

    def __neg__(self) -> "SpectralOrder":
        return SpectralOrder(-self.r)

    def __float__(self) -> float:
        return self.r


def half_jump(sig: Signature, alpha: KType, direction: str) -> Fraction:
    """Half the Bochner eigenvalue jump across the edge ``alpha`` -> quadrant.

    Exactly sj*J + sk*K + 1 at ``alpha``; returned as an exact rational.
    """
    sj, sk = STEPS[direction]
    tj, tk = doubled_shifts(sig, alpha)
    return Fraction(sj * tj + sk * tk + 2, 2)


def is_singular_edge(sig: Signature, alpha: KType, direction: str, r) -> bool:
    """True when h - r = 0 on this edge, i.e. the transition ratio has a pole."""
    order = SpectralOrder.coerce(r)
    two_h = 2 * half_jump(sig, alpha, direction)  # integer-valued Fraction
    if order.two_r is not None:
        return two_h == order.two_r
    return abs(float(two_h) / 2.0 - order.r) <= POLE_TOL


def transition_ratio(sig: Signature, alpha: KType, direction: str, r) -> float:
    """Eigenvalue ratio mu_beta / mu_alpha = (h + r)/(h - r) across one edge."""
    if neighbor(alpha, direction) is None:
        raise ValueError(f"K-type {alpha} has no neighbor in direction {direction!r}")
    order = SpectralOrder.coerce(r)
    if is_singular_edge(sig, alpha, direction, order):
        raise ZeroDenominator(
            f"transition ratio singular at edge {alpha} -> {direction}: h = r = {order.r}",
            alpha=alpha,
            direction=direction,
        )
    h = float(half_jump(sig, alpha, direction))
    return (h + order.r) / (h - order.r)


@dataclass
class SpectrumTable:
    """Eigenvalue table for one parity class, normalized to 1 at ``base``."""

    sig: Signature
    r: SpectralOrder
    parity: int
    entries: dict[KType, float]
    base: KType
    method: str = "recursion"
    singular_edges: tuple = ()

    def __post_init__(self):
        assert all(v.parity == self.parity for v in self.entries)


def base_ktype(parity: int) -> KType:
    """Normalization base: (0,0) for the even class, (1,0) for the odd class."""
    return KType(0, 0) if parity == 0 else KType(1, 0)


def recursion_spectrum(
    sig: Signature,
    r,
    jmax: int,
    kmax: int,
    parity: int,
    *,
    rel_tol: float = 1e-10,
    on_singular: str = "raise",
    traversal: str = "bfs",
) -> SpectrumTable:
    """Propagate eigenvalues over the parity class inside [0, jmax] x [0, kmax].

    The first edge into a K-type fixes its value; every later edge is a
    consistency check at relative tolerance ``rel_tol``.  Singular edges
    (h = r) either abort (``on_singular="raise"``) or are skipped
    (``on_singular="skip"``), in which case K-types unreachable through
    nonsingular edges are simply absent from the table.
    """
    if on_singular not in ("raise", "skip"):
        raise ValueError(f"on_singular must be 'raise' or 'skip', got {on_singular!r}")
    if traversal not in ("bfs", "dfs"):
        raise ValueError(f"traversal must be 'bfs' or 'dfs', got {traversal!r}")
    if parity not in (0, 1):
        raise ValueError(f"parity must be 0 or 1, got {parity}")
    order = SpectralOrder.coerce(r)
    base = base_ktype(parity)
    if base.j > jmax or base.k > kmax:
        raise ValueError(f"base K-type {base} outside truncation ({jmax}, {kmax})")

    entries: dict[KType, float] = {base: 1.0}
    singular: list[tuple[KType, str]] = []
    frontier = deque([base])
    while frontier:
        alpha = frontier.popleft() if traversal == "bfs" else frontier.pop()
        mu_a = entries[alpha]
        for tag in DIRECTIONS:
            beta = neighbor(alpha, tag)
            if beta is None or beta.j > jmax or beta.k > kmax:
                continue
            if is_singular_edge(sig, alpha, tag, order):
                if on_singular == "raise":
                    raise ZeroDenominator(
                        f"singular edge {alpha} -> {beta} at r = {order.r}",
                        alpha=alpha,
                        direction=tag,
                    )
                singular.append((alpha, tag))
                continue
            value = mu_a * transition_ratio(sig, alpha, tag, order)
            if beta in entries:
                seen = entries[beta]
                scale = max(abs(seen), abs(value), 1e-300)
                if abs(seen - value) / scale > rel_tol:
                    raise PathInconsistency(
                        f"paths disagree at {beta}: {seen!r} vs {value!r}"
                    )
            else:
                entries[beta] = value
                frontier.append(beta)

    table = SpectrumTable(
        sig=sig,
        r=order,
        parity=parity,
        entries=entries,
        base=base,
        singular_edges=tuple(singular),
    )
    _check_all_edges(table, rel_tol)
    return table


def _check_all_edges(table: SpectrumTable, rel_tol: float) -> None:
    """Recheck every nonsingular edge between computed entries."""
    for alpha, mu_a in table.entries.items():
        for tag in DIRECTIONS:
            beta = neighbor(alpha, tag)
            if beta is None or beta not in table.entries:
                continue
            if is_singular_edge(table.sig, alpha, tag, table.r):
                continue
            ratio = transition_ratio(table.sig, alpha, tag, table.r)
            mu_b = table.entries[beta]
            scale = max(abs(mu_b), abs(mu_a * ratio), 1e-300)
            if abs(mu_b - mu_a * ratio) / scale > rel_tol:
                raise PathInconsistency(
                    f"edge {alpha} -> {beta} inconsistent with table values"
                )


def loop_consistency(sig: Signature, r, directions, start: KType) -> float:
    """Product of transition ratios around a closed lattice walk.

    Exact value 1 for any closed walk; the return value exposes the
    floating-point deviation.  Raises ValueError if the walk does not
    close up or leaves the lattice.
    """
    order = SpectralOrder.coerce(r)
    product = 1.0
    here = start
    for tag in directions:
        product *= transition_ratio(sig, here, tag, order)
        here = neighbor(here, tag)
        if here is None:
            raise ValueError("loop left the lattice (negative index)")
    if here != start:
        raise ValueError(f"walk is not closed: ended at {here}, started at {start}")
    return product


def closed_direction_loops(length: int):
    """All direction sequences of the given even length with zero net step."""
    if length % 2:
        return
    half = length // 2
    for jpos in itertools.combinations(range(length), half):
        sj = [-1] * length
        for i in jpos:
            sj[i] = 1
        for kpos in itertools.combinations(range(length), half):
            sk = [-1] * length
            for i in kpos:
                sk[i] = 1
            yield tuple(
                ("+" if a > 0 else "-") + ("+" if b > 0 else "-")
                for a, b in zip(sj, sk)
            )


def max_loop_deviation(sig: Signature, r, jmax: int, kmax: int, max_len: int = 8) -> float:
    """Max |product - 1| over all closed lattice walks of length <= max_len.

    Vectorized over start points: for each closed direction sequence, the
    per-start product is an elementwise product of shifted ratio arrays.
    Walks through a singular edge or off the [0,jmax] x [0,kmax] window are
    excluded.
    """
    order = SpectralOrder.coerce(r)
    pad = max_len
    nj, nk = jmax + 1, kmax + 1
    ratio = np.full((4, nj + 2 * pad, nk + 2 * pad), np.nan)
    for d, tag in enumerate(DIRECTIONS):
        dj, dk = STEPS[tag]
        for j in range(nj):
            for k in range(nk):
                if not (0 <= j + dj <= jmax and 0 <= k + dk <= kmax):
                    continue
                alpha = KType(j, k)
                if is_singular_edge(sig, alpha, tag, order):
                    continue
                ratio[d, pad + j, pad + k] = transition_ratio(sig, alpha, tag, order)

    jgrid = np.arange(nj)[None, None, :, None]
    kgrid = np.arange(nk)[None, None, None, :]
    worst = 0.0
    for length in range(2, max_len + 1, 2):
        half = length // 2
        jsigns = np.array(list(itertools.combinations(range(length), half)))
        signs = np.full((len(jsigns), length), -1, dtype=np.int64)
        for row, pos in enumerate(jsigns):
            signs[row, pos] = 1
        # signs: every +/-1 pattern with zero sum, reused for both axes
        cum = np.cumsum(signs, axis=1) - signs  # offset before each step
        jneg = (signs < 0).astype(np.int64)

        prod = np.ones((signs.shape[0], signs.shape[0], nj, nk))
        for i in range(length):
            d = 2 * jneg[:, i][:, None, None, None] + jneg[:, i][None, :, None, None]
            joff = pad + cum[:, i][:, None, None, None] + jgrid
            koff = pad + cum[:, i][None, :, None, None] + kgrid
            prod *= ratio[d, joff, koff]
        finite = np.isfinite(prod)
        if finite.any():
            worst = max(worst, float(np.max(np.abs(prod[finite] - 1.0))))
    return worst
