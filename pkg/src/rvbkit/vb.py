"""Singlet coverings of n sites on a circle: enumeration of perfect matchings,
the non-crossing (Rumer) subset, valence-bond product states, and the map from
Rumer coefficients to sector amplitudes.

A bond (i, j) is a two-spin singlet |u_i d_j> - |d_i u_j>; writing the pair in
reversed order flips the sign of the product state, which is the only freedom
a bond orientation convention has to fix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .basis import PureState, sector_basis
from .errors import InvalidSize


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def independent_count(n: int) -> int:
    """Dimension of the S_T = 0 subspace: C(n, n/2) - C(n, n/2 - 1)."""
    return comb(n, n // 2) - comb(n, n // 2 - 1)


@dataclass(frozen=True)
class Matching:
    """A perfect pairing of sites 1..n, canonically ordered."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def of(n: int, pairs) -> "Matching":
        canon = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        seen = [s for p in canon for s in p]
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError(f"pairs {pairs} do not perfectly cover sites 1..{n}")
        return Matching(n, canon)

    def is_noncrossing(self) -> bool:
        for a, b in self.pairs:
            for c, d in self.pairs:
                if a < c < b < d:
                    return False
        return True

    def bonded(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.pairs

    def to_dict(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs]}

    @staticmethod
    def from_dict(data: dict) -> "Matching":
        return Matching.of(int(data["n"]), [tuple(p) for p in data["pairs"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _require_even(n: int, cap: int) -> None:
    if n % 2 or n < 2 or n > cap:
        raise InvalidSize(f"need even n in 2..{cap}, got {n}")


def enumerate_rumer(n: int) -> list[Matching]:
    """All non-crossing perfect matchings of n points on a circle.

    Site 1 pairs with an even-offset partner j; the arc strictly inside
    (1, j) and the arc outside are matched recursively.  The order is
    deterministic: j ascending, inner matchings before outer ones.
    """
    _require_even(n, 12)

    def rec(sites: tuple[int, ...]) -> list[tuple[tuple[int, int], ...]]:
        if not sites:
            return [()]
        first = sites[0]
        out = []
        for pos in range(1, len(sites), 2):
            partner = sites[pos]
            inner = sites[1:pos]
            outer = sites[pos + 1:]
            for mi in rec(inner):
                for mo in rec(outer):
                    out.append(((first, partner),) + mi + mo)
        return out

    return [Matching.of(n, pairs) for pairs in rec(tuple(range(1, n + 1)))]


def enumerate_all_matchings(n: int) -> list[Matching]:
    """All (n-1)!! perfect matchings, crossings included (capped at n = 10)."""
    _require_even(n, 10)

    def rec(sites: tuple[int, ...]) -> list[tuple[tuple[int, int], ...]]:
        if not sites:
            return [()]
        first = sites[0]
        out = []
        for pos in range(1, len(sites)):
            partner = sites[pos]
            rest = sites[1:pos] + sites[pos + 1:]
            for m in rec(rest):
                out.append(((first, partner),) + m)
        return out

    return [Matching.of(n, pairs) for pairs in rec(tuple(range(1, n + 1)))]


def vb_amplitudes(n: int, oriented_pairs) -> np.ndarray:
    """Unnormalized sector amplitudes of a product of singlets.

    Each (a, b) contributes |u_a d_b> - |d_a u_b>; reversing a pair flips the
    sign of the whole product.  Amplitudes are +-1 on 2^(n/2) configurations.
    """
    basis = sector_basis(n)
    amp = np.zeros(basis.dim, dtype=np.complex128)
    pairs = list(oriented_pairs)
    for choice in range(1 << len(pairs)):
        config = 0
        sign = 1.0
        for b, (x, y) in enumerate(pairs):
            if (choice >> b) & 1:
                config |= 1 << (y - 1)  # |d_x u_y> branch
                sign = -sign
            else:
                config |= 1 << (x - 1)  # |u_x d_y> branch
        amp[basis.index[config]] += sign
    return amp


def vb_state(matching: Matching, normalize: bool = True) -> PureState:
    """The valence-bond product state of a matching, ascending bond orientation."""
    amp = vb_amplitudes(matching.n, matching.pairs)
    return PureState(sector_basis(matching.n), amp, normalize=normalize)


def crossing_identity_check(n: int = 4, tol: float = 1e-12) -> bool:
    """The crossing cover (1,3)(2,4) equals the sum of the two non-crossing ones
    on raw (unnormalized) amplitudes."""
    if n != 4:
        raise InvalidSize("the identity is stated for n = 4")
    lhs = vb_amplitudes(4, [(1, 3), (2, 4)])
    rhs = vb_amplitudes(4, [(1, 2), (3, 4)]) + vb_amplitudes(4, [(1, 4), (2, 3)])
    return bool(np.abs(lhs - rhs).max() <= tol)


@dataclass(frozen=True)
class RumerMap:
    """Amplitude matrix of the non-crossing covers: rows are sector
    configurations, columns the unnormalized Rumer product states."""

    n: int
    matchings: tuple[Matching, ...]
    m: np.ndarray

    @property
    def rank(self) -> int:
        sv = np.linalg.svd(self.m, compute_uv=False)
        return int(np.sum(sv > 1e-8 * sv[0]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "matchings": [mat.to_dict() for mat in self.matchings],
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.m],
        }


def rumer_map(n: int) -> RumerMap:
    """Build the configuration-by-matching amplitude matrix and assert its rank."""
    _require_even(n, 10)
    matchings = enumerate_rumer(n)
    cols = [vb_amplitudes(n, mat.pairs) for mat in matchings]
    m = np.stack(cols, axis=1)
    rmap = RumerMap(n, tuple(matchings), m)
    expected = independent_count(n)
    if rmap.rank != expected:
        raise RuntimeError(f"Rumer map rank {rmap.rank} != {expected} for n={n}")
    return rmap
