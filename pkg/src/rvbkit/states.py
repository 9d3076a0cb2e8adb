"""Named maximally entangled states: the four-qubit Higuchi-Sudbery state and
the three six-qubit families, built as superpositions of singlet covers with
the bond orientations that make their printed amplitude patterns come out.
"""

from __future__ import annotations

import numpy as np

from .basis import PureState, sector_basis
from .vb import vb_amplitudes

W3 = np.exp(2j * np.pi / 3)
W4 = 1j

FAMILIES = ("hs", "hs-conj", "six-a", "six-a-conj", "six-b", "six-c", "six-c-conj")


def _superpose(n: int, terms) -> PureState:
    amp = np.zeros(sector_basis(n).dim, dtype=np.complex128)
    for coeff, pairs in terms:
        amp = amp + coeff * vb_amplitudes(n, pairs)
    return PureState(sector_basis(n), amp, normalize=True)


def hs_state() -> PureState:
    """Four-qubit Higuchi-Sudbery state: equal-magnitude amplitudes
    1, w3, w3^2 on the three flip-symmetric configuration pairs."""
    return _superpose(
        4,
        [
            (-W3, [(1, 2), (3, 4)]),
            (W3 ** 2, [(1, 4), (2, 3)]),
        ],
    )


def six_a() -> PureState:
    """First six-qubit family: i, i^2, i^3 over three non-crossing covers."""
    return _superpose(
        6,
        [
            (W4, [(1, 2), (3, 6), (4, 5)]),
            (W4 ** 2, [(2, 3), (1, 4), (5, 6)]),
            (W4 ** 3, [(1, 6), (2, 5), (3, 4)]),
        ],
    )


def six_b() -> PureState:
    """Real-coefficient six-qubit family (-1, +1, -1); its own conjugate."""
    return _superpose(
        6,
        [
            (-1.0, [(1, 2), (3, 6), (4, 5)]),
            (1.0, [(2, 3), (1, 4), (5, 6)]),
            (-1.0, [(1, 6), (2, 5), (3, 4)]),
        ],
    )


def six_c() -> PureState:
    """Third six-qubit family; the middle cover (1,4)(2,5)(3,6) is crossing,
    and two bonds are traversed in descending order (hence the sign flips)."""
    return _superpose(
        6,
        [
            (-W4, [(1, 2), (3, 4), (5, 6)]),
            (W4 ** 2, [(1, 4), (2, 5), (3, 6)]),
            (-W4 ** 3, [(1, 6), (2, 3), (4, 5)]),
        ],
    )


def named_state(family: str) -> PureState:
    """Look up a named maximal state; every state is gauge-fixed so the first
    nonzero amplitude is real positive (byte-stable serialization)."""
    builders = {
        "hs": hs_state,
        "hs-conj": lambda: hs_state().conj(),
        "six-a": six_a,
        "six-a-conj": lambda: six_a().conj(),
        "six-b": six_b,
        "six-c": six_c,
        "six-c-conj": lambda: six_c().conj(),
    }
    if family not in builders:
        raise KeyError(f"unknown state family {family!r}; know {sorted(builders)}")
    return builders[family]().gauge_fixed()
