"""Fixed-magnetization bases and sector-compressed state vectors.

Conventions used everywhere in the package:

* sites are numbered 1..n;
* a basis configuration is an integer whose bit (i-1) is 1 when the spin
  at site i points up;
* configurations are listed in ascending integer order;
* the string form writes site 1 leftmost, 'u' for up and 'd' for down.
"""

from __future__ import annotations

import json
import numpy as np

from .errors import InvalidSize

NORM_TOL = 1e-12


def config_to_bits(config: int, n: int) -> str:
    """Render a configuration integer as a 'udud...' string, site 1 leftmost."""
    return "".join("u" if (config >> i) & 1 else "d" for i in range(n))


def bits_to_config(bits: str) -> int:
    """Inverse of :func:`config_to_bits`."""
    config = 0
    for i, ch in enumerate(bits):
        if ch == "u":
            config |= 1 << i
        elif ch != "d":
            raise ValueError(f"bad spin character {ch!r} in {bits!r}")
    return config


def flip_all(config: int, n: int) -> int:
    """Global spin flip: every up becomes down and vice versa."""
    return config ^ ((1 << n) - 1)


class SectorBasis:
    """Ordered basis of all n-site configurations with a fixed number of up spins.

    The default sector is the half-filled one (n/2 ups, i.e. total S^z = 0).
    Raising/lowering operators produce vectors over neighbouring sectors,
    which are represented by the same class with a different ``n_up``.
    """

    __slots__ = ("n", "n_up", "states", "index")

    def __init__(self, n: int, n_up: int | None = None):
        if n < 1 or n > 12:
            raise InvalidSize(f"site count {n} outside supported range 1..12")
        if n_up is None:
            if n % 2:
                raise InvalidSize(f"default S^z=0 sector needs even n, got {n}")
            n_up = n // 2
        if not 0 <= n_up <= n:
            raise InvalidSize(f"n_up={n_up} invalid for n={n}")
        self.n = n
        self.n_up = n_up
        self.states = np.array(
            [k for k in range(1 << n) if k.bit_count() == n_up], dtype=np.int64
        )
        self.index = {int(k): pos for pos, k in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def sz(self) -> float:
        """Total S^z eigenvalue of every configuration in this sector."""
        return self.n_up - self.n / 2

    def position(self, config: int) -> int:
        return self.index[int(config)]

    def flip_permutation(self) -> np.ndarray:
        """Positions of the globally spin-flipped partner of each configuration.

        Only meaningful for the half-filled sector, where the flip maps the
        sector onto itself.
        """
        if 2 * self.n_up != self.n:
            raise InvalidSize("global flip leaves the sector only at half filling")
        mask = (1 << self.n) - 1
        return np.array([self.index[int(k) ^ mask] for k in self.states], dtype=np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SectorBasis)
            and self.n == other.n
            and self.n_up == other.n_up
        )

    def __hash__(self):
        return hash((self.n, self.n_up))

    def __repr__(self):
        return f"SectorBasis(n={self.n}, n_up={self.n_up}, dim={self.dim})"


def sector_basis(n: int) -> SectorBasis:
    """The S^z_T = 0 sector basis for an even number of sites, 2 <= n <= 12."""
    if n % 2 or not 2 <= n <= 12:
        raise InvalidSize(f"need even n in 2..12, got {n}")
    return SectorBasis(n)


class PureState:
    """Complex amplitude vector over a :class:`SectorBasis`.

    Amplitudes are normalized on construction by default; pass
    ``normalize=False`` to keep literal (paper-style) coefficients, in which
    case the ``normalized`` flag records whether they happen to have unit norm.
    """

    __slots__ = ("basis", "amp", "normalized")

    def __init__(self, basis: SectorBasis, amp, normalize: bool = True):
        amp = np.asarray(amp, dtype=np.complex128).copy()
        if amp.shape != (basis.dim,):
            raise ValueError(f"amplitude vector of length {amp.shape} does not match basis dim {basis.dim}")
        nrm = float(np.linalg.norm(amp))
        if nrm == 0.0:
            raise ValueError("state needs at least one nonzero amplitude")
        if normalize:
            amp /= nrm
            nrm = 1.0
        self.basis = basis
        self.amp = amp
        self.normalized = abs(nrm - 1.0) <= NORM_TOL

    @property
    def n(self) -> int:
        return self.basis.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def unit(self) -> "PureState":
        """Normalized copy (identity if already normalized)."""
        if self.normalized:
            return self
        return PureState(self.basis, self.amp, normalize=True)

    def conj(self) -> "PureState":
        return PureState(self.basis, self.amp.conj(), normalize=False)

    def gauge_fixed(self) -> "PureState":
        """Normalize and make the first nonzero amplitude real positive."""
        amp = self.amp / np.linalg.norm(self.amp)
        k = int(np.flatnonzero(np.abs(amp) > 1e-13)[0])
        phase = amp[k] / abs(amp[k])
        return PureState(self.basis, amp / phase, normalize=False)

    def overlap(self, other: "PureState") -> complex:
        if self.basis != other.basis:
            raise ValueError("states live on different bases")
        return complex(np.vdot(self.amp, other.amp))

    def __repr__(self):
        nz = int(np.count_nonzero(np.abs(self.amp) > 1e-14))
        return f"PureState(n={self.n}, support={nz}/{self.basis.dim})"


def state_from_amplitudes(n: int, entries: dict[int | str, complex], normalize: bool = True) -> PureState:
    """Build a state from a sparse {configuration: amplitude} mapping.

    Keys may be configuration integers or 'udud...' strings.
    """
    basis = sector_basis(n)
    amp = np.zeros(basis.dim, dtype=np.complex128)
    for key, value in entries.items():
        config = bits_to_config(key) if isinstance(key, str) else int(key)
        if config not in basis.index:
            raise ValueError(f"configuration {config:#x} not in the S^z=0 sector of n={n}")
        amp[basis.index[config]] = value
    return PureState(basis, amp, normalize=normalize)


def state_to_dict(state: PureState, drop_zeros: bool = True) -> dict:
    """JSON-ready representation of a sector state."""
    entries = []
    for pos, config in enumerate(state.basis.states):
        a = state.amp[pos]
        if drop_zeros and abs(a) < 1e-15:
            continue
        entries.append(
            {
                "bits": config_to_bits(int(config), state.n),
                "re": float(a.real),
                "im": float(a.imag),
            }
        )
    return {
        "n": state.n,
        "sector": "sz0",
        "normalized": bool(state.normalized),
        "amplitudes": entries,
    }


def state_from_dict(data: dict) -> PureState:
    """Parse the state JSON schema; omitted configurations have amplitude 0."""
    try:
        n = int(data["n"])
        sector = data.get("sector", "sz0")
        entries = data["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state object: {exc}") from exc
    if sector != "sz0":
        raise ValueError(f"unsupported sector {sector!r}")
    basis = sector_basis(n)
    amp = np.zeros(basis.dim, dtype=np.complex128)
    for entry in entries:
        bits = entry["bits"]
        if len(bits) != n:
            raise ValueError(f"bits string {bits!r} does not have length {n}")
        config = bits_to_config(bits)
        if config not in basis.index:
            raise ValueError(f"configuration {bits!r} is not in the S^z=0 sector")
        amp[basis.index[config]] = complex(float(entry["re"]), float(entry.get("im", 0.0)))
    return PureState(basis, amp, normalize=bool(data.get("normalized", True)))


def state_to_json(state: PureState, **kwargs) -> str:
    return json.dumps(state_to_dict(state), sort_keys=True, **kwargs)


def state_from_json(text: str) -> PureState:
    return state_from_dict(json.loads(text))
