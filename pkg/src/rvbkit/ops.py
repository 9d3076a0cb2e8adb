"""Spin-1/2 correlation functions, reduced density matrices, and total-spin
operators, all acting on sector-compressed states.

Site operators use S^i = sigma^i / 2, so S^z eigenvalues are +-1/2 and
S^+|down> = |up> with unit coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .basis import PureState, SectorBasis
from .errors import InvalidDensityMatrix, InvalidPair
from .linalg import eigenvalues

RDM_HERM_TOL = 1e-12
RDM_EIG_FLOOR = -1e-10


def _check_pair(state: PureState, i: int, j: int) -> None:
    n = state.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidPair(f"sites ({i},{j}) outside 1..{n}")
    if i == j:
        raise InvalidPair(f"need two distinct sites, got i = j = {i}")


def _site_sign(basis: SectorBasis, i: int) -> np.ndarray:
    """+1 where site i is up, -1 where it is down, per basis configuration."""
    return np.where((basis.states >> (i - 1)) & 1 == 1, 1.0, -1.0)


def szsz(state: PureState, i: int, j: int) -> float:
    """<S^z_i S^z_j> for a (normalized) sector state."""
    _check_pair(state, i, j)
    state = state.unit()
    prob = np.abs(state.amp) ** 2
    return float(np.sum(prob * _site_sign(state.basis, i) * _site_sign(state.basis, j)) / 4.0)


def sz_site(state: PureState, i: int) -> float:
    """<S^z_i>; zero for every half-filled-sector state only on average, not per site."""
    state = state.unit()
    return float(np.sum(np.abs(state.amp) ** 2 * _site_sign(state.basis, i)) / 2.0)


def spsm(state: PureState, i: int, j: int) -> complex:
    """<S^+_i S^-_j>, evaluated by configuration hopping inside the sector."""
    _check_pair(state, i, j)
    state = state.unit()
    basis = state.basis
    bi = 1 << (i - 1)
    bj = 1 << (j - 1)
    acc = 0.0 + 0.0j
    for pos, k in enumerate(basis.states):
        k = int(k)
        # S^-_j needs site j up, S^+_i needs site i down
        if (k & bj) and not (k & bi):
            target = (k & ~bj) | bi
            acc += np.conj(state.amp[basis.index[target]]) * state.amp[pos]
    return complex(acc)


def sdots(state: PureState, i: int, j: int, imag_tol: float = 1e-10) -> float:
    """<S_i . S_j> = <S^z_i S^z_j> + Re <S^+_i S^-_j> (real for the states in scope)."""
    pm = spsm(state, i, j)
    if abs(pm.imag) > imag_tol:
        raise InvalidDensityMatrix(f"<S+S-> has imaginary part {pm.imag:.3e} for pair ({i},{j})")
    return szsz(state, i, j) + pm.real


@dataclass(frozen=True)
class TwoQubitRDM:
    """4x4 reduced density matrix of a site pair, rows/cols ordered
    |uu>, |ud>, |du>, |dd> of (site i, site j)."""

    m: np.ndarray
    sites: tuple[int, int]

    def validate(self) -> "TwoQubitRDM":
        m = self.m
        if np.abs(m - m.conj().T).max() > RDM_HERM_TOL:
            raise InvalidDensityMatrix("pair density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > RDM_HERM_TOL or abs(np.trace(m).imag) > RDM_HERM_TOL:
            raise InvalidDensityMatrix(f"trace {np.trace(m)} != 1")
        w = eigenvalues(m)
        if w[0] < RDM_EIG_FLOOR:
            raise InvalidDensityMatrix(f"negative eigenvalue {w[0]:.3e}")
        return self

    def purity(self) -> float:
        return float(np.trace(self.m @ self.m).real)


def _pair_local_index(k: int, i: int, j: int) -> int:
    """Index into the |uu>,|ud>,|du>,|dd> ordering for configuration k."""
    bi = (k >> (i - 1)) & 1
    bj = (k >> (j - 1)) & 1
    return (1 - bi) * 2 + (1 - bj)


def rdm2(state: PureState, i: int, j: int) -> TwoQubitRDM:
    """Exact partial trace over every site except i and j."""
    _check_pair(state, i, j)
    state = state.unit()
    basis = state.basis
    rest_mask = ((1 << state.n) - 1) ^ (1 << (i - 1)) ^ (1 << (j - 1))
    groups: dict[int, list[tuple[int, int]]] = {}
    for pos, k in enumerate(basis.states):
        k = int(k)
        groups.setdefault(k & rest_mask, []).append((_pair_local_index(k, i, j), pos))
    rho = np.zeros((4, 4), dtype=np.complex128)
    for members in groups.values():
        for la, pa in members:
            for lb, pb in members:
                rho[la, lb] += state.amp[pa] * np.conj(state.amp[pb])
    return TwoQubitRDM(rho, (i, j)).validate()


def rdm1(state: PureState, i: int, ordering: str = "ud") -> np.ndarray:
    """Single-site density matrix by direct partial trace.

    ordering "ud" puts |up> first (package standard); "du" gives the
    (|down>, |up>) layout [[1/2 - <S^z>, <S^+>], [<S^->, 1/2 + <S^z>]].
    Within a fixed-magnetization sector <S^+> = 0 identically.
    """
    if not 1 <= i <= state.n:
        raise InvalidPair(f"site {i} outside 1..{state.n}")
    state = state.unit()
    up = (state.basis.states >> (i - 1)) & 1 == 1
    p_up = float(np.sum(np.abs(state.amp[up]) ** 2))
    rho = np.array([[p_up, 0.0], [0.0, 1.0 - p_up]], dtype=np.complex128)
    if ordering == "ud":
        return rho
    if ordering == "du":
        return rho[::-1, ::-1].copy()
    raise ValueError(f"unknown ordering {ordering!r}")


def apply_sp_total(state: PureState) -> tuple[np.ndarray, SectorBasis]:
    """Raw vector of (sum_i S^+_i)|state> over the sector with one more up spin."""
    basis = state.basis
    target = SectorBasis(basis.n, basis.n_up + 1)
    out = np.zeros(target.dim, dtype=np.complex128)
    for pos, k in enumerate(basis.states):
        k = int(k)
        a = state.amp[pos]
        for i in range(basis.n):
            if not (k >> i) & 1:
                out[target.index[k | (1 << i)]] += a
    return out, target


def apply_sm_total(state: PureState) -> tuple[np.ndarray, SectorBasis]:
    """Raw vector of (sum_i S^-_i)|state> over the sector with one fewer up spin."""
    basis = state.basis
    target = SectorBasis(basis.n, basis.n_up - 1)
    out = np.zeros(target.dim, dtype=np.complex128)
    for pos, k in enumerate(basis.states):
        k = int(k)
        a = state.amp[pos]
        for i in range(basis.n):
            if (k >> i) & 1:
                out[target.index[k & ~(1 << i)]] += a
    return out, target


def _apply_s2(state: PureState) -> np.ndarray:
    """Vector S^2|state> in the state's own sector, via S^2 = S^- S^+ + S^z(S^z + 1)."""
    basis = state.basis
    m = basis.sz
    if basis.n_up == basis.n:
        # fully polarized: the raising part vanishes identically
        return m * (m + 1.0) * state.amp
    raised, target = apply_sp_total(state)
    lowered = np.zeros(basis.dim, dtype=np.complex128)
    for pos, k in enumerate(target.states):
        k = int(k)
        a = raised[pos]
        if a == 0:
            continue
        for i in range(basis.n):
            if (k >> i) & 1:
                lowered[basis.index[k & ~(1 << i)]] += a
    return lowered + m * (m + 1.0) * state.amp


class TotalSpinResult(NamedTuple):
    value: float
    variance: float


def s2_total(state: PureState) -> TotalSpinResult:
    """<S^2_total> and its variance (zero variance certifies an S_T eigenstate)."""
    state = state.unit()
    phi = _apply_s2(state)
    value = float(np.vdot(state.amp, phi).real)
    variance = float(np.vdot(phi, phi).real - value * value)
    return TotalSpinResult(value, max(variance, 0.0))


def isotropy_residual(state: PureState) -> float:
    """max(||S^+_tot psi||, ||S^-_tot psi||) for the normalized state."""
    state = state.unit()
    up, _ = apply_sp_total(state)
    dn, _ = apply_sm_total(state)
    return float(max(np.linalg.norm(up), np.linalg.norm(dn)))


def is_isotropic(state: PureState, tol: float = 1e-10) -> bool:
    """True when every total-spin raising/lowering operator annihilates the state."""
    return isotropy_residual(state) <= tol


def homogeneity_spread(state: PureState) -> tuple[float, int]:
    """(relative magnitude spread, support size) of the normalized amplitudes."""
    amp = state.unit().amp
    mags = np.abs(amp)
    support = int(np.count_nonzero(mags > 1e-13))
    mean = float(mags.mean())
    spread = float((mags.max() - mags.min()) / mean) if mean > 0 else np.inf
    return spread, support


def is_homogeneous(state: PureState, rtol: float = 1e-9) -> bool:
    """Equal-magnitude amplitudes on the full sector (no zero amplitudes allowed)."""
    spread, support = homogeneity_spread(state)
    return support == state.basis.dim and spread <= rtol


def flip_parity_residual(state: PureState) -> float:
    """max_k |amp(flip k) - (-1)^{n/2} amp(k)| for the normalized state."""
    state = state.unit()
    perm = state.basis.flip_permutation()
    parity = -1.0 if (state.n // 2) % 2 else 1.0
    return float(np.abs(state.amp[perm] - parity * state.amp).max())


def to_full_vector(state: PureState) -> np.ndarray:
    """Expand into the full 2^n Hilbert space.

    Axis convention: tensor index = sum over sites of (1 - bit_i) * 2^(n-i),
    i.e. site 1 is the most significant factor and |up> is local index 0,
    matching the |uu>,|ud>,... ordering of rdm2.
    """
    n = state.n
    full = np.zeros(1 << n, dtype=np.complex128)
    for pos, k in enumerate(state.basis.states):
        k = int(k)
        idx = 0
        for site in range(1, n + 1):
            idx = idx * 2 + (1 - ((k >> (site - 1)) & 1))
        full[idx] = state.amp[pos]
    return full


def reduced_density_matrix(state: PureState, sites: tuple[int, ...]) -> np.ndarray:
    """Full-Hilbert partial trace keeping the given sites (cross-check route)."""
    n = state.n
    keep = sorted(sites)
    if len(set(keep)) != len(keep) or not all(1 <= s <= n for s in keep):
        raise InvalidPair(f"bad site subset {sites} for n={n}")
    psi = to_full_vector(state.unit()).reshape([2] * n)
    axes_keep = [s - 1 for s in keep]
    axes_rest = [a for a in range(n) if a not in axes_keep]
    psi = np.transpose(psi, axes_keep + axes_rest)
    a = psi.reshape(2 ** len(keep), 2 ** len(axes_rest))
    return a @ a.conj().T
