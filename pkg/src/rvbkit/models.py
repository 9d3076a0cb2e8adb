"""Spin Hamiltonians in the S^z = 0 sector: the isotropic infinite-range
Heisenberg model (every pair coupled with J = J*/(N-1), so the spectrum is a
pure function of total spin) and the nearest-neighbour ring/chain baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .basis import PureState, SectorBasis, sector_basis
from .entanglement import entropy, pair_iter
from .errors import InvalidSize
from .linalg import hermitian_eig
from .ops import rdm2, szsz

MODELS = ("iirhm", "heisenberg_ring", "heisenberg_chain")


@dataclass(frozen=True)
class HamiltonianSpec:
    n: int
    model: str = "iirhm"
    j_star: float = 1.0

    def __post_init__(self):
        if self.n % 2 or not 4 <= self.n <= 12:
            raise InvalidSize(f"need even n in 4..12, got {self.n}")
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; know {MODELS}")
        if not np.isfinite(self.j_star) or self.j_star == 0.0:
            raise ValueError(f"coupling j_star must be finite and nonzero, got {self.j_star}")

    @property
    def j(self) -> float:
        """Effective pair coupling: J*/(n-1) for the infinite-range model so the
        energy per site stays bounded, J* itself for the short-range ones."""
        return self.j_star / (self.n - 1) if self.model == "iirhm" else self.j_star

    def bonds(self) -> list[tuple[int, int]]:
        n = self.n
        if self.model == "iirhm":
            return [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
        if self.model == "heisenberg_ring":
            return [(i, i + 1) for i in range(1, n)] + [(1, n)]
        return [(i, i + 1) for i in range(1, n)]


def pair_coupling_matrix(basis: SectorBasis, i: int, j: int) -> np.ndarray:
    """Matrix of S_i . S_j in the sector basis."""
    dim = basis.dim
    h = np.zeros((dim, dim), dtype=np.complex128)
    bi = 1 << (i - 1)
    bj = 1 << (j - 1)
    for pos, k in enumerate(basis.states):
        k = int(k)
        up_i = bool(k & bi)
        up_j = bool(k & bj)
        h[pos, pos] += 0.25 if up_i == up_j else -0.25
        if up_i != up_j:
            flipped = k ^ bi ^ bj
            h[basis.index[flipped], pos] += 0.5
    return h


def _s2_matrix(basis: SectorBasis) -> np.ndarray:
    """S^2_total in the sector, built through the raised sector:
    S^2 = S^- S^+ + S^z (S^z + 1)."""
    n = basis.n
    target = SectorBasis(n, basis.n_up + 1)
    a = np.zeros((target.dim, basis.dim), dtype=np.complex128)
    for pos, k in enumerate(basis.states):
        k = int(k)
        for i in range(n):
            if not (k >> i) & 1:
                a[target.index[k | (1 << i)], pos] += 1.0
    m = basis.sz
    return a.conj().T @ a + m * (m + 1.0) * np.eye(basis.dim)


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Dense sector Hamiltonian; the infinite-range build is cross-checked
    against (J/2)(S^2_total - 3n/4)."""
    basis = sector_basis(spec.n)
    h = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for i, j in spec.bonds():
        h += pair_coupling_matrix(basis, i, j)
    h *= spec.j
    if spec.model == "iirhm":
        alt = 0.5 * spec.j * (_s2_matrix(basis) - 0.75 * spec.n * np.eye(basis.dim))
        dev = float(np.abs(h - alt).max())
        if dev > 1e-12 * max(1.0, abs(spec.j)):
            raise RuntimeError(f"infinite-range build deviates from the S^2 form by {dev:.3e}")
    return h


def iirhm_energy(spec: HamiltonianSpec, s_t: int) -> float:
    """Analytic eigenenergy (J/2)[S(S+1) - 3n/4] of the infinite-range model."""
    return 0.5 * spec.j * (s_t * (s_t + 1) - 0.75 * spec.n)


def sector_multiplicity(n: int, s_t: int) -> int:
    """Number of S_T = s_t eigenstates inside the S^z = 0 sector."""
    half = n // 2
    lower = comb(n, half - s_t - 1) if s_t + 1 <= half else 0
    return comb(n, half - s_t) - lower


@dataclass(frozen=True)
class SpectrumLevel:
    energy: float
    multiplicity: int
    s_t: int


@dataclass(frozen=True)
class SpectrumReport:
    model: str
    n: int
    j_star: float
    levels: tuple[SpectrumLevel, ...]
    ground_energy: float
    ground_degeneracy: int

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "j_star": self.j_star,
            "levels": [
                {"energy": lv.energy, "multiplicity": lv.multiplicity, "s_t": lv.s_t}
                for lv in self.levels
            ],
            "ground_energy": self.ground_energy,
            "ground_degeneracy": self.ground_degeneracy,
        }


def spectrum(spec: HamiltonianSpec) -> SpectrumReport:
    """Full sector diagonalization with total-spin labels per level.

    For the infinite-range model every eigenvalue is matched against the
    analytic spectrum within 1e-10 and multiplicities against the sector
    counting; for the short-range models S_T is read off eigenspace-projected
    S^2 blocks.
    """
    basis = sector_basis(spec.n)
    h = build_hamiltonian(spec)
    spect = hermitian_eig(h)
    w = spect.eigenvalues
    v = spect.eigenvectors
    scale = max(1.0, float(np.abs(w).max()))

    levels: list[SpectrumLevel] = []
    if spec.model == "iirhm":
        analytic = {s: iirhm_energy(spec, s) for s in range(0, spec.n // 2 + 1)}
        for s_t in sorted(analytic, key=lambda s: analytic[s] * np.sign(spec.j)):
            e = analytic[s_t]
            hits = int(np.sum(np.abs(w - e) <= 1e-10 * scale))
            want = sector_multiplicity(spec.n, s_t)
            if hits != want:
                raise RuntimeError(
                    f"analytic level E(S={s_t}) = {e}: found {hits} eigenvalues, expected {want}"
                )
            levels.append(SpectrumLevel(e, hits, s_t))
        matched = sum(lv.multiplicity for lv in levels)
        if matched != basis.dim:
            raise RuntimeError("analytic spectrum does not exhaust the sector")
        levels.sort(key=lambda lv: lv.energy)
    else:
        s2 = _s2_matrix(basis)
        pos = 0
        while pos < basis.dim:
            end = pos + 1
            while end < basis.dim and w[end] - w[pos] <= 1e-8 * scale:
                end += 1
            block = v[:, pos:end]
            s2_block = block.conj().T @ s2 @ block
            s2_eigs = hermitian_eig(s2_block, vectors=False).eigenvalues
            counts: dict[int, int] = {}
            for val in s2_eigs:
                s_t = int(round((-1.0 + np.sqrt(1.0 + 4.0 * val)) / 2.0))
                counts[s_t] = counts.get(s_t, 0) + 1
            for s_t in sorted(counts):
                levels.append(SpectrumLevel(float(w[pos]), counts[s_t], s_t))
            pos = end

    e0 = float(w[0])
    degeneracy = int(np.sum(w - w[0] <= 1e-8 * scale))
    return SpectrumReport(
        model=spec.model,
        n=spec.n,
        j_star=spec.j_star,
        levels=tuple(levels),
        ground_energy=e0,
        ground_degeneracy=degeneracy,
    )


def is_ground_state(spec: HamiltonianSpec, state: PureState) -> tuple[bool, float]:
    """Residual test ||H psi - E0 psi|| <= 1e-10 ||H|| for the infinite-range
    model, whose ground energy -3nJ/8 is analytic."""
    if spec.model != "iirhm":
        raise ValueError("ground-space membership is defined against the infinite-range model")
    if state.n != spec.n:
        raise InvalidSize(f"state has n={state.n}, spec has n={spec.n}")
    h = build_hamiltonian(spec)
    e0 = iirhm_energy(spec, 0)
    psi = state.unit().amp
    residual = float(np.linalg.norm(h @ psi - e0 * psi))
    norm_h = max(abs(iirhm_energy(spec, s)) for s in range(0, spec.n // 2 + 1))
    return residual <= 1e-10 * norm_h, residual


def four_site_identity_check(tol: float = 1e-12) -> bool:
    """The cross-bond coupling sum S1.S3 + S2.S4 + S1.S4 + S2.S3 annihilates
    the singlet product (1,2)(3,4)."""
    from .vb import Matching, vb_state

    basis = sector_basis(4)
    op = sum(pair_coupling_matrix(basis, i, j) for i, j in ((1, 3), (2, 4), (1, 4), (2, 3)))
    psi = vb_state(Matching.of(4, [(1, 2), (3, 4)])).amp
    return bool(np.linalg.norm(op @ psi) <= tol)


@dataclass(frozen=True)
class RingBaseline:
    ground_state: PureState
    ground_energy: float
    szsz_nn: float
    szsz_nnn: float
    pair_entropies: dict
    e2v_all_pairs: float


def ring_baseline(n: int = 4, geometry: str = "ring") -> RingBaseline:
    """Ground-state correlations of the 4-site nearest-neighbour Heisenberg
    model (periodic by default, open chain via geometry="chain")."""
    if n != 4:
        raise InvalidSize("the baseline comparison is defined for n = 4")
    model = "heisenberg_ring" if geometry == "ring" else "heisenberg_chain"
    spec = HamiltonianSpec(n=n, model=model, j_star=1.0)
    h = build_hamiltonian(spec)
    spect = hermitian_eig(h)
    ground = PureState(sector_basis(n), spect.eigenvectors[:, 0], normalize=True)
    entropies = {
        (i, j): entropy(rdm2(ground, i, j).m) for i, j in pair_iter(n)
    }
    return RingBaseline(
        ground_state=ground,
        ground_energy=float(spect.eigenvalues[0]),
        szsz_nn=szsz(ground, 1, 2),
        szsz_nnn=szsz(ground, 1, 3),
        pair_entropies=entropies,
        e2v_all_pairs=float(np.mean(list(entropies.values()))),
    )
