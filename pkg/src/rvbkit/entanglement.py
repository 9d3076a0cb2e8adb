"""Entanglement measures for pair subsystems: von Neumann entropy (generic and
the isotropic closed form), the pair-averaged entropy and its size-dependent
maximum, i-concurrence, Wootters concurrence, and the Werner-state analysis of
pair separability.

Entropies are in bits (log base 2) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, sqrt

import numpy as np

from .basis import PureState
from .errors import DomainError, InvalidDensityMatrix, InvalidSize, NotRotationallyInvariant
from .linalg import eigenvalues, hermitian_eig
from .ops import (
    TwoQubitRDM,
    is_homogeneous,
    is_isotropic,
    rdm2,
    sdots,
    spsm,
    szsz,
)

EIG_FLOOR = -1e-10

# <S^z_i S^z_j> of an isotropic pair state lies in [-1/4, 1/12]: the Eq.-3
# eigenvalues are 1/4 + c (triplet) and 1/4 - 3c (singlet), both nonnegative.
C_MIN = -0.25
C_MAX = 1.0 / 12.0


def _xlog2x(x: np.ndarray | float) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def _clamped_eigs(rho) -> np.ndarray:
    m = rho.m if isinstance(rho, TwoQubitRDM) else np.asarray(rho, dtype=np.complex128)
    w = eigenvalues(m)
    if w[0] < EIG_FLOOR:
        raise InvalidDensityMatrix(f"eigenvalue {w[0]:.3e} below the {EIG_FLOOR:.0e} floor")
    return np.clip(w, 0.0, None)


def entropy(rho) -> float:
    """Von Neumann entropy -sum(lambda log2 lambda) in bits, 0 log 0 := 0."""
    w = _clamped_eigs(rho)
    return float(-np.sum(_xlog2x(w)))


def entropy_closed_form(c: float) -> float:
    """Pair entropy of an isotropic S^z-eigenstate as a function of c = <S^z_i S^z_j>:

        2 - (1/4) [3 (1+4c) log2(1+4c) + (1-12c) log2(1-12c)]
    """
    if not C_MIN - 1e-12 <= c <= C_MAX + 1e-12:
        raise DomainError(f"c = {c} outside [-1/4, 1/12]")
    a = max(1.0 + 4.0 * c, 0.0)
    b = max(1.0 - 12.0 * c, 0.0)
    return 2.0 - 0.25 * (3.0 * float(_xlog2x(a)) + float(_xlog2x(b)))


def pair_iter(n: int):
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield i, j


def e2v(state: PureState) -> float:
    """Pair-averaged entropy between each two-site subsystem and the rest."""
    vals = [entropy(rdm2(state, i, j)) for i, j in pair_iter(state.n)]
    return float(np.mean(vals))


def e2v_max(n: int) -> float:
    """Maximum pair-averaged entropy over isotropic states of n sites,
    attained at the homogeneous point c = -1/(4(n-1)); tends to 2."""
    if n % 2 or n < 4:
        raise InvalidSize(f"need even n >= 4, got {n}")
    a = 0.25 - 0.25 / (n - 1)
    b = 0.25 + 0.75 / (n - 1)
    return float(-3.0 * a * log2(a) - b * log2(b))


def iconcurrence_term(purity: float) -> float:
    return sqrt(max(2.0 * (1.0 - purity), 0.0))


def iconcurrence(state: PureState) -> float:
    """Pair-averaged sqrt(2 (1 - Tr rho_ij^2))."""
    vals = [iconcurrence_term(rdm2(state, i, j).purity()) for i, j in pair_iter(state.n)]
    return float(np.mean(vals))


def iconcurrence_max(n: int) -> float:
    """Pair i-concurrence of the homogeneous point; tends to sqrt(3/2)."""
    if n % 2 or n < 4:
        raise InvalidSize(f"need even n >= 4, got {n}")
    c = -0.25 / (n - 1)
    return iconcurrence_term(0.25 + 12.0 * c * c)


_SY_SY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def wootters_concurrence(rho) -> float:
    """max(0, l1 - l2 - l3 - l4) with l_k the descending square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy), computed Hermitian-only via
    sqrt(rho) conjugation."""
    m = rho.m if isinstance(rho, TwoQubitRDM) else np.asarray(rho, dtype=np.complex128)
    spec = hermitian_eig(m)
    if spec.eigenvalues[0] < EIG_FLOOR:
        raise InvalidDensityMatrix(f"eigenvalue {spec.eigenvalues[0]:.3e} below the {EIG_FLOOR:.0e} floor")
    sqrt_rho = (spec.eigenvectors * np.sqrt(np.clip(spec.eigenvalues, 0.0, None))) @ spec.eigenvectors.conj().T
    rho_tilde = _SY_SY @ m.conj() @ _SY_SY
    core = sqrt_rho @ rho_tilde @ sqrt_rho
    mu = np.clip(eigenvalues(core), 0.0, None)
    lam = np.sqrt(mu)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class WernerAnalysis:
    p: float
    separable: bool


def werner_p_from_rdm(rho: TwoQubitRDM, tol: float = 1e-9) -> WernerAnalysis:
    """Werner parameter of a rotationally invariant pair density matrix.

    Raises NotRotationallyInvariant unless the matrix has the isotropic
    structure: diagonal (1/4+c, 1/4-c, 1/4-c, 1/4+c), real off-diagonal
    2c between |ud> and |du>, zeros elsewhere.
    """
    m = rho.m
    zeros = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]
    dev = max(abs(m[a, b]) for a, b in zeros)
    dev = max(dev, abs(m[0, 0] - m[3, 3]), abs(m[1, 1] - m[2, 2]))
    c = float((m[0, 0].real - 0.25))
    dev = max(dev, abs(m[1, 1] - (0.25 - c)), abs(m[1, 2] - 2.0 * c), abs(m[1, 2].imag))
    if dev > tol:
        raise NotRotationallyInvariant(f"pair matrix deviates from Werner structure by {dev:.3e}")
    p = -4.0 * c
    return WernerAnalysis(p=p, separable=p <= 1.0 / 3.0 + 1e-12)


def werner_p(state: PureState, i: int, j: int, tol: float = 1e-9) -> WernerAnalysis:
    """Werner parameter p = -(4/3) <S_i . S_j> of a pair inside an isotropic state."""
    return werner_p_from_rdm(rdm2(state, i, j), tol=tol)


@dataclass(frozen=True)
class BoundComparison:
    p_exact: float
    p_monogamy: float
    p_telecloning: float


def bound_comparison(n: int) -> BoundComparison:
    """Exact Werner p of the maximal states against the monogamy and
    telecloning upper bounds (the exact value is strictly smaller)."""
    if n < 4:
        raise InvalidSize(f"need n >= 4, got {n}")
    p_exact = 1.0 / (n - 1)
    p_mono = 1.0 / 3.0 + 2.0 / (3.0 * sqrt(n - 1))
    p_tele = 1.0 / 3.0 + 2.0 / (3.0 * (n - 1))
    if not p_exact <= p_tele <= p_mono:
        raise RuntimeError("bound ordering violated")
    return BoundComparison(p_exact, p_mono, p_tele)


@dataclass(frozen=True)
class PairMeasure:
    sites: tuple[int, int]
    szsz: float
    spsm: complex
    sdots: float
    entropy: float
    purity: float
    iconc_term: float
    wootters: float
    werner_p: float | None

    def to_dict(self) -> dict:
        return {
            "sites": list(self.sites),
            "szsz": self.szsz,
            "spsm": {"re": self.spsm.real, "im": self.spsm.imag},
            "sdots": self.sdots,
            "entropy": self.entropy,
            "purity": self.purity,
            "iconc_term": self.iconc_term,
            "wootters": self.wootters,
            "werner_p": self.werner_p,
        }


@dataclass(frozen=True)
class EntanglementReport:
    n: int
    pairs: tuple[PairMeasure, ...]
    e2v: float
    e2v_max: float
    ic: float
    homogeneous: bool
    isotropic: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pairs": [p.to_dict() for p in self.pairs],
            "e2v": self.e2v,
            "e2v_max": self.e2v_max,
            "ic": self.ic,
            "homogeneous": self.homogeneous,
            "isotropic": self.isotropic,
        }


def measure_pair(state: PureState, i: int, j: int) -> PairMeasure:
    rho = rdm2(state, i, j)
    pm = spsm(state, i, j)
    try:
        wp = werner_p_from_rdm(rho).p
    except NotRotationallyInvariant:
        wp = None
    return PairMeasure(
        sites=(i, j),
        szsz=szsz(state, i, j),
        spsm=pm,
        sdots=sdots(state, i, j),
        entropy=entropy(rho),
        purity=rho.purity(),
        iconc_term=iconcurrence_term(rho.purity()),
        wootters=wootters_concurrence(rho),
        werner_p=wp,
    )


def measure_state(state: PureState, pairs=None) -> EntanglementReport:
    """Full per-pair report plus aggregates; ``pairs`` restricts to a subset."""
    state = state.unit()
    wanted = list(pairs) if pairs is not None else list(pair_iter(state.n))
    measures = tuple(measure_pair(state, i, j) for i, j in wanted)
    return EntanglementReport(
        n=state.n,
        pairs=measures,
        e2v=float(np.mean([p.entropy for p in measures])),
        e2v_max=e2v_max(state.n),
        ic=float(np.mean([p.iconc_term for p in measures])),
        homogeneous=is_homogeneous(state),
        isotropic=is_isotropic(state),
    )


def _sample_correlation_sets(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Random assignments {c_j} over the n-1 partners of one site, each in
    [-1/4, 1/12] and summing to -1/4 (Dirichlet on the shifted simplex with
    rejection of the box constraint), plus local zero-sum perturbations of the
    uniform point."""
    k = n - 1
    total = (n - 2) / 4.0  # sum of t_j = c_j + 1/4
    cap = 1.0 / 3.0
    out = []
    batch = max(trials, 64)
    while len(out) < trials // 2:
        t = rng.dirichlet(np.ones(k), size=batch) * total
        ok = (t <= cap + 1e-15).all(axis=1)
        out.extend(t[ok] - 0.25)
    out = out[: trials // 2]

    uniform = np.full(k, -0.25 / (n - 1))
    need = trials - len(out)
    scales = rng.uniform(1e-6, 1.0, size=need)
    for s in scales:
        d = rng.normal(size=k)
        d -= d.mean()  # keep the sum constraint
        dmax = np.abs(d).max()
        if dmax == 0.0:
            out.append(uniform.copy())
            continue
        # largest step keeping every coordinate inside the box
        lo = ((C_MIN - uniform) / d)[d < 0].min() if (d < 0).any() else np.inf
        hi = ((C_MAX - uniform) / d)[d > 0].min() if (d > 0).any() else np.inf
        step = s * min(lo, hi)
        out.append(uniform + step * d)
    return np.array(out)


def verify_homogeneity_optimal(
    n: int,
    trials: int = 10_000,
    rng_seed: int = 0,
    objective: str = "entropy",
    slack: float = 1e-9,
) -> bool:
    """Numeric witness that the uniform correlation assignment maximizes the
    summed pair objective under sum_j c_j = -1/4.

    objective "entropy" uses the closed-form pair entropy, "iconcurrence"
    uses sqrt(2 (1 - Tr rho^2)) = sqrt(3/2 - 24 c^2).
    """
    if n % 2 or n < 4:
        raise InvalidSize(f"need even n >= 4, got {n}")
    rng = np.random.default_rng(rng_seed)
    cs = _sample_correlation_sets(n, trials, rng)
    cs = np.clip(cs, C_MIN, C_MAX)

    if objective == "entropy":
        a = 1.0 + 4.0 * cs
        b = 1.0 - 12.0 * cs
        vals = (2.0 - 0.25 * (3.0 * _xlog2x(a) + _xlog2x(b))).sum(axis=1)
        best = (n - 1) * entropy_closed_form(-0.25 / (n - 1))
    elif objective == "iconcurrence":
        vals = np.sqrt(np.clip(1.5 - 24.0 * cs ** 2, 0.0, None)).sum(axis=1)
        best = (n - 1) * iconcurrence_max(n)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    return bool(vals.max() <= best + slack)
