"""Pydantic request/response models for the HTTP service.

The wire formats mirror the package's JSON conventions: states carry sparse
'udud...' amplitude entries with site 1 leftmost, matchings carry 1-based
site pairs.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..states import FAMILIES


class AmplitudeEntry(BaseModel):
    bits: str
    re: float
    im: float = 0.0


class StatePayload(BaseModel):
    n: int
    sector: Literal["sz0"] = "sz0"
    normalized: bool = True
    amplitudes: list[AmplitudeEntry]


class MatchingPayload(BaseModel):
    n: int
    pairs: list[tuple[int, int]]


class RumerRequest(BaseModel):
    n: int
    all_matchings: bool = False


class RumerResponse(BaseModel):
    n: int
    count: int
    matchings: list[MatchingPayload]


class StateRequest(BaseModel):
    n: int | None = None
    family: str | None = Field(default=None, description=f"one of {FAMILIES}")
    matching: MatchingPayload | None = None


class PairMeasurePayload(BaseModel):
    sites: tuple[int, int]
    szsz: float
    spsm_re: float
    spsm_im: float
    sdots: float
    entropy: float
    purity: float
    iconc_term: float
    wootters: float
    werner_p: float | None


class CertificatePayload(BaseModel):
    is_sz0: bool
    is_isotropic: bool
    is_homogeneous: bool
    flip_parity_ok: bool
    e2v_equals_max: bool
    valid: bool
    residuals: dict[str, float]
    e2v: float
    e2v_max: float


class MeasureRequest(BaseModel):
    state: StatePayload
    pairs: list[tuple[int, int]] | None = None
    tolerance: float | None = Field(default=None, gt=0, description="override for every certificate threshold")


class MeasureResponse(BaseModel):
    n: int
    pairs: list[PairMeasurePayload]
    e2v: float
    e2v_max: float
    ic: float
    homogeneous: bool
    isotropic: bool
    certificate: CertificatePayload


class SolveRequest(BaseModel):
    n: int
    method: Literal["exact", "torus"] = "exact"
    seed: int = 0
    restarts: int = 100
    tolerance: float | None = Field(default=None, gt=0, description="override for every certificate threshold")


class SolveResponse(BaseModel):
    n: int
    method: str
    count: int
    rank: int
    states: list[StatePayload]
    certificates: list[CertificatePayload]


class SpectrumRequest(BaseModel):
    model: Literal["iirhm", "heisenberg_ring", "heisenberg_chain"] = "iirhm"
    n: int
    j_star: float = 1.0


class SpectrumLevelPayload(BaseModel):
    energy: float
    multiplicity: int
    s_t: int


class SpectrumResponse(BaseModel):
    model: str
    n: int
    j_star: float
    levels: list[SpectrumLevelPayload]
    ground_energy: float
    ground_degeneracy: int


class CurveRequest(BaseModel):
    what: Literal["e2vmax", "iconc"] = "e2vmax"
    n_max: int = 100


class CurveRow(BaseModel):
    n: int
    value: float
    ratio: float


class CurveResponse(BaseModel):
    what: str
    limit: float
    rows: list[CurveRow]
