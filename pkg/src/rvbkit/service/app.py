"""FastAPI application exposing the toolkit as stateless JSON endpoints.

Domain errors map to HTTP 400 with a structured {code, message} detail;
schema violations are FastAPI's usual 422.  The CLI is a thin client of this
app (in-process by default), so every subcommand corresponds to one endpoint.
"""

from __future__ import annotations

from math import sqrt

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..basis import PureState, state_from_dict, state_to_dict
from ..entanglement import (
    EntanglementReport,
    e2v_max,
    iconcurrence_max,
    measure_state,
)
from ..errors import RvbError
from ..homogenizer import (
    MaximalityCertificate,
    homogenize_isotropic,
    isotropize_homogeneous,
    torus_search,
    verify_maximal,
)
from ..models import HamiltonianSpec, spectrum
from ..states import named_state
from ..vb import Matching, enumerate_all_matchings, enumerate_rumer
from .schemas import (
    CertificatePayload,
    CurveRequest,
    CurveResponse,
    CurveRow,
    MatchingPayload,
    MeasureRequest,
    MeasureResponse,
    PairMeasurePayload,
    RumerRequest,
    RumerResponse,
    SolveRequest,
    SolveResponse,
    SpectrumLevelPayload,
    SpectrumRequest,
    SpectrumResponse,
    StatePayload,
    StateRequest,
)


def _state_payload(state: PureState) -> StatePayload:
    return StatePayload.model_validate(state_to_dict(state))


def _certificate_tolerances(tolerance: float | None) -> dict:
    if tolerance is None:
        return {}
    return {
        "iso_tol": tolerance,
        "hom_rtol": tolerance,
        "e2v_tol": tolerance,
        "flip_tol": tolerance,
    }


def _certificate_payload(cert: MaximalityCertificate) -> CertificatePayload:
    d = cert.to_dict()
    return CertificatePayload(
        **d["flags"],
        residuals={k: float(v) for k, v in d["residuals"].items()},
        e2v=d["e2v"],
        e2v_max=d["e2v_max"],
    )


def _report_payload(report: EntanglementReport, cert: MaximalityCertificate) -> MeasureResponse:
    return MeasureResponse(
        n=report.n,
        pairs=[
            PairMeasurePayload(
                sites=p.sites,
                szsz=p.szsz,
                spsm_re=p.spsm.real,
                spsm_im=p.spsm.imag,
                sdots=p.sdots,
                entropy=p.entropy,
                purity=p.purity,
                iconc_term=p.iconc_term,
                wootters=p.wootters,
                werner_p=p.werner_p,
            )
            for p in report.pairs
        ],
        e2v=report.e2v,
        e2v_max=report.e2v_max,
        ic=report.ic,
        homogeneous=report.homogeneous,
        isotropic=report.isotropic,
        certificate=_certificate_payload(cert),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="rvbkit", version=__version__)

    @app.exception_handler(RvbError)
    async def _domain_error(request, exc: RvbError):
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=400,
            content={"detail": {"code": type(exc).__name__, "message": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/rumer", response_model=RumerResponse)
    def rumer(req: RumerRequest):
        matchings = enumerate_all_matchings(req.n) if req.all_matchings else enumerate_rumer(req.n)
        return RumerResponse(
            n=req.n,
            count=len(matchings),
            matchings=[MatchingPayload(n=m.n, pairs=list(m.pairs)) for m in matchings],
        )

    @app.post("/state", response_model=StatePayload)
    def state(req: StateRequest):
        if (req.family is None) == (req.matching is None):
            raise HTTPException(422, detail="give exactly one of family or matching")
        if req.family is not None:
            try:
                st = named_state(req.family)
            except KeyError as exc:
                raise HTTPException(404, detail=str(exc)) from exc
            if req.n is not None and st.n != req.n:
                raise HTTPException(422, detail=f"family {req.family!r} has n={st.n}, not {req.n}")
        else:
            from ..vb import vb_state

            matching = Matching.of(req.matching.n, req.matching.pairs)
            st = vb_state(matching).gauge_fixed()
        return _state_payload(st)

    @app.post("/measure", response_model=MeasureResponse)
    def measure(req: MeasureRequest):
        try:
            st = state_from_dict(req.state.model_dump())
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc)) from exc
        report = measure_state(st, pairs=req.pairs)
        cert = verify_maximal(st, **_certificate_tolerances(req.tolerance))
        return _report_payload(report, cert)

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest):
        if req.method == "exact":
            states = homogenize_isotropic(req.n, seed=req.seed)
            other = isotropize_homogeneous(req.n, seed=req.seed)
            # the two construction routes must agree on the subspace they span
            stack = np.stack([s.amp for s in states + other])
            sv = np.linalg.svd(stack, compute_uv=False)
            if int(np.sum(sv > 1e-8 * sv[0])) != len(states):
                raise HTTPException(500, detail={"code": "RouteMismatch", "message": "construction routes span different subspaces"})
        else:
            states = torus_search(req.n, seed=req.seed, restarts=req.restarts)
        overrides = _certificate_tolerances(req.tolerance)
        certs = [verify_maximal(s, **overrides) for s in states]
        if states:
            stack = np.stack([s.amp for s in states])
            sv = np.linalg.svd(stack, compute_uv=False)
            rank = int(np.sum(sv > 1e-8 * sv[0]))
        else:
            rank = 0
        return SolveResponse(
            n=req.n,
            method=req.method,
            count=len(states),
            rank=rank,
            states=[_state_payload(s) for s in states],
            certificates=[_certificate_payload(c) for c in certs],
        )

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum_endpoint(req: SpectrumRequest):
        report = spectrum(HamiltonianSpec(n=req.n, model=req.model, j_star=req.j_star))
        return SpectrumResponse(
            model=report.model,
            n=report.n,
            j_star=report.j_star,
            levels=[
                SpectrumLevelPayload(energy=l.energy, multiplicity=l.multiplicity, s_t=l.s_t)
                for l in report.levels
            ],
            ground_energy=report.ground_energy,
            ground_degeneracy=report.ground_degeneracy,
        )

    @app.post("/curve", response_model=CurveResponse)
    def curve(req: CurveRequest):
        if req.n_max % 2 or not 4 <= req.n_max <= 10_000:
            raise HTTPException(422, detail=f"n_max must be even in 4..10000, got {req.n_max}")
        if req.what == "e2vmax":
            limit = 2.0
            rows = [
                CurveRow(n=n, value=e2v_max(n), ratio=e2v_max(n) / limit)
                for n in range(4, req.n_max + 1, 2)
            ]
        else:
            limit = sqrt(1.5)
            rows = [
                CurveRow(n=n, value=iconcurrence_max(n), ratio=iconcurrence_max(n) / limit)
                for n in range(4, req.n_max + 1, 2)
            ]
        return CurveResponse(what=req.what, limit=limit, rows=rows)

    return app


app = create_app()
