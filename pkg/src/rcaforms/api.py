"""HTTP service exposing the library; the CLI is a thin client of this app."""

from __future__ import annotations

import time
from typing import Any, Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from . import serialize as ser
from .cherednik import dunkl_matrix, graded_module
from .coxeter import ParamPoint, _parse_param, UnsupportedGroupError, build_coxeter
from .forms import Radical, beta_gram, radical_per_degree
from .inertia import inertia
from .irreps import get_irrep, h_c_lambda, irreps_of
from .jantzen import jantzen_sweep, submodule_check, wall_crossing_check
from .monodromy import braid_generators, hecke_check, hecke_parameters, invariant_form, kz_form_on_L
from .polys import monomials, Poly
from .signatures import FitError, asymptotic_from_sequence, rational_fit, sch_sequence
from .verify import sweep, verify_definiteness, verify_signature_formula
from .weight import (basis_vector, chamber_nodes, chamber_rays, delta_shift,
                     homogeneity_check, homogeneity_degree, normalization, quadrature_verify,
                     trivial_weight, weight_from_monodromy)

app = FastAPI(title="rcaforms", version="0.1.0",
              description="Contravariant forms, signature characters and KZ monodromy for rational Cherednik algebras.")


# request models ----------------------------------------------------------------

class GroupRequest(BaseModel):
    type: str = Field(description="Coxeter type, e.g. A2, B2, I2(5) or I2_5")


class IrrepRequest(GroupRequest):
    irrep: str


class ParamRequest(IrrepRequest):
    c: str | list[str] = Field(description="one value per reflection class, comma separated; a single value is broadcast")

    @field_validator("c", mode="before")
    @classmethod
    def _join(cls, v):
        if isinstance(v, (list, tuple)):
            return ",".join(str(x) for x in v)
        return str(v)


class DunklRequest(ParamRequest):
    deg: int = Field(ge=1)
    y: list[str] | None = Field(None, description="direction y; default: every coordinate direction")


class GramRequest(ParamRequest):
    maxdeg: int = Field(ge=0)
    float_mode: bool = False
    matrices: bool = True
    radical: bool = False


class SchRequest(ParamRequest):
    maxdeg: int = Field(ge=0)
    target: Literal["L", "Delta"] = "L"
    fit: bool = True
    window: int = 10
    float_mode: bool = False


class JantzenRequest(IrrepRequest):
    c0: str
    c1: str
    maxdeg: int = Field(ge=0)
    s: float = 0.1


class MonodromyRequest(ParamRequest):
    tol: float = 1e-10


class WeightRequest(ParamRequest):
    grid: str = Field("chamber:16", description="chamber:N, random:N or an explicit 'x1 x2;y1 y2' list")
    seed: int = 0
    normalize: bool = True


class QuadratureRequest(ParamRequest):
    maxdeg: int = Field(2, ge=0)
    shift: str = "auto"


class SignatureFormulaRequest(ParamRequest):
    maxdeg: int = 40
    window: int = 10
    float_mode: bool = False
    signed: bool = True


class DefinitenessRequest(GroupRequest):
    c: str | list[str]
    maxdeg: int = 24
    irreps: list[str] | None = None

    @field_validator("c", mode="before")
    @classmethod
    def _join(cls, v):
        if isinstance(v, (list, tuple)):
            return ",".join(str(x) for x in v)
        return str(v)


class SweepRequest(BaseModel):
    config: dict[str, Any]


# helpers -------------------------------------------------------------------------

def _datum(label: str):
    try:
        return build_coxeter(label)
    except (UnsupportedGroupError, ValueError) as e:
        raise HTTPException(422, f"unsupported group {label!r}: {e}")


def _irrep(datum, name: str):
    try:
        return get_irrep(datum, name)
    except KeyError as e:
        raise HTTPException(422, str(e.args[0]))


def _param(datum, c: str) -> ParamPoint:
    try:
        return ParamPoint.of(datum, c)
    except (ValueError, ArithmeticError) as e:
        raise HTTPException(422, f"bad parameter {c!r}: {e}")


@app.exception_handler(ArithmeticError)
async def _arith(_: Request, exc: ArithmeticError):
    return JSONResponse(status_code=422, content={"detail": f"{type(exc).__name__}: {exc}"})


@app.exception_handler(NotImplementedError)
async def _notimpl(_: Request, exc: NotImplementedError):
    return JSONResponse(status_code=501, content={"detail": str(exc)})


@app.exception_handler(FitError)
async def _fit(_: Request, exc: FitError):
    return JSONResponse(status_code=422, content={"detail": f"rational fit failed: {exc}"})


# endpoints -----------------------------------------------------------------------

@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/group")
def group(req: GroupRequest):
    W = _datum(req.type)
    classes = [[r.index for r in W.reflections if r.cls == k] for k in range(W.n_classes)]
    return {
        "label": W.label, "rank": W.rank, "order": W.order, "degrees": list(W.degrees),
        "exact": W.exact, "coxeter_matrix": W.coxeter_matrix,
        "roots": [[ser.scalar(v) for v in r.root] for r in W.reflections],
        "coroots": [[ser.scalar(v) for v in r.coroot] for r in W.reflections],
        "reflection_classes": classes,
        "conjugacy_class_sizes": W.class_sizes,
    }


@app.post("/irreps")
def irreps(req: GroupRequest):
    W = _datum(req.type)
    reps = []
    for lam in irreps_of(W):
        reps.append({"name": lam.name, "aliases": list(lam.aliases), "dim": lam.dim, "exact": lam.exact,
                     "class_character": [ser.scalar(v) for v in lam.class_character]})
    return {"group": W.label, "irreps": reps}


@app.post("/dunkl")
def dunkl(req: DunklRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    dirs = [tuple(_parse_param(v) for v in req.y)] if req.y else [tuple(int(i == j) for i in range(W.rank))
                                                          for j in range(W.rank)]
    mod = graded_module(W, lam)
    out = [{"y": [ser.scalar(v) for v in y], "matrix": ser.matrix(dunkl_matrix(W, lam, list(y), req.deg).at(c))}
           for y in dirs]
    return {"group": W.label, "irrep": lam.name, "c": str(c), "deg": req.deg,
            "domain_basis": ser.jsonable(mod.basis_labels(req.deg)),
            "codomain_basis": ser.jsonable(mod.basis_labels(req.deg - 1)), "operators": out}


@app.post("/gram")
def gram(req: GramRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    degrees = []
    for n in range(req.maxdeg + 1):
        G = beta_gram(W, lam, c, n, req.float_mode)
        I = inertia(G)
        row = {"degree": n, "dim": G.shape[0], "p": I.p, "q": I.q, "z": I.z}
        if req.radical:
            rad: Radical = radical_per_degree(W, lam, c, n, req.float_mode)
            row["radical_dim"] = rad.dim
        if req.matrices:
            row["matrix"] = ser.matrix(G)
        degrees.append(row)
    return {"group": W.label, "irrep": lam.name, "c": str(c),
            "lowest_weight": ser.scalar(h_c_lambda(W, lam, c)), "degrees": degrees}


@app.post("/sch")
def sch(req: SchRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    seq = sch_sequence(W, lam, c, req.maxdeg, req.target, req.float_mode or not W.exact)
    out = {"group": W.label, "irrep": lam.name, "c": str(c), "target": req.target,
           "lowest_weight": ser.scalar(seq.lowest_weight), "s": seq.values, "dims": seq.dims,
           "ambiguous_degrees": seq.ambiguous_degrees}
    if req.fit:
        fits = {}
        for key, dims in (("sch", False), ("ch", True)):
            try:
                f = rational_fit(seq, None, req.window, use_dims=dims)
                fits[key] = {"r": f.r, "numerator": f.p, "trailing_zeros": f.trailing_zeros}
            except FitError as e:
                fits[key] = {"error": str(e)}
        out["fit"] = fits
        res = asymptotic_from_sequence(seq, req.window)
        out["a"] = ser.scalar(res.a)
        out["a_method"] = res.method
        out["a_error"] = res.error_bar
    return out


@app.post("/jantzen")
def jantzen(req: JantzenRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c0, c1 = _param(W, req.c0), _param(W, req.c1)
    sw = jantzen_sweep(W, lam, c0, c1, req.maxdeg)
    degrees = [{"degree": d, "valuations": jd.valuations, "ord_det": jd.ord_det,
                "levels": ser.jsonable(jd.levels)} for d, jd in sorted(sw.degrees.items())]
    sub = submodule_check(W, lam, c0, sw.degrees)
    wc = wall_crossing_check(W, lam, c0, c1, req.s, req.maxdeg)
    return {"group": W.label, "irrep": lam.name, "c0": str(c0), "c1": str(c1), "degrees": degrees,
            "skipped": ser.jsonable(sw.skipped), "submodule": ser.jsonable(sub),
            "wall_crossing": {"s": req.s, "ok": wc.ok, "scan_clean": wc.scan_clean,
                              "rows": [dict(ser.jsonable(r), ok=r.ok) for r in wc.rows],
                              "skipped": ser.jsonable(wc.skipped)}}


@app.post("/monodromy")
def monodromy(req: MonodromyRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    Ts = braid_generators(W, lam, c, rtol=req.tol)
    rep = hecke_check(W, Ts, c)
    form = invariant_form(W, lam, c, rtol=req.tol)
    out = {"group": W.label, "irrep": lam.name, "c": str(c),
           "q": [ser.scalar(q) for q in hecke_parameters(W, c)],
           "T": [ser.matrix(T) for T in Ts],
           "hecke_residuals": rep.quadratic, "braid_residuals": ser.jsonable(rep.braid),
           "B": ser.matrix(form.B), "B_solution_dim": form.solution_dim,
           "B_residual": form.residual, "B_antihermitian": form.antihermitian, "B_scaling": form.scaling}
    if c.is_real:
        kz = kz_form_on_L(form.B)
        out["kz_form"] = {"p": kz.inertia.p, "q": kz.inertia.q, "dim_kz_L": kz.dim_kz_L, "margin": kz.margin}
    return out


def _grid_points(W, grid: str, seed: int) -> np.ndarray:
    kind, _, arg = grid.partition(":")
    rng = np.random.default_rng(seed)
    if kind == "chamber":
        n = int(arg or 16)
        if W.rank == 1:
            return np.linspace(0.25, 2.0, n)[:, None]
        if W.rank == 2:
            lo, hi = chamber_rays(W)
            th = lo + (hi - lo) * (np.arange(n) + 0.5) / n
            return np.stack([np.cos(th), np.sin(th)], axis=1)
        pts = []
        while len(pts) < n:
            x = rng.normal(size=W.rank)
            if W.chamber_element(x) == 0:
                pts.append(x)
        return np.array(pts)
    if kind == "random":
        pts = []
        while len(pts) < int(arg or 16):
            x = rng.normal(size=W.rank)
            if W.clearance(x) > 1e-3:
                pts.append(x)
        return np.array(pts)
    try:
        return np.array([[float(v) for v in p.replace(",", " ").split()] for p in grid.split(";") if p.strip()])
    except ValueError:
        raise HTTPException(422, f"bad grid {grid!r}")


@app.post("/weight")
def weight(req: WeightRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    B = invariant_form(W, lam, c).B
    mu, mu_note = 1.0, "unnormalized"
    if req.normalize and W.rank <= 2 and c.is_real:
        nrm = normalization(W, lam, c, B)
        mu, mu_note = nrm.mu, nrm.method
    pts = _grid_points(W, req.grid, req.seed)
    trivial = lam.dim == 1 and all(float(lam.character[r.element]) == 1 for r in W.reflections)
    samples, rows = [], []
    for x in pts:
        smp = weight_from_monodromy(W, lam, c, B, x, mu=mu)
        samples.append(smp)
        row = {"x": x.tolist(), "chamber": smp.chamber, "K": ser.matrix(smp.K), "accuracy": smp.accuracy}
        if trivial and mu_note != "unnormalized":
            row["closed_form"] = trivial_weight(W, c, x)
        rows.append(row)
    kappa = homogeneity_degree(W, lam, c)
    x = pts[0]
    radial = [weight_from_monodromy(W, lam, c, B, t * x, mu=mu) for t in (0.5, 0.8, 1.25, 2.0)]
    hom = homogeneity_check(radial, kappa.real)
    return {"group": W.label, "irrep": lam.name, "c": str(c), "normalization": ser.scalar(mu),
            "normalization_method": mu_note,
            "normalization_convention": "irrep inner product is the standard one in the orthogonal model; "
                                        "K is fixed up to this choice",
            "homogeneity": ser.jsonable(hom), "samples": rows}


def _basis_up_to(W, lam, n: int):
    out = []
    for d in range(n + 1):
        for e in monomials(W.rank, d):
            for a in range(lam.dim):
                out.append(((e, a), basis_vector(W, lam, a, Poly.monomial(e))))
    return out


@app.post("/quadrature")
def quadrature(req: QuadratureRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    B = invariant_form(W, lam, c).B
    N = delta_shift(W, c) if req.shift == "auto" else int(req.shift)
    nodes = chamber_nodes(W, lam, c, B, N) if W.rank == 2 else None
    norm = normalization(W, lam, c, B, N, nodes)
    basis = _basis_up_to(W, lam, req.maxdeg)
    rows = []
    t = time.perf_counter()
    for i, (li, P) in enumerate(basis):
        for lj, Q in basis[i:]:
            r = quadrature_verify(W, lam, c, P, Q, N, B, norm, nodes)
            rows.append({"P": {"monomial": list(li[0]), "component": li[1]},
                         "Q": {"monomial": list(lj[0]), "component": lj[1]},
                         "quadrature": ser.scalar(r.value), "gram": ser.scalar(r.exact),
                         "relative_error": r.relative_error})
    return {"group": W.label, "irrep": lam.name, "c": str(c), "shift": N,
            "normalization": ser.scalar(norm.mu), "normalization_consistency": norm.consistency,
            "max_relative_error": max((r["relative_error"] for r in rows), default=0.0),
            "runtime": time.perf_counter() - t, "pairs": rows}


@app.post("/verify/signature-formula")
def signature_formula_endpoint(req: SignatureFormulaRequest):
    W = _datum(req.type)
    lam = _irrep(W, req.irrep)
    c = _param(W, req.c)
    if not c.is_real:
        raise HTTPException(422, "the signature comparison needs a real parameter")
    rep = verify_signature_formula(W, lam, c, req.maxdeg, window=req.window, numeric_float=req.float_mode,
                            signed=req.signed)
    return ser.jsonable(rep.to_dict())


@app.post("/verify/definiteness")
def definiteness_endpoint(req: DefinitenessRequest):
    W = _datum(req.type)
    c = _param(W, req.c)
    return ser.jsonable(verify_definiteness(W, c, N=req.maxdeg, irreps=req.irreps).to_dict())


@app.post("/sweep")
def sweep_endpoint(req: SweepRequest):
    return {"reports": ser.jsonable(sweep(req.config))}

