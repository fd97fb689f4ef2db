"""End-to-end checks: signature comparison with the Hecke-side form, nondegeneracy, sweeps."""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .coxeter import CoxeterDatum, ParamPoint, build_coxeter
from .irreps import WIrrep, get_irrep, irreps_of
from .monodromy import invariant_form, kz_form_on_L
from .signatures import (FitError, asymptotic_from_sequence, growth_degree, rational_fit,
                         sch_sequence)

log = logging.getLogger(__name__)

ESTIMATE_TOL = 0.02


@dataclass
class ComparisonReport:
    group: str
    irrep: str
    c: str
    a: str
    a_value: float
    a_method: str
    a_error: float
    support_dim: int | None
    full_support: bool
    dim_kz_L: int
    p: int
    q: int
    kz_ratio: str
    abs_match: bool | None
    abs_deviation: float
    signed_ratio: str | None
    signed_match: bool | None
    normalization_sign: int | None
    generic_rank_from_fit: int | None
    runtimes: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.6g}"


def _support_dimension(sch, window: int) -> tuple[int | None, int | None]:
    """(pole order of ch L, q(1)) from the dimension fit, or a growth estimate if the fit fails."""
    try:
        fit = rational_fit(sch, None, window, use_dims=True)
        return fit.r, fit.at_one()
    except FitError:
        g = growth_degree(sch.dims, window)
        return (int(round(g)) + 1 if np.isfinite(g) else None), None


def normalization_sign(datum: CoxeterDatum, irrep: WIrrep, c, B) -> int | None:
    """Sign of the scalar relating the monodromy form B to the normalized weight function."""
    if datum.rank > 2:
        return None
    from .weight import normalization
    mu = normalization(datum, irrep, c, B).mu
    if abs(mu) == 0:
        return None
    return 1 if mu.real > 0 else -1


def verify_signature_formula(datum: CoxeterDatum, irrep: WIrrep, c, N: int = 40, x0=None, window: int = 10,
                      numeric_float: bool = False, signed: bool = True) -> ComparisonReport:
    """a_{c,lam} from signature characters versus (p - q)/dim KZ(L) from the invariant form."""
    c = ParamPoint.of(datum, c)
    if not c.is_real:
        raise ValueError("the signature comparison needs a real parameter")
    times = {}
    t = time.perf_counter()
    sch = sch_sequence(datum, irrep, c, N, "L", numeric_float or not datum.exact)
    res = asymptotic_from_sequence(sch, window)
    r, q1 = _support_dimension(sch, window)
    times["signature"] = time.perf_counter() - t
    notes = []
    if sch.ambiguous_degrees:
        notes.append(f"float rank ambiguity in degrees {sch.ambiguous_degrees}")
    full = r == datum.rank
    t = time.perf_counter()
    form = invariant_form(datum, irrep, c, x0)
    kz = kz_form_on_L(form.B)
    times["monodromy"] = time.perf_counter() - t
    if form.degenerate:
        notes.append(f"invariant-form solution space has dimension {form.solution_dim}")
    if q1 is not None and full and q1 != kz.dim_kz_L:
        notes.append(f"generic rank from the character fit ({q1}) differs from dim KZ(L) ({kz.dim_kz_L})")
    ratio = Fraction(kz.inertia.p - kz.inertia.q, kz.dim_kz_L) if kz.dim_kz_L else None
    abs_match, dev = None, float("nan")
    if full and ratio is not None:
        if isinstance(res.a, Fraction):
            dev = float(abs(abs(res.a) - abs(ratio)))
            abs_match = abs(res.a) == abs(ratio)
        else:
            dev = abs(abs(float(res.a)) - abs(float(ratio)))
            abs_match = dev < ESTIMATE_TOL
    elif not full:
        notes.append("L does not have full support; the comparison is not defined")
    sgn, signed_ratio, signed_match = None, None, None
    if signed and full and ratio is not None:
        t = time.perf_counter()
        try:
            sgn = normalization_sign(datum, irrep, c, form.B)
        except Exception as e:  # quadrature can fail near resonant parameters; keep the primary verdict
            notes.append(f"normalization sign unavailable: {e}")
        times["normalization"] = time.perf_counter() - t
        if sgn is not None:
            signed_ratio = ratio * sgn
            if isinstance(res.a, Fraction):
                signed_match = res.a == signed_ratio
            else:
                signed_match = abs(float(res.a) - float(signed_ratio)) < ESTIMATE_TOL
    return ComparisonReport(
        datum.label, irrep.name, str(c), _fmt(res.a), float(res.a), res.method, res.error_bar,
        r, full, kz.dim_kz_L, kz.inertia.p, kz.inertia.q, _fmt(ratio) if ratio is not None else "n/a",
        abs_match, dev, _fmt(signed_ratio) if signed_ratio is not None else None, signed_match,
        sgn, q1, times, notes)


@dataclass
class DefinitenessRow:
    irrep: str
    full_support: bool
    p: int
    q: int
    dim_kz_L: int
    margin: float
    nondegenerate: bool
    definite: bool
    a: str | None
    quasi_unitary_ok: bool | None


@dataclass
class DefinitenessReport:
    group: str
    c: str
    rows: list[DefinitenessRow]

    @property
    def ok(self) -> bool:
        return all(r.nondegenerate and r.quasi_unitary_ok is not False for r in self.rows if r.full_support)

    def to_dict(self) -> dict:
        return {"group": self.group, "c": self.c, "ok": self.ok, "rows": [asdict(r) for r in self.rows]}


def verify_definiteness(datum: CoxeterDatum, c, x0=None, N: int = 24, window: int = 10,
                         margin_tol: float = 1e-6, irreps: list[str] | None = None) -> DefinitenessReport:
    """Per irrep: the form induced on KZ(L) is nondegenerate; definite forms give |a| = 1."""
    c = ParamPoint.of(datum, c)
    rows = []
    for lam in irreps_of(datum):
        if irreps is not None and not any(lam.matches(n) for n in irreps):
            continue
        sch = sch_sequence(datum, lam, c, N, "L", not datum.exact)
        r, _ = _support_dimension(sch, window)
        full = r == datum.rank
        kz = kz_form_on_L(invariant_form(datum, lam, c, x0).B)
        definite = kz.dim_kz_L > 0 and (kz.inertia.p == 0 or kz.inertia.q == 0)
        a_str, qu = None, None
        if full and definite:
            res = asymptotic_from_sequence(sch, window)
            a_str = _fmt(res.a)
            qu = abs(abs(float(res.a)) - 1) < (0 if isinstance(res.a, Fraction) else ESTIMATE_TOL) + 1e-12
        rows.append(DefinitenessRow(lam.name, full, kz.inertia.p, kz.inertia.q, kz.dim_kz_L, kz.margin,
                            kz.margin > margin_tol, definite, a_str, qu))
    return DefinitenessReport(datum.label, str(c), rows)


# sweeps -----------------------------------------------------------------------

def expand_grid(grid) -> list[str]:
    """A list of parameter strings, or {start, stop, step} / {start, stop, num} (inclusive)."""
    if grid is None:
        return []
    if isinstance(grid, (list, tuple)):
        return [str(v) for v in grid]
    if isinstance(grid, dict):
        start, stop = Fraction(str(grid["start"])), Fraction(str(grid["stop"]))
        if "step" in grid:
            step = Fraction(str(grid["step"]))
            n = int((stop - start) / step + Fraction(1, 10 ** 9)) + 1
            vals = [start + k * step for k in range(n)]
        else:
            num = int(grid["num"])
            vals = [start + (stop - start) * k / max(num - 1, 1) for k in range(num)]
        return [str(v) for v in vals]
    return [str(grid)]


def _sweep_cell(task: tuple) -> dict:
    label, lam_name, cval, N, window, signed = task
    datum = build_coxeter(label)
    try:
        rep = verify_signature_formula(datum, get_irrep(datum, lam_name), cval, N, window=window, signed=signed).to_dict()
        rep["status"] = "ok"
    except Exception as e:
        log.warning("sweep cell %s/%s/%s failed: %s", label, lam_name, cval, e)
        rep = {"group": datum.label, "irrep": lam_name, "c": cval, "status": "error", "error": str(e)}
    return rep


def sweep_tasks(config: dict) -> list[tuple]:
    tasks = []
    for cell in config.get("cells", []):
        datum = build_coxeter(cell["type"])
        names = cell.get("irreps", "all")
        lams = irreps_of(datum) if names == "all" else [get_irrep(datum, n) for n in names]
        for cval in expand_grid(cell.get("c")):
            for lam in lams:
                tasks.append((datum.label, lam.name, cval, int(cell.get("maxdeg", 30)),
                              int(cell.get("window", 10)), bool(cell.get("signed", False))))
    return tasks


def sweep(config: dict) -> list[dict]:
    """Signature comparisons over a grid. A failing cell is logged and recorded; the rest still run.

    `workers > 1` in the config runs cells in separate processes; output order is the task order.
    """
    tasks = sweep_tasks(config)
    workers = int(config.get("workers", 1))
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_sweep_cell, tasks))
    return [_sweep_cell(t) for t in tasks]


def load_config(path: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)
