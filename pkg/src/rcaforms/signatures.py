"""Signature characters, rational fits, asymptotic signatures and epsilon decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cherednik import _add, _mm, _scale, _zeros, graded_module
from .coxeter import CoxeterDatum, ParamPoint
from .exact import ExactMatrix, to_float
from .forms import gram_sequence
from .inertia import Inertia, inertia, inertia_float
from .irreps import WIrrep, get_irrep, h_c_lambda, irreps_of
from .series import mul_trunc, poly_mul


class FitError(ValueError):
    pass


@dataclass
class SignatureCharacter:
    """Per-degree signatures s_n (shifted: index n is weight h_c(lam) + n) and dimensions."""

    values: list[int]
    dims: list[int]
    target: str
    rank: int
    lowest_weight: object = None
    ambiguous_degrees: list[int] = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.values) - 1


@dataclass
class RationalFit:
    r: int
    p: list[int]
    trailing_zeros: int

    def at_one(self) -> int:
        return sum(self.p)


def _degree_inertia(G, numeric_float: bool) -> tuple[Inertia, bool]:
    if isinstance(G, ExactMatrix) and not numeric_float:
        return inertia(G), False
    A = to_float(G)
    A = (A + A.conj().T) / 2
    if A.shape[0] == 0:
        return Inertia(0, 0, 0), False
    d = np.abs(np.diag(A)).astype(float)
    d[d == 0] = 1.0
    s = 1.0 / np.sqrt(d)
    A = A * np.outer(s, s)
    ev = np.linalg.eigvalsh(A)
    thr = A.shape[0] * np.finfo(float).eps * max(np.abs(ev).max(), 1.0)
    ambiguous = bool(np.any((np.abs(ev) > thr) & (np.abs(ev) < 1e4 * thr)))
    return inertia_float(A), ambiguous


def sch_sequence(datum: CoxeterDatum, irrep: WIrrep, c, N: int, target: str = "L",
                 numeric_float: bool = False) -> SignatureCharacter:
    """Signatures of beta per degree 0..N.

    For target "L" the dimensions are those of the irreducible quotient (rank of the Gram).
    For target "Delta" the dimensions are those of the standard module; the signatures agree.
    """
    c = ParamPoint.of(datum, c)
    if not c.is_real:
        raise ValueError("signature characters need a real parameter")
    seq = gram_sequence(datum, irrep, c, numeric_float)
    mod = seq.module
    vals, dims, amb = [], [], []
    for n in range(N + 1):
        I, a = _degree_inertia(seq.gram(n), numeric_float)
        vals.append(I.signature)
        dims.append(I.rank if target == "L" else mod.dim(n))
        if a:
            amb.append(n)
    return SignatureCharacter(vals, dims, target, datum.rank, h_c_lambda(datum, irrep, c), amb)


def isotypic_projector(datum: CoxeterDatum, irrep: WIrrep, pi: WIrrep, n: int, numeric_float: bool = False):
    """(dim pi / |W|) sum_w chi_pi(w) w on degree n (orthogonal projector)."""
    mod = graded_module(datum, irrep)
    exact = mod.exact and pi.exact and not numeric_float
    chi = pi.character
    out = _zeros(exact, (mod.dim(n), mod.dim(n)))
    for w in range(datum.order):
        if chi[w] == 0:
            continue
        M = mod.w_action(w, n)
        out = _add(out, _scale(M if exact else to_float(M), chi[w] if exact else float(chi[w])))
    return _scale(out, Fraction(pi.dim, datum.order) if exact else pi.dim / datum.order)


def isotypic_sch(datum: CoxeterDatum, irrep: WIrrep, pi: WIrrep, c, N: int, target: str = "L",
                 numeric_float: bool = False) -> SignatureCharacter:
    """Signature of beta restricted to the pi-isotypic part of each degree."""
    c = ParamPoint.of(datum, c)
    seq = gram_sequence(datum, irrep, c, numeric_float)
    mod = seq.module
    vals, dims, amb = [], [], []
    for n in range(N + 1):
        P = isotypic_projector(datum, irrep, pi, n, numeric_float)
        G = seq.gram(n)
        if isinstance(P, ExactMatrix) and isinstance(G, ExactMatrix):
            H = P.T @ G @ P
        else:
            P, G = to_float(P), to_float(G)
            H = P.T @ G @ P
        I, a = _degree_inertia(H, numeric_float)
        vals.append(I.signature)
        if target == "L":
            dims.append(I.rank)
        else:
            dims.append(int(round(float(to_float(P).trace()))) if not isinstance(P, ExactMatrix) else int(P.trace()))
        if a:
            amb.append(n)
    return SignatureCharacter(vals, dims, target, datum.rank, h_c_lambda(datum, irrep, c), amb)


def isotypic_multiplicities(datum: CoxeterDatum, irrep: WIrrep, c, n: int, numeric_float: bool = False) -> dict:
    """Multiplicity of each irrep pi in degree n of L_c(irrep)."""
    out = {}
    for pi in irreps_of(datum):
        s = isotypic_sch(datum, irrep, pi, c, n, "L", numeric_float)
        out[pi.name] = s.dims[n] // pi.dim
    return out


def growth_degree(values, window: int = 10) -> float:
    """Polynomial growth exponent of |values| over the trailing window (log-log slope)."""
    v = np.abs(np.asarray(values, dtype=float))
    n = np.arange(len(v))
    sel = (n >= max(1, len(v) - window)) & (v > 0)
    if sel.sum() < 2:
        return 0.0 if v[-1] == 0 else float("nan")
    slope = np.polyfit(np.log(n[sel]), np.log(v[sel]), 1)[0]
    return float(slope)


def rational_fit(sch: SignatureCharacter | list, r_hint: int | None = None, window: int = 10,
                 use_dims: bool = False) -> RationalFit:
    """Write sum s_n t^n = p(t)/(1-t)^r with p a polynomial, verified on a trailing window."""
    if isinstance(sch, SignatureCharacter):
        seq = sch.dims if use_dims else sch.values
        max_r = sch.rank
    else:
        seq, max_r = list(sch), len(sch)
    N = len(seq) - 1
    candidates = [r_hint] if r_hint is not None else range(0, max_r + 1)
    last = None
    for r in candidates:
        prod = mul_trunc(_one_minus_t_pow(r), seq, N + 1)
        nz = [i for i, v in enumerate(prod) if v != 0]
        deg = nz[-1] if nz else -1
        zeros = N - deg
        if zeros >= window:
            return RationalFit(r, [int(v) for v in prod[:deg + 1]], zeros)
        last = (r, prod[-window:])
    raise FitError(f"no stabilization within the window (last tried r={last[0]}, tail={list(last[1])})")


def _one_minus_t_pow(r: int) -> list[int]:
    from math import comb
    return [(-1) ** k * comb(r, k) for k in range(r + 1)]


def asymptotic_signature(fit_sch: RationalFit, fit_ch: RationalFit) -> Fraction:
    """a = p(1)/q(1) for fits sharing the pole order."""
    if fit_sch.r != fit_ch.r:
        raise ValueError(f"pole orders differ: sch r={fit_sch.r}, ch r={fit_ch.r}")
    q1 = fit_ch.at_one()
    if q1 == 0:
        raise ValueError("character fit has q(1) = 0; pole order is not minimal")
    return Fraction(fit_sch.at_one(), q1)


@dataclass
class AsymptoticResult:
    a: Fraction | float
    r: int | None
    method: str
    error_bar: float = 0.0
    fit_sch: RationalFit | None = None
    fit_ch: RationalFit | None = None


def cesaro_estimate(values, dims) -> tuple[float, float]:
    """Partial-sum ratio S_N/D_N, Richardson-extrapolated against N/2 assuming an O(1/N) error.

    The error bar is the size of the extrapolation step; it is a heuristic, not a bound.
    """
    s = np.cumsum(values, dtype=float)
    d = np.cumsum(dims, dtype=float)
    N = len(values) - 1
    a_full = s[-1] / d[-1]
    a_half = s[N // 2] / d[N // 2] if d[N // 2] else a_full
    a = float(np.clip(2 * a_full - a_half, -1.0, 1.0))
    return a, float(abs(a - a_full))


def asymptotic_from_sequence(sch: SignatureCharacter, window: int = 10) -> AsymptoticResult:
    try:
        fch = rational_fit(sch, None, window, use_dims=True)
        fsch = rational_fit(sch, fch.r, window)
        return AsymptoticResult(asymptotic_signature(fsch, fch), fch.r, "rational-fit", 0.0, fsch, fch)
    except (FitError, ValueError):
        a, err = cesaro_estimate(sch.values, sch.dims)
        return AsymptoticResult(a, None, "cesaro-heuristic", err)


def asymptotic_signature_of(datum: CoxeterDatum, irrep: WIrrep, c, N: int, window: int = 10,
                            numeric_float: bool = False) -> AsymptoticResult:
    return asymptotic_from_sequence(sch_sequence(datum, irrep, c, N, "L", numeric_float), window)


# composition factors and epsilon decomposition -------------------------

def graded_w_character(datum: CoxeterDatum, irrep: WIrrep, c, N: int, target: str = "L",
                       numeric_float: bool = False) -> list[dict]:
    """Per degree, multiplicities of every irrep in L_c(irrep) (or Delta)."""
    out = [dict() for _ in range(N + 1)]
    for pi in irreps_of(datum):
        s = isotypic_sch(datum, irrep, pi, c, N, target, numeric_float)
        for n in range(N + 1):
            out[n][pi.name] = s.dims[n] // pi.dim
    return out


def _standard_w_character(datum: CoxeterDatum, irrep: WIrrep, N: int) -> list[dict]:
    from .irreps import standard_character, inner_product
    series = [standard_character(datum, irrep, w, N + 1) for w in range(datum.order)]
    out = []
    for n in range(N + 1):
        chi = [series[w][n] for w in range(datum.order)]
        out.append({pi.name: int(round(float(inner_product(datum, chi, pi.character))))
                    for pi in irreps_of(datum)})
    return out


def composition_factors(datum: CoxeterDatum, irrep: WIrrep, c, N: int,
                        numeric_float: bool = False) -> list[tuple[str, int, int]]:
    """Composition factors (mu, degree offset, multiplicity) of Delta_c(irrep) seen through degree N."""
    c = ParamPoint.of(datum, c)
    h0 = h_c_lambda(datum, irrep, c)
    remaining = _standard_w_character(datum, irrep, N)
    factors = []
    for n in range(N + 1):
        for mu in irreps_of(datum):
            m = remaining[n].get(mu.name, 0)
            if m == 0:
                continue
            if m < 0:
                raise ArithmeticError(f"negative multiplicity of {mu.name} in degree {n} while peeling")
            if h_c_lambda(datum, mu, c) - h0 != n:
                raise ArithmeticError(
                    f"{mu.name} left over in degree {n} but its lowest weight sits at offset "
                    f"{h_c_lambda(datum, mu, c) - h0}")
            chL = graded_w_character(datum, mu, c, N - n, "L", numeric_float)
            for k in range(N - n + 1):
                for name, v in chL[k].items():
                    remaining[n + k][name] = remaining[n + k].get(name, 0) - m * v
            factors.append((mu.name, n, m))
    return factors


@dataclass
class EpsilonDecomposition:
    factors: list[tuple[str, int]]  # (mu, degree offset = h_c(mu) - h_c(lam)), one entry per copy
    eps: list[int]
    sch_delta: list[int]
    sch_factors: list[list[int]]
    all_solutions: list[tuple[int, ...]]


def epsilon_decomposition(datum: CoxeterDatum, irrep: WIrrep, c, N: int, c1=None,
                          numeric_float: bool = False) -> EpsilonDecomposition:
    """Signs eps_i with sch(M) = sum eps_i sch(L_i) for M = gr of the Jantzen filtration.

    M carries the nondegenerate form sum_k beta^(k), which is the limit of beta along
    c + s c1 as s -> 0+ (c1 defaults to all ones).
    """
    from .jantzen import jantzen_signatures

    c = ParamPoint.of(datum, c)
    if c1 is None:
        c1 = tuple(1 for _ in range(datum.n_classes))
    sch_M = jantzen_signatures(datum, irrep, c, c1, N)
    facs = composition_factors(datum, irrep, c, N, numeric_float)
    copies = [(mu, off) for mu, off, m in facs for _ in range(m)]
    sch_L = []
    for mu, off in copies:
        s = sch_sequence(datum, get_irrep(datum, mu), c, N - off, "L", numeric_float).values
        sch_L.append([0] * off + s)
    if len(copies) > 16:
        raise ValueError(f"{len(copies)} composition factors is too many for a sign search")
    solutions = []
    head = [i for i, (mu, off) in enumerate(copies) if mu == irrep.name and off == 0]
    for eps in itertools.product((1, -1), repeat=len(copies)):
        if head and eps[head[0]] != 1:
            continue
        if all(sum(e * s[n] for e, s in zip(eps, sch_L)) == sch_M[n] for n in range(N + 1)):
            solutions.append(eps)
    if not solutions:
        raise ArithmeticError(
            f"no sign vector reproduces the signature character through degree {N}: "
            f"sch={sch_M}, factors={copies}")
    return EpsilonDecomposition(copies, list(solutions[0]), sch_M, sch_L, solutions)


def fit_over_degrees(seq, degrees, window: int = 10) -> list[int]:
    """Numerator P with sum seq_n t^n = P(t) / prod_i (1 - t^{d_i}), checked on a trailing window."""
    den = [1]
    for d in degrees:
        den = poly_mul(den, [1] + [0] * (d - 1) + [-1])
    N = len(seq) - 1
    prod = mul_trunc(den, list(seq), N + 1)
    nz = [i for i, v in enumerate(prod) if v != 0]
    deg = nz[-1] if nz else -1
    if N - deg < window:
        raise FitError(f"numerator over prod(1 - t^d) did not terminate by degree {N - window}")
    return [int(v) for v in prod[:deg + 1]]


def _divide_one_minus_t(p: list[int]) -> list[int]:
    """p(t)/(1 - t) for p(1) = 0 (synthetic division)."""
    out, acc = [], 0
    for v in p[:-1]:
        acc += v
        out.append(acc)
    return out


def ratio_at_one(num: list[int], den: list[int]) -> Fraction:
    """lim_{t -> 1} num(t)/den(t), cancelling common factors of (1 - t)."""
    while den and sum(den) == 0:
        if sum(num) != 0:
            raise ValueError("numerator has a lower-order zero at t = 1 than the denominator")
        num, den = _divide_one_minus_t(num), _divide_one_minus_t(den)
    if not den:
        raise ValueError("denominator vanishes identically")
    return Fraction(sum(num), sum(den))


def isotypic_ratio(datum: CoxeterDatum, irrep: WIrrep, pi: WIrrep, c, N: int, window: int = 10,
                   numeric_float: bool = False) -> Fraction:
    """Limit of dim L^pi[<=n] / dim L[<=n].

    Isotypic dimension series are quasi-polynomial, so both are written over prod(1 - t^{d_i})
    rather than a power of (1 - t), and the ratio of numerators is taken at t = 1.
    """
    total = sch_sequence(datum, irrep, c, N, "L", numeric_float)
    part = isotypic_sch(datum, irrep, pi, c, N, "L", numeric_float)
    return ratio_at_one(fit_over_degrees(part.dims, datum.degrees, window),
                        fit_over_degrees(total.dims, datum.degrees, window))
