"""KZ and modified-KZ parallel transport, braid generators, Hecke checks and the invariant form B(c)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .coxeter import CoxeterDatum, ParamPoint
from .inertia import Inertia
from .irreps import WIrrep

DEFAULT_RTOL = 1e-10


class ClearanceError(ValueError):
    pass


# paths --------------------------------------------------------------------

@dataclass
class Segment:
    """z(tau) for tau in [0, 1], with derivative dz(tau)."""

    z: object
    dz: object
    kind: str = "line"


def line(a, b) -> Segment:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return Segment(lambda t: a + t * (b - a), lambda t: b - a, "line")


def half_arc(center, radius: float, u, theta0: float = 0.0, theta1: float = np.pi) -> Segment:
    """center + radius * e^{i theta} u, theta from theta0 to theta1 (u real)."""
    p = np.asarray(center, dtype=complex)
    u = np.asarray(u, dtype=float)
    span = theta1 - theta0

    def z(t):
        return p + radius * np.exp(1j * (theta0 + span * t)) * u

    def dz(t):
        return 1j * span * radius * np.exp(1j * (theta0 + span * t)) * u

    return Segment(z, dz, "arc")


def bowed_line(a, b, bow: float, v) -> Segment:
    """a + t(b - a) + i bow sin(pi t) v: a complex detour with real endpoints."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    v = np.asarray(v, dtype=float)
    return Segment(lambda t: a + t * (b - a) + 1j * bow * np.sin(np.pi * t) * v,
                   lambda t: (b - a) + 1j * bow * np.pi * np.cos(np.pi * t) * v, "bowed")


@dataclass
class Path:
    segments: list
    basepoint: np.ndarray | None = None

    def then(self, other: "Path") -> "Path":
        return Path(self.segments + other.segments, self.basepoint)

    def sample(self, k: int = 64) -> np.ndarray:
        ts = np.linspace(0.0, 1.0, k)
        return np.array([seg.z(t) for seg in self.segments for t in ts])

    def clearance(self, datum: CoxeterDatum, k: int = 256) -> float:
        pts = self.sample(k)
        R = datum.roots_float
        norms = np.linalg.norm(R, axis=1)
        return float((np.abs(pts @ R.T) / norms).min())


@dataclass
class Transport:
    matrix: np.ndarray
    steps: int
    error_estimate: float


# connections --------------------------------------------------------------

class Connection:
    """Matrix-valued 1-form  sum_s c_s (d alpha_s / alpha_s) M_s  on h_reg.

    kind "KZ":        M_s = -(1 - s)   (flat sections of d + sum c_s dalpha/alpha (1 - s))
    kind "KZ'":       M_s = s          (flat sections of d - sum c_s dalpha/alpha s)
    """

    def __init__(self, datum: CoxeterDatum, irrep: WIrrep, c, kind: str = "KZ"):
        self.datum = datum
        self.irrep = irrep
        c = ParamPoint.of(datum, c)
        self.c = c
        cvals = np.array([complex(v) for v in c.to_float().values])
        self.roots = datum.roots_float
        self.coef = np.array([cvals[r.cls] for r in datum.reflections])
        d = irrep.dim
        rho = np.array([np.asarray(irrep.matrices_float[r.element], dtype=float) for r in datum.reflections])
        if kind == "KZ":
            self.M = rho - np.eye(d)[None]
        elif kind in ("KZ'", "KZprime", "modified"):
            self.M = rho.astype(complex)
        else:
            raise ValueError(f"unknown connection {kind!r}")
        self.kind = kind
        self.dim = d

    def matrix(self, z, v) -> np.ndarray:
        w = self.coef * (self.roots @ v) / (self.roots @ z)
        return np.tensordot(w, self.M, axes=1)


def transport(datum: CoxeterDatum, irrep: WIrrep, c, path: Path, kind: str = "KZ",
              rtol: float = DEFAULT_RTOL, min_clearance: float = 1e-6, initial=None) -> Transport:
    """Fundamental solution along the path, starting from the identity (or `initial`)."""
    conn = Connection(datum, irrep, c, kind)
    if path.clearance(datum) <= min_clearance:
        raise ClearanceError("path passes too close to a reflection hyperplane")
    d = conn.dim
    F = np.eye(d, dtype=complex) if initial is None else np.asarray(initial, dtype=complex)
    steps, err = 0, 0.0
    for seg in path.segments:
        def rhs(t, y, seg=seg):
            Y = y.reshape(F.shape)
            return (conn.matrix(seg.z(t), seg.dz(t)) @ Y).ravel()
        sol = solve_ivp(rhs, (0.0, 1.0), F.ravel(), method="DOP853", rtol=rtol, atol=rtol * 1e-2)
        if not sol.success:
            raise ArithmeticError(f"transport failed: {sol.message}")
        F = sol.y[:, -1].reshape(F.shape)
        steps += int(sol.t.size)
        err += rtol * float(np.abs(F).max())
    return Transport(F, steps, err)


# braid generators ---------------------------------------------------------

def half_loop_path(datum: CoxeterDatum, i: int, x0=None) -> Path:
    """x0 -> s_i x0 going once positively half around the wall ker alpha_i."""
    x0 = datum.basepoint if x0 is None else np.asarray(x0, dtype=float)
    alpha = datum.simple_roots_float[i]
    na = np.linalg.norm(alpha)
    u = alpha / na
    t = float(alpha @ x0) / na
    if t <= 0:
        raise ValueError("basepoint must lie in the fundamental chamber")
    p = x0 - t * u
    others = [float(abs(r @ p) / np.linalg.norm(r)) for r in datum.roots_float
              if not np.allclose(np.abs(r / np.linalg.norm(r)), np.abs(u))]
    r = 0.5 * min([t] + others)
    return Path([line(x0, p + r * u), half_arc(p, r, u), line(p - r * u, p - t * u)], x0)


def braid_generators(datum: CoxeterDatum, irrep: WIrrep, c, x0=None, kind: str = "KZ",
                     rtol: float = DEFAULT_RTOL) -> list[np.ndarray]:
    """T_i = s_i o (transport along the positive half-loop from x0 to s_i x0)."""
    out = []
    for i in range(datum.rank):
        tr = transport(datum, irrep, c, half_loop_path(datum, i, x0), kind, rtol)
        S = np.asarray(irrep.matrices_float[datum.reflections[i].element], dtype=float)
        out.append(S @ tr.matrix)
    return out


def hecke_parameters(datum: CoxeterDatum, c) -> list[complex]:
    c = ParamPoint.of(datum, c).to_float()
    return [np.exp(-2j * np.pi * complex(c.values[datum.reflections[i].cls])) for i in range(datum.rank)]


@dataclass
class HeckeReport:
    quadratic: list[float]
    braid: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.quadratic + list(self.braid.values()), default=0.0)


def hecke_check(datum: CoxeterDatum, Ts: list, c) -> HeckeReport:
    """||(T_i - 1)(T_i + q_i)|| and the braid relations of length m_ij."""
    q = hecke_parameters(datum, c)
    d = Ts[0].shape[0]
    I = np.eye(d)
    quad = [float(np.linalg.norm((T - I) @ (T + qi * I), 2)) for T, qi in zip(Ts, q)]
    braid = {}
    M = datum.coxeter_matrix
    for i in range(datum.rank):
        for j in range(i + 1, datum.rank):
            m = M[i][j]
            A, B = I.astype(complex), I.astype(complex)
            for k in range(m):
                A = A @ (Ts[i] if k % 2 == 0 else Ts[j])
                B = B @ (Ts[j] if k % 2 == 0 else Ts[i])
            braid[(i, j)] = float(np.linalg.norm(A - B, 2))
    return HeckeReport(quad, braid)


# invariant form -----------------------------------------------------------

@dataclass
class InvariantForm:
    B: np.ndarray
    solution_dim: int
    residual: float
    antihermitian: float
    degenerate: bool
    scaling: str = "trace"  # "frobenius" when Tr B = dim is unattainable


def invariance_residual(B: np.ndarray, Ts: list, Ts_dag: list | None = None) -> float:
    Ts_dag = Ts if Ts_dag is None else Ts_dag
    nb = max(np.linalg.norm(B), 1e-300)
    return max(float(np.linalg.norm(np.linalg.inv(Td).conj().T @ B @ np.linalg.inv(T) - B)) / nb
               for T, Td in zip(Ts, Ts_dag))


def invariant_form_solve(Ts: list, Ts_dag: list | None = None, hermitize: bool = True,
                         sv_threshold: float = 1e-8) -> InvariantForm:
    """Solve T_i'^dagger B T_i = B for all i with Tr B = dim.

    Ts are generators at c, Ts_dag at c^dagger (equal to Ts for real c).
    """
    Ts_dag = Ts if Ts_dag is None else Ts_dag
    d = Ts[0].shape[0]
    I = np.eye(d * d)
    # column-major vec: vec(A^dagger B T) = (T^T kron A^dagger) vec(B)
    rows = [np.kron(T.T, Td.conj().T) - I for T, Td in zip(Ts, Ts_dag)]
    A = np.vstack(rows)
    _, s, vh = np.linalg.svd(A)
    smax = s.max() if s.size else 1.0
    s_full = np.concatenate([s, np.zeros(d * d - s.size)]) if s.size < d * d else s
    # A = kron(...) - I, so singular values are measured against 1 even when A is tiny
    null = vh[s_full <= sv_threshold * max(smax, 1.0)]
    dim = int(null.shape[0])
    if dim == 0:
        raise ArithmeticError("no nonzero invariant form: the linear system is inconsistent")
    trace_row = np.eye(d).ravel(order="F")[None, :]
    scaling = "trace"
    if dim == 1:
        v = null[0].conj()
        tr = complex((trace_row @ v)[0])
        if abs(tr) > 1e-8 * np.linalg.norm(v) * d:
            v = v * (d / tr)
        else:
            # (nearly) traceless: unit Frobenius norm, phase fixed by the largest entry
            k = int(np.argmax(np.abs(v)))
            v = v * (np.sqrt(d) * abs(v[k]) / v[k] / np.linalg.norm(v))
            scaling = "frobenius"
    else:
        # least-norm representative of the null space with the trace normalization
        basis = null.conj().T
        coeff, *_ = np.linalg.lstsq(trace_row @ basis, np.array([d], dtype=complex), rcond=None)
        v = basis @ coeff
    B = v.reshape((d, d), order="F")
    anti = float(np.linalg.norm(B - B.conj().T) / max(np.linalg.norm(B), 1e-300))
    if hermitize:
        B = (B + B.conj().T) / 2
    res = invariance_residual(B, Ts, Ts_dag)
    return InvariantForm(B, dim, res, anti, dim > 1, scaling)


def invariant_form(datum: CoxeterDatum, irrep: WIrrep, c, x0=None, rtol: float = DEFAULT_RTOL) -> InvariantForm:
    c = ParamPoint.of(datum, c)
    Ts = braid_generators(datum, irrep, c, x0, "KZ", rtol)
    Ts_dag = Ts if c.is_real else braid_generators(datum, irrep, c.conj(), x0, "KZ", rtol)
    return invariant_form_solve(Ts, Ts_dag, hermitize=c.is_real)


@dataclass
class KZFormReport:
    inertia: Inertia
    dim_kz_L: int
    margin: float
    eigenvalues: list[float]


def kz_form_on_L(B: np.ndarray, sign_of_normalization: int = 1, rel_tol: float = 1e-7) -> KZFormReport:
    """Inertia of the Hermitian form B on lam / radical, i.e. on KZ(L_c(lam)).

    `sign_of_normalization` multiplies B by the sign of the analytic normalization of K.
    """
    H = (B + B.conj().T) / 2 * sign_of_normalization
    ev = np.linalg.eigvalsh(H)
    scale = max(np.abs(ev).max(), 1e-300)
    nz = np.abs(ev) > rel_tol * scale
    p = int((ev[nz] > 0).sum())
    q = int((ev[nz] < 0).sum())
    margin = float(np.abs(ev[nz]).min() / scale) if nz.any() else 0.0
    return KZFormReport(Inertia(p, q, int((~nz).sum())), p + q, margin, [float(e) for e in ev])
