"""Dunkl weight function on h_reg: construction from B(c), 2-sided transport, wall analysis, quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm
from scipy.special import gamma as gamma_fn

from .coxeter import CoxeterDatum, ParamPoint, discriminant
from .exact import to_float
from .forms import gaussian_gram, filtered_offsets
from .cherednik import graded_module
from .irreps import WIrrep
from .monodromy import DEFAULT_RTOL, Path, bowed_line, invariant_form, line, transport
from .polys import Poly


class ResonanceError(ArithmeticError):
    pass


@dataclass
class WeightSample:
    x: np.ndarray
    K: np.ndarray
    chamber: int
    accuracy: float


def _c_float(datum: CoxeterDatum, c) -> np.ndarray:
    c = ParamPoint.of(datum, c)
    return np.array([complex(c.values[r.cls]) for r in datum.reflections])


def homogeneity_degree(datum: CoxeterDatum, irrep: WIrrep, c) -> complex:
    """-2 chi(sum_s c_s s)/dim lam."""
    cs = _c_float(datum, c)
    chi = irrep.character
    total = sum(cs[k] * float(chi[r.element]) for k, r in enumerate(datum.reflections))
    return -2 * total / irrep.dim


def generic_direction(rank: int) -> np.ndarray:
    v = np.sqrt(np.arange(2, rank + 2, dtype=float)) + np.arange(rank) * 0.37
    return v / np.linalg.norm(v)


def path_to(datum: CoxeterDatum, x, x0=None, v=None, bow: float | None = None) -> Path:
    """Real segment inside the fundamental chamber, else a complex detour x0 -> x."""
    x0 = datum.basepoint if x0 is None else np.asarray(x0, dtype=float)
    x = np.asarray(x, dtype=float)
    if datum.chamber_element(x) == 0:
        return Path([line(x0, x)], x0)
    v = generic_direction(datum.rank) if v is None else np.asarray(v, dtype=float)
    b = bow if bow is not None else 0.5 * max(np.linalg.norm(x - x0), 1.0)
    return Path([bowed_line(x0, x, b, v)], x0)


def weight_from_monodromy(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray, x, x0=None,
                          v=None, mu: complex = 1.0, rtol: float = DEFAULT_RTOL) -> WeightSample:
    """K(x) = F_{c^dagger}(x)^{dagger,-1} B F_c(x)^{-1} / mu, F the modified-KZ solution from x0."""
    c = ParamPoint.of(datum, c)
    path = path_to(datum, x, x0, v)
    F = transport(datum, irrep, c, path, "KZ'", rtol)
    Fd = F if c.is_real else transport(datum, irrep, c.conj(), path, "KZ'", rtol)
    Finv = np.linalg.inv(F.matrix)
    Fdinv = np.linalg.inv(Fd.matrix)
    K = Fdinv.conj().T @ B @ Finv / mu
    if c.is_real and np.abs(K.imag).max() <= 1e-9 * max(np.abs(K).max(), 1e-300):
        K = K.real
    return WeightSample(np.asarray(x, dtype=float), K, datum.chamber_element(x), F.error_estimate)


def two_sided_rhs(datum: CoxeterDatum, irrep: WIrrep, c):
    cs = _c_float(datum, c)
    R = datum.roots_float
    S = np.array([np.asarray(irrep.matrices_float[r.element], dtype=float) for r in datum.reflections])

    def rhs(z, dz, K):
        w = cs * (R @ dz) / (R @ z)
        M = np.tensordot(w, S, axes=1)
        return -(M @ K + K @ M)
    return rhs


def two_sided_transport(datum: CoxeterDatum, irrep: WIrrep, c, sample: WeightSample, x_new,
                        rtol: float = DEFAULT_RTOL) -> WeightSample:
    """Solve dK + sum_s c_s (dalpha_s/alpha_s)(sK + Ks) = 0 along the segment sample.x -> x_new."""
    a = sample.x
    b = np.asarray(x_new, dtype=float)
    if Path([line(a, b)]).clearance(datum) <= 1e-8:
        raise ValueError("segment crosses a reflection hyperplane; two-sided transport needs a real path")
    rhs = two_sided_rhs(datum, irrep, c)
    K0 = np.asarray(sample.K, dtype=complex)

    def f(t, y):
        return rhs(a + t * (b - a), b - a, y.reshape(K0.shape)).ravel()
    sol = solve_ivp(f, (0.0, 1.0), K0.ravel(), method="DOP853", rtol=rtol, atol=rtol * 1e-2 * max(np.abs(K0).max(), 1e-300))
    K = sol.y[:, -1].reshape(K0.shape)
    if np.abs(K.imag).max() <= 1e-12 * max(np.abs(K).max(), 1e-300):
        K = K.real
    return WeightSample(b, K, datum.chamber_element(b), sample.accuracy + rtol)


@dataclass
class HomogeneityReport:
    slope: float
    expected: float
    deviation: float


def homogeneity_check(samples: list[WeightSample], expected: float) -> HomogeneityReport:
    """Least-squares slope of log||K(t x)|| against log t."""
    ts = np.array([np.linalg.norm(s.x) for s in samples])
    ks = np.array([np.linalg.norm(s.K) for s in samples])
    slope = float(np.polyfit(np.log(ts), np.log(ks), 1)[0])
    expected = float(np.real(expected))
    return HomogeneityReport(slope, expected, abs(slope - expected))


def equivariance_residual(datum: CoxeterDatum, irrep: WIrrep, K_at, x, elements=None) -> float:
    """max_w ||w K(w^{-1} x) w^{-1} - K(x)|| / ||K(x)||, with K_at a callable."""
    Kx = K_at(x)
    worst = 0.0
    for w in (range(datum.order) if elements is None else elements):
        Wm = datum.element_float(w)
        rho = np.asarray(irrep.matrices_float[w], dtype=float)
        y = Wm.T @ np.asarray(x, dtype=float)
        val = rho @ K_at(y) @ rho.T
        worst = max(worst, float(np.linalg.norm(val - Kx) / max(np.linalg.norm(Kx), 1e-300)))
    return worst


# Frobenius solutions near a wall --------------------------------------------

@dataclass
class FrobeniusSeries:
    """F(z1) = Q(z1) z1^a along p + z1 e with e = coroot_i / 2, a = c_i s_i."""

    wall: int
    point: np.ndarray
    direction: np.ndarray
    a: np.ndarray
    coeffs: list
    radius: float
    tail: float
    c: np.ndarray = field(repr=False, default=None)

    def Q(self, z1: complex) -> np.ndarray:
        out = np.zeros_like(self.coeffs[0])
        zp = 1.0
        for p in self.coeffs:
            out = out + p * zp
            zp = zp * z1
        return out

    def power(self, z1: float) -> np.ndarray:
        return expm(self.a * np.log(z1))

    def F(self, z1: float) -> np.ndarray:
        return self.Q(z1) @ self.power(z1)


def wall_point(datum: CoxeterDatum, i: int, x0=None) -> np.ndarray:
    """Orthogonal projection of the basepoint onto the simple wall i (a point of the open face)."""
    x0 = datum.basepoint if x0 is None else np.asarray(x0, dtype=float)
    a = datum.simple_roots_float[i]
    return x0 - (a @ x0) / (a @ a) * a


def frobenius_wall_solution(datum: CoxeterDatum, irrep: WIrrep, c, i: int, N: int = 40,
                            p=None) -> FrobeniusSeries:
    """Series solution of the modified KZ system restricted to the line p + z1 e.

    Coefficients satisfy n p_n - [a, p_n] = sum_{k>=1} a_k p_{n-k}, solved blockwise in the
    +-1 eigenspaces of s_i.
    """
    cs = _c_float(datum, c)
    p = wall_point(datum, i) if p is None else np.asarray(p, dtype=float)
    R = datum.roots_float
    e = datum.coroots_float[i] / 2
    S = [np.asarray(irrep.matrices_float[r.element], dtype=float) for r in datum.reflections]
    ci = cs[i]
    a = ci * S[i]
    d = irrep.dim
    for n in range(1, N + 1):
        if abs(n - 2 * ci) < 1e-12 or abs(n + 2 * ci) < 1e-12:
            raise ResonanceError(f"resonant order n={n} for c_i={ci}")
    ae = R @ e
    ap = R @ p
    others = [k for k in range(len(R)) if k != i]
    # a_{m+1} = sum_{s != s_i} c_s s (-1)^m alpha_s(e)^{m+1} / alpha_s(p)^{m+1}
    A = []
    for m in range(N):
        M = np.zeros((d, d), dtype=complex)
        for k in others:
            if ae[k] != 0:
                M += cs[k] * S[k] * ((-1) ** m) * (ae[k] / ap[k]) ** (m + 1)
        A.append(M)
    Pp = (np.eye(d) + S[i]) / 2
    Pm = (np.eye(d) - S[i]) / 2
    blocks = [(Pp, Pm, 1, 1), (Pp, Pp, 1, 1)]
    coeffs = [np.eye(d, dtype=complex)]
    for n in range(1, N + 1):
        rhs = sum(A[k - 1] @ coeffs[n - k] for k in range(1, n + 1))
        X = np.zeros((d, d), dtype=complex)
        for Ps, sig in ((Pp, 1), (Pm, -1)):
            for Pt, tau in ((Pp, 1), (Pm, -1)):
                # n X - a X + X a on the (sig, tau) block: (n - ci sig + ci tau)
                X += Ps @ rhs @ Pt / (n - ci * sig + ci * tau)
        coeffs.append(X)
    ratios = [abs(ap[k] / ae[k]) for k in others if ae[k] != 0]
    radius = min(ratios) if ratios else np.inf
    tail = float(np.linalg.norm(coeffs[-1]))
    return FrobeniusSeries(i, p, e, a, coeffs, radius, tail, cs)


def frobenius_equivariance(series: FrobeniusSeries, irrep: WIrrep, datum: CoxeterDatum, z1: float) -> float:
    """|| s_i Q(-z1) s_i - Q(z1) ||."""
    S = np.asarray(irrep.matrices_float[datum.reflections[series.wall].element], dtype=float)
    return float(np.linalg.norm(S @ series.Q(-z1) @ S - series.Q(z1)))


@dataclass
class WallReport:
    wall: int
    K_i: np.ndarray
    off_blocks: tuple[float, float]
    relative_off: float
    constancy: float


def wall_matrix(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray, i: int, z1: float,
                series: FrobeniusSeries, series_dag: FrobeniusSeries | None = None) -> np.ndarray:
    """K_i = (F_{c^dagger}(z1))^dagger K(p + z1 e) F_c(z1)."""
    x = series.point + z1 * series.direction
    K = weight_from_monodromy(datum, irrep, c, B, x).K
    Fd = (series_dag or series).F(z1)
    return Fd.conj().T @ K @ series.F(z1)


def asymptotic_invariance_check(datum: CoxeterDatum, irrep: WIrrep, c, i: int, B: np.ndarray | None = None,
                                N: int = 40, z1_fracs=(0.15, 0.3)) -> WallReport:
    """Norms of the s_i-off-diagonal blocks K_i^{1,-1}, K_i^{-1,1} of the wall transfer matrix."""
    c = ParamPoint.of(datum, c)
    if B is None:
        B = invariant_form(datum, irrep, c).B
    ser = frobenius_wall_solution(datum, irrep, c, i, N)
    ser_d = ser if c.is_real else frobenius_wall_solution(datum, irrep, c.conj(), i, N)
    reach = min(ser.radius, 4 * np.linalg.norm(datum.basepoint - ser.point))
    mats = [wall_matrix(datum, irrep, c, B, i, f * reach, ser, ser_d) for f in z1_fracs]
    Ki = mats[0]
    S = np.asarray(irrep.matrices_float[datum.reflections[i].element], dtype=float)
    d = irrep.dim
    Pp, Pm = (np.eye(d) + S) / 2, (np.eye(d) - S) / 2
    off1 = float(np.linalg.norm(Pp @ Ki @ Pm))
    off2 = float(np.linalg.norm(Pm @ Ki @ Pp))
    nk = max(np.linalg.norm(Ki), 1e-300)
    const = max(float(np.linalg.norm(M - Ki) / nk) for M in mats)
    return WallReport(i, Ki, (off1, off2), max(off1, off2) / nk, const)


# quadrature -----------------------------------------------------------------

def delta_shift(datum: CoxeterDatum, c) -> int:
    """Least N >= 0 with 2N - 2 max|c_s| > -1."""
    cmax = float(np.abs(_c_float(datum, c)).max())
    N = 0
    while 2 * N - 2 * cmax <= -1:
        N += 1
    return N


def radial_moment(p: complex, rank: int) -> complex:
    """int_0^infty r^(p + rank - 1) e^{-r^2/2} dr."""
    s = (p + rank) / 2
    return 2 ** (s - 1) * gamma_fn(s)


def _gl(n: int):
    return np.polynomial.legendre.leggauss(n)


@dataclass
class ChamberNodes:
    """Unit-sphere nodes of the fundamental chamber with quadrature weights and K values."""

    points: np.ndarray
    weights: np.ndarray
    K: np.ndarray


def chamber_rays(datum: CoxeterDatum) -> tuple[float, float]:
    """Angles (lo, hi) of the two walls bounding the fundamental chamber in rank 2."""
    x0 = datum.basepoint
    phi0 = math.atan2(x0[1], x0[0])
    angles = []
    for a in datum.simple_roots_float:
        d = np.array([-a[1], a[0]])
        for cand in (d, -d):
            ang = math.atan2(cand[1], cand[0])
            diff = (ang - phi0 + math.pi) % (2 * math.pi) - math.pi
            if abs(diff) < math.pi / 2 + 1e-9:
                angles.append(phi0 + diff)
                break
    lo, hi = sorted(angles)
    return lo, hi


def chamber_nodes(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray, N_shift: int = 0,
                  panel_nodes: int = 24, rtol: float = 1e-11, decay_tol: float = 1e-13) -> ChamberNodes:
    """Quadrature nodes on the chamber arc, graded geometrically toward both walls.

    K is carried along the arc by the two-sided ODE in the variable u = -log(distance to wall),
    where the singular wall behaviour becomes exponential decay.
    """
    if datum.rank != 2:
        raise ValueError("chamber quadrature is implemented for rank 2")
    lo, hi = chamber_rays(datum)
    mid = 0.5 * (lo + hi)
    xm = np.array([math.cos(mid), math.sin(mid)])
    Km = np.asarray(weight_from_monodromy(datum, irrep, c, B, xm).K, dtype=complex)
    cvals = _c_float(datum, c)
    cs = np.abs(cvals)
    R = datum.roots_float
    Smats = np.array([np.asarray(irrep.matrices_float[r.element], dtype=float) for r in datum.reflections])
    rate = max(1.0 - 2 * cs.max() + 2 * N_shift, 0.05)
    xgl, wgl = _gl(panel_nodes)
    pts, wts, Ks = [], [], []
    for end in (lo, hi):
        sigma = 1.0 if mid > end else -1.0
        u0 = -math.log(abs(mid - end))
        u1 = u0 + (-math.log(decay_tol)) / rate
        dvec = np.array([math.cos(end), math.sin(end)])
        dperp = np.array([-math.sin(end), math.cos(end)])
        A = R @ dvec
        A[np.abs(A) < 1e-12 * np.linalg.norm(R, axis=1)] = 0.0  # roots of the wall itself
        Bp = R @ dperp

        def f(u, y, A=A, Bp=Bp, sigma=sigma):
            # x = cos(delta) d + sin(delta) d_perp with delta = sigma e^{-u}
            delta = sigma * math.exp(-u)
            cd, sd = math.cos(delta), math.sin(delta)
            w = cvals * (-delta) * (-sd * A + cd * Bp) / (cd * A + sd * Bp)
            M = np.tensordot(w, Smats, axes=1)
            Y = y.reshape(Km.shape)
            return (-(M @ Y + Y @ M)).ravel()
        sol = solve_ivp(f, (u0, u1), Km.ravel(), method="DOP853", rtol=rtol,
                        atol=rtol * 1e-3 * np.abs(Km).max(), dense_output=True)
        if not sol.success:
            raise ArithmeticError(f"arc transport failed: {sol.message}")
        edges = np.arange(u0, u1 + 1.0, 1.0)
        for a, b in zip(edges[:-1], edges[1:]):
            us = 0.5 * (b - a) * xgl + 0.5 * (a + b)
            ws = 0.5 * (b - a) * wgl
            Y = sol.sol(us)
            for k, u in enumerate(us):
                phi = end + sigma * math.exp(-u)
                pts.append([math.cos(phi), math.sin(phi)])
                wts.append(ws[k] * math.exp(-u))
                Ks.append(Y[:, k].reshape(Km.shape))
    return ChamberNodes(np.array(pts), np.array(wts), np.array(Ks))


def _homogeneous_parts(P: list[Poly]) -> dict[int, list[Poly]]:
    """Split a lam-vector of polynomials into homogeneous pieces by degree."""
    nv = P[0].nvars
    degs = sorted({sum(k) for comp in P for k in comp.terms})
    out = {}
    for dg in degs:
        out[dg] = [Poly({k: v for k, v in comp.terms.items() if sum(k) == dg}, nv) for comp in P]
    return out


def _eval_vec(P: list[Poly], X: np.ndarray) -> np.ndarray:
    """(m, dim) values of a lam-vector of polynomials at points X (m, rank)."""
    return np.stack([comp.eval_many(X) if comp.terms else np.zeros(X.shape[0]) for comp in P], axis=1)


def integral_pairing(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray, P: list[Poly], Q: list[Poly],
                     N_shift: int = 0, nodes: ChamberNodes | None = None, mu: complex = 1.0) -> complex:
    """int Q(x)^dagger delta^{2N}(x) K(x) P(x) e^{-|x|^2/2} dx with K = K_raw / mu."""
    l = datum.rank
    kappa = homogeneity_degree(datum, irrep, c)
    disc = discriminant(datum)
    nS = len(datum.reflections)
    if l == 1:
        Kone = weight_from_monodromy(datum, irrep, c, B, np.array([1.0])).K
        pts = np.array([[1.0]])
        wts = np.array([1.0])
        Ks = np.array([Kone])
    else:
        nodes = nodes or chamber_nodes(datum, irrep, c, B, N_shift)
        pts, wts, Ks = nodes.points, nodes.weights, nodes.K
    dsq = disc.eval_many(pts) ** (2 * N_shift)
    Pp, Qp = _homogeneous_parts(P), _homogeneous_parts(Q)
    total = 0.0 + 0.0j
    for w in range(datum.order):
        Wm = datum.element_float(w)
        rho = np.asarray(irrep.matrices_float[w], dtype=float)
        Y = pts @ Wm.T
        KW = np.einsum("ij,mjk,lk->mil", rho, Ks, rho)
        for da, Pa in Pp.items():
            pv = _eval_vec(Pa, Y)
            for db, Qb in Qp.items():
                qv = _eval_vec(Qb, Y)
                ang = np.einsum("m,m,mi,mij,mj->", wts, dsq, qv.conj(), KW, pv)
                total += ang * radial_moment(da + db + 2 * N_shift * nS + kappa, l)
    return total / mu


def poly_vector_coordinates(datum: CoxeterDatum, irrep: WIrrep, P: list[Poly], n: int) -> np.ndarray:
    """Coordinates of sum_a P_a (x) v_a in the basis of degrees <= n."""
    mod = graded_module(datum, irrep)
    offs = filtered_offsets(mod, n)
    vec = np.zeros(offs[-1], dtype=complex)
    for a, comp in enumerate(P):
        for k, v in comp.terms.items():
            dg = sum(k)
            if dg > n:
                raise ValueError("polynomial degree exceeds the cutoff")
            idx = mod.mono_index(dg)[k]
            vec[offs[dg] + idx * irrep.dim + a] += complex(v)
    return vec


def delta_times(datum: CoxeterDatum, P: list[Poly], N: int) -> list[Poly]:
    disc = discriminant(datum)
    out = []
    for comp in P:
        q = comp
        for _ in range(N):
            q = q * disc
        out.append(q)
    return out


def gaussian_value(datum: CoxeterDatum, irrep: WIrrep, c, P: list[Poly], Q: list[Poly], N_shift: int = 0) -> complex:
    """gamma(delta^N P, delta^N Q) from the exact Gaussian Gram."""
    dP, dQ = delta_times(datum, P, N_shift), delta_times(datum, Q, N_shift)
    n = max(max((comp.degree() for comp in dP if comp.terms), default=0),
            max((comp.degree() for comp in dQ if comp.terms), default=0))
    G = to_float(gaussian_gram(datum, irrep, c, n))
    u = poly_vector_coordinates(datum, irrep, dP, n)
    v = poly_vector_coordinates(datum, irrep, dQ, n)
    return complex(v.conj() @ G @ u)


def basis_vector(datum: CoxeterDatum, irrep: WIrrep, a: int, poly: Poly | None = None) -> list[Poly]:
    nv = datum.rank
    poly = Poly.constant(1, nv) if poly is None else poly
    return [poly if b == a else Poly({}, nv) for b in range(irrep.dim)]


@dataclass
class Normalization:
    mu: complex
    N_shift: int
    consistency: float  # relative deviation of the moment matrix from mu * Gram
    method: str


def normalization(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray, N_shift: int | None = None,
                  nodes: ChamberNodes | None = None) -> Normalization:
    """Scalar mu with int delta^{2N} K_raw e^{-|x|^2/2} = mu * gamma(delta^N v_a, delta^N v_b)."""
    if datum.rank > 2:
        raise NotImplementedError("normalization by quadrature is implemented for rank <= 2")
    N = delta_shift(datum, c) if N_shift is None else N_shift
    if datum.rank == 2 and nodes is None:
        nodes = chamber_nodes(datum, irrep, c, B, N)
    d = irrep.dim
    I = np.zeros((d, d), dtype=complex)
    G = np.zeros((d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            P, Q = basis_vector(datum, irrep, a), basis_vector(datum, irrep, b)
            I[b, a] = integral_pairing(datum, irrep, c, B, P, Q, N, nodes)
            G[b, a] = gaussian_value(datum, irrep, c, P, Q, N)
    mu = complex(np.vdot(G, I) / np.vdot(G, G))
    cons = float(np.linalg.norm(I - mu * G) / max(np.linalg.norm(I), 1e-300))
    return Normalization(mu, N, cons, "analytic-radial" if datum.rank == 1 else "chamber-quadrature")


@dataclass
class QuadratureResult:
    value: complex
    exact: complex
    relative_error: float
    N_shift: int


def quadrature_verify(datum: CoxeterDatum, irrep: WIrrep, c, P: list[Poly], Q: list[Poly],
                      N_shift: int | None = None, B: np.ndarray | None = None,
                      norm: Normalization | None = None, nodes: ChamberNodes | None = None) -> QuadratureResult:
    """Compare gamma(delta^N P, delta^N Q) with the normalized integral of K."""
    c = ParamPoint.of(datum, c)
    if not c.is_real:
        raise ValueError("quadrature verification needs a real parameter")
    if datum.rank > 2:
        raise NotImplementedError("quadrature is implemented for rank <= 2")
    if B is None:
        B = invariant_form(datum, irrep, c).B
    N = delta_shift(datum, c) if N_shift is None else N_shift
    if datum.rank == 2 and nodes is None:
        nodes = chamber_nodes(datum, irrep, c, B, N)
    norm = norm or normalization(datum, irrep, c, B, N, nodes)
    val = integral_pairing(datum, irrep, c, B, P, Q, N, nodes, norm.mu)
    ex = gaussian_value(datum, irrep, c, P, Q, N)
    # Cauchy-Schwarz scale, so that pairs with gamma(P, Q) = 0 still get a meaningful error
    scale = max(abs(ex), math.sqrt(abs(gaussian_value(datum, irrep, c, P, P, N))
                                   * abs(gaussian_value(datum, irrep, c, Q, Q, N))), 1e-300)
    return QuadratureResult(val, ex, float(abs(val - ex) / scale), N)


@dataclass
class SupportReport:
    chamber_norms: dict
    full_support: bool
    equivariance: float


def support_report(datum: CoxeterDatum, irrep: WIrrep, c, B: np.ndarray | None = None, seed: int = 3) -> SupportReport:
    """Sample K once per chamber and check it is nonzero everywhere and W-equivariant."""
    c = ParamPoint.of(datum, c)
    if B is None:
        B = invariant_form(datum, irrep, c).B
    rng = np.random.default_rng(seed)
    y = datum.basepoint + 0.1 * rng.standard_normal(datum.rank)
    while datum.chamber_element(y) != 0:
        y = datum.basepoint + 0.05 * rng.standard_normal(datum.rank)
    Ky = weight_from_monodromy(datum, irrep, c, B, y).K
    norms, worst = {}, 0.0
    for w in range(datum.order):
        x = datum.element_float(w) @ y
        Kx = weight_from_monodromy(datum, irrep, c, B, x).K
        rho = np.asarray(irrep.matrices_float[w], dtype=float)
        worst = max(worst, float(np.linalg.norm(rho @ Ky @ rho.T - Kx) / np.linalg.norm(Ky)))
        norms[w] = float(np.linalg.norm(Kx))
    scale = max(norms.values())
    return SupportReport(norms, all(v > 1e-8 * scale for v in norms.values()), worst)


# trivial-representation closed form -------------------------------------------

def power_product(datum: CoxeterDatum, c, x) -> float:
    """prod_s |alpha_s(x)|^{-2 c_s}."""
    cs = _c_float(datum, c).real
    vals = np.abs(datum.roots_float @ np.asarray(x, dtype=float))
    return float(np.prod(vals ** (-2 * cs)))


def gaussian_mass(datum: CoxeterDatum, c) -> float:
    """Z = int prod_s |alpha_s(x)|^{-2 c_s} e^{-|x|^2/2} dx by adaptive quadrature (rank <= 2)."""
    from scipy.integrate import quad
    cs = _c_float(datum, c).real
    if np.any(cs >= 0.5):
        raise ValueError("the Gaussian mass diverges unless every c_s < 1/2")
    total_deg = -2 * float(cs.sum())
    radial = radial_moment(total_deg, datum.rank).real
    if datum.rank == 1:
        return 2 * radial * power_product(datum, c, [1.0])
    if datum.rank != 2:
        raise NotImplementedError("gaussian_mass is implemented for rank <= 2")
    # each wall is the zero line of one root; quad's algebraic weight absorbs the endpoint powers
    exps = {}
    for r, cr in zip(datum.roots_float, cs):
        w = float(math.atan2(r[0], -r[1]) % math.pi)
        exps[round(w, 12)] = (w, -2 * float(cr))
    breaks = sorted([(w + k * math.pi, e) for w, e in exps.values() for k in (0, 1)])
    breaks.append((breaks[0][0] + 2 * math.pi, breaks[0][1]))
    ang = 0.0
    for (a, ea), (b, eb) in zip(breaks, breaks[1:]):
        def smooth(t, a=a, b=b, ea=ea, eb=eb):
            # Clenshaw-Curtis nodes include the endpoints, where the quotient is 0/0
            t = min(max(t, a + 1e-9 * (b - a)), b - 1e-9 * (b - a))
            return power_product(datum, c, [math.cos(t), math.sin(t)]) / ((t - a) ** ea * (b - t) ** eb)
        val, _ = quad(smooth, a, b, weight="alg", wvar=(ea, eb), epsabs=0, epsrel=1e-12, limit=200)
        ang += val
    return ang * radial


def trivial_weight(datum: CoxeterDatum, c, x) -> float:
    """Closed form Z^{-1} prod_s |alpha_s(x)|^{-2 c_s} of the normalized weight for the trivial irrep."""
    return power_product(datum, c, x) / gaussian_mass(datum, c)
