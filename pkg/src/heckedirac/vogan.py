"""The differential d(a) = D a - (-1)^k a D on H (x) C(V^vee), its graded
version on C[W] x S(V^vee) (x) C(V^vee), Koszul cohomology, the kernel/image
decompositions and the element zeta(z).

An element is a dict ``{(w, monomial, blade): coefficient}``.  The graded
algebra is the Hecke algebra with c = 0, so d-bar is d computed there.
Group elements of W~ enter through their rational projective keys; only
spans and conjugations use them, where the normalization cancels.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exact as ex
from .clifford import coroot_algebra, transpose
from .hecke import HeckeAlgebra, HeckeElement, poly_mul
from .rootsys import RootSystem, mat_inv
from .spincover import SpinCover, generate_spin_cover, omega_wtilde
from .weyl import GroupTable

__all__ = [
    "TensorAlgebra",
    "differential_d",
    "graded_differential",
    "koszul_cohomology",
    "graded_decomposition_check",
    "filtered_checks",
    "solve_zeta",
    "cubic_invariant",
    "graded_algebra",
    "dbar_squared_residual",
    "odd_derivation_failures",
    "reflection_kernel_failures",
    "class_sum_elements",
    "span_rank",
    "span_basis",
    "ZetaResult",
    "zeta_vs_omega_wtilde",
    "zeta_scalar_on",
]

Key = Tuple[int, Tuple[int, ...], int]
Elem = Dict[Key, object]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def monomials(n: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(n), degree):
        m = [0] * n
        for j in combo:
            m[j] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


class TensorAlgebra:
    """H (x) C(V^vee) (ordinary tensor product of algebras)."""

    def __init__(self, hecke: HeckeAlgebra, cover: SpinCover | None = None):
        self.H = hecke
        self.rs = hecke.rs
        self.W = hecke.W
        self.n = self.rs.rank
        self.cl = coroot_algebra(self.rs)
        self.cover = cover if cover is not None else generate_spin_cover(self.rs)
        self.exact = hecke.exact
        self.graded = hecke.graded
        self._dirac: Optional[Elem] = None

    # -- arithmetic ---------------------------------------------------------
    def clean(self, a: dict) -> Elem:
        if self.exact:
            return {k: v for k, v in a.items() if v != 0}
        return {k: v for k, v in a.items() if abs(v) > 1e-13}

    def add(self, *elems: Elem, scales: Sequence | None = None) -> Elem:
        out: dict = {}
        for i, e in enumerate(elems):
            s = 1 if scales is None else scales[i]
            for k, v in e.items():
                out[k] = out.get(k, 0) + s * v
        return self.clean(out)

    def scale(self, a: Elem, s) -> Elem:
        return self.clean({k: v * s for k, v in a.items()})

    def mul(self, a: Elem, b: Elem) -> Elem:
        H, W, cl = self.H, self.W, self.cl
        if a and b:
            da = max(sum(m) for _, m, _ in a)
            db = max(sum(m) for _, m, _ in b)
            if da + db > H.degree_cap:
                from .hecke import DegreeCapExceeded

                raise DegreeCapExceeded(f"degree {da + db} exceeds cap {H.degree_cap}")
        out: dict = {}
        for (u, m, A), va in a.items():
            for (v, g, B), vb in b.items():
                blade, s = cl.blade_product(A, B)
                for (v2, m2), vc in H.commute(m, v).items():
                    key = (W.mul(u, v2), tuple(x + y for x, y in zip(m2, g)), blade)
                    out[key] = out.get(key, 0) + va * vb * vc * s
        return self.clean(out)

    def from_hecke(self, h: HeckeElement, blade: int = 0, coef=1) -> Elem:
        return self.clean({(w, m, blade): v * coef for (w, m), v in h.terms.items()})

    def from_clifford(self, c, w: int = 0) -> Elem:
        zero = self.H.zero_mono
        return self.clean({(w, zero, b): v for b, v in c.coeffs.items()})

    def one(self) -> Elem:
        return {(0, self.H.zero_mono, 0): self.H.one}

    def parity(self, a: Elem) -> Optional[int]:
        ps = {_popcount(b) & 1 for _, _, b in a}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def degree(self, a: Elem) -> int:
        return max((sum(m) for _, m, _ in a), default=0)

    # -- distinguished elements --------------------------------------------
    def dirac(self) -> Elem:
        """D = sum_k u~_k (x) u_k / q_k over the orthogonal basis."""
        if self._dirac is None:
            parts = []
            for k, (u, q) in enumerate(zip(self.cl.basis, self.cl.q)):
                parts.append(self.from_hecke(self.H.omega_tilde(u), 1 << k, 1 / q if not self.exact else Fraction(1) / q))
            self._dirac = self.add(*parts)
        return self._dirac

    def rho(self, g: int) -> Elem:
        """t_{p(g)} (x) key(g): rho(g) up to the positive scalar sqrt(N(key))."""
        return self.from_clifford(self.cover.key(g), self.cover.proj[g])

    def rho_inv(self, g: int) -> Elem:
        key = self.cover.key(g)
        inv = transpose(key) / key.norm()
        return self.from_clifford(inv, self.W.inverses[self.cover.proj[g]])

    def conj(self, g: int, a: Elem) -> Elem:
        return self.mul(self.mul(self.rho(g), a), self.rho_inv(g))

    def p_triv(self, a: Elem) -> Elem:
        """Average of rho(w~) a rho(w~)^-1 over one lift per w."""
        lifts = [self.cover.lift(w) for w in range(len(self.W))]
        s = Fraction(1, len(self.W)) if self.exact else 1.0 / len(self.W)
        return self.scale(self.add(*[self.conj(g, a) for g in lifts]), s)

    def p_sgn(self, a: Elem) -> Elem:
        lifts = [self.cover.lift(w) for w in range(len(self.W))]
        s = Fraction(1, len(self.W)) if self.exact else 1.0 / len(self.W)
        return self.scale(self.add(*[self.conj(g, a) for g in lifts],
                                   scales=[self.cover.sgn(g) for g in lifts]), s)

    def basis(self, degree: int, parity: Optional[int] = None, w_only: Optional[int] = None) -> List[Elem]:
        one = self.H.one
        out = []
        ws = range(len(self.W)) if w_only is None else [w_only]
        for w in ws:
            for m in monomials(self.n, degree):
                for b in range(1 << self.n):
                    if parity is None or _popcount(b) % 2 == parity:
                        out.append({(w, m, b): one})
        return out

    def filtered_basis(self, max_degree: int, parity: Optional[int] = None) -> List[Elem]:
        out = []
        for d in range(max_degree + 1):
            out.extend(self.basis(d, parity))
        return out

    def random_element(self, rng: random.Random, max_degree: int, parity: Optional[int] = None, terms: int = 3) -> Elem:
        out = {}
        for _ in range(terms):
            w = rng.randrange(len(self.W))
            d = rng.randint(0, max_degree)
            m = [0] * self.n
            for _ in range(d):
                m[rng.randrange(self.n)] += 1
            b = rng.randrange(1 << self.n)
            if parity is not None and _popcount(b) % 2 != parity:
                b ^= 1
            out[(w, tuple(m), b)] = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        return self.clean(out)


def differential_d(T: TensorAlgebra, a: Elem) -> Elem:
    """d(a) = D a - (-1)^k a D, applied to each Clifford-parity part."""
    D = T.dirac()
    even = {k: v for k, v in a.items() if _popcount(k[2]) % 2 == 0}
    odd = {k: v for k, v in a.items() if _popcount(k[2]) % 2 == 1}
    parts = []
    if even:
        parts += [T.mul(D, even), T.scale(T.mul(even, D), -1)]
    if odd:
        parts += [T.mul(D, odd), T.mul(odd, D)]
    return T.add(*parts) if parts else {}


def graded_differential(T: TensorAlgebra, a: Elem) -> Elem:
    if not T.graded:
        raise ValueError("graded_differential needs the c = 0 (graded) algebra")
    return differential_d(T, a)


def graded_algebra(rs: RootSystem, degree_cap: int = 8, cover: SpinCover | None = None,
                   W: GroupTable | None = None) -> TensorAlgebra:
    H = HeckeAlgebra(rs, rs.zero_parameters(), W=W if W is not None else (cover.weyl if cover else None),
                     degree_cap=degree_cap)
    return TensorAlgebra(H, cover)


# ---------------------------------------------------------------------------
# exact linear algebra on elements


class Coordinates:
    """Assigns column indices to basis keys on the fly."""

    def __init__(self):
        self.index: Dict[Key, int] = {}

    def row(self, a: Elem) -> Dict[int, object]:
        out = {}
        for k, v in a.items():
            j = self.index.get(k)
            if j is None:
                j = self.index[k] = len(self.index)
            out[j] = v
        return out

    @property
    def ncols(self) -> int:
        return len(self.index)


def span_rank(elems: Sequence[Elem], coords: Coordinates | None = None) -> int:
    coords = coords or Coordinates()
    rows = [coords.row(e) for e in elems]
    if not rows:
        return 0
    if all(ex.is_exact(v) for r in rows for v in r.values()):
        return ex.rank(rows, coords.ncols)
    m = np.zeros((len(rows), coords.ncols))
    for i, r in enumerate(rows):
        for j, v in r.items():
            m[i, j] = v
    return int(np.linalg.matrix_rank(m, tol=1e-9 * max(1.0, np.abs(m).max())))


def span_basis(elems: Sequence[Elem]) -> List[Elem]:
    """A basis (as elements) of the span, via exact RREF."""
    coords = Coordinates()
    rows = [coords.row(e) for e in elems]
    red, _ = ex.rref(rows, coords.ncols)
    inv = {j: k for k, j in coords.index.items()}
    return [{inv[j]: v for j, v in r.items()} for r in red]


# ---------------------------------------------------------------------------
# graded checks


def koszul_cohomology(rs: RootSystem, window: int, T: TensorAlgebra | None = None) -> dict:
    """Cohomology of d-bar restricted to S(V^vee) (x) C(V^vee), degrees 0..window-1."""
    T = T or graded_algebra(rs)
    dims = []
    details = []
    prev_rank = 0  # rank of d-bar on degree j-1
    for j in range(window):
        basis = T.basis(j, w_only=0)
        images = [graded_differential(T, b) for b in basis]
        r = span_rank(images)
        ker = len(basis) - r
        dims.append(ker - prev_rank)
        details.append({"degree": j, "dim": len(basis), "kernel": ker, "image_in": prev_rank})
        prev_rank = r
    return {"cohomology": dims, "degrees": details}


def dbar_squared_residual(T: TensorAlgebra, max_degree: int) -> int:
    """Number of degree <= max_degree basis elements with d-bar(d-bar(a)) != 0."""
    bad = 0
    for d in range(max_degree + 1):
        for b in T.basis(d):
            if graded_differential(T, graded_differential(T, b)):
                bad += 1
    return bad


def odd_derivation_failures(T: TensorAlgebra, pairs: int, seed: int, max_degree: int = 1) -> int:
    rng = random.Random(seed)
    bad = 0
    for _ in range(pairs):
        k = rng.randrange(2)
        a = T.random_element(rng, max_degree, parity=k)
        b = T.random_element(rng, max_degree)
        lhs = graded_differential(T, T.mul(a, b))
        rhs = T.add(T.mul(graded_differential(T, a), b), T.mul(a, graded_differential(T, b)),
                    scales=[1, (-1) ** k])
        if T.add(lhs, rhs, scales=[1, -1]):
            bad += 1
    return bad


def reflection_kernel_failures(T: TensorAlgebra) -> int:
    """d-bar(t_{s_a} (x) a^vee) = 0 for every positive root."""
    bad = 0
    for i in T.rs.positive_roots:
        a = T.from_clifford(T.cl.from_coroot(T.rs.coroots[i]), T.H.refl[i])
        if graded_differential(T, a):
            bad += 1
    return bad


def group_span(T: TensorAlgebra) -> List[Elem]:
    return [T.rho(g) for g in range(len(T.cover))]


def class_sum_elements(T: TensorAlgebra) -> List[Tuple[int, Elem, object]]:
    """For every genuine class pair {C, -C} (C != -C): (class index, B_C, N(rep)).

    B_C = sum_{g in C} key(g) sqrt(N(rep)/N(g)) is rational and equals
    sqrt(N(rep)) rho(sum of C).
    """
    cv = T.cover
    g = cv.group
    out = []
    seen = set()
    for ci, cls in enumerate(g.classes):
        neg = g.class_of[cv.neg(cls[0])]
        if neg == ci or neg in seen:
            continue
        seen.add(ci)
        nrep = cv.norm(cls[0])
        parts, scales = [], []
        for x in cls:
            parts.append(T.rho(x))
            scales.append(ex.sqrt_scalar(nrep / cv.norm(x)))
        out.append((ci, T.add(*parts, scales=scales), nrep))
    return out


def graded_decomposition_check(rs: RootSystem, N: int, T: TensorAlgebra | None = None) -> dict:
    """ker(d-bar) = im(d-bar) + rho-bar(C[W~]) in degrees <= N-1, and the
    triv/sgn refinement ker(d-bar^triv) = im(d-bar^sgn) + rho-bar(C[W~]^W~)."""
    if N < 2:
        raise ValueError("window N must be >= 2")
    T = T or graded_algebra(rs, degree_cap=N + 2)
    rows = []
    ok = True
    rho_span = group_span(T)
    rho_dim = span_rank(rho_span)
    rho_in_kernel = all(not graded_differential(T, r) for r in rho_span)
    prev_images: List[Elem] = []
    for j in range(N):
        basis = T.basis(j)
        images = [graded_differential(T, b) for b in basis]
        rank_j = span_rank(images)
        ker = len(basis) - rank_j
        im_dim = span_rank(prev_images) if prev_images else 0
        r_dim = rho_dim if j == 0 else 0
        gens = prev_images + (rho_span if j == 0 else [])
        joint = span_rank(gens) if gens else 0
        row = {"degree": j, "kernel": ker, "image": im_dim, "group_span": r_dim,
               "sum_direct": joint == im_dim + r_dim, "accounted": ker == im_dim + r_dim}
        ok &= row["sum_direct"] and row["accounted"]
        rows.append(row)
        prev_images = images
    # triv / sgn refinement
    refine = _triv_sgn_refinement(T, N, rho_span)
    return {
        "window": N,
        "rows": rows,
        "group_span_dim": rho_dim,
        "group_span_in_kernel": rho_in_kernel,
        "decomposition_holds": bool(ok and rho_in_kernel and rho_dim == len(T.W)),
        "refinement": refine,
    }


def _triv_sgn_refinement(T: TensorAlgebra, N: int, rho_span: List[Elem]) -> dict:
    triv_basis: List[List[Elem]] = []
    sgn_basis: List[List[Elem]] = []
    idem_ok = True
    orth_ok = True
    for j in range(N):
        basis = T.basis(j)
        pt = [T.p_triv(b) for b in basis]
        ps = [T.p_sgn(b) for b in basis]
        tb = span_basis(pt)
        sb = span_basis(ps)
        for e in tb:
            idem_ok &= not T.add(T.p_triv(e), e, scales=[1, -1])
            orth_ok &= not T.p_sgn(e)
        for e in sb:
            idem_ok &= not T.add(T.p_sgn(e), e, scales=[1, -1])
            orth_ok &= not T.p_triv(e)
        triv_basis.append(tb)
        sgn_basis.append(sb)
    center = [e for _, e, _ in class_sum_elements(T)]
    center_dim = span_rank(center) if center else 0
    rows = []
    ok = True
    maps_ok = True
    for j in range(N):
        dt = [graded_differential(T, e) for e in triv_basis[j]]
        for img in dt:
            maps_ok &= not T.add(T.p_sgn(img), img, scales=[1, -1])
        ker = len(triv_basis[j]) - span_rank(dt)
        if j > 0:
            ds = [graded_differential(T, e) for e in sgn_basis[j - 1]]
            for img in ds:
                maps_ok &= not T.add(T.p_triv(img), img, scales=[1, -1])
            im = span_rank(ds)
        else:
            im = 0
        cz = center_dim if j == 0 else 0
        row = {"degree": j, "triv_dim": len(triv_basis[j]), "sgn_dim": len(sgn_basis[j]),
               "kernel_triv": ker, "image_sgn": im, "center_span": cz, "accounted": ker == im + cz}
        ok &= row["accounted"]
        rows.append(row)
    return {"rows": rows, "holds": bool(ok and maps_ok), "maps_triv_to_sgn": bool(maps_ok),
            "projectors_idempotent": bool(idem_ok), "projectors_orthogonal": bool(orth_ok),
            "center_dim": center_dim}


# ---------------------------------------------------------------------------
# filtered checks


def filtered_checks(hecke: HeckeAlgebra, N: int, cover: SpinCover | None = None) -> dict:
    """(d^triv)^2 = (d^sgn)^2 = 0 on degree <= N-2 basis, d maps triv <-> sgn,
    rho(C[W~]^W~) in ker d, d(Omega (x) 1) = 0, d(rho(f_a)) = 0."""
    T = TensorAlgebra(hecke, cover)
    out = {}
    Om = T.from_hecke(hecke.casimir())
    out["d_casimir_zero"] = not differential_d(T, Om)
    out["d_rho_f_zero"] = all(not differential_d(T, T.rho(T.cover.root_element(i))) for i in T.rs.positive_roots)
    out["center_in_kernel"] = all(not differential_d(T, e) for _, e, _ in class_sum_elements(T))
    sq_ok = True
    swap_ok = True
    for j in range(max(N - 1, 1)):
        for b in T.basis(j):
            for proj, other in ((T.p_triv, T.p_sgn), (T.p_sgn, T.p_triv)):
                e = proj(b)
                if not e:
                    continue
                de = differential_d(T, e)
                swap_ok &= not T.add(other(de), de, scales=[1, -1])
                if j <= N - 2:
                    sq_ok &= not differential_d(T, de)
    out["d_squared_zero"] = bool(sq_ok)
    out["d_swaps_triv_sgn"] = bool(swap_ok)
    w1 = T.from_clifford(T.cl.basis_vector(0))
    out["d_of_vector_nonzero"] = bool(differential_d(T, w1))
    return out


# ---------------------------------------------------------------------------
# zeta


def cubic_invariant(hecke: HeckeAlgebra) -> HeckeElement:
    """sum_w (w . varpi_1^vee)^3 with varpi_1^vee the first fundamental coweight."""
    rs = hecke.rs
    Pinv = mat_inv(rs.pairing)
    w = [Pinv[k][0] for k in range(rs.rank)]  # (alpha_i, w) = delta_i1
    lin = {tuple(1 if k == j else 0 for k in range(rs.rank)): w[j] for j in range(rs.rank) if w[j] != 0}
    cube = poly_mul(poly_mul(lin, lin), lin)
    return hecke.poly(hecke.invariant_poly(cube))


@dataclass
class ZetaResult:
    coefficients: Dict[int, object]  # W~ class index -> coefficient of the class sum
    residual: float
    unique: bool
    b_equals_a_feasible: bool
    a: Elem
    b: Elem
    exact: bool
    norms: Dict[int, object]  # class index -> N(representative key)


def _solve(columns: List[Elem], rhs: Elem, exact: bool):
    coords = Coordinates()
    cols = [coords.row(c) for c in columns]
    b = coords.row(rhs)
    nrows = coords.ncols
    # pad rows for equations with only rhs entries
    full_rows: List[Dict[int, object]] = [dict() for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            full_rows[i][j] = v
    rhs_vec = [b.get(i, 0) for i in range(nrows)]
    if exact:
        x = ex.solve(full_rows, rhs_vec, len(cols))
        null = ex.nullspace(full_rows, len(cols))
        if x is None:
            return None, None, float("inf")
        resid = 0.0
        return x, null, resid
    A = np.zeros((nrows, len(cols)))
    for j, col in enumerate(cols):
        for i, v in col.items():
            A[i, j] = float(v)
    bb = np.array([float(v) for v in rhs_vec])
    x, *_ = np.linalg.lstsq(A, bb, rcond=None)
    resid = float(np.abs(A @ x - bb).max()) if nrows else 0.0
    u, s, vh = np.linalg.svd(A)
    r = int(np.sum(s > 1e-9 * max(1.0, s[0] if s.size else 1.0)))
    null = [dict(enumerate(v)) for v in vh[r:]]
    return list(x), null, resid


def solve_zeta(hecke: HeckeAlgebra, z: HeckeElement, cover: SpinCover | None = None,
               force_float: bool = False) -> ZetaResult:
    """Solve z (x) 1 = rho(zeta) + D a + b D with a, b odd in the sgn part of
    degree <= deg z - 1; zeta ranges over genuine class sums."""
    T = TensorAlgebra(hecke, cover)
    gens = [hecke.t(hecke.W.gen_index[k]) for k in range(hecke.n)] + [hecke.x(j) for j in range(hecke.n)]
    if any(not (z * g - g * z).is_zero(1e-12) for g in gens):
        raise ValueError("z is not central")
    deg = z.degree
    if deg + 1 > hecke.degree_cap:
        raise ValueError(f"degree cap {hecke.degree_cap} too small for deg z = {deg}")
    exact = T.exact and not force_float
    D = T.dirac()
    cls = class_sum_elements(T)
    if deg == 0:
        unknown_basis: List[Elem] = []
    else:
        unknown_basis = span_basis([T.p_sgn(b) for b in T.filtered_basis(deg - 1, parity=1)])
    cols = [e for _, e, _ in cls]
    cols += [T.mul(D, a) for a in unknown_basis]
    cols += [T.mul(b, D) for b in unknown_basis]
    rhs = T.from_hecke(z)
    x, null, resid = _solve(cols, rhs, exact)
    if x is None:
        raise ArithmeticError("no solution within the degree cap")
    k = len(cls)
    m = len(unknown_basis)
    unique = all(all(abs(v.get(i, 0)) < 1e-9 for i in range(k)) for v in null)
    # b = a system
    cols_eq = [e for _, e, _ in cls] + [T.add(T.mul(D, a), T.mul(a, D)) for a in unknown_basis]
    x2, _, resid2 = _solve(cols_eq, rhs, exact)
    feas = x2 is not None and resid2 < 1e-8
    coeffs = {}
    norms = {}
    for (ci, _, nrep), y in zip(cls, x[:k]):
        coeffs[ci] = y * ex.sqrt_scalar(nrep) if exact else float(y) * float(np.sqrt(float(nrep)))
        norms[ci] = nrep
    a = T.add(*unknown_basis, scales=x[k:k + m]) if m else {}
    b = T.add(*unknown_basis, scales=x[k + m:]) if m else {}
    # residual recomputed from the solution
    total = T.add(*(cols + [rhs]), scales=list(x) + [-1])
    res = max((abs(float(v)) for v in total.values()), default=0.0)
    return ZetaResult({c: v for c, v in coeffs.items() if v != 0}, max(res, resid), unique, feas, a, b, exact, norms)


def zeta_vs_omega_wtilde(hecke: HeckeAlgebra, result: ZetaResult, cover: SpinCover) -> dict:
    """Compare the genuine part of zeta(Omega) with that of Omega_W~."""
    z = omega_wtilde(cover, hecke.c).total()
    g = cover.group
    expected = {}
    for ci, cls in enumerate(g.classes):
        neg = g.class_of[cover.neg(cls[0])]
        if neg == ci:
            continue
        rep = cls[0]
        val = z.get(rep, 0) - z.get(cover.neg(rep), 0)
        expected[ci] = val
    # zeta is determined modulo the nongenuine part, so compare z_C - z_{-C}
    diffs = []
    exact_match = True
    for ci in result.norms:
        e = expected.get(ci, 0)
        got = result.coefficients.get(ci, 0)
        d = got - e
        diffs.append(abs(complex(d)))
        if not (ex.is_exact(got) and ex.is_exact(e) and d == 0):
            exact_match = False
    return {"max_difference": max(diffs, default=0.0), "exact_match": exact_match}


def zeta_scalar_on(dctx, result: ZetaResult) -> np.ndarray:
    """Matrix of zeta acting on X (x) S through rho-hat."""
    g = dctx.cover.group
    out = np.zeros((dctx.dim, dctx.dim), dtype=complex)
    for ci, coef in result.coefficients.items():
        for x in g.classes[ci]:
            out += complex(coef) * dctx.rho(x)
    return out
