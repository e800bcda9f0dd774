"""Finite-dimensional H-modules given by generator matrices.

A module stores one matrix per simple reflection ``t_{s_i}`` and one per
simple-coroot coordinate ``x_j``.  Exact modules use numpy object arrays of
Fractions so relations can be checked with zero tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import schur

from .exact import is_exact, qparse, qstr, to_exact
from .hecke import HeckeAlgebra, HeckeElement
from .rootsys import RootSystem
from .spincover import c_sigma, exact_value
from .weyl import GroupTable, multiplicities

__all__ = [
    "ModuleRep",
    "validate_module",
    "one_dimensional",
    "principal_series",
    "casimir_criterion",
    "w_type_bound_report",
    "module_from_json",
]

FLOAT_TOL = 1e-10


def _is_exact_matrix(m: np.ndarray) -> bool:
    return m.dtype == object


def _eye(dim: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((dim, dim), dtype=object)
        out[:] = Fraction(0)
        for i in range(dim):
            out[i, i] = Fraction(1)
        return out
    return np.eye(dim)


def _maxabs(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    if m.dtype == object:
        return float(max(abs(x) for x in m.flat))
    return float(np.abs(m).max())


class ModuleRep:
    """An H-module (pi, X) on C^dim."""

    def __init__(self, hecke: HeckeAlgebra, t: Sequence[np.ndarray], x: Sequence[np.ndarray],
                 form: Optional[np.ndarray] = None, nu: Optional[Sequence] = None, name: str = "module"):
        self.H = hecke
        self.rs = hecke.rs
        self.c = hecke.c
        self.t = [np.asarray(m) for m in t]
        self.x = [np.asarray(m) for m in x]
        if not self.t or not self.x:
            raise ValueError("generator lists must be nonempty")
        dim = self.t[0].shape[0]
        for m in self.t + self.x:
            if m.shape != (dim, dim):
                raise ValueError(f"shape mismatch: expected {(dim, dim)}, got {m.shape}")
        if len(self.t) != self.rs.rank or len(self.x) != self.rs.rank:
            raise ValueError("need one matrix per simple reflection and per coroot coordinate")
        self.dim = dim
        self.form = None if form is None else np.asarray(form)
        self.nu = None if nu is None else tuple(nu)
        self.name = name
        self.exact = all(_is_exact_matrix(m) for m in self.t + self.x)
        self._tw: Optional[List[np.ndarray]] = None

    # -- actions -------------------------------------------------------------
    def numeric(self, m: np.ndarray) -> np.ndarray:
        if m.dtype == object:
            return np.array([[complex(v) for v in row] for row in m]).reshape(m.shape)
        return m.astype(complex)

    @property
    def tw(self) -> List[np.ndarray]:
        """pi(t_w) for every w, indexed like the Weyl group table."""
        if self._tw is None:
            W = self.H.W
            out: List[np.ndarray] = [None] * len(W)  # type: ignore[list-item]
            out[0] = _eye(self.dim, self.exact)
            for i in range(1, len(W)):
                p, g = W.parent[i]
                out[i] = out[p].dot(self.t[g])
            self._tw = out
        return self._tw

    def pi_poly(self, p: Dict[tuple, object]) -> np.ndarray:
        out = _eye(self.dim, self.exact) * 0
        for m, v in p.items():
            term = _eye(self.dim, self.exact)
            for j, e in enumerate(m):
                for _ in range(e):
                    term = term.dot(self.x[j])
            out = out + term * v
        return out

    def pi(self, h: HeckeElement) -> np.ndarray:
        """Action of an element of H (t_w f acts as pi(t_w) pi(f))."""
        out = _eye(self.dim, self.exact) * 0
        by_w: Dict[int, Dict[tuple, object]] = {}
        for (w, m), v in h.terms.items():
            by_w.setdefault(w, {})[m] = v
        for w, p in by_w.items():
            out = out + self.tw[w].dot(self.pi_poly(p))
        return out

    def pi_omega(self, w: Sequence) -> np.ndarray:
        out = _eye(self.dim, self.exact) * 0
        for j, v in enumerate(w):
            if v != 0:
                out = out + self.x[j] * v
        return out

    def pi_omega_tilde(self, w: Sequence) -> np.ndarray:
        return self.pi(self.H.omega_tilde(w))

    def nu_norm2(self):
        if self.nu is None:
            raise ValueError("module has no declared central character")
        return self.rs.inner(self.nu, self.nu)

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        def mat(m):
            return [[qstr(v) if is_exact(v) else _num(v) for v in row] for row in m]

        return {
            "series": self.rs.label,
            "c": self.c.to_json(),
            "dimension": self.dim,
            "t": [mat(m) for m in self.t],
            "x": [mat(m) for m in self.x],
            "form": None if self.form is None else mat(self.form),
            "nu": None if self.nu is None else [qstr(v) for v in self.nu],
            "name": self.name,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _num(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _parse_matrix(rows):
    vals = [[qparse(v) for v in row] for row in rows]
    if all(is_exact(v) for row in vals for v in row):
        out = np.empty((len(vals), len(vals[0]) if vals else 0), dtype=object)
        for i, row in enumerate(vals):
            for j, v in enumerate(row):
                out[i, j] = Fraction(v)
        return out
    return np.array([[complex(v) for v in row] for row in vals])


def module_from_json(data: dict, hecke: HeckeAlgebra) -> ModuleRep:
    form = data.get("form")
    nu = data.get("nu")
    return ModuleRep(
        hecke,
        [_parse_matrix(m) for m in data["t"]],
        [_parse_matrix(m) for m in data["x"]],
        form=None if form is None else _parse_matrix(form),
        nu=None if nu is None else tuple(qparse(v) for v in nu),
        name=data.get("name", "module"),
    )


# ---------------------------------------------------------------------------
# validation


@dataclass
class RelationCheck:
    relation: str
    residual: float
    passed: bool


@dataclass
class ValidationReport:
    checks: List[RelationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[str]:
        return [c.relation for c in self.checks if not c.passed]

    def to_json(self):
        return {"passed": self.passed,
                "checks": [{"relation": c.relation, "residual": c.residual, "passed": c.passed} for c in self.checks]}


def star_generator_images(m: ModuleRep):
    """pi(h*) for h = t_{s_i} and h = x_j."""
    H = m.H
    n = m.rs.rank
    ts = [m.t[i] for i in range(n)]  # t_s* = t_s
    xs = []
    for j in range(n):
        e = tuple(H.one if k == j else 0 * H.one for k in range(n))
        xs.append(m.pi(-H.omega(e) + 2 * H.T_omega(e)))
    return ts, xs


def validate_module(m: ModuleRep, tol: float = FLOAT_TOL) -> ValidationReport:
    rs = m.rs
    n = rs.rank
    H = m.H
    exact = m.exact
    rep = ValidationReport()

    def add(name, resid):
        ok = resid == 0 if exact else resid < tol
        rep.checks.append(RelationCheck(name, resid, bool(ok)))

    eye = _eye(m.dim, exact)
    for i in range(n):
        add(f"t_s{i + 1}^2 = 1", _maxabs(m.t[i].dot(m.t[i]) - eye))
    for i in range(n):
        for j in range(i + 1, n):
            p = eye
            tij = m.t[i].dot(m.t[j])
            for _ in range(rs.coxeter[i][j]):
                p = p.dot(tij)
            add(f"(t_s{i + 1} t_s{j + 1})^{rs.coxeter[i][j]} = 1", _maxabs(p - eye))
    for i in range(n):
        for j in range(i + 1, n):
            add(f"[x{i + 1}, x{j + 1}] = 0", _maxabs(m.x[i].dot(m.x[j]) - m.x[j].dot(m.x[i])))
    P = rs.pairing
    for i in range(n):
        ci = m.c(H.simple[i])
        for j in range(n):
            sx = m.x[j] - m.x[i] * P[i][j]
            lhs = m.x[j].dot(m.t[i]) - m.t[i].dot(sx)
            add(f"cross relation x{j + 1} t_s{i + 1}", _maxabs(lhs - eye * (ci * P[i][j])))
    if m.form is not None:
        F = m.numeric(m.form)
        add("form Hermitian", float(np.abs(F - F.conj().T).max()))
        ts, xs = star_generator_images(m)
        for i in range(n):
            A, B = m.numeric(m.t[i]), m.numeric(ts[i])
            rep.checks.append(_form_check(f"form invariance t_s{i + 1}", F, A, B, tol))
        for j in range(n):
            A, B = m.numeric(m.x[j]), m.numeric(xs[j])
            rep.checks.append(_form_check(f"form invariance x{j + 1}", F, A, B, tol))
    return rep


def _form_check(name, F, A, B, tol):
    r = float(np.abs(F @ A - B.conj().T @ F).max())
    return RelationCheck(name, r, r < tol)


# ---------------------------------------------------------------------------
# constructions


def _exact_matrix(rows) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = Fraction(v)
    return out


def one_dimensional(hecke: HeckeAlgebra, kind: str = "trivial") -> ModuleRep:
    """Trivial (t -> 1, lambda_i = c_i) or Steinberg (t -> -1, lambda_i = -c_i)."""
    if kind not in ("trivial", "steinberg"):
        raise ValueError("kind must be 'trivial' or 'steinberg'")
    rs = hecke.rs
    sign = 1 if kind == "trivial" else -1
    lam = [sign * hecke.c(i) for i in hecke.simple]
    if hecke.exact:
        t = [_exact_matrix([[sign]]) for _ in lam]
        x = [_exact_matrix([[v]]) for v in lam]
        form = _exact_matrix([[1]])
    else:
        t = [np.array([[float(sign)]]) for _ in lam]
        x = [np.array([[float(v)]]) for v in lam]
        form = np.eye(1)
    nu = rs.from_weight(lam)
    return ModuleRep(hecke, t, x, form=form, nu=nu, name=kind)


def principal_series(hecke: HeckeAlgebra, nu: Sequence) -> ModuleRep:
    """X(nu) = H (x)_{S(V^vee)} C_nu on the basis t_w (x) 1, nu in root coordinates."""
    rs = hecke.rs
    W = hecke.W
    nu = tuple(to_exact(v) for v in nu)
    lam = rs.weight(nu)
    exact = hecke.exact and all(is_exact(v) for v in lam)
    N = len(W)
    n = rs.rank

    def blank():
        if exact:
            m = np.empty((N, N), dtype=object)
            m[:] = Fraction(0)
            return m
        return np.zeros((N, N), dtype=complex if any(isinstance(v, complex) for v in lam) else float)

    t = []
    for i in range(n):
        m = blank()
        for w in range(N):
            m[W.left[w][i], w] += 1
        t.append(m)
    x = []
    for j in range(n):
        m = blank()
        mono = tuple(1 if k == j else 0 for k in range(n))
        for w in range(N):
            for (u, mm), v in hecke.commute(mono, w).items():
                m[u, w] += v * hecke.evaluate({mm: 1}, lam)
        x.append(m)
    return ModuleRep(hecke, t, x, nu=nu, name="principal_series")


def recover_nu(m: ModuleRep, seed: int = 0):
    """A dominant representative of the central character from a joint eigenvector."""
    rng = np.random.default_rng(seed)
    r = rng.normal(size=m.rs.rank)
    comb = sum(ri * m.numeric(xj) for ri, xj in zip(r, m.x))
    vals, vecs = np.linalg.eig(comb)
    v = vecs[:, 0]
    lam = [complex(v.conj() @ m.numeric(xj) @ v / (v.conj() @ v)) for xj in m.x]
    lam = [x.real if abs(x.imag) < 1e-9 else x for x in lam]
    # reflect to the dominant chamber
    lam = list(lam)
    P = m.rs.pairing
    for _ in range(1000):
        i = next((k for k, x in enumerate(lam) if complex(x).real < -1e-12), None)
        if i is None:
            break
        a = lam[i]
        lam = [lam[j] - a * P[i][j] for j in range(len(lam))]
    return m.rs.from_weight([float(x) if not isinstance(x, complex) else x for x in lam])


def weight_multiset(m: ModuleRep, seed: int = 0) -> np.ndarray:
    """Generalized joint eigenvalues of the x_j (rows = weights as Dynkin labels).

    A Schur basis of a generic combination of the commuting x_j triangularizes
    all of them at once; the diagonals are the joint weights.
    """
    rng = np.random.default_rng(seed)
    r = rng.normal(size=m.rs.rank)
    xs = [m.numeric(xj).astype(complex) for xj in m.x]
    comb = sum(ri * xj for ri, xj in zip(r, xs))
    _, Q = schur(comb, output="complex")
    rows = np.array([[(Q.conj().T @ xj @ Q)[k, k] for xj in xs] for k in range(m.dim)])
    order = np.lexsort(np.round(rows.real, 7).T[::-1])
    return rows[order]


def orbit_weights(rs: RootSystem, W: GroupTable, nu) -> List[tuple]:
    """Dynkin labels of w nu for every w (duplicates kept)."""
    out = []
    for word in W.words:
        v = tuple(nu)
        for i in reversed(word):
            v = rs.simple_reflection(i, v)
        out.append(rs.weight(v))
    return out


# ---------------------------------------------------------------------------
# unitarity criteria


def casimir_criterion(m: ModuleRep) -> dict:
    """Largest eigenvalue of the form-symmetrized pi(Omega~); a unitary module
    needs (pi(Omega~) x, x) <= 0 for all x."""
    if m.form is None:
        raise ValueError("casimir_criterion needs a declared invariant form")
    F = m.numeric(m.form)
    A = F @ m.numeric(m.pi(m.H.casimir_tilde()))
    herm = (A + A.conj().T) / 2
    L = np.linalg.cholesky(F)
    Li = np.linalg.inv(L)
    ev = np.linalg.eigvalsh(Li @ herm @ Li.conj().T)
    top = float(ev.max())
    return {"max_eigenvalue": top, "fails_necessity": top > 1e-9}


def w_type_bound_report(m: ModuleRep, tol: float = 1e-9) -> dict:
    """For each W-type sigma in X: (<nu,nu>, c(sigma)) and whether <nu,nu> > c(sigma)."""
    if m.form is None:
        raise ValueError("w_type_bound_report needs a declared invariant form")
    W = m.H.W
    ct = W.character_table()
    action = [m.numeric(a) for a in m.tw]
    mult = multiplicities(W, action)
    nn = m.nu_norm2()
    rows = []
    for k, (name, deg, mu) in enumerate(zip(ct.names, ct.degrees, mult)):
        if mu == 0:
            continue
        cs = c_sigma(W, m.rs, m.c, k)["formula"]
        rows.append({
            "name": name, "degree": deg, "multiplicity": mu,
            "nu_norm2": nn, "c_sigma": exact_value(cs),
            "violated": float(nn) > float(cs) + tol,
            "saturated": abs(float(nn) - float(cs)) <= tol,
        })
    return {"nu_norm2": nn, "w_types": rows, "violated": any(r["violated"] for r in rows)}
