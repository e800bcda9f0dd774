"""The Dirac operator D on X (x) S and everything computed from it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .clifford import SpinModule, coroot_algebra, coroot_spin_module
from .hmod import ModuleRep
from .orbits import in_orbit, length_table, nu_regular, subregular
from .rootsys import ConfigurationError
from .spincover import SpinCover, c_sigma_tilde, exact_value, generate_spin_cover, omega_wtilde

__all__ = [
    "DiracContext",
    "build_dirac",
    "dirac_square_residual",
    "dirac_cohomology",
    "isotypic_report",
    "dirac_inequality_report",
    "vogan_check",
]

RANK_TOL = 1e-8


@dataclass
class Subspace:
    """Orthonormal basis (columns) of a subspace plus its W~-character."""

    basis: np.ndarray
    character: Optional[np.ndarray] = None  # values on class representatives

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass
class Cohomology:
    kernel: Subspace
    image: Subspace
    intersection: Subspace
    section: Subspace  # a complement of ker cap im inside ker
    character: np.ndarray  # chi_ker - chi_(ker cap im)

    @property
    def dim(self) -> int:
        return self.kernel.dim - self.intersection.dim


class DiracContext:
    def __init__(self, X: ModuleRep, S: SpinModule, cover: SpinCover):
        if S.n != X.rs.rank:
            raise ValueError("spin module rank does not match the root system")
        self.X = X
        self.S = S
        self.cover = cover
        self.rs = X.rs
        self.alg = coroot_algebra(self.rs)
        self.dim = X.dim * S.dim
        self.D = self._dirac("orthogonal")
        self._rho: Dict[int, np.ndarray] = {}
        self._omega_wt = None

    # -- construction ----------------------------------------------------------
    def _gamma_vector(self, w) -> np.ndarray:
        return self.S.gamma(self.alg.from_coroot(w))

    def _dirac(self, kind: str) -> np.ndarray:
        H = self.X.H
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for a, b in H.dual_pairs(kind):
            out += np.kron(self.X.numeric(self.X.pi(H.omega_tilde(a))), self._gamma_vector(b))
        return out

    def dirac_alternative(self) -> np.ndarray:
        """D from the simple-coroot dual pair (for the basis-independence check)."""
        return self._dirac("simple")

    def rho(self, g: int) -> np.ndarray:
        """pi(t_{p(g)}) (x) gamma(g) for an element g of W~."""
        m = self._rho.get(g)
        if m is None:
            cv = self.cover
            m = np.kron(self.X.numeric(self.X.tw[cv.proj[g]]), cv.spin_matrix(self.S, g))
            self._rho[g] = m
        return m

    def omega_wtilde_operator(self) -> np.ndarray:
        if self._omega_wt is None:
            z = omega_wtilde(self.cover, self.X.c)
            self._omega_wt = z.matrix({g: self.rho(g) for g in z.total()})
        return self._omega_wt

    def casimir_operator(self) -> np.ndarray:
        return np.kron(self.X.numeric(self.X.pi(self.X.H.casimir())), np.eye(self.S.dim))

    def expected_square(self) -> np.ndarray:
        return -self.casimir_operator() + self.omega_wtilde_operator()

    # -- invariants -------------------------------------------------------------
    def basis_residual(self) -> float:
        return float(np.abs(self.D - self.dirac_alternative()).max())

    def sgn_equivariance_residual(self) -> float:
        """max over generators f_alpha of |rho(f) D + D rho(f)| (sgn(f) = -1)."""
        cv = self.cover
        res = 0.0
        for k in range(cv.group.ngens):
            g = cv.group.gen_index[k]
            r = self.rho(g)
            res = max(res, float(np.abs(r @ self.D - cv.sgn(g) * self.D @ r).max()))
        return res

    def self_adjoint_residual(self) -> Optional[float]:
        if self.X.form is None:
            return None
        F = np.kron(self.X.numeric(self.X.form), self.S.form)
        return float(np.abs(F @ self.D - self.D.conj().T @ F).max())

    def character_of(self, basis: np.ndarray) -> np.ndarray:
        """W~-character of the invariant subspace spanned by orthonormal columns."""
        g = self.cover.group
        vals = np.zeros(len(g.classes), dtype=complex)
        if basis.shape[1] == 0:
            return vals
        for k, rep in enumerate(g.class_reps):
            vals[k] = np.trace(basis.conj().T @ self.rho(rep) @ basis)
        return vals

    def full_character(self) -> np.ndarray:
        return self.character_of(np.eye(self.dim, dtype=complex))

    def isotypic_projector(self, char_index: int) -> np.ndarray:
        g = self.cover.group
        ct = g.character_table()
        chi = ct.values[char_index]
        p = sum(np.conj(chi[g.class_of[x]]) * self.rho(x) for x in range(len(g)))
        return p * ct.degrees[char_index] / len(g)


def build_dirac(X: ModuleRep, S: SpinModule | None = None, cover: SpinCover | None = None,
                chirality: int = 1) -> DiracContext:
    if S is None:
        S = coroot_spin_module(X.rs, chirality)
    if cover is None:
        cover = generate_spin_cover(X.rs)
    return DiracContext(X, S, cover)


def dirac_square_residual(ctx: DiracContext) -> float:
    return float(np.abs(ctx.D @ ctx.D - ctx.expected_square()).max())


def _orth(cols: np.ndarray) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    if s.size == 0:
        return cols[:, :0]
    r = int(np.sum(s > RANK_TOL * max(1.0, s[0])))
    return u[:, :r]


def dirac_cohomology(ctx: DiracContext, rel_tol: float = RANK_TOL, seed: int | None = None) -> Cohomology:
    """H^D = ker D / (ker D cap im D) with ranks from relative singular values.

    The section is the orthogonal complement of ker cap im inside ker; with a
    seed, a randomly perturbed (non-orthogonal) complement is used instead, so
    the section-independence of the character can be checked.
    """
    D = ctx.D
    u, s, vh = np.linalg.svd(D)
    top = s[0] if s.size and s[0] > 0 else 1.0
    r = int(np.sum(s > rel_tol * top))
    ker = vh[r:].conj().T
    im = u[:, :r]
    if ker.shape[1] and im.shape[1]:
        m = ker.conj().T @ im
        uu, ss, _ = np.linalg.svd(m)
        k = int(np.sum(ss > 1 - 1e-6))
        inter = ker @ uu[:, :k]
    else:
        inter = np.zeros((ctx.dim, 0), dtype=complex)
    # complement of inter in ker
    if inter.shape[1]:
        proj = np.eye(ctx.dim) - inter @ inter.conj().T
        comp = _orth(proj @ ker)
    else:
        comp = ker
    if seed is not None and comp.shape[1] and inter.shape[1]:
        rng = np.random.default_rng(seed)
        comp = comp + inter @ (rng.normal(size=(inter.shape[1], comp.shape[1])))
    chi_ker = ctx.character_of(ker)
    chi_int = ctx.character_of(inter)
    return Cohomology(
        kernel=Subspace(ker, chi_ker),
        image=Subspace(im),
        intersection=Subspace(inter, chi_int),
        section=Subspace(comp),
        character=chi_ker - chi_int,
    )


def isotypic_report(ctx: DiracContext, character: np.ndarray, guard: float = 1e-4) -> List[dict]:
    """Decompose a W~-character into irreducibles: [{name, degree, mult, genuine, c_value}]."""
    g = ctx.cover.group
    ct = g.character_table()
    sizes = np.array(g.class_sizes)
    names = ctx.cover.character_names()
    out = []
    for k, (row, d) in enumerate(zip(ct.values, ct.degrees)):
        m = np.sum(sizes * character * np.conj(row)) / len(g)
        mi = int(round(m.real))
        if abs(m - mi) > guard:
            raise ArithmeticError(f"non-integral multiplicity {m} for {names[k]}")
        if mi:
            out.append({
                "name": names[k], "degree": d, "mult": mi,
                "genuine": ctx.cover.genuine[k],
                "c_value": exact_value(c_sigma_tilde(ctx.cover, ctx.X.c, k)["formula"]),
                "index": k,
            })
    total = sum(r["mult"] * r["degree"] for r in out)
    if abs(total - character[g.class_of[g.identity]].real) > guard:
        raise ArithmeticError("multiplicities do not account for the dimension")
    return out


def isotypic_square_residual(ctx: DiracContext) -> float:
    """On every sigma~-isotypic part of X (x) S, D^2 = -<nu,nu> + c(sigma~)."""
    nn = float(ctx.X.nu_norm2())
    D2 = ctx.D @ ctx.D
    res = 0.0
    for row in isotypic_report(ctx, ctx.full_character()):
        P = ctx.isotypic_projector(row["index"])
        res = max(res, float(np.abs(D2 @ P - (float(row["c_value"]) - nn) * P).max()))
    return res


def _regular_bound(rs):
    try:
        return nu_regular(rs).norm2
    except ConfigurationError:
        return None


def dirac_inequality_report(ctx: DiracContext, tol: float = 1e-9) -> dict:
    """For each sigma~ in X (x) S: <nu,nu> <= c(sigma~)?  Plus the regular and
    (type A) subregular bound flags."""
    X = ctx.X
    if X.nu is None:
        raise ValueError("dirac_inequality_report needs a declared central character")
    nn = X.nu_norm2()
    rows = []
    for r in isotypic_report(ctx, ctx.full_character()):
        cv = r["c_value"]
        rows.append({
            "name": r["name"], "degree": r["degree"], "mult": r["mult"], "c_value": cv,
            "violated": float(nn) > float(cv) + tol,
            "saturated": abs(float(nn) - float(cv)) <= tol,
        })
    uniform = len(set(X.c.values.values())) == 1 and all(v == 1 for v in X.c.values.values())
    reg = _regular_bound(ctx.rs) if uniform else None
    summary = {
        "nu_norm2": nn,
        "violated": any(r["violated"] for r in rows),
        "exceeds_regular_bound": None if reg is None else float(nn) > float(reg) + tol,
        "regular_bound": reg,
    }
    if uniform and ctx.rs.series == "A" and X.name not in ("trivial", "steinberg"):
        sr = subregular(ctx.rs).norm2
        summary["subregular_bound"] = sr
        summary["exceeds_subregular_bound"] = float(nn) > float(sr) + tol
    else:
        summary["subregular_bound"] = "unsupported" if ctx.rs.series != "A" else None
    return {"isotypics": rows, "summary": summary}


def vogan_check(ctx: DiracContext, coh: Cohomology | None = None, tol: float = 1e-8) -> dict:
    """For each sigma~ in H^D(X): <nu,nu> = c(sigma~), and nu in W.nu_e for an
    orbit of the same length (type A tables, otherwise the regular orbit)."""
    X = ctx.X
    coh = coh if coh is not None else dirac_cohomology(ctx)
    if coh.dim == 0:
        return {"status": "vacuous", "dim_HD": 0, "entries": []}
    nn = X.nu_norm2()
    W = X.H.W
    uniform = all(v == 1 for v in X.c.values.values())
    try:
        table = length_table(ctx.rs) if uniform else []
        partial = ctx.rs.series != "A"
    except ConfigurationError:
        table, partial = [], True
    entries = []
    for r in isotypic_report(ctx, coh.character):
        cv = r["c_value"]
        ok_len = abs(float(nn) - float(cv)) <= tol
        matches = [o for o in table if abs(float(o.norm2) - float(cv)) <= tol]
        orbit_ok = None
        label = None
        if matches:
            for o in matches:
                if in_orbit(ctx.rs, W, X.nu, o.nu):
                    orbit_ok, label = True, o.label
                    break
            else:
                orbit_ok, label = False, matches[0].label
        entries.append({
            "name": r["name"], "mult": r["mult"], "c_value": cv, "nu_norm2": nn,
            "length_ok": ok_len, "orbit": label, "orbit_ok": orbit_ok,
        })
    status = "pass" if all(e["length_ok"] and e["orbit_ok"] is not False for e in entries) else "fail"
    return {"status": status, "dim_HD": coh.dim, "partial": partial, "entries": entries}
