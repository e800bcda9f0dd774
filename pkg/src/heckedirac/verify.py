"""Identity suites behind ``verify``: one function per suite, each returning
a list of check records {name, anchor, status, residual, data}."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import exact as ex
from . import vogan as vg
from .clifford import (clifford_mul, coroot_spin_module, pin_check, coroot_algebra)
from .dirac import (build_dirac, dirac_cohomology, dirac_inequality_report, dirac_square_residual,
                    isotypic_square_residual, vogan_check)
from .hecke import HeckeAlgebra, HeckeElement, commutator
from .hmod import casimir_criterion, one_dimensional, principal_series
from .orbits import in_orbit, length_table, nu_regular
from .rootsys import ParameterFunction, RootSystem
from .spincover import (SpinCover, c_sigma_tilde, exact_value, generate_spin_cover, omega_wtilde,
                        r2_circ)
from .weyl import GroupTable

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    anchor: str
    status: str
    residual: object = 0
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        r = self.residual
        if isinstance(r, Fraction):
            r = ex.qstr(r)
        elif isinstance(r, float):
            r = float(f"{r:.3e}")
        return {"name": self.name, "anchor": self.anchor, "status": self.status,
                "residual": r, "data": jsonable(self.data)}


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return ex.qstr(x)
    if isinstance(x, (np.floating, float)):
        return float(f"{float(x):.12g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return jsonable(x.real) if abs(x.imag) < 1e-12 else [jsonable(x.real), jsonable(x.imag)]
    return x


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


class Setup:
    """Shared, lazily built objects for one (root system, parameters) run."""

    def __init__(self, rs: RootSystem, c: ParameterFunction, seed: int = 0, tol: float = 1e-9,
                 degree: int = 3):
        self.rs, self.c, self.seed, self.tol, self.degree = rs, c, seed, tol, degree
        self._cover: Optional[SpinCover] = None
        self._H: Optional[HeckeAlgebra] = None

    @property
    def cover(self) -> SpinCover:
        if self._cover is None:
            self._cover = generate_spin_cover(self.rs)
        return self._cover

    @property
    def W(self) -> GroupTable:
        return self.cover.weyl

    @property
    def H(self) -> HeckeAlgebra:
        if self._H is None:
            self._H = HeckeAlgebra(self.rs, self.c, W=self.W)
        return self._H

    @property
    def exact(self) -> bool:
        return self.H.exact

    def chiralities(self):
        return [1, -1] if self.rs.rank % 2 else [1]

    def random_nus(self, count: int = 20):
        rng = np.random.default_rng(self.seed)
        return [tuple(float(v) for v in rng.normal(size=self.rs.rank)) for _ in range(count)]

    def modules(self, count: int = 20):
        H = self.H
        out = [one_dimensional(H, "trivial"), one_dimensional(H, "steinberg")]
        out += [principal_series(H, nu) for nu in self.random_nus(count)]
        return out


def _skipped(name: str, anchor: str, why: str) -> Check:
    return Check(name, anchor, SKIP, 0, {"reason": why})


# ---------------------------------------------------------------------------
# hecke: algebra identities (exact)


def _w_on_root(rs, word, v):
    for i in reversed(word):
        v = rs.simple_reflection(i, v)
    return v


def _w_on_coroot(rs, word, w):
    for i in reversed(word):
        w = rs.simple_coreflection(i, w)
    return w


def _is_positive(v) -> bool:
    return all(x >= 0 for x in v)


def conjugation_formula_residual(H: HeckeAlgebra) -> int:
    """Count of (w, simple coroot) where t_w w t_w^-1 differs from
    w(w) + sum_{b > 0, w b < 0} c_b (b, w) t_{s_{w b}}."""
    rs, W = H.rs, H.W
    bad = 0
    for w in range(len(W)):
        word = W.words[w]
        winv = W.inverses[w]
        for j in range(rs.rank):
            om = tuple(rs.one if k == j else 0 * rs.one for k in range(rs.rank))
            lhs = H.t(w) * H.omega(om) * H.t(winv)
            rhs = H.omega(_w_on_coroot(rs, word, om))
            for b in rs.positive_roots:
                wb = _w_on_root(rs, word, rs.roots[b])
                if not _is_positive(wb):
                    coef = H.c(b) * rs.pair(rs.roots[b], om)
                    if coef != 0:
                        rhs = rhs + H.t(H.refl[rs.index(wb)], coef)
            if not (lhs - rhs).is_zero():
                bad += 1
    return bad


def tt_commutator_formula(H: HeckeAlgebra, om1, om2) -> HeckeElement:
    rs = H.rs
    quarter = Fraction(1, 4) if H.exact else 0.25
    out = HeckeElement(H, {})
    for a, b in r2_circ(rs, include_diagonal=True):
        ra, rb = rs.roots[a], rs.roots[b]
        v = H.c(a) * H.c(b) * (rs.pair(ra, om1) * rs.pair(rb, om2) - rs.pair(rb, om1) * rs.pair(ra, om2))
        if v != 0:
            out = out + H.t(H.W.mul(H.refl[a], H.refl[b]), quarter * v)
    return out


def hecke_suite(st: Setup) -> List[Check]:
    names = [
        ("conjugation_formula", "t_w w t_w^-1 = w(w) + sum_{b>0, wb<0} c_b (b,w) t_{s_wb}"),
        ("casimir_central", "Omega is central"),
        ("casimir_basis_independent", "Omega independent of the dual bases"),
        ("omega_tilde_skew", "w~* = -w~"),
        ("omega_tilde_equivariant", "t_w w~ t_w^-1 = (w(w))~"),
        ("omega_tilde_commutator", "[w~_1, w~_2] = -[T_1, T_2]"),
        ("T_commutator_formula", "[T_1, T_2] = 1/4 sum_{R2o} c_a c_b ((a,w1)(b,w2) - (b,w1)(a,w2)) t_a t_b"),
        ("casimir_tilde_theorem", "Omega~ = Omega - sum T_i T^i = Omega - Omega_W"),
        ("associativity", "(ab)c = a(bc) on random elements"),
        ("star_antiautomorphism", "(ab)* = b* a*, a** = a"),
    ]
    if not st.rs.exact:
        return [_skipped(n, a, "exactness-tagged; root system is floating point only") for n, a in names]
    H, rs = st.H, st.rs
    out: List[Check] = []
    n = rs.rank
    basis = [tuple(rs.one if k == j else 0 * rs.one for k in range(n)) for j in range(n)]

    bad = conjugation_formula_residual(H)
    out.append(Check(*names[0], _status(bad == 0), bad, {"group_order": len(H.W)}))

    Om = H.casimir()
    out.append(Check(*names[1], _status(H.is_central(Om)), 0 if H.is_central(Om) else 1))
    diff = Om - H.casimir("orthogonal")
    out.append(Check(*names[2], _status(diff.is_zero()), diff.max_abs()))

    bad = sum(1 for om in basis if not (H.omega_tilde(om).star() + H.omega_tilde(om)).is_zero())
    out.append(Check(*names[3], _status(bad == 0), bad))

    bad = 0
    for w in range(len(H.W)):
        for om in basis:
            lhs = H.t(w) * H.omega_tilde(om) * H.t(H.W.inverses[w])
            rhs = H.omega_tilde(_w_on_coroot(rs, H.W.words[w], om))
            bad += not (lhs - rhs).is_zero()
    out.append(Check(*names[4], _status(bad == 0), bad))

    bad_c = bad_t = 0
    for i in range(n):
        for j in range(n):
            a, b = basis[i], basis[j]
            c1 = commutator(H.omega_tilde(a), H.omega_tilde(b))
            c2 = commutator(H.T_omega(a), H.T_omega(b))
            bad_c += not (c1 + c2).is_zero()
            bad_t += not (c2 - tt_commutator_formula(H, a, b)).is_zero()
    out.append(Check(*names[5], _status(bad_c == 0), bad_c))
    out.append(Check(*names[6], _status(bad_t == 0), bad_t))

    Omt = H.casimir_tilde()
    r1 = Omt - Om + H.sum_TT()
    r2 = Omt - Om + H.omega_W()
    ok = r1.is_zero() and r2.is_zero()
    out.append(Check(*names[7], _status(ok), max(r1.max_abs(), r2.max_abs())))

    rng = random.Random(st.seed)
    bad = 0
    for _ in range(20):
        a, b, c = (H.random_element(rng, 1) for _ in range(3))
        bad += not ((a * b) * c - a * (b * c)).is_zero()
    out.append(Check(*names[8], _status(bad == 0), bad, {"triples": 20}))

    bad = 0
    for _ in range(20):
        a, b = H.random_element(rng, 1), H.random_element(rng, 1)
        bad += not ((a * b).star() - b.star() * a.star()).is_zero()
        bad += not (a.star().star() - a).is_zero()
    out.append(Check(*names[9], _status(bad == 0), bad, {"pairs": 20}))
    return out


# ---------------------------------------------------------------------------
# spin: Clifford algebra, spin cover, Dirac operator


def spin_suite(st: Setup) -> List[Check]:
    rs, cover = st.rs, st.cover
    out: List[Check] = []
    tol = 1e-12

    res_rel = res_herm = 0.0
    dims = {}
    for ch in st.chiralities():
        S = coroot_spin_module(rs, ch)
        res_rel = max(res_rel, S.relation_residual())
        res_herm = max(res_herm, S.hermitian_residual())
        dims[S.label] = S.dim
    ok_dims = all(d == 2 ** (rs.rank // 2) for d in dims.values()) and len(dims) == (2 if rs.rank % 2 else 1)
    out.append(Check("spin_relations", "gamma(w)gamma(w') + gamma(w')gamma(w) = -2<w,w'>",
                     _status(res_rel < tol), res_rel, {"dimensions": dims}))
    out.append(Check("spin_hermitian", "<gamma(a)s, s'> = <s, gamma(a^t)s'>", _status(res_herm < tol), res_herm))
    out.append(Check("spin_dimension", "dim S = 2^[n/2], two modules iff n odd", _status(ok_dims), 0, {"dimensions": dims}))

    sq = 0.0
    pin_ok = True
    proj = 0.0
    for i in rs.positive_roots:
        f = cover.pin_vector(i)
        sq = max(sq, float((clifford_mul(f, f) + f.alg.one * 1).max_abs()))
        pin_ok &= pin_check(f)
        M = coroot_algebra(rs).projection_coroot_matrix(f)
        R = rs.reflection_matrix(i)
        proj = max(proj, max(abs(complex(M[r][k] - R[r][k])) for r in range(rs.rank) for k in range(rs.rank)))
    out.append(Check("f_alpha_square", "f_a^2 = -1", _status(sq < tol), sq))
    out.append(Check("f_alpha_pin", "f_a in Pin, p(f_a) = s_a", _status(pin_ok and proj < 1e-10), proj))
    wr = cover.wrel_residual()
    out.append(Check("f_relation", "f_b f_a = -f_a f_g, g = s_a(b)", _status(wr < tol), wr))

    order_ok = len(cover) == 2 * len(st.W)
    kernel = [g for g in range(len(cover)) if cover.proj[g] == 0]
    out.append(Check("cover_order", "|W~| = 2|W|, ker p = {+1, -1}",
                     _status(order_ok and sorted(kernel) == sorted([0, cover.minus_one])), 0,
                     {"order": len(cover), "weyl_order": len(st.W)}))

    z = omega_wtilde(cover, st.c)
    cr = z.central_residual()
    out.append(Check("omega_wtilde_central", "Omega_W~ central in C[W~]", _status(cr < 1e-10), cr))

    agree = off = 0.0
    values = []
    for k, gen in enumerate(cover.genuine):
        r = c_sigma_tilde(cover, st.c, k)
        agree = max(agree, r["agreement"])
        off = max(off, r["off_scalar_residual"])
        if gen:
            values.append(exact_value(r["formula"]))
    out.append(Check("c_sigma_tilde_routes", "c(sigma~) by character formula = eigenvalue on regular rep",
                     _status(agree < 1e-8 and off < 1e-8), max(agree, off),
                     {"genuine_values": sorted(values, key=float, reverse=True)}))

    d2 = basis_r = sgn_r = sa = dzero = 0.0
    count = 0
    for ch in st.chiralities():
        S = coroot_spin_module(rs, ch)
        for X in st.modules():
            ctx = build_dirac(X, S, cover)
            d2 = max(d2, dirac_square_residual(ctx))
            basis_r = max(basis_r, ctx.basis_residual())
            sgn_r = max(sgn_r, ctx.sgn_equivariance_residual())
            if X.name in ("trivial", "steinberg"):
                dzero = max(dzero, float(np.abs(ctx.D).max()))
                r = ctx.self_adjoint_residual()
                sa = max(sa, r if r is not None else 0.0)
            count += 1
    out.append(Check("dirac_square", "D^2 = -Omega (x) 1 + rho(Omega_W~)", _status(d2 < st.tol), d2, {"modules": count}))
    out.append(Check("dirac_basis_independent", "D independent of the dual bases", _status(basis_r < 1e-10), basis_r))
    out.append(Check("dirac_sgn_equivariance", "rho(w~) D = sgn(w~) D rho(w~)", _status(sgn_r < 1e-10), sgn_r))
    out.append(Check("dirac_self_adjoint", "D self-adjoint for the tensor form", _status(sa < 1e-10), sa))
    out.append(Check("dirac_zero_one_dimensional", "D = 0 on trivial and Steinberg", _status(dzero < 1e-12), dzero))
    return out


# ---------------------------------------------------------------------------
# cohomology: Dirac cohomology, inequality, orbits


def cohomology_suite(st: Setup) -> List[Check]:
    rs, cover, H = st.rs, st.cover, st.H
    out: List[Check] = []
    iso = 0.0
    for X in st.modules(5):
        iso = max(iso, isotypic_square_residual(build_dirac(X, cover=cover)))
    out.append(Check("isotypic_square", "D^2 = c(sigma~) - <nu,nu> on each isotypic part", _status(iso < 1e-8), iso))

    eq = 0.0
    vogan = {}
    viol = False
    crit = {}
    for kind in ("trivial", "steinberg"):
        X = one_dimensional(H, kind)
        for ch in st.chiralities():
            ctx = build_dirac(X, cover=cover, chirality=ch)
            rep = dirac_inequality_report(ctx)
            viol |= rep["summary"]["violated"]
            nn = float(rep["summary"]["nu_norm2"])
            for r in rep["isotypics"]:
                if r["name"].startswith("gen"):
                    eq = max(eq, abs(nn - float(r["c_value"])))
            vc = vogan_check(ctx, dirac_cohomology(ctx))
            vogan[f"{kind}{'' if ch == 1 else '-'}"] = vc["status"]
        crit[kind] = casimir_criterion(X)["fails_necessity"]
    out.append(Check("dirac_inequality_equality", "<nu,nu> = c(sigma~) on trivial and Steinberg",
                     _status(eq < 1e-10 and not viol), eq))
    out.append(Check("vogan_length_orbit", "sigma~ in H^D fixes <nu,nu> and the orbit of nu",
                     _status(all(v == "pass" for v in vogan.values())), 0, {"status": vogan}))
    out.append(Check("casimir_criterion_one_dimensional", "(pi(Omega~)x, x) <= 0 on unitary modules",
                     _status(not any(crit.values())), 0, {"fails_necessity": crit}))

    uniform = all(v == 1 for v in st.c.values.values())
    if rs.crystallographic and uniform:
        nr = nu_regular(rs)
        triv = one_dimensional(H, "trivial")
        ok = in_orbit(rs, st.W, triv.nu, nr.nu)
        out.append(Check("trivial_in_regular_orbit", "trivial nu in W.nu_reg", _status(ok), 0,
                         {"nu_reg_norm2": nr.norm2}))
    else:
        out.append(_skipped("trivial_in_regular_orbit", "trivial nu in W.nu_reg",
                            "needs a crystallographic system with c = 1"))
    if rs.series == "A" and uniform:
        vals = sorted((exact_value(c_sigma_tilde(cover, st.c, k)["formula"])
                       for k, g in enumerate(cover.genuine) if g), reverse=True)
        table = {o.norm2 for o in length_table(rs)}
        ok = set(vals) <= table and table <= set(vals)
        out.append(Check("c_values_match_orbits", "genuine c(sigma~) = <nu_e, nu_e>, e in N_sol",
                         _status(ok), 0, {"genuine_values": vals, "orbit_lengths": sorted(table, reverse=True)}))
    else:
        out.append(_skipped("c_values_match_orbits", "genuine c(sigma~) = <nu_e, nu_e>, e in N_sol",
                            "orbit tables shipped for type A with c = 1 only"))
    return out


# ---------------------------------------------------------------------------
# differential: the differential d and zeta (exact)


def differential_suite(st: Setup) -> List[Check]:
    names = ["dbar_squared", "odd_derivation", "reflection_in_kernel", "koszul", "graded_decomposition",
             "triv_sgn_refinement", "filtered_d", "zeta_casimir", "zeta_unique"]
    anchors = {
        "dbar_squared": "dbar^2 = 0",
        "odd_derivation": "dbar(ab) = dbar(a)b + (-1)^k a dbar(b)",
        "reflection_in_kernel": "dbar(t_{s_a} (x) a^v) = 0",
        "koszul": "Koszul cohomology is the scalar line",
        "graded_decomposition": "ker dbar = im dbar + rhobar(C[W~])",
        "triv_sgn_refinement": "ker dbar^triv = im dbar^sgn + rhobar(C[W~]^W~)",
        "filtered_d": "(d^triv)^2 = 0, d(Omega (x) 1) = 0, rho(C[W~]^W~) in ker d",
        "zeta_casimir": "zeta(Omega) = Omega_W~",
        "zeta_unique": "zeta(z) unique",
    }
    if not st.exact:
        return [_skipped(n, anchors[n], "exactness-tagged; parameters or root system not rational") for n in names]
    N = st.degree
    rs, cover = st.rs, st.cover
    T = vg.graded_algebra(rs, degree_cap=N + 3, cover=cover, W=st.W)
    out: List[Check] = []
    bad = vg.dbar_squared_residual(T, N)
    out.append(Check("dbar_squared", anchors["dbar_squared"], _status(bad == 0), bad, {"max_degree": N}))
    bad = vg.odd_derivation_failures(T, 50, st.seed)
    out.append(Check("odd_derivation", anchors["odd_derivation"], _status(bad == 0), bad, {"pairs": 50}))
    bad = vg.reflection_kernel_failures(T)
    out.append(Check("reflection_in_kernel", anchors["reflection_in_kernel"], _status(bad == 0), bad))
    kz = vg.koszul_cohomology(rs, N, T)
    expect = [1] + [0] * (N - 1)
    out.append(Check("koszul", anchors["koszul"], _status(kz["cohomology"] == expect), 0, kz))
    dec = vg.graded_decomposition_check(rs, N, T)
    out.append(Check("graded_decomposition", anchors["graded_decomposition"], _status(dec["decomposition_holds"]), 0,
                     {"rows": dec["rows"], "group_span_dim": dec["group_span_dim"]}))
    ref = dec["refinement"]
    out.append(Check("triv_sgn_refinement", anchors["triv_sgn_refinement"],
                     _status(ref["holds"] and ref["projectors_idempotent"] and ref["projectors_orthogonal"]), 0, ref))
    fc = vg.filtered_checks(st.H, N, cover)
    out.append(Check("filtered_d", anchors["filtered_d"], _status(all(fc.values())), 0, fc))
    zr = vg.solve_zeta(st.H, st.H.casimir(), cover)
    cmp = vg.zeta_vs_omega_wtilde(st.H, zr, cover)
    out.append(Check("zeta_casimir", anchors["zeta_casimir"],
                     _status(cmp["max_difference"] < 1e-8 and zr.residual < 1e-8), cmp["max_difference"],
                     {"exact_match": cmp["exact_match"], "coefficients": {str(k): v for k, v in zr.coefficients.items()},
                      "b_equals_a_feasible": zr.b_equals_a_feasible}))
    out.append(Check("zeta_unique", anchors["zeta_unique"], _status(zr.unique), zr.residual))
    return out


SUITES: Dict[str, Callable[[Setup], List[Check]]] = {
    "hecke": hecke_suite,
    "spin": spin_suite,
    "cohomology": cohomology_suite,
    "differential": differential_suite,
}


def run_suites(st: Setup, suites=None) -> List[dict]:
    """Run the named suites (all by default) in their canonical order."""
    chosen = [s for s in SUITES if suites is None or s in suites]
    records = []
    for s in chosen:
        for chk in SUITES[s](st):
            rec = chk.to_json()
            rec["suite"] = s
            records.append(rec)
    return records
