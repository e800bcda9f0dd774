"""Graded affine Hecke algebra H = C[W] (x) S(V^vee) in normal form.

Elements are finite sums ``t_w f_w`` with ``f_w`` a polynomial in the
simple-coroot coordinates ``x_j = alpha_j^vee`` (polynomial part on the
right).  Multiplication moves polynomials past ``t_w`` letter by letter with

    f t_s = t_s s(f) + c_alpha (f - s(f)) / alpha^vee,

which for linear f is the defining cross relation.  With c = 0 this is the
graded algebra C[W] x S(V^vee).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .exact import is_exact
from .rootsys import ParameterFunction, RootSystem
from .spincover import reflection_indices
from .weyl import GroupTable, weyl_group

__all__ = [
    "DegreeCapExceeded",
    "HeckeAlgebra",
    "HeckeElement",
    "normal_order_mul",
    "star",
]

Mono = Tuple[int, ...]
Poly = Dict[Mono, object]

_FLOAT_DROP = 1e-13


class DegreeCapExceeded(ArithmeticError):
    """A product would exceed the configured polynomial degree cap."""


def _clean(d: dict, exact: bool) -> dict:
    if exact:
        return {k: v for k, v in d.items() if v != 0}
    return {k: v for k, v in d.items() if abs(v) > _FLOAT_DROP}


def _add_into(out: dict, src: dict, scale=1):
    for k, v in src.items():
        out[k] = out.get(k, 0) + scale * v


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def mono_degree(m: Mono) -> int:
    return sum(m)


class HeckeAlgebra:
    def __init__(self, rs: RootSystem, c: ParameterFunction | None = None, W: GroupTable | None = None,
                 degree_cap: int = 6):
        self.rs = rs
        self.c = c if c is not None else rs.parameters()
        self.W = W if W is not None else weyl_group(rs)
        self.n = rs.rank
        self.degree_cap = degree_cap
        self.exact = rs.exact and all(is_exact(v) for v in self.c.values.values())
        self.simple = rs.simple_indices
        self.refl = reflection_indices(rs, self.W)
        self._sref: Dict[Tuple[int, Mono], Poly] = {}
        self._delta: Dict[Tuple[int, Mono], Poly] = {}
        self._commute: Dict[Tuple[Mono, int], Dict[Tuple[int, Mono], object]] = {}
        self.zero_mono: Mono = (0,) * self.n
        self.graded = self.c.is_zero()

    # -- constructors -------------------------------------------------------
    @property
    def one(self):
        return self.rs.one

    def element(self, terms: dict) -> "HeckeElement":
        return HeckeElement(self, terms)

    def scalar(self, v) -> "HeckeElement":
        return HeckeElement(self, {(0, self.zero_mono): v})

    def identity(self) -> "HeckeElement":
        return self.scalar(self.one)

    def t(self, w: int, coef=None) -> "HeckeElement":
        return HeckeElement(self, {(w, self.zero_mono): self.one if coef is None else coef})

    def t_reflection(self, root_index: int) -> "HeckeElement":
        return self.t(self.refl[root_index])

    def x(self, j: int) -> "HeckeElement":
        m = tuple(1 if k == j else 0 for k in range(self.n))
        return HeckeElement(self, {(0, m): self.one})

    def omega(self, w: Sequence) -> "HeckeElement":
        """The vector sum_j w_j alpha_j^vee of V^vee as an element of H."""
        terms = {}
        for j, v in enumerate(w):
            if v != 0:
                terms[(0, tuple(1 if k == j else 0 for k in range(self.n)))] = v
        return HeckeElement(self, terms)

    def poly(self, p: Poly, w: int = 0) -> "HeckeElement":
        return HeckeElement(self, {(w, m): v for m, v in p.items()})

    # -- polynomial actions -------------------------------------------------
    def sref_linear(self, i: int, j: int) -> Poly:
        """s_i(x_j) = x_j - (alpha_i, alpha_j^vee) x_i."""
        P = self.rs.pairing
        out: Poly = {}
        ej = tuple(1 if k == j else 0 for k in range(self.n))
        ei = tuple(1 if k == i else 0 for k in range(self.n))
        out[ej] = out.get(ej, 0) + self.one
        out[ei] = out.get(ei, 0) - P[i][j]
        return {k: v for k, v in out.items() if v != 0}

    def sref(self, i: int, m: Mono) -> Poly:
        key = (i, m)
        hit = self._sref.get(key)
        if hit is not None:
            return hit
        if sum(m) == 0:
            out = {m: self.one}
        else:
            j = next(k for k, e in enumerate(m) if e)
            rest = tuple(e - 1 if k == j else e for k, e in enumerate(m))
            out = poly_mul(self.sref(i, rest), self.sref_linear(i, j))
        self._sref[key] = out
        return out

    def poly_act(self, word: Sequence[int], p: Poly) -> Poly:
        """w(p) for w = s_{word[0]} ... s_{word[-1]} (rightmost acts first)."""
        for i in reversed(word):
            out: Poly = {}
            for m, v in p.items():
                _add_into(out, self.sref(i, m), v)
            p = {k: v for k, v in out.items() if v != 0}
        return p

    def delta(self, i: int, m: Mono) -> Poly:
        """(m - s_i m) / x_i, a polynomial of degree deg m - 1."""
        key = (i, m)
        hit = self._delta.get(key)
        if hit is not None:
            return hit
        diff: Poly = {m: self.one}
        for mm, v in self.sref(i, m).items():
            diff[mm] = diff.get(mm, 0) - v
        out: Poly = {}
        for mm, v in diff.items():
            if v == 0:
                continue
            if mm[i] == 0:
                raise ArithmeticError("divided difference is not a polynomial")
            out[tuple(e - 1 if k == i else e for k, e in enumerate(mm))] = v
        self._delta[key] = out
        return out

    def commute(self, m: Mono, w: int) -> Dict[Tuple[int, Mono], object]:
        """Normal form of the product m * t_w."""
        key = (m, w)
        hit = self._commute.get(key)
        if hit is not None:
            return hit
        if w == 0:
            out = {(0, m): self.one}
        else:
            k = self.W.words[w][0]
            rest = self.W.left[w][k]  # s_k w
            out = {}
            for mm, v in self.sref(k, m).items():
                for (u, m2), v2 in self.commute(mm, rest).items():
                    kk = (self.W.left[u][k], m2)
                    out[kk] = out.get(kk, 0) + v * v2
            ck = self.c(self.simple[k])
            if ck != 0 and sum(m) > 0:
                for mm, v in self.delta(k, m).items():
                    for (u, m2), v2 in self.commute(mm, rest).items():
                        kk = (u, m2)
                        out[kk] = out.get(kk, 0) + ck * v * v2
            out = _clean(out, self.exact)
        self._commute[key] = out
        return out

    def evaluate(self, p: Poly, lam: Sequence):
        """p at the point with x_j = lam_j (lam = Dynkin labels of nu)."""
        total = 0
        for m, v in p.items():
            term = v
            for e, x in zip(m, lam):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    # -- standard elements ---------------------------------------------------
    def dual_pairs(self, kind: str = "simple") -> List[Tuple[Tuple, Tuple]]:
        """Dual bases (omega_i, omega^i) of V^vee in coroot coordinates.

        ``simple``: simple coroots and their Gram duals; ``orthogonal``: the
        Gram-Schmidt basis u_k and u_k / <u_k, u_k>.
        """
        rs = self.rs
        n = self.n
        if kind == "simple":
            out = []
            for i in range(n):
                e = tuple(self.one if k == i else 0 * self.one for k in range(n))
                out.append((e, tuple(rs.gram_inv[i])))
            return out
        if kind == "orthogonal":
            from .clifford import coroot_algebra

            alg = coroot_algebra(rs)
            return [(u, tuple(x / q for x in u)) for u, q in zip(alg.basis, alg.q)]
        raise ValueError(kind)

    def omega_tilde(self, w: Sequence) -> "HeckeElement":
        """w~ = w - 1/2 sum_{b > 0} c_b (b, w) t_{s_b}."""
        return self.omega(w) - self.T_omega(w)

    def T_omega(self, w: Sequence) -> "HeckeElement":
        half = Fraction(1, 2) if self.exact else 0.5
        terms = {}
        for b in self.rs.positive_roots:
            v = self.c(b) * self.rs.pair(self.rs.roots[b], w)
            if v != 0:
                key = (self.refl[b], self.zero_mono)
                terms[key] = terms.get(key, 0) + half * v
        return HeckeElement(self, terms)

    def casimir(self, kind: str = "simple") -> "HeckeElement":
        out = HeckeElement(self, {})
        for a, b in self.dual_pairs(kind):
            out = out + self.omega(a) * self.omega(b)
        return out

    def casimir_tilde(self, kind: str = "simple") -> "HeckeElement":
        out = HeckeElement(self, {})
        for a, b in self.dual_pairs(kind):
            out = out + self.omega_tilde(a) * self.omega_tilde(b)
        return out

    def sum_TT(self, kind: str = "simple") -> "HeckeElement":
        out = HeckeElement(self, {})
        for a, b in self.dual_pairs(kind):
            out = out + self.T_omega(a) * self.T_omega(b)
        return out

    def omega_W(self) -> "HeckeElement":
        """1/4 sum_{a,b > 0, s_a(b) < 0} c_a c_b <a, b> t_{s_a} t_{s_b} (diagonal included)."""
        from .spincover import r2_circ

        rs = self.rs
        quarter = Fraction(1, 4) if self.exact else 0.25
        terms = {}
        for a, b in r2_circ(rs, include_diagonal=True):
            w = self.W.mul(self.refl[a], self.refl[b])
            key = (w, self.zero_mono)
            terms[key] = terms.get(key, 0) + quarter * self.c(a) * self.c(b) * rs.inner(rs.roots[a], rs.roots[b])
        return HeckeElement(self, terms)

    def is_central(self, z: "HeckeElement") -> bool:
        gens = [self.t(self.W.gen_index[k]) for k in range(self.n)] + [self.x(j) for j in range(self.n)]
        return all((z * g - g * z).is_zero() for g in gens)

    def invariant_poly(self, p: Poly) -> Poly:
        """Sum over W of w(p)."""
        out: Poly = {}
        for word in self.W.words:
            _add_into(out, self.poly_act(word, p))
        return {k: v for k, v in out.items() if v != 0}

    def random_element(self, rng: random.Random, degree: int = 2, terms: int = 3) -> "HeckeElement":
        out = {}
        for _ in range(terms):
            w = rng.randrange(len(self.W))
            d = rng.randint(0, degree)
            m = [0] * self.n
            for _ in range(d):
                m[rng.randrange(self.n)] += 1
            out[(w, tuple(m))] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        return HeckeElement(self, out)


class HeckeElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: HeckeAlgebra, terms: dict):
        self.alg = alg
        self.terms = _clean(terms, alg.exact)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, m), v in sorted(self.terms.items()):
            word = "".join(f"s{k + 1}" for k in self.alg.W.words[w]) or "1"
            mono = "*".join(f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}" for j, e in enumerate(m) if e)
            parts.append(f"{v}*t[{word}]" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @property
    def degree(self) -> int:
        return max((sum(m) for _, m in self.terms), default=0)

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.alg.exact or tol == 0.0:
            return not self.terms
        return all(abs(v) <= tol for v in self.terms.values())

    def max_abs(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            other = self.alg.scalar(other)
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            other = self.alg.scalar(other)
        out = dict(self.terms)
        _add_into(out, other.terms)
        return HeckeElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return normal_order_mul(self, other)
        return HeckeElement(self.alg, {k: v * other for k, v in self.terms.items()})

    def __rmul__(self, other):
        return HeckeElement(self.alg, {k: other * v for k, v in self.terms.items()})

    def poly_part(self, w: int) -> Poly:
        return {m: v for (u, m), v in self.terms.items() if u == w}

    def star(self) -> "HeckeElement":
        return star(self)


def normal_order_mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    alg = a.alg
    if b.alg is not alg:
        raise ValueError("elements of different Hecke algebras")
    if a.degree + b.degree > alg.degree_cap:
        raise DegreeCapExceeded(f"degree {a.degree + b.degree} exceeds cap {alg.degree_cap}")
    W = alg.W
    out: dict = {}
    # group b by t_v
    for (u, m), va in a.terms.items():
        for (v, g), vb in b.terms.items():
            for (v2, m2), vc in alg.commute(m, v).items():
                w = W.mul(u, v2)
                mm = tuple(x + y for x, y in zip(m2, g))
                key = (w, mm)
                out[key] = out.get(key, 0) + va * vb * vc
    return HeckeElement(alg, out)


def _conj(v):
    return v.conjugate() if isinstance(v, complex) else v


def star(a: HeckeElement) -> HeckeElement:
    """Conjugate-linear anti-involution: t_w* = t_{w^-1},
    omega* = -omega + sum_{b>0} c_b (b, omega) t_{s_b}."""
    alg = a.alg
    W = alg.W
    n = alg.n
    xstar = []
    for j in range(n):
        e = tuple(alg.one if k == j else 0 * alg.one for k in range(n))
        xstar.append(-alg.omega(e) + 2 * alg.T_omega(e))
    out = HeckeElement(alg, {})
    cache: Dict[Mono, HeckeElement] = {}
    for (w, m), v in a.terms.items():
        fs = cache.get(m)
        if fs is None:
            fs = alg.identity()
            for j, e in enumerate(m):
                for _ in range(e):
                    fs = fs * xstar[j]
            cache[m] = fs
        out = out + (fs * alg.t(W.inverses[w])) * _conj(v)
    return out


def commutator(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    return a * b - b * a
