"""Reduced root systems with W-invariant inner products.

Coordinates used throughout the package:

* vectors of ``V`` are stored in the basis of simple roots ("root coordinates"),
* vectors of ``V^vee`` in the basis of simple coroots ("coroot coordinates"),
* ``weight(v)`` gives the pairings ``(v, alpha_j^vee)`` (Dynkin labels).

All crystallographic realizations are rational; ``I2(m)`` for ``m`` outside
``{3, 4, 6}`` is realized in floating point and flagged ``exact=False``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from .exact import is_exact, qstr, to_exact

__all__ = [
    "ConfigurationError",
    "RootSystem",
    "ParameterFunction",
    "build_root_system",
    "dual_inner_product",
    "reflect",
    "coreflect",
    "parse_series",
]

Vec = Tuple  # tuple of Fraction (exact) or float

_TOL = 1e-9


class ConfigurationError(ValueError):
    """Unsupported series/rank or malformed configuration."""


# ---------------------------------------------------------------------------
# small dense linear algebra over Fractions or floats


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def mat_vec(a, v):
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def vec_mat(v, a):
    return tuple(sum(v[k] * a[k][j] for k in range(len(v))) for j in range(len(a[0])))


def transpose(a):
    return tuple(zip(*a))


def mat_inv(a):
    n = len(a)
    m = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    exact = all(is_exact(x) for row in a for x in row)
    for c in range(n):
        if exact:
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
        else:
            p = max(range(c, n), key=lambda r: abs(m[r][c]))
            if abs(m[p][c]) < 1e-14:
                p = None
        if p is None:
            raise ArithmeticError("singular matrix")
        m[c], m[p] = m[p], m[c]
        inv = (Fraction(1) if exact else 1.0) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def _key(v) -> tuple:
    return tuple(x if is_exact(x) else round(float(x), 9) + 0.0 for x in v)


# ---------------------------------------------------------------------------


def _unit(n, i, one):
    return tuple(one if j == i else 0 * one for j in range(n))


def _realization(series: str, n: int, m: int | None):
    """Simple roots in an ambient coordinate space plus the scale ``kappa``
    with <x, y> = kappa * (x . y) on coroots."""
    F = Fraction
    if series == "A":
        if n == 1:
            return [(F(1),)], F(1, 2)
        dim = n + 1
        return [tuple(F(1) if k == i else F(-1) if k == i + 1 else F(0) for k in range(dim)) for i in range(n)], F(1)
    if series in ("B", "C", "D"):
        simple = [tuple(F(1) if k == i else F(-1) if k == i + 1 else F(0) for k in range(n)) for i in range(n - 1)]
        if series == "B":
            simple.append(tuple(F(1) if k == n - 1 else F(0) for k in range(n)))
            return simple, F(1, 2)
        if series == "C":
            simple.append(tuple(F(2) if k == n - 1 else F(0) for k in range(n)))
            return simple, F(1)
        simple.append(tuple(F(1) if k in (n - 2, n - 1) else F(0) for k in range(n)))
        return simple, F(1)
    if series == "G2":
        return [(F(1), F(-1), F(0)), (F(-2), F(1), F(1))], F(1)
    if series == "F4":
        h = F(1, 2)
        return [
            (F(0), F(1), F(-1), F(0)),
            (F(0), F(0), F(1), F(-1)),
            (F(0), F(0), F(0), F(1)),
            (h, -h, -h, -h),
        ], F(1, 2)
    if series == "I2":
        c, s = math.cos(math.pi / m), math.sin(math.pi / m)
        return [(1.0, 0.0), (-c, s)], 0.5
    raise ConfigurationError(f"unsupported series {series!r}")


def parse_series(series: str, rank: int | None = None, m: int | None = None):
    """Normalize user input like ``("B", 2)``, ``"B2"``, ``"G2"``, ``("I2", m=5)``."""
    s = series.strip().upper()
    if s.startswith("I2"):
        tail = s[2:].strip("()")
        if tail:
            m = int(tail)
        if m is None:
            raise ConfigurationError("I2 requires m")
        return "I2", 2, int(m)
    if s in ("G2", "F4"):
        r = int(s[1])
        if rank not in (None, r):
            raise ConfigurationError(f"{s} has rank {r}")
        return s, r, None
    if s in ("G", "F"):
        return parse_series(s + {"G": "2", "F": "4"}[s], rank)
    if len(s) > 1 and s[0] in "ABCD" and s[1:].isdigit():
        if rank not in (None, int(s[1:])):
            raise ConfigurationError(f"conflicting rank for {series}")
        return s[0], int(s[1:]), None
    if s in ("A", "B", "C", "D"):
        if rank is None:
            raise ConfigurationError(f"series {s} requires a rank")
        return s, int(rank), None
    raise ConfigurationError(f"unsupported series {series!r}")


@dataclass(frozen=True)
class ParameterFunction:
    """W-invariant parameter function, stored per orbit class of roots."""

    values: Mapping[str, object]
    classes: Tuple[str, ...]  # class label of every root, aligned with RootSystem.roots

    def __call__(self, root_index: int):
        return self.values[self.classes[root_index]]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def to_json(self):
        return {k: qstr(v) for k, v in sorted(self.values.items())}


@dataclass(frozen=True, eq=False)
class RootSystem:
    series: str
    rank: int
    m: int | None
    exact: bool
    ambient_simple_roots: Tuple[Vec, ...]
    ambient_simple_coroots: Tuple[Vec, ...]
    kappa: object
    pairing: Tuple[Vec, ...]  # P[i][j] = (alpha_i, alpha_j^vee)
    gram: Tuple[Vec, ...]  # <alpha_i^vee, alpha_j^vee>
    gram_inv: Tuple[Vec, ...]
    root_gram: Tuple[Vec, ...]  # <alpha_i, alpha_j>
    roots: Tuple[Vec, ...]  # root coordinates; positive roots first
    coroots: Tuple[Vec, ...]  # coroot coordinates, aligned with roots
    positive: Tuple[bool, ...]
    root_class: Tuple[str, ...]
    coxeter: Tuple[Tuple[int, ...], ...]
    _index: Dict[tuple, int] = field(repr=False, compare=False, default_factory=dict)

    # -- basic data -------------------------------------------------------
    @property
    def label(self) -> str:
        return f"I2({self.m})" if self.series == "I2" else (
            self.series if self.series in ("G2", "F4") else f"{self.series}{self.rank}")

    @property
    def crystallographic(self) -> bool:
        return self.exact and all(
            x == int(x) for row in self.pairing for x in row)

    @property
    def positive_roots(self) -> List[int]:
        return [i for i, p in enumerate(self.positive) if p]

    @property
    def simple_indices(self) -> List[int]:
        return [self.index(_unit(self.rank, i, self.one)) for i in range(self.rank)]

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    def index(self, root) -> int:
        try:
            return self._index[_key(root)]
        except KeyError:
            raise ValueError(f"{tuple(root)} is not a root of {self.label}") from None

    def is_root(self, v) -> bool:
        return _key(v) in self._index

    def negative_of(self, i: int) -> int:
        return self.index(tuple(-x for x in self.roots[i]))

    # -- pairings and inner products -------------------------------------
    def weight(self, v) -> Vec:
        """Dynkin labels (v, alpha_j^vee) of a vector in root coordinates."""
        return vec_mat(v, self.pairing)

    def pair(self, v, w) -> object:
        """(v, w) for v in root coordinates and w in coroot coordinates."""
        return sum(x * y for x, y in zip(self.weight(v), w))

    def inner(self, v1, v2):
        """Dual inner product on V (root coordinates)."""
        return dual_inner_product(self, v1, v2)

    def coinner(self, w1, w2):
        """Invariant inner product on V^vee (coroot coordinates)."""
        return sum(w1[i] * self.gram[i][j] * w2[j] for i in range(self.rank) for j in range(self.rank))

    def from_weight(self, lam) -> Vec:
        return vec_mat(tuple(to_exact(x) for x in lam), mat_inv(self.pairing))

    def to_ambient(self, v) -> Vec:
        dim = len(self.ambient_simple_roots[0])
        return tuple(sum(v[i] * self.ambient_simple_roots[i][k] for i in range(self.rank)) for k in range(dim))

    def from_ambient(self, x) -> Vec:
        """Root coordinates of an ambient vector; it must lie in the span of R."""
        x = tuple(to_exact(t) for t in x)
        A = self.ambient_simple_roots
        if len(x) != len(A[0]):
            raise ConfigurationError(
                f"{self.label}: expected {len(A[0])} ambient coordinates, got {len(x)}")
        gram = tuple(tuple(sum(a * b for a, b in zip(A[i], A[j])) for j in range(self.rank)) for i in range(self.rank))
        rhs = tuple(sum(a * b for a, b in zip(A[i], x)) for i in range(self.rank))
        v = mat_vec(mat_inv(gram), rhs)
        back = self.to_ambient(v)
        err = max(abs(complex(a - b)) for a, b in zip(back, x))
        if err > 1e-9:
            raise ConfigurationError(f"vector {x} does not lie in V for {self.label}")
        return v

    def coroot_ambient(self, w) -> Vec:
        dim = len(self.ambient_simple_coroots[0])
        return tuple(sum(w[i] * self.ambient_simple_coroots[i][k] for i in range(self.rank)) for k in range(dim))

    # -- reflections ----------------------------------------------------
    def simple_reflection(self, i: int, v) -> Vec:
        lam_i = sum(v[k] * self.pairing[k][i] for k in range(self.rank))
        return tuple(x - lam_i if k == i else x for k, x in enumerate(v))

    def simple_coreflection(self, i: int, w) -> Vec:
        a = sum(self.pairing[i][k] * w[k] for k in range(self.rank))
        return tuple(x - a if k == i else x for k, x in enumerate(w))

    def reflection_matrix(self, root_index: int) -> Tuple[Vec, ...]:
        """Matrix of s_alpha on V^vee in coroot coordinates (columns = images)."""
        a, av = self.roots[root_index], self.coroots[root_index]
        lam = self.weight(a)
        one = self.one
        return tuple(
            tuple((one if r == c else 0 * one) - lam[c] * av[r] for c in range(self.rank))
            for r in range(self.rank))

    def root_reflection_matrix(self, root_index: int) -> Tuple[Vec, ...]:
        """Matrix of s_alpha on V in root coordinates (columns = images)."""
        a, av = self.roots[root_index], self.coroots[root_index]
        one = self.one
        # (e_c, alpha^vee) = sum_k P[c][k] av[k]
        pc = [sum(self.pairing[c][k] * av[k] for k in range(self.rank)) for c in range(self.rank)]
        return tuple(
            tuple((one if r == c else 0 * one) - pc[c] * a[r] for c in range(self.rank))
            for r in range(self.rank))

    # -- misc -------------------------------------------------------------
    def rho(self, c: ParameterFunction | None = None) -> Vec:
        """Half the c-weighted sum of positive roots (root coordinates)."""
        half = Fraction(1, 2) if self.exact else 0.5
        out = [0 * self.one] * self.rank
        for i in self.positive_roots:
            ci = 1 if c is None else c(i)
            out = [o + half * ci * x for o, x in zip(out, self.roots[i])]
        return tuple(out)

    def parameters(self, spec: Mapping[str, object] | None = None) -> ParameterFunction:
        labels = sorted(set(self.root_class))
        vals = {lab: Fraction(1) if self.exact else 1.0 for lab in labels}
        for k, v in (spec or {}).items():
            if k not in vals:
                if k == "short" and labels == ["long"]:
                    continue  # simply-laced: a single length class
                raise ConfigurationError(f"{self.label}: unknown root class {k!r}; have {labels}")
            vals[k] = to_exact(v)
        return ParameterFunction(values=vals, classes=self.root_class)

    def zero_parameters(self) -> ParameterFunction:
        labels = sorted(set(self.root_class))
        return ParameterFunction({lab: Fraction(0) if self.exact else 0.0 for lab in labels}, self.root_class)

    def to_json(self) -> dict:
        def vv(v):
            return [qstr(x) for x in v]

        return {
            "series": self.series,
            "rank": self.rank,
            "m": self.m,
            "exact": self.exact,
            "simple_system": "standard: alpha_i = e_i - e_(i+1) family; positive = nonnegative in simple-root coordinates",
            "ambient_simple_roots": [vv(v) for v in self.ambient_simple_roots],
            "ambient_simple_coroots": [vv(v) for v in self.ambient_simple_coroots],
            "pairing": [vv(r) for r in self.pairing],
            "gram_coroots": [vv(r) for r in self.gram],
            "gram_roots": [vv(r) for r in self.root_gram],
            "roots": [
                {"root": vv(a), "coroot": vv(b), "positive": p, "class": cl}
                for a, b, p, cl in zip(self.roots, self.coroots, self.positive, self.root_class)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def dual_inner_product(rs: RootSystem, v1, v2):
    """<v1, v2> = sum_i (v1, w_i)(v2, w^i) over dual bases of V^vee.

    With w_i the simple coroots and w^i the Gram-dual basis this is
    weight(v1) . G^{-1} . weight(v2).
    """
    l1, l2 = rs.weight(v1), rs.weight(v2)
    n = rs.rank
    return sum(l1[i] * rs.gram_inv[i][j] * l2[j] for i in range(n) for j in range(n))


def reflect(rs: RootSystem, alpha, v) -> Vec:
    """s_alpha(v) = v - (v, alpha^vee) alpha, alpha a root (root coordinates)."""
    i = rs.index(alpha)
    a, av = rs.roots[i], rs.coroots[i]
    t = rs.pair(v, av)
    return tuple(x - t * y for x, y in zip(v, a))


def coreflect(rs: RootSystem, alpha, w) -> Vec:
    """s_alpha^vee(w) = w - (alpha, w) alpha^vee on V^vee (coroot coordinates)."""
    i = rs.index(alpha)
    a, av = rs.roots[i], rs.coroots[i]
    t = rs.pair(a, w)
    return tuple(x - t * y for x, y in zip(w, av))


def _coxeter_entry(nij, exact, m_hint):
    if exact:
        table = {0: 2, 1: 3, 2: 4, 3: 6}
        if nij in table:
            return table[int(nij)]
    if m_hint is not None and abs(nij - 4 * math.cos(math.pi / m_hint) ** 2) < 1e-9:
        return m_hint
    return int(round(math.pi / math.acos(math.sqrt(float(nij)) / 2)))


def build_root_system(series: str, rank: int | None = None, m: int | None = None) -> RootSystem:
    """Standard realization of a reduced root system.

    Supported: A_n (n >= 1), B_n / C_n (n >= 2), D_n (n >= 3), G2, F4 and
    I2(m) (m >= 3).  I2(3), I2(4), I2(6) reuse the rational A2, B2, G2 data.
    """
    series, rank, m = parse_series(series, rank, m)
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3}
    if series in minimum and rank < minimum[series]:
        raise ConfigurationError(f"{series}{rank} is not supported (rank >= {minimum[series]})")
    if series == "I2" and m < 3:
        raise ConfigurationError("I2(m) requires m >= 3")
    real_series, real_rank = series, rank
    if series == "I2" and m in (3, 4, 6):
        real_series, real_rank = {3: ("A", 2), 4: ("B", 2), 6: ("G2", 2)}[m]
    simple, kappa = _realization(real_series, real_rank, m)
    exact = is_exact(kappa)
    n = rank
    cor = []
    for a in simple:
        nn = sum(x * x for x in a)
        cor.append(tuple(2 * x / nn for x in a))
    P = tuple(tuple(sum(x * y for x, y in zip(simple[i], cor[j])) for j in range(n)) for i in range(n))
    G = tuple(tuple(kappa * sum(x * y for x, y in zip(cor[i], cor[j])) for j in range(n)) for i in range(n))
    Ginv = mat_inv(G)
    B = mat_mul(mat_mul(P, Ginv), transpose(P))

    one = Fraction(1) if exact else 1.0

    def sref(i, v):
        lam_i = sum(v[k] * P[k][i] for k in range(n))
        return tuple(x - lam_i if k == i else x for k, x in enumerate(v))

    def scoref(i, w):
        a = sum(P[i][k] * w[k] for k in range(n))
        return tuple(x - a if k == i else x for k, x in enumerate(w))

    found: Dict[tuple, Tuple[Vec, Vec]] = {}
    frontier = [(_unit(n, i, one), _unit(n, i, one)) for i in range(n)]
    for r, c in frontier:
        found[_key(r)] = (r, c)
    while frontier:
        nxt = []
        for r, c in frontier:
            for i in range(n):
                r2, c2 = sref(i, r), scoref(i, c)
                k = _key(r2)
                if k not in found:
                    found[k] = (r2, c2)
                    nxt.append((r2, c2))
                    if len(found) > 10_000:
                        raise ConfigurationError("root closure did not terminate")
        frontier = nxt

    def is_pos(v):
        return all(x > -_TOL for x in v)

    pos = [(r, c) for r, c in found.values() if is_pos(r)]
    pos.sort(key=lambda rc: (round(float(sum(rc[0])), 9), tuple(-round(float(x), 9) for x in rc[0])))
    neg = [(tuple(-x for x in r), tuple(-x for x in c)) for r, c in pos]
    allr = pos + neg
    roots = tuple(r for r, _ in allr)
    coroots = tuple(c for _, c in allr)
    positive = tuple([True] * len(pos) + [False] * len(neg))
    index = {_key(r): i for i, r in enumerate(roots)}

    # orbit classes under W
    parent = list(range(len(roots)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j, r in enumerate(roots):
        for i in range(n):
            k = index[_key(sref(i, r))]
            a, b = find(j), find(k)
            if a != b:
                parent[max(a, b)] = min(a, b)

    def norm2(v):
        lam = vec_mat(v, P)
        return sum(lam[i] * Ginv[i][j] * lam[j] for i in range(n) for j in range(n))

    orbits = sorted({find(j) for j in range(len(roots))})
    lengths = {o: norm2(roots[o]) for o in orbits}
    if len(orbits) == 1:
        names = {orbits[0]: "long"}
    elif len({_key((lengths[o],)) for o in orbits}) == len(orbits):
        ordered = sorted(orbits, key=lambda o: -float(lengths[o]))
        names = {ordered[0]: "long", ordered[1]: "short"}
    else:
        names = {o: f"orbit{k + 1}" for k, o in enumerate(orbits)}
    root_class = tuple(names[find(j)] for j in range(len(roots)))

    cox = tuple(
        tuple(1 if i == j else _coxeter_entry(P[i][j] * P[j][i], exact, m) for j in range(n)) for i in range(n))

    return RootSystem(
        series=series, rank=n, m=m, exact=exact,
        ambient_simple_roots=tuple(simple), ambient_simple_coroots=tuple(cor), kappa=kappa,
        pairing=P, gram=G, gram_inv=Ginv, root_gram=B,
        roots=roots, coroots=coroots, positive=positive, root_class=root_class,
        coxeter=cox, _index=index,
    )
