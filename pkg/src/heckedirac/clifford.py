"""Clifford algebra C(V^vee) with omega^2 = -<omega, omega>, its grading,
transpose, Pin membership, the elements f_alpha and explicit spin modules.

Elements live on an orthogonal (not necessarily normalized) basis
``u_1..u_n`` with ``u_k^2 = -q_k``; blades are bitmasks.  For a root system
the basis is Gram-Schmidt applied to the simple coroots, which keeps every
coefficient rational.  The orthonormal algebra is the special case q = 1.
"""

from __future__ import annotations

import weakref
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exact import is_exact, sqrt_scalar
from .rootsys import RootSystem

__all__ = [
    "CliffordAlgebra",
    "CliffordElement",
    "clifford_mul",
    "transpose",
    "epsilon",
    "pin_check",
    "coroot_algebra",
    "f_alpha",
    "SpinModule",
    "spin_module",
]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _reorder_sign(a: int, b: int) -> int:
    """Sign of moving the generators of blade b past those of blade a."""
    swaps = 0
    a >>= 1
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


class CliffordAlgebra:
    """C(V) for an orthogonal basis with squares ``-q_k``."""

    def __init__(self, q: Sequence):
        self.q = tuple(q)
        self.n = len(self.q)
        self.exact = all(is_exact(x) for x in self.q)
        self._mul_cache: Dict[Tuple[int, int], Tuple[int, object]] = {}

    def __eq__(self, other):
        return isinstance(other, CliffordAlgebra) and self.q == other.q

    def __hash__(self):
        return hash(self.q)

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    def blade_product(self, a: int, b: int):
        """e_A e_B = s e_{A xor B}; returns (A xor B, s)."""
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        s = self.one * _reorder_sign(a, b)
        common = a & b
        k = 0
        while common:
            if common & 1:
                s *= -self.q[k]
            common >>= 1
            k += 1
        out = (a ^ b, s)
        self._mul_cache[key] = out
        return out

    def scalar(self, x) -> "CliffordElement":
        return CliffordElement(self, {0: x} if x != 0 else {})

    def vector(self, coeffs: Sequence) -> "CliffordElement":
        return CliffordElement(self, {1 << k: c for k, c in enumerate(coeffs) if c != 0})

    def basis_vector(self, k: int) -> "CliffordElement":
        return CliffordElement(self, {1 << k: self.one})

    def blade(self, mask: int, coef=None) -> "CliffordElement":
        return CliffordElement(self, {mask: self.one if coef is None else coef})

    @property
    def dim(self) -> int:
        return 1 << self.n


class CliffordElement:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: CliffordAlgebra, coeffs: Dict[int, object]):
        self.alg = alg
        self.coeffs = {k: v for k, v in coeffs.items() if v != 0}

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "CliffordElement"):
        if other.alg.n != self.alg.n:
            raise ValueError(f"Clifford dimension mismatch: {self.alg.n} vs {other.alg.n}")

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            other = self.alg.scalar(other)
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return CliffordElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.alg, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return clifford_mul(self, other)
        return CliffordElement(self.alg, {k: v * other for k, v in self.coeffs.items()})

    def __rmul__(self, other):
        return CliffordElement(self.alg, {k: other * v for k, v in self.coeffs.items()})

    def __truediv__(self, x):
        return CliffordElement(self.alg, {k: v / x for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            other = self.alg.scalar(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            word = "".join(f"u{k + 1}" for k in range(self.alg.n) if m >> k & 1) or "1"
            parts.append(f"{self.coeffs[m]}*{word}")
        return " + ".join(parts)

    # -- structure ----------------------------------------------------------
    def scalar_part(self):
        return self.coeffs.get(0, 0)

    def grade_parts(self) -> Dict[int, "CliffordElement"]:
        out: Dict[int, Dict[int, object]] = {}
        for m, v in self.coeffs.items():
            out.setdefault(_popcount(m), {})[m] = v
        return {g: CliffordElement(self.alg, d) for g, d in out.items()}

    def parity(self) -> int | None:
        """0 (even), 1 (odd) or None (mixed); zero counts as even."""
        ps = {_popcount(m) & 1 for m in self.coeffs}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_vector(self, tol: float = 0.0) -> bool:
        return all(_popcount(m) == 1 or abs(v) <= tol for m, v in self.coeffs.items())

    def vector_coeffs(self) -> List:
        return [self.coeffs.get(1 << k, 0) for k in range(self.alg.n)]

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def transpose(self) -> "CliffordElement":
        return transpose(self)

    def epsilon(self) -> "CliffordElement":
        return epsilon(self)

    def norm(self):
        """Scalar part of a a^t (equal to a a^t for Pin-type elements)."""
        return clifford_mul(self, transpose(self)).scalar_part()


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    a._check(b)
    alg = a.alg
    out: Dict[int, object] = {}
    for ma, va in a.coeffs.items():
        for mb, vb in b.coeffs.items():
            m, s = alg.blade_product(ma, mb)
            out[m] = out.get(m, 0) + s * va * vb
    return CliffordElement(alg, out)


def _transpose_sign(k: int) -> int:
    # (v1...vk)^t = vk^t...v1^t = (-1)^k vk...v1 = (-1)^k (-1)^(k(k-1)/2) v1...vk
    return (-1) ** (k + k * (k - 1) // 2)


def transpose(a: CliffordElement) -> CliffordElement:
    return CliffordElement(a.alg, {m: _transpose_sign(_popcount(m)) * v for m, v in a.coeffs.items()})


def epsilon(a: CliffordElement) -> CliffordElement:
    return CliffordElement(a.alg, {m: (-v if _popcount(m) & 1 else v) for m, v in a.coeffs.items()})


def _inverse(a: CliffordElement, tol: float):
    """a^{-1} when a a^t is a nonzero scalar (the only case Pin needs)."""
    at = transpose(a)
    n = clifford_mul(a, at)
    s = n.scalar_part()
    rest = CliffordElement(a.alg, {m: v for m, v in n.coeffs.items() if m != 0})
    if rest.max_abs() > tol or abs(s) <= tol:
        return None
    return at / s


def pin_check(a: CliffordElement, tol: float | None = None) -> bool:
    """True iff a^t = a^{-1} and eps(a) v a^{-1} lies in V for all basis vectors v."""
    if tol is None:
        tol = 0.0 if a.alg.exact and all(is_exact(v) for v in a.coeffs.values()) else 1e-10
    inv = _inverse(a, tol)
    if inv is None:
        return False
    if (clifford_mul(a, transpose(a)) - a.alg.one).max_abs() > tol:
        return False
    ea = epsilon(a)
    for k in range(a.alg.n):
        img = clifford_mul(clifford_mul(ea, a.alg.basis_vector(k)), inv)
        if not img.is_vector(tol):
            return False
    return True


def projection_matrix(a: CliffordElement) -> np.ndarray | List[List]:
    """Matrix of p(a): v -> eps(a) v a^{-1} on the algebra's own basis.

    Works for any invertible a with a a^t scalar, so projectively normalized
    representatives (no square roots) give the same matrix.
    """
    inv = _inverse(a, 1e-12)
    if inv is None:
        raise ValueError("element is not invertible with scalar norm")
    ea = epsilon(a)
    cols = []
    for k in range(a.alg.n):
        img = clifford_mul(clifford_mul(ea, a.alg.basis_vector(k)), inv)
        cols.append(img.vector_coeffs())
    return [[cols[c][r] for c in range(a.alg.n)] for r in range(a.alg.n)]


# ---------------------------------------------------------------------------
# C(V^vee) for a root system


class CorootClifford(CliffordAlgebra):
    """C(V^vee) on the Gram-Schmidt basis u_k of the simple coroots.

    ``basis[k]`` holds u_k in simple-coroot coordinates.
    """

    def __init__(self, rs: RootSystem):
        n = rs.rank
        basis: List[Tuple] = []
        q = []
        for i in range(n):
            v = list(rs.one * x for x in _unit(n, i))
            for j, u in enumerate(basis):
                f = rs.coinner(v, u) / q[j]
                v = [a - f * b for a, b in zip(v, u)]
            basis.append(tuple(v))
            q.append(rs.coinner(v, v))
        super().__init__(q)
        self.rs = rs
        self.basis = tuple(basis)

    def from_coroot(self, w) -> CliffordElement:
        """Vector of V^vee given in simple-coroot coordinates."""
        return self.vector([self.rs.coinner(w, u) / self.q[k] for k, u in enumerate(self.basis)])

    def to_coroot(self, coeffs: Sequence) -> Tuple:
        n = self.n
        return tuple(sum(coeffs[k] * self.basis[k][i] for k in range(n)) for i in range(n))

    def projection_coroot_matrix(self, a: CliffordElement) -> List[List]:
        """p(a) on V^vee in simple-coroot coordinates (columns = images)."""
        m = projection_matrix(a)
        n = self.n
        # column j: image of alpha_j^vee
        out_cols = []
        for j in range(n):
            e = [0 * self.one] * n
            e[j] = self.one
            x = self.from_coroot(e).vector_coeffs()
            y = [sum(m[r][c] * x[c] for c in range(n)) for r in range(n)]
            out_cols.append(self.to_coroot(y))
        return [[out_cols[c][r] for c in range(n)] for r in range(n)]


def _unit(n, i):
    return [1 if j == i else 0 for j in range(n)]


_ALG_CACHE: "weakref.WeakKeyDictionary[RootSystem, CorootClifford]" = weakref.WeakKeyDictionary()


def coroot_algebra(rs: RootSystem) -> CorootClifford:
    alg = _ALG_CACHE.get(rs)
    if alg is None:
        alg = CorootClifford(rs)
        _ALG_CACHE[rs] = alg
    return alg


def coroot_vector(rs: RootSystem, root_index: int) -> CliffordElement:
    """alpha^vee as an (unnormalized) Clifford vector."""
    return coroot_algebra(rs).from_coroot(rs.coroots[root_index])


def f_alpha(rs: RootSystem, alpha) -> CliffordElement:
    """f_alpha = alpha^vee / |alpha^vee|; exact when |alpha^vee| is rational."""
    i = alpha if isinstance(alpha, int) else rs.index(alpha)
    av = rs.coroots[i]
    nrm = sqrt_scalar(rs.coinner(av, av))
    return coroot_vector(rs, i) / nrm


# ---------------------------------------------------------------------------
# spin modules

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I = np.eye(2, dtype=complex)


def _kron_all(ms):
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def hermitian_generators(n: int) -> List[np.ndarray]:
    """n pairwise anticommuting Hermitian involutions of size 2^(n//2)."""
    m = n // 2
    gam = []
    for j in range(m):
        pre = [_Z] * j
        post = [_I] * (m - j - 1)
        gam.append(_kron_all(pre + [_X] + post))
        gam.append(_kron_all(pre + [_Y] + post))
    if n % 2:
        gam.append(_kron_all([_Z] * m))
    return gam


class SpinModule:
    """Spin module on the orthonormal basis e_k = u_k / sqrt(q_k).

    ``gamma_on[k]`` is gamma(e_k); ``form`` is the invariant positive-definite
    Hermitian form (the identity in this realization).
    """

    def __init__(self, n: int, chirality: int = 1, q: Sequence | None = None):
        if n < 1:
            raise ValueError("spin module needs n >= 1")
        if chirality not in (1, -1):
            raise ValueError("chirality must be +1 or -1")
        self.n = n
        self.chirality = chirality if n % 2 else 1
        self.q = tuple(q) if q is not None else (1,) * n
        self.gamma_on = [self.chirality * 1j * g for g in hermitian_generators(n)]
        self.dim = self.gamma_on[0].shape[0]
        self.form = np.eye(self.dim, dtype=complex)
        self._blade_cache: Dict[int, np.ndarray] = {}

    @property
    def label(self) -> str:
        return "" if self.n % 2 == 0 else ("+" if self.chirality > 0 else "-")

    def gamma_u(self, k: int) -> np.ndarray:
        return np.sqrt(float(self.q[k])) * self.gamma_on[k]

    def blade(self, mask: int) -> np.ndarray:
        m = self._blade_cache.get(mask)
        if m is None:
            m = np.eye(self.dim, dtype=complex)
            for k in range(self.n):
                if mask >> k & 1:
                    m = m @ self.gamma_u(k)
            self._blade_cache[mask] = m
        return m

    def gamma(self, a: CliffordElement) -> np.ndarray:
        """gamma(a) for an element on the u-basis of the same algebra."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for mask, v in a.coeffs.items():
            out = out + complex(v) * self.blade(mask)
        return out

    # -- invariants ---------------------------------------------------------
    def relation_residual(self) -> float:
        res = 0.0
        for i in range(self.n):
            for j in range(self.n):
                lhs = self.gamma_u(i) @ self.gamma_u(j) + self.gamma_u(j) @ self.gamma_u(i)
                rhs = -2 * (float(self.q[i]) if i == j else 0.0) * np.eye(self.dim)
                res = max(res, float(np.abs(lhs - rhs).max()))
        return res

    def hermitian_residual(self) -> float:
        """max |<gamma(a)s,s'> - <s,gamma(a^t)s'>| over generators a = u_k, and
        the 2n generator checks include the Clifford pairs u_k u_l."""
        res = 0.0
        for k in range(self.n):
            g = self.gamma_u(k)
            gt = -g  # u_k^t = -u_k
            res = max(res, float(np.abs(g.conj().T @ self.form - self.form @ gt).max()))
            for l in range(k + 1, self.n):
                gg = self.gamma_u(k) @ self.gamma_u(l)
                ggt = self.gamma_u(l) @ self.gamma_u(k)  # (u_k u_l)^t = u_l u_k
                res = max(res, float(np.abs(gg.conj().T @ self.form - self.form @ ggt).max()))
        return res

    def pin_character_norm(self) -> float:
        """<chi, chi> over the finite group {+-e_A} of signed orthonormal blades."""
        total = 0.0
        for mask in range(1 << self.n):
            m = np.eye(self.dim, dtype=complex)
            for k in range(self.n):
                if mask >> k & 1:
                    m = m @ self.gamma_on[k]
            total += 2 * abs(np.trace(m)) ** 2
        return total / 2 ** (self.n + 1)


def spin_module(n: int, chirality: int = 1, q: Sequence | None = None) -> SpinModule:
    return SpinModule(n, chirality, q)


def coroot_spin_module(rs: RootSystem, chirality: int = 1) -> SpinModule:
    return SpinModule(rs.rank, chirality, coroot_algebra(rs).q)
