"""The spin double cover W~ of W inside Pin(V^vee), its characters, and the
central elements Omega_W~ and Omega_W with their scalars c(sigma~), c(sigma).

Group elements are stored exactly as rational Clifford elements normalized
so that the first nonzero coefficient has absolute value one.  The actual
Pin element is ``key / sqrt(N(key))`` with ``N(key) = key key^t``; signs are
kept, so ``g`` and ``-g`` have different keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .clifford import CliffordElement, SpinModule, clifford_mul, coroot_algebra, coroot_vector
from .exact import is_exact, sqrt_scalar
from .rootsys import ParameterFunction, RootSystem
from .weyl import DEFAULT_CAP, GroupTable, generate_group, isotypic_projector, weyl_group

__all__ = [
    "SpinCover",
    "CentralElement",
    "generate_spin_cover",
    "omega_wtilde",
    "omega_w",
    "c_sigma_tilde",
    "c_sigma",
    "r2_circ",
    "exact_value",
]


def _normalize(a: CliffordElement) -> CliffordElement:
    first = a.coeffs[min(a.coeffs)]
    return a / abs(first)


def _key(a: CliffordElement):
    if a.alg.exact and all(is_exact(v) for v in a.coeffs.values()):
        return tuple(sorted(a.coeffs.items()))
    return tuple(sorted((m, round(float(v), 8) + 0.0) for m, v in a.coeffs.items() if abs(v) > 1e-9))


class SpinCover:
    """W~ with its projection to W.

    ``group`` is the GroupTable of W~ (elements = normalized Clifford keys),
    ``weyl`` the GroupTable of W, ``proj[i]`` the W-index of p(element i).
    Generators of both tables are the simple reflections in the same order,
    so ``proj`` follows from reduced words.
    """

    def __init__(self, rs: RootSystem, group: GroupTable, weyl: GroupTable):
        self.rs = rs
        self.group = group
        self.weyl = weyl
        self.alg = coroot_algebra(rs)
        proj = [0] * len(group)
        for i in range(1, len(group)):
            p, g = group.parent[i]
            proj[i] = weyl.right[proj[p]][g]
        self.proj = proj
        self.minus_one = group.index[_key(self.alg.scalar(-self.alg.one))]
        self._genuine = None
        self._sign = [(-1) ** (len(w) % 2) for w in group.words]

    def __len__(self):
        return len(self.group)

    def key(self, i: int) -> CliffordElement:
        return self.group.elements[i]

    def norm(self, i: int):
        return self.key(i).norm()

    def element(self, i: int) -> CliffordElement:
        """The Pin element itself (floats unless N(key) is a rational square)."""
        return self.key(i) / sqrt_scalar(self.norm(i))

    def sgn(self, i: int) -> int:
        return self._sign[i]

    def index_of(self, a: CliffordElement) -> int:
        return self.group.index[_key(_normalize(a))]

    def neg(self, i: int) -> int:
        return self.group.mul(i, self.minus_one)

    def lift(self, w: int) -> int:
        """A canonical preimage of the W element with index w: the product of
        the simple generators along the reduced word of w."""
        j = 0
        for g in self.weyl.words[w]:
            j = self.group.right[j][g]
        return j

    def spin_matrix(self, S: SpinModule, i: int) -> np.ndarray:
        return S.gamma(self.key(i)) / np.sqrt(float(self.norm(i)))

    @property
    def genuine(self) -> List[bool]:
        """Genuineness flag per irreducible character (chi(-1) = -chi(1))."""
        if self._genuine is None:
            ct = self.group.character_table()
            cm = self.group.class_of[self.minus_one]
            flags = []
            for d, row in zip(ct.degrees, ct.values):
                v = row[cm].real
                if abs(v + d) < 1e-6:
                    flags.append(True)
                elif abs(v - d) < 1e-6:
                    flags.append(False)
                else:
                    raise ArithmeticError("-1 does not act by a scalar")
            self._genuine = flags
        return self._genuine

    def character_names(self) -> List[str]:
        ct = self.group.character_table()
        out, counts = [], {}
        for d, gen in zip(ct.degrees, self.genuine):
            tag = "gen" if gen else "ngen"
            counts[(tag, d)] = counts.get((tag, d), 0) + 1
            out.append(f"{tag}{d}_{counts[(tag, d)]}")
        return out

    def wrel_residual(self) -> float:
        """max over simple pairs of |f_b f_a + f_a f_g|, g = s_a(b)."""
        rs = self.rs
        res = 0.0
        for a in rs.simple_indices:
            for b in rs.simple_indices:
                if a == b:
                    continue
                gam = rs.index(_reflect(rs, a, rs.roots[b]))
                fa, fb, fg = (self.pin_vector(k) for k in (a, b, gam))
                lhs = clifford_mul(fb, fa) + clifford_mul(fa, fg)
                res = max(res, float(lhs.max_abs()))
        return res

    def pin_vector(self, root_index: int) -> CliffordElement:
        av = self.rs.coroots[root_index]
        return coroot_vector(self.rs, root_index) / sqrt_scalar(self.rs.coinner(av, av))

    def root_element(self, root_index: int) -> int:
        """Index of f_alpha in the group."""
        return self.index_of(coroot_vector(self.rs, root_index))


def _reflect(rs, i, v):
    t = rs.pair(v, rs.coroots[i])
    return tuple(x - t * y for x, y in zip(v, rs.roots[i]))


def generate_spin_cover(rs: RootSystem, cap: int = DEFAULT_CAP) -> SpinCover:
    alg = coroot_algebra(rs)
    gens = [_normalize(coroot_vector(rs, i)) for i in rs.simple_indices]
    one = alg.scalar(alg.one)
    group = generate_group(gens, one, lambda a, b: _normalize(clifford_mul(a, b)), _key, cap)
    return SpinCover(rs, group, weyl_group(rs, cap))


# ---------------------------------------------------------------------------
# central elements


def r2_circ(rs: RootSystem, include_diagonal: bool = False) -> List[Tuple[int, int]]:
    """Pairs (alpha, beta) of positive roots with s_alpha(beta) < 0."""
    pos = rs.positive_roots
    out = []
    for a in pos:
        for b in pos:
            if a == b:
                if include_diagonal:
                    out.append((a, b))
                continue
            if not rs.positive[rs.index(_reflect(rs, a, rs.roots[b]))]:
                out.append((a, b))
    return out


@dataclass
class CentralElement:
    """scalar * 1 + sum_g coeffs[g] g in a group algebra (g = group index)."""

    group: GroupTable
    scalar: object
    coeffs: Dict[int, object]

    def total(self) -> Dict[int, object]:
        out = dict(self.coeffs)
        out[self.group.identity] = out.get(self.group.identity, 0) + self.scalar
        return {k: v for k, v in out.items() if v != 0}

    def matrix(self, action: Sequence[np.ndarray]) -> np.ndarray:
        out = None
        for g, v in self.total().items():
            term = complex(v) * action[g]
            out = term if out is None else out + term
        return out

    def central_residual(self) -> float:
        """max over generators s of |s z s^-1 - z| in the group algebra."""
        g = self.group
        z = self.total()
        res = 0.0
        for k in range(g.ngens):
            conj = {}
            for x, v in z.items():
                y = g.conj(x, k)
                conj[y] = conj.get(y, 0) + v
            keys = set(conj) | set(z)
            res = max(res, max(abs(conj.get(x, 0) - z.get(x, 0)) for x in keys))
        return float(res)

    def scalar_on(self, char_index: int):
        """Scalar of the central element on an irreducible (character formula)."""
        ct = self.group.character_table()
        chi = ct.values[char_index]
        d = ct.degrees[char_index]
        cof = self.group.class_of
        val = sum(complex(v) * chi[cof[g]] for g, v in self.total().items()) / d
        return val


def diagonal_constant(rs: RootSystem, c: ParameterFunction):
    """(1/4) sum_{alpha > 0} c_alpha^2 <alpha, alpha>."""
    return sum(c(i) ** 2 * rs.inner(rs.roots[i], rs.roots[i]) for i in rs.positive_roots) / 4


def omega_wtilde(cover: SpinCover, c: ParameterFunction) -> CentralElement:
    """Omega_W~ = (1/4 sum c^2 <a,a>) 1 - (1/4) sum_{R2o, a != b} c_a c_b |a||b| f_a f_b.

    |a||b| f_a f_b = 4/(|a^v|^2 |b^v|^2) a^v b^v is rational; expressed on the
    group element g = f_a f_b the coefficient is c_a c_b / (|a^v| |b^v|).
    """
    rs = cover.rs
    coeffs: Dict[int, object] = {}
    for a, b in r2_circ(rs):
        prod = clifford_mul(coroot_vector(rs, a), coroot_vector(rs, b))
        g = cover.index_of(prod)
        na = rs.coinner(rs.coroots[a], rs.coroots[a])
        nb = rs.coinner(rs.coroots[b], rs.coroots[b])
        coef = -c(a) * c(b) / sqrt_scalar(na * nb)
        coeffs[g] = coeffs.get(g, 0) + coef
    return CentralElement(cover.group, diagonal_constant(rs, c), {k: v for k, v in coeffs.items() if v != 0})


def omega_wtilde_clifford(rs: RootSystem, c: ParameterFunction) -> Dict[int, CliffordElement]:
    """rho(Omega_W~) as {W index: Clifford coefficient}, entirely rational:
    the group term f_a f_b contributes t_{s_a s_b} (x) c_a c_b a^v b^v/(|a^v|^2|b^v|^2)."""
    from .weyl import weyl_group as _wg  # local to avoid a cycle in type hints

    W = _wg(rs)
    alg = coroot_algebra(rs)
    refl = reflection_indices(rs, W)
    out: Dict[int, CliffordElement] = {0: alg.scalar(diagonal_constant(rs, c))}
    for a, b in r2_circ(rs):
        na = rs.coinner(rs.coroots[a], rs.coroots[a])
        nb = rs.coinner(rs.coroots[b], rs.coroots[b])
        prod = clifford_mul(coroot_vector(rs, a), coroot_vector(rs, b)) * (-c(a) * c(b) / (na * nb))
        w = W.mul(refl[a], refl[b])
        out[w] = out.get(w, alg.scalar(0)) + prod
    return out


def reflection_indices(rs: RootSystem, W: GroupTable) -> Dict[int, int]:
    """root index -> W index of s_alpha."""
    out = {}
    for i in range(len(rs.roots)):
        m = rs.reflection_matrix(i)
        if rs.crystallographic:
            arr = np.array([[int(x) for x in row] for row in m], dtype=np.int64)
            out[i] = W.index[arr.tobytes()]
        else:
            arr = np.round(np.array([[float(x) for x in row] for row in m]), 8) + 0.0
            out[i] = W.index[arr.tobytes()]
    return out


def omega_w(rs: RootSystem, W: GroupTable, c: ParameterFunction) -> CentralElement:
    """Omega_W = (1/4 sum c^2 <a,a>) 1 + (1/4) sum_{R2o, a != b} c_a c_b <a,b> s_a s_b."""
    refl = reflection_indices(rs, W)
    coeffs: Dict[int, object] = {}
    for a, b in r2_circ(rs):
        w = W.mul(refl[a], refl[b])
        coeffs[w] = coeffs.get(w, 0) + c(a) * c(b) * rs.inner(rs.roots[a], rs.roots[b]) / 4
    return CentralElement(W, diagonal_constant(rs, c), {k: v for k, v in coeffs.items() if v != 0})


def c_sigma_tilde(cover: SpinCover, c: ParameterFunction, char_index: int) -> dict:
    """c(sigma~) by the character formula and by the eigenvalue of Omega_W~ on
    the sigma~-isotypic part of the regular representation of W~."""
    z = omega_wtilde(cover, c)
    return _two_routes(z, char_index, genuine=cover.genuine[char_index])


def c_sigma(W: GroupTable, rs: RootSystem, c: ParameterFunction, char_index: int) -> dict:
    return _two_routes(omega_w(rs, W, c), char_index)


def _two_routes(z: CentralElement, char_index: int, genuine: bool | None = None) -> dict:
    g = z.group
    formula = z.scalar_on(char_index)
    reg = g.regular_matrices()
    zm = z.matrix(reg)
    p = isotypic_projector(g, char_index, reg, check=False)
    tr = np.trace(p).real
    eig = np.trace(zm @ p) / tr
    off = float(np.abs(zm @ p - eig * p).max())
    out = {
        "formula": formula.real if abs(formula.imag) < 1e-12 else formula,
        "eigenvalue": eig.real if abs(eig.imag) < 1e-12 else eig,
        "agreement": float(abs(formula - eig)),
        "off_scalar_residual": off,
    }
    if genuine is not None:
        out["genuine"] = genuine
    return out


def exact_value(x: complex | float, tol: float = 1e-9) -> Fraction | float:
    """Snap a float to a small-denominator rational if it is within tol of one."""
    x = complex(x).real
    f = Fraction(x).limit_denominator(720)
    return f if abs(float(f) - x) < tol else x
