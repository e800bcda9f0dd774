"""Finite groups given by generators: closure, conjugacy classes, and a
numerical character table (Burnside/Dixon eigenvector method)."""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Sequence

import numpy as np

from .rootsys import RootSystem

__all__ = [
    "GroupCapExceeded",
    "GroupTable",
    "CharacterTable",
    "generate_group",
    "matrix_group",
    "weyl_group",
    "character_table",
    "isotypic_projector",
]

DEFAULT_CAP = 100_000


class GroupCapExceeded(RuntimeError):
    """Closure produced more elements than the cap allows."""

    def __init__(self, cap):
        super().__init__(f"group not finite under cap ({cap} elements)")


class CharacterTableError(ArithmeticError):
    pass


@dataclass
class CharacterTable:
    values: np.ndarray  # (n_chars, n_classes) complex
    degrees: List[int]
    names: List[str]

    def __len__(self):
        return len(self.degrees)


class GroupTable:
    """A finite group stored by BFS closure over a generating set.

    ``words[i]`` is a shortest word (tuple of generator indices) with
    ``element i = g[w0] g[w1] ...``; ``right[i][k]`` is the index of
    ``element_i * g_k`` and ``left[i][k]`` of ``g_k * element_i``.
    """

    def __init__(self, elements, keys, words, right, left, parent, gen_index, gen_order):
        self.elements = elements
        self.keys = keys
        self.index: Dict[Hashable, int] = {k: i for i, k in enumerate(keys)}
        self.words = words
        self.right = right
        self.left = left
        self.parent = parent
        self.gen_index = gen_index
        self.gen_order = gen_order
        self.identity = 0
        self._regular: List[np.ndarray] | None = None
        self._inverse = None
        self._classes = None
        self._ctable = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def ngens(self) -> int:
        return len(self.gen_index)

    def mul(self, i: int, j: int) -> int:
        r = i
        for g in self.words[j]:
            r = self.right[r][g]
        return r

    def lmul_gen(self, k: int, i: int, times: int = 1) -> int:
        for _ in range(times):
            i = self.left[i][k]
        return i

    @property
    def inverses(self) -> List[int]:
        if self._inverse is None:
            inv = [0] * len(self)
            for i in range(1, len(self)):
                p, g = self.parent[i]
                # (p g)^-1 = g^-1 p^-1 = g^(ord-1) p^-1
                inv[i] = self.lmul_gen(g, inv[p], self.gen_order[g] - 1)
            self._inverse = inv
        return self._inverse

    def inverse(self, i: int) -> int:
        return self.inverses[i]

    def conj(self, x: int, k: int) -> int:
        """g_k x g_k^{-1}."""
        return self.mul(self.left[x][k], self.inverses[self.gen_index[k]])

    # -- classes ------------------------------------------------------------
    def _compute_classes(self):
        class_of = [-1] * len(self)
        classes = []
        for start in range(len(self)):
            if class_of[start] >= 0:
                continue
            cid = len(classes)
            members = [start]
            class_of[start] = cid
            q = deque([start])
            while q:
                x = q.popleft()
                for k in range(self.ngens):
                    y = self.conj(x, k)
                    if class_of[y] < 0:
                        class_of[y] = cid
                        members.append(y)
                        q.append(y)
            classes.append(sorted(members))
        self._classes = (classes, class_of)

    @property
    def classes(self) -> List[List[int]]:
        if self._classes is None:
            self._compute_classes()
        return self._classes[0]

    @property
    def class_of(self) -> List[int]:
        if self._classes is None:
            self._compute_classes()
        return self._classes[1]

    @property
    def class_sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    @property
    def class_reps(self) -> List[int]:
        return [c[0] for c in self.classes]

    @property
    def class_inverse(self) -> List[int]:
        return [self.class_of[self.inverses[r]] for r in self.class_reps]

    def class_multiplication(self) -> np.ndarray:
        """a[i, j, k] = #{(x, y) in C_i x C_j : x y = z_k} for a fixed z_k in C_k."""
        ncl = len(self.classes)
        a = np.zeros((ncl, ncl, ncl))
        inv = self.inverses
        cof = self.class_of
        for k, z in enumerate(self.class_reps):
            for i, cls in enumerate(self.classes):
                for x in cls:
                    a[i, cof[self.mul(inv[x], z)], k] += 1
        return a

    # -- characters --------------------------------------------------------
    def character_table(self, seed: int = 0) -> CharacterTable:
        if self._ctable is None:
            self._ctable = character_table(self, seed=seed)
        return self._ctable

    def regular_matrices(self) -> List[np.ndarray]:
        """Left regular representation, one permutation matrix per element (memoized)."""
        if self._regular is None:
            n = len(self)
            mats = []
            for g in range(n):
                m = np.zeros((n, n))
                for x in range(n):
                    m[self.mul(g, x), x] = 1
                mats.append(m)
            self._regular = mats
        return self._regular

    def action_matrices(self, gen_mats: Sequence[np.ndarray]) -> List[np.ndarray]:
        """Matrices of every element from generator matrices, along BFS parents."""
        dim = gen_mats[0].shape[0]
        out: List[np.ndarray] = [None] * len(self)  # type: ignore[list-item]
        out[0] = np.eye(dim, dtype=np.result_type(*[m.dtype for m in gen_mats]))
        for i in range(1, len(self)):
            p, g = self.parent[i]
            out[i] = out[p] @ gen_mats[g]
        return out

    def check_representation(self, gen_mats: Sequence[np.ndarray], tol: float = 1e-9) -> float:
        """Max residual of the relations g_k^{ord} = 1 and of consistency of the
        BFS-built matrices with the right multiplication table."""
        mats = self.action_matrices(gen_mats)
        res = 0.0
        for k, m in enumerate(gen_mats):
            res = max(res, float(np.abs(np.linalg.matrix_power(m, self.gen_order[k]) - np.eye(m.shape[0])).max()))
        for i in range(len(self)):
            for k in range(self.ngens):
                j = self.right[i][k]
                res = max(res, float(np.abs(mats[i] @ gen_mats[k] - mats[j]).max()))
        return res

    # -- export --------------------------------------------------------------
    def to_json(self, gen_names: Sequence[str] | None = None) -> dict:
        names = list(gen_names) if gen_names else [f"g{k + 1}" for k in range(self.ngens)]
        ct = self.character_table()
        return {
            "order": len(self),
            "classes": [
                {"rep_word": [names[g] for g in self.words[r]], "size": len(c)}
                for r, c in zip(self.class_reps, self.classes)
            ],
            "characters": [
                {"name": nm, "degree": d, "values": [_cplx(v) for v in row]}
                for nm, d, row in zip(ct.names, ct.degrees, ct.values)
            ],
        }

    def to_csv(self, gen_names: Sequence[str] | None = None) -> str:
        names = list(gen_names) if gen_names else [f"g{k + 1}" for k in range(self.ngens)]
        ct = self.character_table()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["character", "degree"] + ["*".join(names[g] for g in self.words[r]) or "1" for r in self.class_reps])
        for nm, d, row in zip(ct.names, ct.degrees, ct.values):
            w.writerow([nm, d] + [_fmt(v) for v in row])
        return buf.getvalue()


def _cplx(v):
    v = complex(v)
    return round(v.real, 10) + 0.0 if abs(v.imag) < 1e-10 else [round(v.real, 10) + 0.0, round(v.imag, 10) + 0.0]


def _fmt(v):
    c = _cplx(v)
    return json.dumps(c)


def generate_group(
    generators: Sequence,
    identity,
    mul: Callable,
    key: Callable[[object], Hashable],
    cap: int = DEFAULT_CAP,
) -> GroupTable:
    """Enumerate the group generated by ``generators`` by breadth-first closure."""
    gens = list(generators)
    elements = [identity]
    keys = [key(identity)]
    index = {keys[0]: 0}
    words = [()]
    parent = [None]
    right: List[List[int]] = []
    i = 0
    while i < len(elements):
        row = []
        for k, g in enumerate(gens):
            prod = mul(elements[i], g)
            kk = key(prod)
            j = index.get(kk)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise GroupCapExceeded(cap)
                index[kk] = j
                elements.append(prod)
                keys.append(kk)
                words.append(words[i] + (k,))
                parent.append((i, k))
            row.append(j)
        right.append(row)
        i += 1
    left = [[index[key(mul(g, x))] for g in gens] for x in elements]
    gen_index = [right[0][k] for k in range(len(gens))]
    gen_order = []
    for k in range(len(gens)):
        o, x = 1, gen_index[k]
        while x != 0:
            x = right[x][k]
            o += 1
        gen_order.append(o)
    return GroupTable(elements, keys, words, right, left, parent, gen_index, gen_order)


def matrix_group(generators: Sequence[np.ndarray], cap: int = DEFAULT_CAP) -> GroupTable:
    gens = [np.asarray(g) for g in generators]
    ident = np.eye(gens[0].shape[0], dtype=gens[0].dtype)

    def key(m):
        if m.dtype.kind == "f":
            m = np.round(m, 8) + 0.0
        return m.tobytes()

    return generate_group(gens, ident, lambda a, b: a @ b, key, cap)


def weyl_group(rs: RootSystem, cap: int = DEFAULT_CAP) -> GroupTable:
    """W as a matrix group on V^vee (simple-coroot coordinates)."""
    mats = []
    for i in rs.simple_indices:
        m = rs.reflection_matrix(i)
        if rs.crystallographic:
            mats.append(np.array([[int(x) for x in row] for row in m], dtype=np.int64))
        else:
            mats.append(np.array([[float(x) for x in row] for row in m]))
    g = matrix_group(mats, cap)
    g.generator_matrices = mats
    return g


def character_table(g: GroupTable, seed: int = 0, retries: int = 8) -> CharacterTable:
    """Irreducible characters from simultaneous eigenvectors of the class
    multiplication matrices (Burnside's method, numerical)."""
    ncl = len(g.classes)
    sizes = np.array(g.class_sizes, dtype=float)
    order = len(g)
    a = g.class_multiplication()
    # M_j[i, k] = a[j, i, k]: (M_j v)_i = sum_k a_jik v_k = w(C_j) v_i
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        r = rng.normal(size=ncl) + 1j * rng.normal(size=ncl)
        m = np.einsum("j,jik->ik", r, a)
        evals, evecs = np.linalg.eig(m)
        gaps = np.abs(evals[:, None] - evals[None, :]) + np.eye(ncl) * 1e9
        if gaps.min() > 1e-6 * max(1.0, np.abs(evals).max()):
            break
    else:
        raise CharacterTableError("eigenvalue separation failed")
    e_cls = g.class_of[g.identity]
    chars = []
    for c in range(ncl):
        v = evecs[:, c] / evecs[e_cls, c]
        norm = np.sum(np.abs(v) ** 2 / sizes)
        deg = np.sqrt(order / norm)
        d = int(round(deg))
        if abs(deg - d) > 1e-6:
            raise CharacterTableError(f"non-integral degree {deg}")
        chars.append((d, v * d / sizes))
    vals = np.array([ch for _, ch in chars])
    vals[np.abs(vals.real) < 1e-12] = 1j * vals.imag[np.abs(vals.real) < 1e-12]
    vals[np.abs(vals.imag) < 1e-12] = vals.real[np.abs(vals.imag) < 1e-12]
    degrees = [d for d, _ in chars]

    def sort_key(t):
        d, row = t
        return (d, tuple(-round(x.real, 6) for x in row), tuple(-round(x.imag, 6) for x in row))

    pairs = sorted(zip(degrees, vals), key=sort_key)
    degrees = [d for d, _ in pairs]
    vals = np.array([row for _, row in pairs])
    # orthogonality check
    gram = (vals * sizes) @ vals.conj().T / order
    resid = np.abs(gram - np.eye(ncl)).max()
    if resid > 1e-8:
        raise CharacterTableError(f"orthogonality residual {resid:.2e}")
    names = []
    counts: Dict[int, int] = {}
    for d in degrees:
        counts[d] = counts.get(d, 0) + 1
        names.append(f"chi{d}_{counts[d]}")
    return CharacterTable(values=vals, degrees=degrees, names=names)


def isotypic_projector(g: GroupTable, char_index: int, action: Sequence[np.ndarray], check: bool = True) -> np.ndarray:
    """P = (dim/|G|) sum_g conj(chi(g)) A(g) for a list of per-element matrices."""
    ct = g.character_table()
    chi = ct.values[char_index]
    d = ct.degrees[char_index]
    cof = g.class_of
    if check:
        for i in range(len(g)):
            for k in range(g.ngens):
                j = g.right[i][k]
                if np.abs(action[i] @ action[g.gen_index[k]] - action[j]).max() > 1e-8:
                    raise ValueError("action matrices do not form a representation")
    p = sum(np.conj(chi[cof[x]]) * action[x] for x in range(len(g)))
    return p * d / len(g)


def multiplicities(g: GroupTable, action: Sequence[np.ndarray], guard: float = 1e-4) -> List[int]:
    """Multiplicity of every irreducible in the representation given by ``action``."""
    ct = g.character_table()
    traces = np.zeros(len(g.classes), dtype=complex)
    for r_idx, rep in enumerate(g.class_reps):
        traces[r_idx] = np.trace(action[rep])
    sizes = np.array(g.class_sizes)
    out = []
    for row in ct.values:
        m = np.sum(sizes * traces * np.conj(row)) / len(g)
        k = int(round(m.real))
        if abs(m - k) > guard:
            raise ArithmeticError(f"non-integral multiplicity {m}")
        out.append(k)
    return out
