"""Central characters nu_e = h/2 of nilpotent orbits: the regular orbit in
every crystallographic type and all orbits in type A via partitions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exact import qstr
from .rootsys import ConfigurationError, RootSystem

__all__ = ["OrbitDatum", "nu_regular", "nu_zero", "nu_from_partition", "partitions", "length_table", "in_orbit",
           "subregular"]


@dataclass(frozen=True)
class OrbitDatum:
    label: str
    nu: Tuple  # root coordinates
    norm2: object
    solvable: bool

    def to_json(self, rs: RootSystem | None = None) -> dict:
        out = {
            "label": self.label,
            "nu_root_coords": [qstr(v) for v in self.nu],
            "nu_norm2": qstr(self.norm2),
            "solvable_centralizer": self.solvable,
        }
        if rs is not None:
            out["nu_ambient"] = [qstr(v) for v in rs.to_ambient(self.nu)]
        return out


def nu_regular(rs: RootSystem) -> OrbitDatum:
    """(alpha_i, nu_r) = 1 for all simple roots, i.e. half the sum of positive coroots."""
    if not rs.crystallographic:
        raise ConfigurationError(f"{rs.label} is not crystallographic; no nilpotent orbits")
    nu = rs.from_weight([Fraction(1)] * rs.rank)
    return OrbitDatum("regular", nu, rs.inner(nu, nu), True)


def nu_zero(rs: RootSystem) -> OrbitDatum:
    nu = tuple(Fraction(0) for _ in range(rs.rank))
    return OrbitDatum("zero", nu, Fraction(0), False)


def _check_partition(parts: Sequence[int], total: int):
    if any(p <= 0 for p in parts) or sum(parts) != total:
        raise ValueError(f"{tuple(parts)} is not a partition of {total}")


def nu_from_partition(rs: RootSystem, parts: Sequence[int]) -> OrbitDatum:
    """Type A_n: h has eigenvalues {p-1, p-3, ..., 1-p} for each part p."""
    if rs.series != "A":
        raise ConfigurationError("partitions label nilpotent orbits only in type A")
    n = rs.rank
    parts = sorted((int(p) for p in parts), reverse=True)
    _check_partition(parts, n + 1)
    h = sorted((Fraction(p - 1 - 2 * k) for p in parts for k in range(p)), reverse=True)
    x = [v / 2 for v in h]
    lam = [x[i] - x[i + 1] for i in range(n)]  # pairing with alpha_i^vee = e_i - e_{i+1}
    nu = rs.from_weight(lam)
    distinct = len(set(parts)) == len(parts)
    return OrbitDatum("(" + ",".join(map(str, parts)) + ")", nu, rs.inner(nu, nu), distinct)


def partitions(n: int, largest: int | None = None) -> List[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for p in range(min(n, largest), 0, -1):
        for rest in partitions(n - p, p):
            out.append((p,) + rest)
    return out


def length_table(rs: RootSystem, solvable_only: bool = True) -> List[OrbitDatum]:
    """Orbits sorted by decreasing <nu_e, nu_e>: all partitions in type A,
    otherwise the regular (and zero) orbit only."""
    if rs.series == "A":
        data = [nu_from_partition(rs, p) for p in partitions(rs.rank + 1)]
    else:
        data = [nu_regular(rs), nu_zero(rs)]
    if solvable_only:
        data = [d for d in data if d.solvable]
    return sorted(data, key=lambda d: (-d.norm2, d.label))


def subregular(rs: RootSystem) -> OrbitDatum:
    if rs.series != "A":
        raise ConfigurationError("subregular data is only shipped for type A")
    if rs.rank == 1:
        return nu_zero(rs)
    return nu_from_partition(rs, (rs.rank, 1))


def in_orbit(rs: RootSystem, W, nu, target, tol: float = 1e-8) -> bool:
    """nu in W.target, comparing Dynkin labels (exact when both are rational)."""
    lam = rs.weight(nu)
    for word in W.words:
        v = tuple(target)
        for i in reversed(word):
            v = rs.simple_reflection(i, v)
        mu = rs.weight(v)
        if all(abs(complex(a - b)) <= tol for a, b in zip(lam, mu)):
            return True
    return False
