"""Period lattice, fundamental domain and exact periodic potentials.

The fundamental domain W holds the Q = q_1 * ... * q_d sites
0 <= n_j <= q_j - 1, enumerated lexicographically with n_1 slowest.
That ordering is fixed once and used everywhere (matrix assembly,
row-major configuration input, report output).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product

from .rationals import as_scalar, format_scalar, maybe_real, mpq, scalar_to_complex

__all__ = ["LatticeSpec", "PeriodicPotential", "DftTable",
           "build_potential", "potential_from_rows", "dft"]


@dataclass(frozen=True)
class LatticeSpec:
    """Dimension, periods and their product Q.

    ``coprime`` records whether gcd(q_1, ..., q_d) == 1.  Operator-level
    computations run either way; the variety-theorem operations refuse
    to run when it is False.
    """

    d: int
    periods: tuple[int, ...]
    Q: int
    coprime: bool

    @classmethod
    def from_periods(cls, periods) -> "LatticeSpec":
        periods = tuple(int(q) for q in periods)
        if not periods:
            raise ValueError("at least one period is required")
        if any(q < 1 for q in periods):
            raise ValueError(f"periods must be positive, got {periods}")
        Q = math.prod(periods)
        coprime = math.gcd(*periods) == 1 if len(periods) > 1 else periods[0] == 1
        return cls(d=len(periods), periods=periods, Q=Q, coprime=coprime)

    def sites(self) -> list[tuple[int, ...]]:
        """All of W in the canonical ordering (n_1 slowest)."""
        return list(product(*(range(q) for q in self.periods)))

    def site_index(self, n: tuple[int, ...]) -> int:
        idx = 0
        for nj, qj in zip(n, self.periods):
            idx = idx * qj + nj
        return idx

    def reduce(self, n) -> tuple[int, ...]:
        """Representative of n in W."""
        return tuple(nj % qj for nj, qj in zip(n, self.periods))


@dataclass(frozen=True)
class PeriodicPotential:
    """Exact potential values on the fundamental domain, plus their average."""

    lattice: LatticeSpec
    values: dict
    average: object = field(compare=False)

    def __call__(self, n):
        return self.values[self.lattice.reduce(n)]

    @property
    def is_real(self) -> bool:
        from .rationals import is_real_scalar
        return all(is_real_scalar(v) for v in self.values.values())

    def shifted(self, c) -> "PeriodicPotential":
        c = as_scalar(c)
        vals = {n: maybe_real(v + c) for n, v in self.values.items()}
        return PeriodicPotential(self.lattice, vals, maybe_real(self.average + c))

    def value_texts(self) -> list[str]:
        """Row-major canonical strings (config round-trip form)."""
        return [format_scalar(self.values[n]) for n in self.lattice.sites()]


def build_potential(lattice: LatticeSpec, values) -> PeriodicPotential:
    """Validate a coefficient map over W and compute the exact average.

    ``values`` is a mapping from multi-index to a coefficient, or an
    iterable of (index, coefficient) pairs (which allows duplicate
    detection).  The map must cover W exactly once.
    """
    if isinstance(values, dict):
        pairs = list(values.items())
    else:
        pairs = [(tuple(n), v) for n, v in values]
    seen: dict = {}
    for n, v in pairs:
        n = tuple(int(x) for x in n)
        if len(n) != lattice.d:
            raise ValueError(f"index {n} has wrong dimension (expected {lattice.d})")
        if any(not (0 <= nj < qj) for nj, qj in zip(n, lattice.periods)):
            raise ValueError(f"index {n} is outside the fundamental domain")
        if n in seen:
            raise ValueError(f"duplicate index {n}")
        seen[n] = as_scalar(v)
    missing = [n for n in lattice.sites() if n not in seen]
    if missing:
        raise ValueError(f"missing potential values at {missing[:4]}"
                         + ("..." if len(missing) > 4 else ""))
    total = mpq(0)
    for v in seen.values():
        total = total + v
    average = maybe_real(total / lattice.Q)
    return PeriodicPotential(lattice, seen, average)


def potential_from_rows(periods, flat_values) -> PeriodicPotential:
    """Build from a row-major list over W (n_1 slowest), as in configs."""
    lattice = LatticeSpec.from_periods(periods)
    sites = lattice.sites()
    flat_values = list(flat_values)
    if len(flat_values) != lattice.Q:
        raise ValueError(f"expected {lattice.Q} potential values, got {len(flat_values)}")
    return build_potential(lattice, dict(zip(sites, flat_values)))


@dataclass(frozen=True)
class DftTable:
    """Discrete Fourier transform of the potential on the dual grid.

    Entries are keyed by the integer numerators m of l = (m_1/q_1, ...,
    m_d/q_d); lookup reduces indices mod q, which extends the table
    periodically.
    """

    lattice: LatticeSpec
    entries: dict

    def value(self, m) -> complex:
        return self.entries[self.lattice.reduce(m)]

    def inverse(self, n) -> complex:
        """Reconstruct V(n) from the table (floating point)."""
        q = self.lattice.periods
        acc = 0j
        for m, vhat in self.entries.items():
            phase = sum(mj * nj / qj for mj, nj, qj in zip(m, n, q))
            acc += vhat * cmath.exp(2j * math.pi * phase)
        return acc


def dft(potential: PeriodicPotential) -> DftTable:
    """V_hat(l) = (1/Q) sum_n V(n) e^(-2 pi i l.n) on the dual grid."""
    lat = potential.lattice
    q = lat.periods
    vals = {n: scalar_to_complex(v) for n, v in potential.values.items()}
    entries = {}
    for m in lat.sites():
        acc = 0j
        for n, v in vals.items():
            phase = sum(mj * nj / qj for mj, nj, qj in zip(m, n, q))
            acc += v * cmath.exp(-2j * math.pi * phase)
        entries[m] = acc / lat.Q
    return DftTable(lat, entries)
