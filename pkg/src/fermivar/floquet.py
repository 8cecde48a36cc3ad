"""Floquet matrices: symbolic D(z), numeric D(k), and the dual-grid
transform H0~(x), together with the unitary-equivalence cross-check.

The symbolic matrix restricts -Delta + V to the fundamental domain W
with twisted boundary conditions: a hop from n to n +/- e_j that leaves
W through face j picks up a factor z_j^(+/-1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .lattice import DftTable, LatticeSpec, PeriodicPotential, dft
from .polynomials import LaurentPoly, MultiPoly, zvars
from .rationals import scalar_to_complex

__all__ = ["FloquetMatrixSymbolic", "FloquetMatrixNumeric", "assemble_symbolic",
           "assemble_numeric", "assemble_fourier", "bloch_matrices",
           "verify_equivalence", "EquivalenceReport"]


@dataclass(frozen=True)
class FloquetMatrixSymbolic:
    lattice: LatticeSpec
    entries: tuple            # Q x Q nested tuple of LaurentPoly in z only


@dataclass(frozen=True)
class FloquetMatrixNumeric:
    lattice: LatticeSpec
    entries: np.ndarray
    flavor: str               # "D(k)", "Dtilde(x)" or "H0tilde(x)"


def assemble_symbolic(potential: PeriodicPotential) -> FloquetMatrixSymbolic:
    """D(z): diagonal V(n), hop -1 inside W, hop -z_j^(+/-1) across face j."""
    lat = potential.lattice
    variables = zvars(lat.d)
    sites = lat.sites()
    index = {n: i for i, n in enumerate(sites)}
    terms = [[{} for _ in range(lat.Q)] for _ in range(lat.Q)]

    def put(i, j, exps, coeff):
        cell = terms[i][j]
        cell[exps] = cell.get(exps, 0) + coeff

    zero_exp = (0,) * lat.d
    for n in sites:
        i = index[n]
        put(i, i, zero_exp, potential.values[n])
        for j in range(lat.d):
            qj = lat.periods[j]
            for step in (+1, -1):
                nj = n[j] + step
                if 0 <= nj < qj:
                    m = n[:j] + (nj,) + n[j + 1:]
                    put(i, index[m], zero_exp, -1)
                else:
                    m = n[:j] + (nj % qj,) + n[j + 1:]
                    e = tuple(step if k == j else 0 for k in range(lat.d))
                    put(i, index[m], e, -1)

    rows = tuple(
        tuple(LaurentPoly.from_terms(variables, {e: c for e, c in cell.items() if c})
              for cell in row)
        for row in terms
    )
    return FloquetMatrixSymbolic(lat, rows)


def bloch_matrices(potential: PeriodicPotential):
    """Constant part T0 (V on the diagonal plus interior hops) and the
    wrap matrices W_j, so that D(k) = T0 + sum_j (W_j e^(2 pi i k_j) +
    W_j^T e^(-2 pi i k_j)) for real k."""
    lat = potential.lattice
    sites = lat.sites()
    index = {n: i for i, n in enumerate(sites)}
    T0 = np.zeros((lat.Q, lat.Q), dtype=complex)
    Ws = [np.zeros((lat.Q, lat.Q)) for _ in range(lat.d)]
    for n in sites:
        i = index[n]
        T0[i, i] = scalar_to_complex(potential.values[n])
        for j in range(lat.d):
            qj = lat.periods[j]
            nj = n[j] + 1
            if nj < qj:
                m = n[:j] + (nj,) + n[j + 1:]
                k = index[m]
                T0[i, k] -= 1.0
                T0[k, i] -= 1.0
            else:
                m = n[:j] + (0,) + n[j + 1:]
                Ws[j][i, index[m]] -= 1.0
    return T0, Ws


def assemble_numeric(potential: PeriodicPotential, k) -> FloquetMatrixNumeric:
    """D(k) for real quasimomentum k; Hermitian when V is real."""
    lat = potential.lattice
    k = np.asarray(k, dtype=float)
    if k.shape != (lat.d,):
        raise ValueError(f"k must have {lat.d} components")
    T0, Ws = bloch_matrices(potential)
    D = T0.copy()
    for j in range(lat.d):
        z = cmath.exp(2j * math.pi * k[j])
        D += Ws[j] * z + Ws[j].T * z.conjugate()
    return FloquetMatrixNumeric(lat, D, "D(k)")


def assemble_fourier(potential: PeriodicPotential, x,
                     table: DftTable | None = None) -> FloquetMatrixNumeric:
    """H0~(x) on the dual grid: diagonal -2 sum_j cos(2 pi (l_j + x_j))
    plus convolution with V_hat."""
    lat = potential.lattice
    x = np.asarray(x, dtype=float)
    if x.shape != (lat.d,):
        raise ValueError(f"x must have {lat.d} components")
    if table is None:
        table = dft(potential)
    duals = lat.sites()      # integer numerators m of l = m/q
    Q = lat.Q
    H = np.zeros((Q, Q), dtype=complex)
    for a, m in enumerate(duals):
        H[a, a] += sum(-2.0 * math.cos(2 * math.pi * (mj / qj + xj))
                       for mj, qj, xj in zip(m, lat.periods, x))
        for b, mp in enumerate(duals):
            H[a, b] += table.value(tuple(mj - mpj for mj, mpj in zip(m, mp)))
    return FloquetMatrixNumeric(lat, H, "H0tilde(x)")


def assemble_dtilde(potential: PeriodicPotential, x) -> FloquetMatrixNumeric:
    """Dtilde(x) = D(q_1 x_1, ..., q_d x_d)."""
    lat = potential.lattice
    k = [q * xj for q, xj in zip(lat.periods, np.asarray(x, dtype=float))]
    num = assemble_numeric(potential, k)
    return FloquetMatrixNumeric(lat, num.entries, "Dtilde(x)")


def _sorted_spectrum(M: np.ndarray, hermitian: bool) -> np.ndarray:
    if hermitian:
        return np.linalg.eigvalsh(M)
    ev = np.linalg.eigvals(M)
    return ev[np.lexsort((ev.imag, ev.real))]


@dataclass(frozen=True)
class EquivalenceReport:
    x: tuple
    max_deviation: float
    tol: float
    passed: bool


def verify_equivalence(potential: PeriodicPotential, x, tol: float = 1e-9,
                       table: DftTable | None = None) -> EquivalenceReport:
    """Compare the eigenvalue multisets of H0~(x) and Dtilde(x).

    For real V both matrices are Hermitian and the sorted spectra are
    compared; otherwise the full complex eigenvalue multisets are
    matched in lexicographic order.
    """
    herm = potential.is_real
    A = assemble_fourier(potential, x, table=table).entries
    B = assemble_dtilde(potential, x).entries
    sa = _sorted_spectrum(A, herm)
    sb = _sorted_spectrum(B, herm)
    dev = float(np.max(np.abs(sa - sb))) if len(sa) else 0.0
    return EquivalenceReport(tuple(float(v) for v in np.asarray(x, dtype=float)),
                             dev, tol, dev <= tol)


def equivalence_sweep(potential: PeriodicPotential, xs, tol: float = 1e-9):
    """Run verify_equivalence over many x; returns (max deviation, failures)."""
    table = dft(potential)
    worst = 0.0
    failures = []
    for x in xs:
        rep = verify_equivalence(potential, x, tol=tol, table=table)
        worst = max(worst, rep.max_deviation)
        if not rep.passed:
            failures.append(rep)
    return worst, failures
