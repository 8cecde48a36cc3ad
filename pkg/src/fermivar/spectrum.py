"""Numeric band structure, extrema, level-set criteria and the finite-box
embedded-eigenvalue falsification harness.

Everything here is floating point; the exact machinery enters only
through the characteristic-polynomial residuals |P| and |grad P| that
the level-set check evaluates at refined points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .charpoly import CharPolyBundle, charpoly_exact
from .floquet import bloch_matrices
from .lattice import LatticeSpec, PeriodicPotential, potential_from_rows
from .rationals import scalar_to_complex

__all__ = ["BandStructure", "compute_bands", "band_function", "hf_gradient",
           "Extremum", "find_extrema", "level_set_check", "LevelSetReport",
           "free_operator_checks", "Perturbation", "embedded_scan",
           "BoxSpectrumReport", "DegenerateEigenvalueError"]


class DegenerateEigenvalueError(RuntimeError):
    """Eigenvalue too close to a neighbor for perturbative formulas."""


# ---------------------------------------------------------------------------
# band structure
# ---------------------------------------------------------------------------

@dataclass
class BandStructure:
    lattice: LatticeSpec
    grid: tuple[int, ...]
    eigenvalues: np.ndarray            # shape grid + (Q,), ascending per point
    bands: list[tuple[float, float]]   # [a_m, b_m] per band

    def band_union(self) -> list[tuple[float, float]]:
        """Merged union of the band intervals."""
        merged: list[list[float]] = []
        for a, b in sorted(self.bands):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return [tuple(iv) for iv in merged]

    def k_axes(self) -> list[np.ndarray]:
        return [np.arange(n) / n for n in self.grid]


def _check_real(potential: PeriodicPotential):
    if not potential.is_real:
        raise ValueError("band structure needs a real potential; use the "
                         "complex-spectrum tools for complex V")


def _grid_tuple(lattice: LatticeSpec, grid) -> tuple[int, ...]:
    if isinstance(grid, int):
        return (grid,) * lattice.d
    grid = tuple(int(g) for g in grid)
    if len(grid) != lattice.d:
        raise ValueError(f"grid needs {lattice.d} axes")
    return grid


def _bloch_stack(potential: PeriodicPotential, kmesh: list[np.ndarray]) -> np.ndarray:
    """D(k) over a broadcastable mesh of real k (vectorized assembly)."""
    T0, Ws = bloch_matrices(potential)
    shape = np.broadcast(*kmesh).shape if len(kmesh) > 1 else kmesh[0].shape
    D = np.broadcast_to(T0, shape + T0.shape).copy()
    for j, W in enumerate(Ws):
        z = np.exp(2j * np.pi * kmesh[j])[..., None, None]
        D += W * z + W.T * np.conj(z)
    return D


def compute_bands(potential: PeriodicPotential, grid) -> BandStructure:
    """Sorted spectra over a uniform grid on [0,1)^d plus band intervals."""
    _check_real(potential)
    lat = potential.lattice
    grid = _grid_tuple(lat, grid)
    axes = [np.arange(n) / n for n in grid]
    kmesh = np.meshgrid(*axes, indexing="ij")
    D = _bloch_stack(potential, kmesh)
    evals = np.linalg.eigvalsh(D)
    bands = [(float(evals[..., m].min()), float(evals[..., m].max()))
             for m in range(lat.Q)]
    return BandStructure(lat, grid, evals, bands)


def band_function(potential: PeriodicPotential, k, m: int) -> float:
    """lambda_m(k) (1-based band index)."""
    D = _bloch_stack(potential, [np.asarray([kj]) for kj in k])[0]
    return float(np.linalg.eigvalsh(D)[m - 1])


def _eig_at(potential, k):
    D = _bloch_stack(potential, [np.asarray([kj]) for kj in k])[0]
    return np.linalg.eigh(D)


def hf_gradient(potential: PeriodicPotential, k, m: int,
                gap_tol: float = 1e-8) -> np.ndarray:
    """Hellmann-Feynman gradient of a simple eigenvalue.

    d lambda_m / d k_j = <psi, dD/dk_j psi> with dD/dk_j = 2 pi i
    (W_j e^(2 pi i k_j) - W_j^T e^(-2 pi i k_j)).  Raises
    :class:`DegenerateEigenvalueError` when the gap to a neighbor is
    below ``gap_tol``; callers fall back to finite differences.
    """
    _check_real(potential)
    lat = potential.lattice
    w, v = _eig_at(potential, k)
    i = m - 1
    if (i > 0 and w[i] - w[i - 1] < gap_tol) or \
       (i + 1 < lat.Q and w[i + 1] - w[i] < gap_tol):
        raise DegenerateEigenvalueError(
            f"eigenvalue {m} at k={tuple(k)} has a neighbor within {gap_tol}")
    psi = v[:, i]
    _, Ws = bloch_matrices(potential)
    out = []
    for j in range(lat.d):
        z = np.exp(2j * np.pi * k[j])
        dD = 2j * np.pi * (Ws[j] * z - Ws[j].T * np.conj(z))
        out.append(float(np.real(np.vdot(psi, dD @ psi))))
    return np.array(out)


def fd_gradient(potential: PeriodicPotential, k, m: int, h: float = 1e-5) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    out = np.zeros(len(k))
    for j in range(len(k)):
        kp = k.copy(); kp[j] += h
        km = k.copy(); km[j] -= h
        out[j] = (band_function(potential, kp, m) - band_function(potential, km, m)) / (2 * h)
    return out


def _safe_gradient(potential, k, m):
    try:
        return hf_gradient(potential, k, m)
    except DegenerateEigenvalueError:
        return fd_gradient(potential, k, m)


# ---------------------------------------------------------------------------
# extrema
# ---------------------------------------------------------------------------

@dataclass
class Extremum:
    band: int
    k: tuple
    value: float
    kind: str              # "min" | "max"
    refined: bool


def _local_extrema_on_grid(values: np.ndarray, kind: str):
    """Grid candidates: <= (>=) all torus neighbors, strict vs at least one."""
    d = values.ndim
    comp = np.ones(values.shape, dtype=bool)
    strict = np.zeros(values.shape, dtype=bool)
    for offset in itertools.product((-1, 0, 1), repeat=d):
        if all(o == 0 for o in offset):
            continue
        nb = np.roll(values, offset, axis=tuple(range(d)))
        if kind == "min":
            comp &= values <= nb
            strict |= values < nb
        else:
            comp &= values >= nb
            strict |= values > nb
    return np.argwhere(comp & strict)


def _is_degenerate(potential, k, m, gap_tol=1e-8):
    w, _ = _eig_at(potential, k)
    i = m - 1
    lo = w[i] - w[i - 1] if i > 0 else np.inf
    hi = w[i + 1] - w[i] if i + 1 < len(w) else np.inf
    return min(lo, hi) < gap_tol


def find_extrema(potential: PeriodicPotential, m: int, grid,
                 refine: bool = True, merge_tol: float = 1e-6) -> list[Extremum]:
    """Grid-local extrema of lambda_m refined by quasi-Newton (BFGS with
    the Hellmann-Feynman gradient; derivative-free Nelder-Mead near
    degeneracies); duplicates merged on the torus."""
    _check_real(potential)
    lat = potential.lattice
    grid = _grid_tuple(lat, grid)
    bs = compute_bands(potential, grid)
    values = bs.eigenvalues[..., m - 1]
    out: list[Extremum] = []
    for kind, sgn in (("min", 1.0), ("max", -1.0)):
        for idx in _local_extrema_on_grid(values, kind):
            k0 = np.array([i / n for i, n in zip(idx, grid)])
            if not refine:
                out.append(Extremum(m, tuple(k0 % 1.0), float(values[tuple(idx)]),
                                    kind, False))
                continue
            fun = lambda k: sgn * band_function(potential, k, m)
            if _is_degenerate(potential, k0, m):
                res = optimize.minimize(fun, k0, method="Nelder-Mead",
                                        options={"xatol": 1e-10, "fatol": 1e-14,
                                                 "maxiter": 400})
            else:
                jac = lambda k: sgn * _safe_gradient(potential, k, m)
                res = optimize.minimize(fun, k0, method="BFGS", jac=jac,
                                        options={"gtol": 1e-10, "maxiter": 200})
            k = tuple(float(x % 1.0) for x in res.x)
            out.append(Extremum(m, k, float(sgn * res.fun), kind, True))
    return _merge_extrema(out, merge_tol)


def _merge_extrema(items: list[Extremum], tol: float) -> list[Extremum]:
    kept: list[Extremum] = []
    for e in sorted(items, key=lambda x: (x.kind, x.value)):
        dup = False
        for o in kept:
            if o.kind == e.kind and abs(o.value - e.value) <= tol and \
               all(_torus_dist(a, b) <= 1e-4 for a, b in zip(o.k, e.k)):
                dup = True
                break
        if not dup:
            kept.append(e)
    return kept


def _torus_dist(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


# ---------------------------------------------------------------------------
# level sets against the singular-set criterion
# ---------------------------------------------------------------------------

@dataclass
class LevelSetReport:
    band: int
    lambda_star: float
    points: list
    max_residual_P: float
    max_residual_gradP: float
    tol: float
    passed: bool


def level_set_check(potential: PeriodicPotential, m: int, lam_star: float,
                    grid, tol: float = 1e-7, detect_tol: float = 1e-3,
                    bundle: CharPolyBundle | None = None,
                    extremum_match_tol: float = 1e-5) -> LevelSetReport:
    """Every refined point of {lambda_m = lambda*} must satisfy
    |P(k, lambda*)| < tol and |grad_k P(k, lambda*)| < tol.

    The operation refuses to run unless lambda* matches an extremum
    value of band m (the criterion is only asserted at extrema).
    """
    _check_real(potential)
    lat = potential.lattice
    grid = _grid_tuple(lat, grid)
    extrema = find_extrema(potential, m, grid)
    if not any(abs(e.value - lam_star) <= extremum_match_tol for e in extrema):
        raise ValueError(
            f"lambda*={lam_star} is not an extremum value of band {m} "
            f"(closest: {min((abs(e.value - lam_star) for e in extrema), default=float('inf'))})")
    if bundle is None:
        bundle = charpoly_exact(potential)

    bs = compute_bands(potential, grid)
    values = bs.eigenvalues[..., m - 1]
    hits = np.argwhere(np.abs(values - lam_star) < detect_tol)
    points = []
    for idx in hits:
        k0 = np.array([i / n for i, n in zip(idx, grid)])
        res = optimize.minimize(
            lambda k: (band_function(potential, k, m) - lam_star) ** 2,
            k0, method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-22, "maxiter": 400})
        k = tuple(float(x % 1.0) for x in res.x)
        if abs(band_function(potential, k, m) - lam_star) > 10 * detect_tol:
            continue
        points.append(k)
    points = _dedupe_k(points, 1e-6)

    max_p = 0.0
    max_g = 0.0
    recs = []
    for k in points:
        rp = abs(bundle.evaluate_P(k, lam_star))
        rg = max(abs(g) for g in bundle.gradient_P(k, lam_star))
        recs.append({"k": k, "residual_P": rp, "residual_gradP": rg})
        max_p = max(max_p, rp)
        max_g = max(max_g, rg)
    passed = max_p < tol and max_g < tol
    return LevelSetReport(m, lam_star, recs, max_p, max_g, tol, passed)


def _dedupe_k(points, tol):
    kept = []
    for k in sorted(points):
        if not any(all(_torus_dist(a, b) <= tol for a, b in zip(k, o)) for o in kept):
            kept.append(k)
    return kept


# ---------------------------------------------------------------------------
# free-operator facts
# ---------------------------------------------------------------------------

@dataclass
class FreeOperatorReport:
    samples: list
    zero_case_checked: bool
    zero_case_interior: bool | None
    failures: list
    passed: bool


def free_operator_checks(periods, grid=400, nsamples: int = 50,
                         margin: float = 1e-6, seed: int = 0) -> FreeOperatorReport:
    """Sampled interior-point checks for the zero potential.

    Every sampled lambda in (-2d, 2d) \\ {0} must lie in the open
    interior of some computed band (with the stated margin), and 0
    itself must when at least one period is odd.
    """
    lat = LatticeSpec.from_periods(periods)
    V = potential_from_rows(periods, ["0"] * lat.Q)
    bs = compute_bands(V, grid)
    d = lat.d
    rng = np.random.default_rng(seed)
    samples = []
    # stay a grid-modulus away from the spectrum edges +-2d; the computed
    # bands underestimate the true ones by O(grid^-2)
    while len(samples) < nsamples:
        lam = float(rng.uniform(-2 * d + 0.01, 2 * d - 0.01))
        if abs(lam) > 1e-3:
            samples.append(lam)

    def interior(lam: float) -> bool:
        return any(a + margin <= lam <= b - margin for a, b in bs.bands)

    failures = [lam for lam in samples if not interior(lam)]
    odd = any(q % 2 for q in lat.periods)
    zero_ok = interior(0.0) if odd else None
    passed = not failures and (zero_ok is not False)
    return FreeOperatorReport(samples, odd, zero_ok, failures, passed)


# ---------------------------------------------------------------------------
# embedded-eigenvalue falsification harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Perturbation:
    """|v(n)| <= C e^(-|n|^gamma) with shape |s(n)| <= 1.

    ``profile`` is None (s = 1 everywhere), a dict keyed by site, or a
    callable; sites absent from a dict profile get s(n) = 0.
    """

    amplitude: float
    gamma: float
    profile: object = None

    def __call__(self, n) -> float:
        r = math.sqrt(sum(float(x) ** 2 for x in n))
        if self.profile is None:
            s = 1.0
        elif isinstance(self.profile, dict):
            s = float(self.profile.get(tuple(n), 0.0))
        else:
            s = float(self.profile(n))
        if abs(s) > 1.0 + 1e-12:
            raise ValueError(f"profile magnitude {s} exceeds 1 at {n}")
        return self.amplitude * s * math.exp(-r ** self.gamma)


@dataclass
class BoxSpectrumReport:
    boxes: list
    windows: list
    theta: float
    delta: float
    flagged: dict              # N -> list of candidate records
    persistent: list
    verdict: str

    @property
    def passed(self) -> bool:
        return not self.persistent


def _box_hamiltonian(potential: PeriodicPotential, v: Perturbation, N: int):
    lat = potential.lattice
    side = 2 * N + 1
    shape = (side,) * lat.d
    total = side ** lat.d
    vdiag = np.zeros(shape)
    pdiag = np.zeros(shape)
    for idx in np.ndindex(*shape):
        n = tuple(int(x) - N for x in idx)
        pdiag[idx] = float(scalar_to_complex(potential(n)).real)
        vdiag[idx] = v(n)
    H = np.zeros((total, total))
    H[np.arange(total), np.arange(total)] = (pdiag + vdiag).ravel()
    strides = np.arange(total).reshape(shape)
    for j in range(lat.d):
        src = np.take(strides, np.arange(side - 1), axis=j).ravel()
        dst = np.take(strides, np.arange(1, side), axis=j).ravel()
        H[src, dst] -= 1.0
        H[dst, src] -= 1.0
    return H, shape, vdiag.ravel()


def embedded_scan(potential: PeriodicPotential, v: Perturbation, boxes,
                  theta: float = 0.05, delta: float = 0.1,
                  bands_grid: int = 100, match_tol: float = 1e-2) -> BoxSpectrumReport:
    """Finite-box localization scan inside the spectral bands.

    For each box [-N, N]^d with zero boundary condition, eigenpairs with
    eigenvalue inside the delta-shrunk band union are tested for
    localization (IPR above theta).  A candidate is *persistent* when
    every box flags a matching eigenvalue; super-exponentially decaying
    perturbations are expected to produce none.  The scan can falsify,
    never prove.
    """
    _check_real(potential)
    lat = potential.lattice
    if v.gamma <= 1:
        raise ValueError("perturbation exponent gamma must exceed 1")
    boxes = sorted(int(N) for N in boxes)
    min_box = 3 * max(lat.periods)
    if boxes[0] < min_box:
        raise ValueError(f"smallest box {boxes[0]} is below 3*max(q) = {min_box}")

    bs = compute_bands(potential, bands_grid)
    windows = [(a + delta, b - delta) for a, b in bs.band_union() if b - a > 2 * delta]

    flagged: dict[int, list] = {}
    for N in boxes:
        H, shape, vdiag = _box_hamiltonian(potential, v, N)
        w, vecs = np.linalg.eigh(H)
        probs = np.abs(vecs) ** 2
        in_band = np.zeros(len(w), dtype=bool)
        for lo, hi in windows:
            in_band |= (w > lo) & (w < hi)
        iprs = (probs ** 2).sum(axis=0)
        mask = np.ones(shape, dtype=bool)
        inner = tuple(slice(1, -1) for _ in range(lat.d))
        mask[inner] = False
        edge = probs[mask.ravel(), :].sum(axis=0)
        recs = []
        for i in np.nonzero(in_band)[0]:
            if iprs[i] > theta:
                u = vecs[:, i]
                # (H0_box - lambda) u = -v u exactly on the box
                h0_res = float(np.linalg.norm(H @ u - vdiag * u - w[i] * u))
                recs.append({"eigenvalue": float(w[i]), "ipr": float(iprs[i]),
                             "edge_mass": float(edge[i]),
                             "perturbation_residual": h0_res})
        flagged[N] = recs

    persistent = []
    for rec in flagged[boxes[0]]:
        lam = rec["eigenvalue"]
        if all(any(abs(r["eigenvalue"] - lam) <= match_tol for r in flagged[N])
               for N in boxes[1:]):
            persistent.append(lam)

    verdict = "no-persistent-flags" if not persistent else "persistent-localization"
    return BoxSpectrumReport(boxes, windows, theta, delta, flagged,
                             persistent, verdict)


def spectrum_bottom(potential: PeriodicPotential, v: Perturbation, N: int) -> float:
    """Smallest box eigenvalue (bound states below the bands show up here)."""
    H, _, _ = _box_hamiltonian(potential, v, N)
    return float(np.linalg.eigvalsh(H)[0])
