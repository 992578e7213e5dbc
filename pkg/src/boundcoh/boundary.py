"""Numerics for the projective 3-cocycle on a product of two projective lines.

Points of P^1 are homogeneous pairs ``(u, v)``; ``v = 0`` is infinity.  The
cross-ratio is evaluated through 2x2 determinants, so infinity needs no
special treatment:

    [a, b; c, d] = ((c - a)(d - b)) / ((c - b)(d - a)),
    with  (x - y) := x_u y_v - x_v y_u.

Everything array-valued takes homogeneous coordinates in the last axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateConfiguration, DomainError, LogDomain

CROSS_RATIO_CONVENTION = "[a,b;c,d] = ((c-a)(d-b))/((c-b)(d-a)), differences as 2x2 determinants"
OMEGA_FORMULA = ("Omega(a,b,c,d) = log[a1,b1;c1,d1] log[b2,c2;d2,a2] "
                 "- log[a2,b2;c2,d2] log[b1,c1;d1,a1]")
F_FORMULA = "F(x1,x2) = log x1 log(1-x2) - log x2 log(1-x1)"

DEGENERACY_TOL = 1e-12
DET_FLOOR = 1e-8
SAMPLE_RANGE = (-10.0, 10.0)
CHUNK = 1000


# ---------------------------------------------------------------------------
# points and group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    u: float
    v: float

    def __post_init__(self):
        u, v = float(self.u), float(self.v)
        m = max(abs(u), abs(v))
        if m == 0 or not math.isfinite(m):
            raise DegenerateConfiguration(f"({u}, {v}) is not a point of P^1")
        if v < 0 or (v == 0 and u < 0):
            u, v = -u, -v
        object.__setattr__(self, "u", u / m)
        object.__setattr__(self, "v", v / m)

    @classmethod
    def of(cls, x) -> "ProjPoint":
        """From a real number, ``inf``/``"inf"``, a pair ``(u, v)``, or a ProjPoint."""
        if isinstance(x, ProjPoint):
            return x
        if isinstance(x, str):
            if x.strip().lower() in ("inf", "infinity", "oo"):
                return cls(1.0, 0.0)
            return cls(float(x), 1.0)
        if isinstance(x, (tuple, list, np.ndarray)):
            if len(x) != 2:
                raise DegenerateConfiguration(f"homogeneous pair expected, got {x!r}")
            return cls(float(x[0]), float(x[1]))
        if math.isinf(x):
            return cls(1.0, 0.0)
        return cls(float(x), 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v])

    @property
    def is_infinite(self) -> bool:
        return self.v == 0


@dataclass(frozen=True)
class BoundaryPoint:
    first: ProjPoint
    second: ProjPoint

    @classmethod
    def of(cls, x1, x2=None) -> "BoundaryPoint":
        if x2 is None:
            if isinstance(x1, BoundaryPoint):
                return x1
            x1, x2 = x1
        return cls(ProjPoint.of(x1), ProjPoint.of(x2))

    def swap(self) -> "BoundaryPoint":
        return BoundaryPoint(self.second, self.first)

    def as_array(self) -> np.ndarray:
        return np.stack([self.first.as_array(), self.second.as_array()])


def _normalized_matrix(g, floor: float) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (2, 2):
        raise DomainError("Mobius factor must be a 2x2 matrix")
    if g[0, 1] == 0 and g[1, 0] == 0 and g[0, 0] == g[1, 1] != 0:
        return np.eye(2)  # scalars act trivially on P^1
    det = float(np.linalg.det(g))
    if not abs(det) > 0:
        raise DomainError("singular Mobius factor")
    g = g / math.sqrt(abs(det))
    if abs(np.linalg.det(g)) < floor:
        raise DomainError("Mobius factor below the determinant floor")
    return g


@dataclass(frozen=True, eq=False)
class MobiusPair:
    g1: np.ndarray
    g2: np.ndarray
    floor: float = DET_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "g1", _normalized_matrix(self.g1, self.floor))
        object.__setattr__(self, "g2", _normalized_matrix(self.g2, self.floor))

    @classmethod
    def identity(cls) -> "MobiusPair":
        return cls(np.eye(2), np.eye(2))

    def act(self, p: BoundaryPoint) -> BoundaryPoint:
        return BoundaryPoint(ProjPoint.of(self.g1 @ p.first.as_array()),
                             ProjPoint.of(self.g2 @ p.second.as_array()))

    def act_array(self, pts: np.ndarray) -> np.ndarray:
        """Apply to an array (..., 2 factors, 2 homogeneous coordinates)."""
        out = np.empty_like(pts)
        out[..., 0, :] = pts[..., 0, :] @ self.g1.T
        out[..., 1, :] = pts[..., 1, :] @ self.g2.T
        return out


# ---------------------------------------------------------------------------
# vectorised kernels
# ---------------------------------------------------------------------------

def _diff(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Homogeneous 'x - y'."""
    return x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]


def _normalize(x: np.ndarray) -> np.ndarray:
    return x / np.max(np.abs(x), axis=-1, keepdims=True)


def check_distinct(points: Sequence[np.ndarray], tol: float = DEGENERACY_TOL) -> None:
    pts = [_normalize(np.asarray(p, dtype=float)) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            gap = np.abs(_diff(pts[i], pts[j]))
            if np.any(gap <= tol):
                raise DegenerateConfiguration(f"points {i} and {j} coincide within {tol:g}")


def cross_ratio_array(a, b, c, d, tol: float = DEGENERACY_TOL) -> np.ndarray:
    a, b, c, d = (_normalize(np.asarray(x, dtype=float)) for x in (a, b, c, d))
    check_distinct([a, b, c, d], tol)
    return _diff(c, a) * _diff(d, b) / (_diff(c, b) * _diff(d, a))


def _log_positive(x: np.ndarray) -> np.ndarray:
    if np.any(x <= 0):
        raise LogDomain("a cross-ratio needed by Omega is not positive; "
                        "Omega is only defined on cyclically ordered configurations")
    return np.log(x)


def omega_array(pts: np.ndarray, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Omega on an array of shape (..., 4 points, 2 factors, 2 coords)."""
    a, b, c, d = (pts[..., k, :, :] for k in range(4))
    f, s = 0, 1
    l_abcd_1 = _log_positive(cross_ratio_array(a[..., f, :], b[..., f, :], c[..., f, :], d[..., f, :], tol))
    l_bcda_2 = _log_positive(cross_ratio_array(b[..., s, :], c[..., s, :], d[..., s, :], a[..., s, :], tol))
    l_abcd_2 = _log_positive(cross_ratio_array(a[..., s, :], b[..., s, :], c[..., s, :], d[..., s, :], tol))
    l_bcda_1 = _log_positive(cross_ratio_array(b[..., f, :], c[..., f, :], d[..., f, :], a[..., f, :], tol))
    return l_abcd_1 * l_bcda_2 - l_abcd_2 * l_bcda_1


def cocycle_defect_array(pts: np.ndarray, tol: float = DEGENERACY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Alternating sum over the five faces; pts has shape (..., 5, 2, 2).

    Returns the defects and the largest |Omega| among the faces of each sample.
    """
    faces = []
    for j in range(5):
        keep = [k for k in range(5) if k != j]
        faces.append(omega_array(pts[..., keep, :, :], tol))
    faces = np.stack(faces, axis=-1)
    signs = np.array([1.0, -1.0, 1.0, -1.0, 1.0])
    return faces @ signs, np.max(np.abs(faces), axis=-1)


def F_array(x1, x2) -> np.ndarray:
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any((x1 <= 0) | (x1 >= 1) | (x2 <= 0) | (x2 >= 1)):
        raise DomainError("F is defined on the open unit square only")
    return np.log(x1) * np.log1p(-x2) - np.log(x2) * np.log1p(-x1)


def rogers_residual_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|F(y) - F(x) - [F((y-x)/(1-x)) - F(x/y) + F(x(1-y)/(y(1-x)))]|, coordinatewise in the last axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    args = [y, x, (y - x) / (1 - x), x / y, x * (1 - y) / (y * (1 - x))]
    vals = [F_array(a[..., 0], a[..., 1]) for a in args]
    return np.abs(vals[0] - vals[1] - (vals[2] - vals[3] + vals[4]))


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------

def cross_ratio(a, b, c, d, tol: float = DEGENERACY_TOL) -> float:
    pts = [ProjPoint.of(x).as_array() for x in (a, b, c, d)]
    return float(cross_ratio_array(*pts, tol=tol))


def F(x1: float, x2: float) -> float:
    return float(F_array(x1, x2))


def omega(a, b, c, d, tol: float = DEGENERACY_TOL) -> float:
    pts = np.stack([BoundaryPoint.of(p).as_array() for p in (a, b, c, d)])
    return float(omega_array(pts, tol))


def cocycle_defect(points: Sequence, tol: float = DEGENERACY_TOL) -> float:
    if len(points) != 5:
        raise DomainError("the cocycle defect needs exactly five points")
    pts = np.stack([BoundaryPoint.of(p).as_array() for p in points])
    return float(cocycle_defect_array(pts, tol)[0])


def rogers_residual(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (2,) or y.shape != (2,):
        raise DomainError("x and y must be pairs")
    if not (np.all(0 < x) and np.all(x < y) and np.all(y < 1)):
        raise DomainError("need 0 < x_i < y_i < 1 in both coordinates")
    return float(rogers_residual_array(x, y))


def invariance_defect(g: MobiusPair, pts: Sequence, tol: float = DEGENERACY_TOL) -> float:
    if len(pts) != 4:
        raise DomainError("Omega takes four points")
    bps = [BoundaryPoint.of(p) for p in pts]
    return abs(omega(*[g.act(p) for p in bps], tol=tol) - omega(*bps, tol=tol))


# ---------------------------------------------------------------------------
# seeded sampling
# ---------------------------------------------------------------------------

def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Generator for one block of CHUNK sample indices, independent of how blocks are scheduled."""
    return np.random.default_rng([int(seed), int(chunk)])


def _chunks(samples: int):
    for k in range(0, samples, CHUNK):
        yield k // CHUNK, min(CHUNK, samples - k)


def sample_ordered(rng: np.random.Generator, n: int, k: int,
                   infinity_prob: float = 0.1) -> np.ndarray:
    """n configurations of k points, coordinates increasing in both factors.

    With probability ``infinity_prob`` per factor the last point is sent to
    infinity, which keeps the cyclic order.
    """
    lo, hi = SAMPLE_RANGE
    x = np.sort(rng.uniform(lo, hi, size=(n, 2, k)), axis=-1)
    pts = np.empty((n, k, 2, 2))
    pts[..., 0] = np.transpose(x, (0, 2, 1))
    pts[..., 1] = 1.0
    inf = rng.random((n, 2)) < infinity_prob
    for f in range(2):
        pts[inf[:, f], k - 1, f, :] = (1.0, 0.0)
    return pts


def _random_mobius(rng: np.random.Generator) -> MobiusPair:
    while True:
        g1, g2 = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
        if abs(np.linalg.det(g1)) > 0.1 and abs(np.linalg.det(g2)) > 0.1:
            return MobiusPair(g1, g2)


def _witness(arr: np.ndarray) -> list:
    return np.asarray(arr).tolist()


def cocycle_sweep(samples: int = 10000, seed: int = 42, tol: float = 1e-9) -> dict:
    worst, worst_ratio, max_abs_def, max_omega = None, -1.0, 0.0, 0.0
    failures = 0
    for chunk, n in _chunks(samples):
        pts = sample_ordered(chunk_rng(seed, chunk), n, 5)
        defect, scale = cocycle_defect_array(pts)
        ratio = np.abs(defect) / (1.0 + scale)
        failures += int(np.sum(ratio >= tol))
        i = int(np.argmax(ratio))
        if ratio[i] > worst_ratio:
            worst_ratio, worst = float(ratio[i]), _witness(pts[i])
        max_abs_def = max(max_abs_def, float(np.max(np.abs(defect))))
        max_omega = max(max_omega, float(np.max(scale)))
    return {
        "samples": samples,
        "max_abs_defect": max_abs_def,
        "max_abs_omega": max_omega,
        "max_relative_defect": worst_ratio,
        "failures": failures,
        "worst_witness": worst,
        "pass": failures == 0 and max_abs_def < tol * (1 + max_omega),
    }


def rogers_sweep(samples: int = 1000, seed: int = 42, tol: float = 1e-9) -> dict:
    worst, max_res = None, -1.0
    for chunk, n in _chunks(samples):
        rng = chunk_rng(seed, chunk)
        u = rng.uniform(0, 1, size=(n, 2, 2))
        x, y = np.min(u, axis=1), np.max(u, axis=1)
        res = rogers_residual_array(x, y)
        i = int(np.argmax(res))
        if res[i] > max_res:
            max_res, worst = float(res[i]), {"x": _witness(x[i]), "y": _witness(y[i])}
    return {"samples": samples, "max_residual": max_res, "worst_witness": worst,
            "pass": max_res < tol}


def invariance_sweep(samples: int = 1000, seed: int = 42, tol: float = 1e-9) -> dict:
    worst, worst_ratio, max_def = None, -1.0, 0.0
    failures = 0
    for chunk, n in _chunks(samples):
        rng = chunk_rng(seed, chunk)
        pts = sample_ordered(rng, n, 4)
        for i in range(n):
            g = _random_mobius(rng)
            base = float(omega_array(pts[i]))
            moved = float(omega_array(g.act_array(pts[i])))
            d = abs(moved - base)
            ratio = d / (1.0 + abs(base))
            max_def = max(max_def, d)
            if ratio >= tol:
                failures += 1
            if ratio > worst_ratio:
                worst_ratio = ratio
                worst = {"points": _witness(pts[i]), "g1": _witness(g.g1), "g2": _witness(g.g2)}
    return {"samples": samples, "max_abs_defect": max_def, "max_relative_defect": worst_ratio,
            "failures": failures, "worst_witness": worst, "pass": failures == 0}


def symmetry_sweep(samples: int = 1000, seed: int = 42, tol: float = 1e-12) -> dict:
    """F(x) + F(1-x) and F(x1,x2) + F(x2,x1) over random points of the open square."""
    max_sym, max_anti, worst = 0.0, 0.0, None
    for chunk, n in _chunks(samples):
        x = chunk_rng(seed, chunk).uniform(0, 1, size=(n, 2))
        sym = np.abs(F_array(x[:, 0], x[:, 1]) + F_array(1 - x[:, 0], 1 - x[:, 1]))
        anti = np.abs(F_array(x[:, 0], x[:, 1]) + F_array(x[:, 1], x[:, 0]))
        i = int(np.argmax(sym))
        if sym[i] >= max_sym:
            max_sym, worst = float(sym[i]), _witness(x[i])
        max_anti = max(max_anti, float(np.max(anti)))
    return {"samples": samples, "max_symmetry_residual": max_sym,
            "max_antisymmetry_residual": max_anti, "worst_witness": worst,
            "pass": max_sym < tol and max_anti < tol}


def normalized_configuration(x1, x2) -> np.ndarray:
    """(0,0), (x1,x2), (1,1), (inf,inf) as a (..., 4, 2, 2) array."""
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    n = x1.shape[0]
    pts = np.zeros((n, 4, 2, 2))
    pts[:, :, :, 1] = 1.0
    pts[:, 1, 0, 0] = x1
    pts[:, 1, 1, 0] = x2
    pts[:, 2, :, 0] = 1.0
    pts[:, 3, :, :] = (1.0, 0.0)
    return pts


def omega_sign_sweep(samples: int = 1000, seed: int = 42, tol: float = 1e-9) -> dict:
    """Find the single sign s with Omega(0, x, 1, inf) = s F(x) at every sampled x."""
    votes = {1: 0, -1: 0}
    max_res = {1: 0.0, -1: 0.0}
    for chunk, n in _chunks(samples):
        x = chunk_rng(seed, chunk).uniform(0, 1, size=(n, 2))
        om = omega_array(normalized_configuration(x[:, 0], x[:, 1]))
        fv = F_array(x[:, 0], x[:, 1])
        for s in (1, -1):
            res = np.abs(om - s * fv) / (1 + np.abs(fv))
            votes[s] += int(np.sum(res < tol))
            max_res[s] = max(max_res[s], float(np.max(res)))
    sigma = next((s for s in (-1, 1) if votes[s] == samples), None)
    return {"samples": samples, "sigma": sigma,
            "max_residual": max_res[sigma] if sigma else min(max_res.values()),
            "pass": sigma is not None}
