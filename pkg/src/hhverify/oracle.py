"""Ground-truth dimensions from the fat-point interpolation matrix over F_p.

Points are drawn uniformly in the affine chart Z = 1.  An m-fold point
contributes one row per derivative d^a/dx^a d^b/dy^b with a + b < m, evaluated
on every monomial x^i y^j of degree at most d.  Random points can only lose
rank, so the rank maximized over several seeds is the generic one with high
probability.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .linsys import LinearSystem, conditions, expected_dimension, monomials

MERSENNE31 = 2**31 - 1


class FieldTooSmall(ValueError):
    pass


class DegeneratePointsExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    prime: int = MERSENNE31
    seeds: tuple[int, ...] = (1, 2, 3)
    max_columns: int = 2000
    max_rejections: int = 100

    def __post_init__(self) -> None:
        if self.prime >= 2**31:
            raise ValueError("prime must stay below 2^31 for int64 elimination")
        if not self.seeds:
            raise ValueError("at least one seed is required")


@dataclass(frozen=True)
class OracleVerdict:
    dim: int
    specialityGap: int
    seedsAgreed: bool
    ranks: tuple[int, ...]
    prime: int
    seeds: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return self.dim == -1

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "specialityGap": self.specialityGap,
            "seedsAgreed": self.seedsAgreed,
            "ranks": list(self.ranks),
            "prime": self.prime,
            "seeds": list(self.seeds),
        }


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p by row reduction (destroys a copy)."""
    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if below.size:
            f = a[below, c][:, None]
            a[np.ix_(below, np.arange(c, ncols))] = (a[below, c:] - f * a[r, c:]) % p
        r += 1
    return r


def _falling(n_max: int, a_max: int, p: int) -> np.ndarray:
    # ff[n, a] = n (n-1) ... (n-a+1) mod p
    ff = np.zeros((n_max + 1, a_max + 1), dtype=np.int64)
    for n in range(n_max + 1):
        acc = 1
        ff[n, 0] = 1
        for a in range(1, min(a_max, n) + 1):
            acc = acc * (n - a + 1) % p
            ff[n, a] = acc
    return ff


def _powers(x: int, n: int, p: int) -> np.ndarray:
    out = np.ones(n + 1, dtype=np.int64)
    for e in range(1, n + 1):
        out[e] = out[e - 1] * x % p
    return out


def condition_matrix(d: int, mults: Sequence[int], points: Sequence[tuple[int, int]], p: int) -> np.ndarray:
    """Rows: derivative conditions per point; columns: monomials x^i y^j, i + j <= d."""
    idx = [(i, j) for j in range(d + 1) for i in range(d - j + 1)]
    ii = np.array([i for i, _ in idx], dtype=np.int64)
    jj = np.array([j for _, j in idx], dtype=np.int64)
    mmax = max(mults, default=0)
    ff = _falling(d, max(mmax - 1, 0), p)
    rows = []
    for m, (x, y) in zip(mults, points):
        xp = _powers(x, d, p)
        yp = _powers(y, d, p)
        for a in range(m):
            for b in range(m - a):
                ok = (ii >= a) & (jj >= b)
                ia = np.where(ok, ii - a, 0)
                jb = np.where(ok, jj - b, 0)
                val = ff[ii, a] * ff[jj, b] % p * xp[ia] % p * yp[jb] % p
                rows.append(np.where(ok, val, 0))
    if not rows:
        return np.zeros((0, len(idx)), dtype=np.int64)
    return np.vstack(rows)


def _collinear(p1, p2, p3, p: int) -> bool:
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    return ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) % p == 0


def sample_points(k: int, rng: np.random.Generator, p: int, max_rejections: int = 100) -> list[tuple[int, int]]:
    for _ in range(max_rejections):
        pts = [(int(rng.integers(p)), int(rng.integers(p))) for _ in range(k)]
        if len(set(pts)) < k:
            continue
        if any(_collinear(a, b, c, p) for a, b, c in combinations(pts, 3)):
            continue
        return pts
    raise DegeneratePointsExhausted(f"could not draw {k} points in general position")


def _rng(seed: int, sys: LinearSystem) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, sys.d, sys.k, *sys.mults]))


def rank_at_random_points(sys: LinearSystem, seed: int, cfg: OracleConfig) -> int:
    pts = sample_points(sys.k, _rng(seed, sys), cfg.prime, cfg.max_rejections)
    return rank_mod_p(condition_matrix(sys.d, sys.mults, pts, cfg.prime), cfg.prime)


def dimension(sys: LinearSystem, cfg: Optional[OracleConfig] = None) -> OracleVerdict:
    cfg = cfg or OracleConfig()
    n = monomials(sys.d)
    if cfg.prime <= max(n, sys.d, sys.max_mult):
        raise FieldTooSmall(f"prime {cfg.prime} too small for degree {sys.d}")
    if n > cfg.max_columns:
        raise ValueError(f"{n} columns exceed the matrix budget {cfg.max_columns}")
    ranks = tuple(rank_at_random_points(sys, s, cfg) for s in cfg.seeds)
    dim = n - 1 - max(ranks)
    e = expected_dimension(sys)
    assert dim >= e, "maximal rank exceeds the number of conditions"
    return OracleVerdict(dim, dim - e, len(set(ranks)) == 1, ranks, cfg.prime, tuple(cfg.seeds))


def speciality_witness(sys: LinearSystem, cfg: Optional[OracleConfig] = None) -> bool:
    return dimension(sys, cfg).specialityGap > 0


def row_count(sys: LinearSystem) -> int:
    return sum(conditions(m) for m in sys.mults)
