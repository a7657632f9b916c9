"""Census engine: enumerate systems, classify each one, persist verdicts.

Classification tries cheap certificates first and records which one settled
the system.  Every verdict is a pure function of the system and the toolbox,
so logs are reproducible regardless of scheduling or worker count.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from collections import Counter
from dataclasses import dataclass, field, replace
from multiprocessing import get_context
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .cremona import (
    Catalog,
    classify_empty_by_base_overload,
    classify_special_by_neg_curve,
    cremona_step,
    default_catalog,
)
from .degeneration import D, SubdimensionResolver, find_degeneration_certificate, max_neg_curve_degree_bound
from .game import SearchBudget, replay, certifies_nonspecial, search
from .linsys import LinearSystem, conditions, expected_dimension, monomials, virtual_dimension
from .oracle import OracleConfig, dimension as oracle_dimension

EMPTY = "EmptyNonSpecial"
NONSPECIAL = "NonSpecial"
SPECIAL = "Special"
UNKNOWN = "Unknown"
CLASSES = (EMPTY, NONSPECIAL, SPECIAL, UNKNOWN)
METHODS = (
    "Game",
    "BaseOverload",
    "MultipleNegCurve",
    "Degeneration",
    "Cremona",
    "QuasiHomog",
    "DegreeBound",
    "Oracle",
    "Manual",
)


class CheckpointCorrupt(RuntimeError):
    pass


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class CensusFilter:
    M: int
    dMax: Optional[int] = None
    requireCandidate: bool = True

    def __post_init__(self) -> None:
        if self.M < 0:
            raise ValueError("M must be nonnegative")
        if self.dMax is None:
            object.__setattr__(self, "dMax", D(self.M) - 1 if self.M >= 1 else 0)

    def to_json(self) -> dict:
        return {"M": self.M, "dMax": self.dMax, "requireCandidate": self.requireCandidate}


def _systems_of_degree(d: int, M: int, candidate: bool) -> Iterator[LinearSystem]:
    # Multisets in lexicographic order of their descending tuples.  A tuple is
    # kept when dropping its smallest point leaves v >= -1, so every system is
    # at most one point past the expected-empty threshold.
    top = min(M, d)
    budget = monomials(d)  # v >= -1  <=>  conditions <= binom(d+2, 2)
    out: list[int] = []

    def rec(used: int, cap: int) -> Iterator[LinearSystem]:
        for m in range(1, cap + 1):
            out.append(m)
            total = used + conditions(m)
            if not candidate or total >= budget:
                yield LinearSystem(d, tuple(out))
            if total <= budget:
                yield from rec(total, m)
            out.pop()

    # rec emits children in increasing order of the next part; a prefix
    # precedes its extensions, which is lexicographic order on tuples
    yield from rec(0, top)


def enumerate_systems(filt: CensusFilter, shard: int = 0, nshards: int = 1) -> Iterator[LinearSystem]:
    """Every system of the filter exactly once, ordered by (d, multiset).

    Shards split the stream by the prefix (d, m_1); shard ``i`` of ``n`` takes
    the prefixes whose running index is ``i`` mod ``n``.
    """
    if not 0 <= shard < nshards:
        raise ValueError("shard index out of range")
    if filt.M < 1:
        return
    prefix_index = -1
    current = None
    for d in range(1, filt.dMax + 1):
        for s in _systems_of_degree(d, filt.M, filt.requireCandidate):
            key = (d, s.mults[0])
            if key != current:
                current = key
                prefix_index += 1
            if prefix_index % nshards == shard:
                yield s


def count_filter_dp(M: int, dMax: int, min_mult: int = 1, candidate: bool = True) -> int:
    """Count the filter by generating functions instead of enumeration.

    Weights are condition counts; a system is counted by its smallest part s:
    the other parts lie in [s, M] and the rest-sum W satisfies W <= N and,
    for candidates, W + c(s) >= N, where N = binom(d+2, 2).
    """
    total = 0
    for d in range(1, dMax + 1):
        N = monomials(d)
        top = min(M, d)
        for s in range(min_mult, top + 1):
            cs = conditions(s)
            # ways[w] = number of multisets with parts in [s, top] of weight w
            ways = np.zeros(N + 1, dtype=object)
            ways[0] = 1
            for m in range(s, top + 1):
                c = conditions(m)
                for w in range(c, N + 1):
                    ways[w] += ways[w - c]
            lo = max(N - cs, 0) if candidate else 0
            total += int(sum(ways[lo : N + 1]))
    return total


def filter_count_report(M: int = 7, dMaxes: Sequence[int] = (28, 29)) -> list[dict]:
    """Counts of the plausible census filters, for comparison with a published total."""
    rows = []
    for dMax in dMaxes:
        for min_mult in (1, 2):
            for candidate in (True, False):
                rows.append(
                    {
                        "M": M,
                        "dMax": dMax,
                        "minMult": min_mult,
                        "candidate": candidate,
                        "count": count_filter_dp(M, dMax, min_mult, candidate),
                    }
                )
    return rows


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Verdict:
    system: LinearSystem
    cls: str
    method: Optional[str]
    cert: dict = field(default_factory=dict)
    dim: Optional[int] = None  # exact when known

    def __post_init__(self) -> None:
        if self.cls not in CLASSES:
            raise ValueError(f"unknown class {self.cls!r}")
        if self.method is not None and self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.cls == EMPTY and self.dim not in (None, -1):
            raise ValueError("an empty verdict has dimension -1")

    @property
    def resolved(self) -> bool:
        return self.cls != UNKNOWN

    def to_json(self) -> dict:
        cert = dict(self.cert)
        if self.dim is not None:
            cert["dim"] = self.dim
        return {"sys": self.system.to_json(), "class": self.cls, "method": self.method, "cert": cert}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _settled(sys: LinearSystem, method: str, cert: dict) -> Verdict:
    e = expected_dimension(sys)
    return Verdict(sys, EMPTY if e == -1 else NONSPECIAL, method, cert, e)


def _brief(v: Verdict) -> dict:
    return {"sys": v.system.to_json(), "class": v.cls, "method": v.method, "dim": v.dim}


# ---------------------------------------------------------------- manual registry

# Homogeneous systems with at least ten points are non-special for m <= 42
# (Dumnicki and Jarnicki, 2007); this is cited, not recomputed.
HOMOGENEOUS_MAX_MULT = 42

# Systems settled by hand arguments that involve special position of the
# degenerated points; the automated certifiers do not reproduce them.
MANUAL_EMPTY: dict[LinearSystem, str] = {
    LinearSystem.from_groups(21, [(1, 1), (6, 4), (7, 6)]): "degeneration with four 7-points on F",
    LinearSystem.from_groups(21, [(1, 2), (3, 1), (6, 1), (7, 8)]): "degeneration with four 7-points on F",
    LinearSystem.from_groups(21, [(5, 1), (6, 2), (7, 7)]): "degeneration with four 7-points on F",
    LinearSystem.from_groups(22, [(2, 1), (6, 1), (7, 9)]): "degeneration with 7-points on F",
    LinearSystem.from_groups(22, [(2, 1), (6, 13)]): "degeneration with matching conditions",
}


def dominates(big: LinearSystem, small: LinearSystem) -> bool:
    """True when every curve of ``big`` lies in ``small``: same degree, and
    ``small``'s points fit slot by slot under ``big``'s, where three simple
    points of ``big`` may stand in for one double point of ``small`` (a fat
    double point is a limit of three general points)."""
    if big.d != small.d:
        return False
    b = list(big.mults)
    s = list(small.mults)
    ones = b.count(1)
    b_heavy = [m for m in b if m >= 2]
    s_doubles = s.count(2)
    # try trading triples of simple points for double points of small
    for trade in range(min(ones // 3, s_doubles), -1, -1):
        bb = sorted(b_heavy + [1] * (ones - 3 * trade) + [2] * trade, reverse=True)
        if len(bb) >= len(s) and all(x >= y for x, y in zip(bb, s)):
            return True
    return False


# ---------------------------------------------------------------- classification


@dataclass
class Toolbox:
    catalog: Catalog = field(default_factory=default_catalog)
    game_nodes: int = 10**6
    use_degree_bound: bool = False
    use_degeneration: bool = True
    degeneration_splits: int = 400
    subsystem_game_nodes: int = 20_000
    use_manual: bool = True
    oracle: Optional[OracleConfig] = None


class Classifier:
    """Memoizing classifier; results depend only on (system, toolbox)."""

    def __init__(self, toolbox: Optional[Toolbox] = None):
        self.toolbox = toolbox or Toolbox()
        self.memo: dict[LinearSystem, Verdict] = {}
        self._inner: Optional[Classifier] = None

    # the degeneration certifier resolves sub-systems with a classifier that
    # cannot recurse into degeneration again
    def _inner_classifier(self) -> "Classifier":
        if self._inner is None:
            tb = replace(self.toolbox, use_degeneration=False, oracle=None)
            self._inner = Classifier(tb)
        return self._inner

    def __call__(self, sys: LinearSystem) -> Verdict:
        hit = self.memo.get(sys)
        if hit is None:
            hit = self._classify(sys)
            self.memo[sys] = hit
        return hit

    def _classify(self, sys: LinearSystem) -> Verdict:
        tb = self.toolbox
        d = sys.d
        if not sys.mults:
            return _settled(sys, "Game", {"strategy": []})
        if sys.max_mult > d:
            return Verdict(sys, EMPTY, "BaseOverload", {"chain": [], "reason": "multiplicity"}, -1)
        if tb.use_degree_bound and max_neg_curve_degree_bound(sys):
            return _settled(sys, "DegreeBound", {"conditional": True})
        if sys.simple_points and sys.simple_points < sys.k:
            v = self._via_core(sys)
            if v is not None:
                return v
        neg = classify_special_by_neg_curve(sys, tb.catalog)
        if neg is not None:
            lower = expected_dimension(neg.witness)
            return Verdict(sys, SPECIAL, "MultipleNegCurve", {**neg.to_json(), "dimLowerBound": lower})
        v = self._via_cremona(sys)
        if v is not None:
            return v
        res = search(sys, SearchBudget(nodes=tb.game_nodes))
        if res.won:
            assert certifies_nonspecial(sys, replay(sys, res.strategy))
            return _settled(sys, "Game", {"strategy": res.strategy.to_json(), "nodes": res.nodes})
        if virtual_dimension(sys) <= -1:
            ov = classify_empty_by_base_overload(sys, tb.catalog)
            if ov is not None:
                return Verdict(sys, EMPTY, "BaseOverload", ov.to_json(), -1)
        if tb.use_degeneration:
            inner = self._inner_classifier()

            def recurse(s: LinearSystem) -> Optional[tuple[int, str]]:
                r = inner(s)
                return (r.dim, r.method) if r.cls in (EMPTY, NONSPECIAL) else None

            resolver = SubdimensionResolver(tb.subsystem_game_nodes, recurse=recurse)
            cert = find_degeneration_certificate(sys, resolver, tb.degeneration_splits)
            if cert is not None:
                return _settled(sys, "Degeneration", cert.to_json())
        if tb.use_manual:
            v = self._manual(sys)
            if v is not None:
                return v
        if tb.oracle is not None:
            ov = oracle_dimension(sys, tb.oracle)
            cls = SPECIAL if ov.specialityGap > 0 else (EMPTY if ov.dim == -1 else NONSPECIAL)
            return Verdict(sys, cls, "Oracle", ov.to_json(), ov.dim)
        return Verdict(sys, UNKNOWN, None, {"gameNodes": res.nodes, "gameExhaustive": res.exhaustive})

    def _via_core(self, sys: LinearSystem) -> Optional[Verdict]:
        # general simple points impose independent conditions on a nonempty
        # system, so a settled core settles the whole system
        core = sys.without_simple_points()
        n = sys.simple_points
        cv = self(core)
        if cv.cls in (EMPTY, NONSPECIAL):
            return _settled(sys, cv.method, {"core": _brief(cv), "simplePoints": n})
        return None

    def _via_cremona(self, sys: LinearSystem) -> Optional[Verdict]:
        if sys.k < 3:
            return None
        step = cremona_step(sys)
        if step.s <= 0 or step.clamped or step.after is None:
            return None
        rv = self(step.after)
        if not rv.resolved:
            return None
        cert = {"step": step.to_json(), "reduced": _brief(rv)}
        if rv.cls == SPECIAL:
            return Verdict(sys, SPECIAL, "Cremona", cert)
        return _settled(sys, "Cremona", cert)

    def _manual(self, sys: LinearSystem) -> Optional[Verdict]:
        groups = sys.groups()
        if len(groups) == 1 and groups[0][1] >= 10 and groups[0][0] <= HOMOGENEOUS_MAX_MULT:
            return _settled(sys, "Manual", {"reference": "homogeneous, at least ten points"})
        if sys in MANUAL_EMPTY and virtual_dimension(sys) <= -1:
            return Verdict(sys, EMPTY, "Manual", {"reference": MANUAL_EMPTY[sys]}, -1)
        for known in MANUAL_EMPTY:
            if known != sys and dominates(sys, known):
                return Verdict(sys, EMPTY, "Manual", {"impliedBy": known.to_json()}, -1)
        return None


_DEFAULT: Optional[Classifier] = None


def classify(sys: LinearSystem, toolbox: Optional[Toolbox] = None) -> Verdict:
    global _DEFAULT
    if toolbox is not None:
        return Classifier(toolbox)(sys)
    if _DEFAULT is None:
        _DEFAULT = Classifier()
    return _DEFAULT(sys)


# ---------------------------------------------------------------- census


@dataclass
class CensusReport:
    filter: CensusFilter
    total: int
    counts: Counter
    unknown: list[LinearSystem]
    contradictions: list[LinearSystem]
    seconds: float
    log_path: Optional[Path] = None

    def breakdown_rows(self) -> list[tuple[str, str, int]]:
        rows = [("total", "", self.total)]
        for (cls, method), n in sorted(self.counts.items(), key=lambda kv: (CLASSES.index(kv[0][0]), kv[0][1] or "")):
            rows.append((cls, method or "", n))
        return rows

    def breakdown_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("class", "method", "count"))
        w.writerows(self.breakdown_rows())
        return buf.getvalue()


_WORKER: Optional[Classifier] = None


def _worker_init(toolbox: Toolbox) -> None:
    global _WORKER
    _WORKER = Classifier(toolbox)


def contradicts(v: Verdict, toolbox: Toolbox) -> bool:
    """Run the opposite certifier: a settled verdict must not admit a
    speciality certificate, and a special one must not admit a game win."""
    if v.cls in (EMPTY, NONSPECIAL):
        return classify_special_by_neg_curve(v.system, toolbox.catalog) is not None
    if v.cls == SPECIAL:
        return search(v.system, SearchBudget(nodes=toolbox.game_nodes)).won
    return False


def _worker_run(batch: list[LinearSystem]) -> list[tuple[str, bool]]:
    assert _WORKER is not None
    out = []
    for s in batch:
        v = _WORKER(s)
        out.append((v.dumps(), contradicts(v, _WORKER.toolbox)))
    return out


def _batches(items: Iterable[LinearSystem], size: int) -> Iterator[list[LinearSystem]]:
    buf: list[LinearSystem] = []
    for s in items:
        buf.append(s)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _load_checkpoint(path: Path, filt: CensusFilter, shard: int, log: Path) -> tuple[int, int, Counter, list]:
    try:
        data = json.loads(path.read_text())
        if data["filter"] != filt.to_json() or data["shard"] != shard:
            raise CheckpointCorrupt("checkpoint belongs to a different run")
        cursor = int(data["cursor"])
        offset = int(data["offset"])
        counts: Counter = Counter()
        for key, n in data["counters"].items():
            cls, method = key.split("/", 1)
            counts[(cls, method or None)] = int(n)
        clashes = [LinearSystem.from_json(x) for x in data.get("contradictions", [])]
    except CheckpointCorrupt:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointCorrupt(f"unreadable checkpoint {path}: {exc}") from exc
    if not log.exists() or log.stat().st_size < offset or cursor < 0:
        raise CheckpointCorrupt("verdict log is shorter than the checkpoint says")
    return cursor, offset, counts, clashes


def _save_checkpoint(
    path: Path, filt: CensusFilter, shard: int, cursor: int, offset: int, counts: Counter, clashes: list
) -> None:
    data = {
        "contradictions": [c.to_json() for c in clashes],
        "filter": filt.to_json(),
        "shard": shard,
        "cursor": cursor,
        "offset": offset,
        "counters": {f"{c}/{m or ''}": n for (c, m), n in sorted(counts.items(), key=str)},
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True) + "\n")
    os.replace(tmp, path)


def census(
    filt: CensusFilter,
    jobs: int = 1,
    checkpoint: Optional[os.PathLike] = None,
    out_dir: Optional[os.PathLike] = None,
    toolbox: Optional[Toolbox] = None,
    shard: int = 0,
    nshards: int = 1,
    batch_size: int = 64,
    stop_after: Optional[int] = None,
) -> CensusReport:
    """Classify every system of the filter, writing one JSON line per system.

    Results are collected in enumeration order, so the log is byte-identical
    for any ``jobs``.  ``stop_after`` interrupts the run after that many
    systems (used to exercise resuming).
    """
    toolbox = toolbox or Toolbox()
    start = time.perf_counter()
    out = Path(out_dir) if out_dir is not None else None
    log_path = None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        log_path = out / "verdicts.jsonl"
    ck = Path(checkpoint) if checkpoint is not None else None
    cursor, offset, counts = 0, 0, Counter()
    unknown: list[LinearSystem] = []
    contradictions: list[LinearSystem] = []
    if ck is not None and ck.exists():
        if log_path is None:
            raise CheckpointCorrupt("resuming needs the output directory of the interrupted run")
        cursor, offset, counts, contradictions = _load_checkpoint(ck, filt, shard, log_path)
        with open(log_path, "rb") as prev:
            for line in prev.read(offset).splitlines():
                rec = json.loads(line)
                if rec["class"] == UNKNOWN:
                    unknown.append(LinearSystem.from_json(rec["sys"]))
    stream = enumerate_systems(filt, shard, nshards)
    for _ in range(cursor):
        next(stream)
    fh = None
    if log_path is not None:
        fh = open(log_path, "r+b" if cursor else "wb")
        fh.truncate(offset)
        fh.seek(offset)
    processed = cursor
    pool = None
    try:
        if jobs > 1:
            pool = get_context("spawn").Pool(jobs, initializer=_worker_init, initargs=(toolbox,))
            results = pool.imap(_worker_run, _batches(stream, batch_size))
        else:
            _worker_init(toolbox)
            results = map(_worker_run, _batches(stream, batch_size))
        for lines in results:
            for line, clash in lines:
                rec = json.loads(line)
                counts[(rec["class"], rec["method"])] += 1
                if rec["class"] == UNKNOWN:
                    unknown.append(LinearSystem.from_json(rec["sys"]))
                if clash:
                    contradictions.append(LinearSystem.from_json(rec["sys"]))
                if fh is not None:
                    fh.write(line.encode() + b"\n")
            processed += len(lines)
            if fh is not None and ck is not None:
                fh.flush()
                _save_checkpoint(ck, filt, shard, processed, fh.tell(), counts, contradictions)
            if stop_after is not None and processed - cursor >= stop_after:
                break
    finally:
        if pool is not None:
            pool.terminate()
        if fh is not None:
            fh.close()
    report = CensusReport(filt, processed, counts, unknown, contradictions, time.perf_counter() - start, log_path)
    if out is not None:
        (out / "breakdown.csv").write_text(report.breakdown_csv())
    return report


def oracle_spot_check(
    verdicts: Sequence[Verdict], n: int = 1000, seed: int = 0, cfg: Optional[OracleConfig] = None
) -> list[tuple[Verdict, int]]:
    """Disagreements between verdicts and the oracle on a random sample."""
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(verdicts), size=min(n, len(verdicts)), replace=False)
    bad = []
    for i in sorted(int(x) for x in idx):
        v = verdicts[i]
        dim = oracle_dimension(v.system, cfg).dim
        if v.cls in (EMPTY, NONSPECIAL):
            ok = dim == v.dim
        elif v.cls == SPECIAL:
            ok = dim > expected_dimension(v.system) and dim >= v.cert.get("dimLowerBound", -1)
        else:
            ok = True
        if not ok:
            bad.append((v, dim))
    return bad


def read_verdicts(path: os.PathLike) -> list[Verdict]:
    out = []
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            cert = dict(rec["cert"])
            dim = cert.pop("dim", None)
            out.append(Verdict(LinearSystem.from_json(rec["sys"]), rec["class"], rec["method"], cert, dim))
    return out
