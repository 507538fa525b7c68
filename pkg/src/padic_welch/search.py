"""Deterministic brute-force search for configurations over bounded-height rationals.

The search space is every ordered n-tuple of vectors whose coordinates come
from a finite entry list. With symmetry pruning only nondecreasing tuples of
vector indices are visited, which quotients out permutations of the vectors.
Work is partitioned by the index of the first vector; partitions are merged
in index order, so hits come out in the same order for any worker count.
"""

from __future__ import annotations

import enum
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import AbsValue, PrimeContext, abs_p, to_rational
from .linalg import FrameConfig, Vector
from .welch import equiangular_check, q1_check, q2_check, zauner_check

DEFAULT_BUDGET = 10_000_000
HEURISTIC_NOTE = "entry set is a heuristic search space; absence of hits says nothing beyond it"


class Mode(enum.Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    ZAUNER = "ZAUNER"
    ZAUNER_STRONG = "ZAUNER_STRONG"
    EQUIANGULAR = "EQUIANGULAR"


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"search space estimate {estimate} exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class SearchSpec:
    p: int
    d: int
    n: Optional[int]
    mode: Mode = Mode.Q1
    height: int = 1
    entries: Union[str, tuple] = "auto"
    symmetry_pruning: bool = True
    limit: Optional[int] = None
    a: Optional[Fraction] = None
    gamma: Optional[AbsValue] = None
    n_override: Optional[int] = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        PrimeContext(self.p)
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.d < 1:
            raise ValueError("d must be positive")
        if mode in (Mode.ZAUNER, Mode.ZAUNER_STRONG):
            if self.n is None:
                object.__setattr__(self, "n", self.d * self.d)
            elif self.n != self.d * self.d:
                raise ValueError(f"Zauner modes force n = d^2 = {self.d * self.d}, got n={self.n}")
        if self.n is None or self.n < 1:
            raise ValueError("n must be positive")
        if self.height < 1:
            raise ValueError("height bound must be at least 1")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be positive")
        if mode is Mode.EQUIANGULAR:
            if self.a is None or self.gamma is None:
                raise ValueError("EQUIANGULAR mode needs both a and gamma")
            object.__setattr__(self, "a", to_rational(self.a))
            if self.gamma.p != self.p:
                raise ValueError("gamma must be an absolute value over the search prime")
        if not isinstance(self.entries, str):
            object.__setattr__(self, "entries", tuple(to_rational(e) for e in self.entries))
        elif self.entries != "auto":
            raise ValueError("entries must be 'auto' or an explicit list")


@dataclass
class Hit:
    config: FrameConfig
    report: object


@dataclass
class SearchResult:
    spec: SearchSpec
    entries: list
    hits: list
    configs_scanned: int
    wall_time: float
    estimate: int
    notes: list = field(default_factory=list)


def candidate_entries(spec: SearchSpec) -> list:
    if spec.entries == "auto":
        h = spec.height
        vals = {Fraction(a, b) for b in range(1, h + 1) for a in range(-h, h + 1)}
    else:
        vals = set(spec.entries)
    if not vals:
        raise ValueError("entry set is empty")
    return sorted(vals)


def estimate_size(spec: SearchSpec, n_entries: int) -> int:
    return n_entries ** (spec.n * spec.d)


def _self_inner_target(spec: SearchSpec):
    if spec.mode is Mode.EQUIANGULAR:
        return spec.a
    return Fraction(1)


def _candidate_vectors(spec: SearchSpec, entries: list) -> list:
    """Coordinate tuples, lexicographic in entry order, that can appear in a hit."""
    target = _self_inner_target(spec)
    need_norm = spec.mode in (Mode.Q2, Mode.ZAUNER_STRONG)
    ctx = PrimeContext(spec.p)
    one = AbsValue.one(spec.p)
    out = []
    for coords in itertools.product(entries, repeat=spec.d):
        if sum(c * c for c in coords) != target:
            continue
        if need_norm and max(abs_p(ctx, c) for c in coords) != one:
            continue
        out.append(coords)
    return out


def _tight(vectors: Sequence[tuple], d: int) -> bool:
    s = [[0] * d for _ in range(d)]
    for c in vectors:
        for i in range(d):
            ci = c[i]
            if ci:
                row = s[i]
                for j in range(i, d):
                    row[j] += ci * c[j]
    b = s[0][0]
    for i in range(d):
        if s[i][i] != b:
            return False
        for j in range(i + 1, d):
            if s[i][j]:
                return False
    return True


def _needs_tight(mode: Mode) -> bool:
    return mode is not Mode.EQUIANGULAR


def _full_check(spec: SearchSpec, config: FrameConfig):
    mode = spec.mode
    if mode is Mode.Q1:
        r = q1_check(config)
        return r.ok, r
    if mode is Mode.Q2:
        r = q2_check(config)
        return r.ok, r
    if mode in (Mode.ZAUNER, Mode.ZAUNER_STRONG):
        r = zauner_check(config, strong=mode is Mode.ZAUNER_STRONG, n_override=spec.n_override)
        return r.verdict, r
    r = equiangular_check(config, spec.a, spec.gamma)
    return r.ok, r


def _index_tuples(first: int, n_vectors: int, n: int, pruning: bool):
    if n == 1:
        yield (first,)
        return
    if pruning:
        for rest in itertools.combinations_with_replacement(range(first, n_vectors), n - 1):
            yield (first,) + rest
    else:
        for rest in itertools.product(range(n_vectors), repeat=n - 1):
            yield (first,) + rest


def _scan_partition(args):
    """Scan configurations starting with vector ``first``.

    Returns (hits, scanned) where each hit is (scan position, index tuple).
    """
    spec, vectors, first, limit = args
    ctx = PrimeContext(spec.p)
    hits = []
    scanned = 0
    check_tight = _needs_tight(spec.mode)
    for idx in _index_tuples(first, len(vectors), spec.n, spec.symmetry_pruning):
        scanned += 1
        chosen = [vectors[i] for i in idx]
        if check_tight and not _tight(chosen, spec.d):
            continue
        config = FrameConfig(ctx, spec.d, tuple(Vector(ctx, c) for c in chosen))
        ok, _ = _full_check(spec, config)
        if ok:
            hits.append((scanned - 1, idx))
            if limit is not None and len(hits) >= limit:
                break
    return hits, scanned


def run_search(spec: SearchSpec, workers: int = 1) -> SearchResult:
    start = time.perf_counter()
    entries = candidate_entries(spec)
    estimate = estimate_size(spec, len(entries))
    if estimate > spec.budget:
        raise BudgetExceeded(estimate, spec.budget)
    vectors = _candidate_vectors(spec, entries)
    jobs = [(spec, vectors, first, spec.limit) for first in range(len(vectors))]

    merged, scanned = [], 0
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            part, count = _scan_partition(job)
            scanned, done = _merge(merged, part, count, scanned, spec.limit)
            if done:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part, count in pool.map(_scan_partition, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                if spec.limit is not None and len(merged) >= spec.limit:
                    continue
                scanned, _ = _merge(merged, part, count, scanned, spec.limit)

    ctx = PrimeContext(spec.p)
    hits = []
    for idx in merged:
        config = FrameConfig(ctx, spec.d, tuple(Vector(ctx, vectors[i]) for i in idx))
        ok, report = _full_check(spec, config)
        if not ok:
            raise AssertionError(f"hit {idx} failed re-validation")
        hits.append(Hit(config, report))
    notes = [HEURISTIC_NOTE]
    if spec.mode in (Mode.ZAUNER, Mode.ZAUNER_STRONG) and spec.n_override is None:
        notes.append("Zauner (iii) target read as |d^2|_p")
    return SearchResult(spec, entries, hits, scanned, time.perf_counter() - start, estimate, notes)


def _merge(merged: list, part: list, count: int, scanned: int, limit: Optional[int]):
    if limit is not None and len(merged) + len(part) >= limit:
        take = limit - len(merged)
        pos, _ = part[take - 1]
        merged.extend(idx for _, idx in part[:take])
        return scanned + pos + 1, True
    merged.extend(idx for _, idx in part)
    return scanned + count, False


def revalidate(spec: SearchSpec, hit: Hit) -> bool:
    return _full_check(spec, hit.config)[0]


# Generators of provably tight configurations, used by the property suites.

def pythagorean_rotation(u: int, v: int):
    """Rational (c, s) with c^2 + s^2 = 1 from the parametrisation of Pythagorean triples."""
    if u == 0 and v == 0:
        raise ValueError("u and v cannot both be zero")
    q = u * u + v * v
    return Fraction(u * u - v * v, q), Fraction(2 * u * v, q)


def random_orthogonal(rng: random.Random, d: int, rotations: int = 2, max_param: int = 5) -> list:
    """Rows of a random rational orthogonal d x d matrix (Q Q^T = I exactly)."""
    perm = list(range(d))
    rng.shuffle(perm)
    rows = []
    for i in range(d):
        r = [Fraction(0)] * d
        r[perm[i]] = Fraction(rng.choice((-1, 1)))
        rows.append(r)
    if d < 2:
        return rows
    for _ in range(rotations):
        i, j = rng.sample(range(d), 2)
        u, v = rng.randint(1, max_param), rng.randint(0, max_param)
        c, s = pythagorean_rotation(u, v)
        for r in rows:
            r[i], r[j] = c * r[i] - s * r[j], s * r[i] + c * r[j]
    return rows


def random_tight_config(rng: random.Random, p: int, d: int, copies: int,
                        scale: bool = False, max_param: int = 5) -> FrameConfig:
    """Union of ``copies`` rationally rotated orthonormal bases, frame operator = copies * c^2 * I."""
    c = Fraction(1)
    if scale:
        c = Fraction(rng.choice((-1, 1)) * rng.randint(1, 12), rng.randint(1, 12))
    vectors = []
    for _ in range(copies):
        for row in random_orthogonal(rng, d, rotations=rng.randint(0, 3), max_param=max_param):
            vectors.append([c * x for x in row])
    return FrameConfig.of(p, d, vectors)


def random_config(rng: random.Random, p: int, d: int, n: int, height: int = 10) -> FrameConfig:
    """Arbitrary (almost never tight) configuration with bounded-height entries."""
    def entry():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))
    return FrameConfig.of(p, d, [[entry() for _ in range(d)] for _ in range(n)])


def random_line_config(rng: random.Random, p: int, n: int, height: int = 10) -> FrameConfig:
    """d = 1 configuration; every one is tight at every tensor order."""
    return random_config(rng, p, 1, n, height)
