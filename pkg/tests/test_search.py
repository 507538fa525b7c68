import itertools
import random
from fractions import Fraction

import pytest

from padic_welch.core import AbsValue
from padic_welch.linalg import FrameConfig, check_tight, frame_operator, Matrix
from padic_welch.search import (BudgetExceeded, Mode, SearchSpec, candidate_entries, pythagorean_rotation,
                                random_orthogonal, random_tight_config, revalidate, run_search)
from padic_welch.welch import q1_check

F = Fraction


def coords_of(hit):
    return tuple(tuple(v.coords) for v in hit.config.vectors)


def brute_force(spec, checker):
    """Oracle: every ordered tuple of vectors over the entry list, no pre-filtering."""
    entries = sorted(set(spec.entries))
    vecs = list(itertools.product(entries, repeat=spec.d))
    out = []
    for cfg in itertools.product(vecs, repeat=spec.n):
        if checker(FrameConfig.of(spec.p, spec.d, cfg)):
            out.append(cfg)
    return out


def test_candidate_entries():
    assert candidate_entries(SearchSpec(2, 1, 1, height=1)) == [-1, 0, 1]
    assert candidate_entries(SearchSpec(2, 1, 1, height=2)) == [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2]
    assert candidate_entries(SearchSpec(2, 1, 1, entries=[1, -1, 1])) == [-1, 1]


def test_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec(2, 2, 3, mode=Mode.ZAUNER)
    assert SearchSpec(2, 2, None, mode=Mode.ZAUNER).n == 4
    with pytest.raises(ValueError):
        SearchSpec(4, 1, 1)
    with pytest.raises(ValueError):
        SearchSpec(2, 1, 1, mode=Mode.EQUIANGULAR)
    with pytest.raises(ValueError):
        SearchSpec(2, 1, 1, height=0)


def test_d1_n3_all_hits():
    spec = SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1))
    res = run_search(spec)
    assert len(res.hits) == 4
    unpruned = run_search(SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1), symmetry_pruning=False))
    assert len(unpruned.hits) == 8 == unpruned.configs_scanned


def test_d1_n2_no_hits():
    assert run_search(SearchSpec(2, 1, 2, Mode.Q1, entries=(1, -1))).hits == []


def test_d2_onb_is_hit():
    res = run_search(SearchSpec(2, 2, 2, Mode.Q1, entries=(0, 1, -1)))
    assert ((F(0), F(1)), (F(1), F(0))) in [coords_of(h) for h in res.hits]
    for h in res.hits:
        assert revalidate(res.spec, h)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_completeness_d1(n):
    spec = SearchSpec(2, 1, n, Mode.Q1, entries=(1, -1), symmetry_pruning=False)
    got = [coords_of(h) for h in run_search(spec).hits]
    expected = brute_force(spec, lambda c: q1_check(c).ok)
    assert got == expected
    # by hand: every +-1 configuration is a hit iff n is odd
    assert len(expected) == (2 ** n if n % 2 else 0)


@pytest.mark.parametrize("d,n,mode", [(1, 1, Mode.Q1), (1, 2, Mode.Q1), (1, 3, Mode.Q1), (2, 1, Mode.Q1),
                                      (2, 2, Mode.Q1), (2, 3, Mode.Q1), (2, 2, Mode.Q2), (2, 3, Mode.Q2)])
def test_pruning_consistency(d, n, mode):
    base = dict(p=2, d=d, n=n, mode=mode, height=1)
    pruned = [coords_of(h) for h in run_search(SearchSpec(**base)).hits]
    full = [coords_of(h) for h in run_search(SearchSpec(**base, symmetry_pruning=False)).hits]
    assert sorted(set(tuple(sorted(c)) for c in full)) == sorted(tuple(sorted(c)) for c in pruned)


def test_unpruned_matches_oracle_d2():
    spec = SearchSpec(3, 2, 2, Mode.Q1, entries=(0, 1, -1), symmetry_pruning=False)
    assert [coords_of(h) for h in run_search(spec).hits] == brute_force(spec, lambda c: q1_check(c).ok)


@pytest.mark.parametrize("spec", [
    SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1)),
    SearchSpec(2, 1, 2, Mode.Q1, entries=(1, -1)),
    SearchSpec(2, 2, 2, Mode.Q1, entries=(0, 1, -1)),
    SearchSpec(2, 2, 3, Mode.Q2, height=2, symmetry_pruning=False),
])
def test_worker_determinism(spec):
    a = run_search(spec, workers=1)
    b = run_search(spec, workers=4)
    assert [coords_of(h) for h in a.hits] == [coords_of(h) for h in b.hits]
    assert a.configs_scanned == b.configs_scanned


def test_limit_deterministic():
    spec = SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1), symmetry_pruning=False, limit=3)
    a, b = run_search(spec, workers=1), run_search(spec, workers=3)
    assert len(a.hits) == 3
    assert [coords_of(h) for h in a.hits] == [coords_of(h) for h in b.hits]
    assert a.configs_scanned == b.configs_scanned == 3


def test_budget():
    spec = SearchSpec(2, 3, 4, Mode.Q1, height=3, budget=1000)
    with pytest.raises(BudgetExceeded) as e:
        run_search(spec)
    assert e.value.estimate == 15 ** 12  # 0, +-1, +-2, +-3, +-1/2, +-3/2, +-1/3, +-2/3


def test_zauner_modes():
    res = run_search(SearchSpec(2, 1, None, Mode.ZAUNER, entries=(1, -1, 2)))
    assert [coords_of(h) for h in res.hits] == [((F(-1),),), ((F(1),),)]
    assert all(h.report.verdict for h in res.hits)
    assert run_search(SearchSpec(2, 2, None, Mode.ZAUNER_STRONG, height=1)).hits == []


def test_equiangular_mode():
    spec = SearchSpec(2, 1, 2, Mode.EQUIANGULAR, entries=(1, -1), a=1, gamma=AbsValue(2, 0))
    res = run_search(spec)
    assert len(res.hits) == 3
    for h in res.hits:
        assert revalidate(spec, h)


def test_pythagorean_and_orthogonal():
    c, s = pythagorean_rotation(2, 1)
    assert (c, s) == (F(3, 5), F(4, 5))
    rng = random.Random(7)
    for d in range(1, 5):
        rows = random_orthogonal(rng, d, rotations=4)
        for i in range(d):
            for j in range(d):
                assert sum(a * b for a, b in zip(rows[i], rows[j])) == (1 if i == j else 0)


def test_tight_generator():
    rng = random.Random(1)
    for _ in range(50):
        d = rng.randint(1, 4)
        k = rng.randint(1, 3)
        cfg = random_tight_config(rng, 3, d, k, scale=True)
        r = check_tight(cfg)
        assert r.is_tight
        assert frame_operator(cfg) == Matrix.identity(d, r.b)
