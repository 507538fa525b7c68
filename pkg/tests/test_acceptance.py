"""Exit criteria. Each test carries an ``acceptance`` marker; the terminal summary
prints one PASS/FAIL line per criterion."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from padic_welch.cli import run
from padic_welch.core import AbsValue, PrimeContext, binomial, binomial_valuation, kummer_carries, \
    legendre_factorial_valuation, valuation
from padic_welch.formats import parse_config, render_config
from padic_welch.linalg import FrameConfig, check_tight, frame_operator, gram, inner, trace
from padic_welch.search import (Mode, SearchSpec, random_config, random_line_config, random_tight_config,
                                revalidate, run_search)
from padic_welch.symtensor import (check_sym_tight, enumerate_multi_indices, lift, multinomial, sym_dim,
                                   sym_frame_operator, sym_inner)
from padic_welch.welch import (NotTightError, classical_secondary_bounds, classical_welch, gerzon, q1_check,
                               welch_first_order, welch_general)

from conftest import trial_valuation
from test_cli import GOLDEN, write

PRIMES = (2, 3, 5, 7)
REL = 1e-12


def _tight_family(rng, count):
    out = []
    while len(out) < count:
        p = rng.choice(PRIMES)
        d = rng.randint(1, 4)
        copies = rng.randint(1, 12 // d)
        out.append(random_tight_config(rng, p, d, copies, scale=rng.random() < 0.5))
    return out


@pytest.mark.acceptance(1, "first-order bound holds on 500 generated tight configurations")
def test_first_order_suite():
    rng = random.Random(20221)
    configs = _tight_family(rng, 500)
    assert all(c.n <= 12 and c.d <= 4 for c in configs)
    equalities = 0
    for c in configs:
        r = welch_general(c, 1)
        assert r.precondition.is_tight
        assert r.holds, (render_config(c), r)
        assert r.lhs == max(r.diag_term, r.max_offdiag)
        equalities += r.equality
    assert equalities > 0


@pytest.mark.acceptance(2, "higher-order bound holds on order-m tight configs; m = 1 paths agree")
def test_higher_order_suite():
    rng = random.Random(20224)
    checked = 0
    for m in (2, 3):
        for _ in range(150):
            cfg = random_line_config(rng, rng.choice(PRIMES), rng.randint(1, 12), height=rng.randint(1, 30))
            assert check_sym_tight(cfg, m).is_tight
            r = welch_general(cfg, m)
            assert r.holds, (render_config(cfg), m)
            checked += 1
        for cfg in _tight_family(rng, 60):
            if check_sym_tight(cfg, m).is_tight:
                assert welch_general(cfg, m).holds
                checked += 1
            else:
                with pytest.raises(NotTightError):
                    welch_general(cfg, m)
    assert checked >= 300

    rng = random.Random(20225)
    tight_seen = 0
    for i in range(200):
        p = rng.choice(PRIMES)
        if i % 2:
            cfg = random_config(rng, p, rng.randint(1, 4), rng.randint(1, 8), height=6)
        else:
            cfg = _tight_family(rng, 1)[0]
        plain, lifted = check_tight(cfg), check_sym_tight(cfg, 1)
        assert plain == lifted
        if plain.is_tight:
            tight_seen += 1
            a, b = welch_general(cfg, 1), welch_first_order(cfg)
            assert (a.lhs, a.rhs, a.holds, a.equality) == (b.lhs, b.rhs, b.holds, b.equality)
        else:
            with pytest.raises(NotTightError):
                welch_general(cfg, 1)
            with pytest.raises(NotTightError):
                welch_first_order(cfg)
    assert tight_seen >= 100


@pytest.mark.acceptance(3, "equality witnesses: ONB, and d = 1 +-1 configs iff n odd")
def test_equality_witnesses():
    for p in (2, 3, 5):
        ctx = PrimeContext(p)
        for d in range(1, 7):
            r = welch_general(FrameConfig.onb(p, d), 1)
            expected = AbsValue(p, -valuation(ctx, d))
            assert r.lhs == r.rhs == expected and r.equality
    for n in range(1, 7):
        verdicts = {q1_check(FrameConfig.of(2, 1, [[s] for s in signs])).ok
                    for signs in itertools.product((1, -1), repeat=n)}
        assert verdicts == {n % 2 == 1}
        res = run_search(SearchSpec(2, 1, n, Mode.Q1, entries=(1, -1), symmetry_pruning=False))
        assert len(res.hits) == (2 ** n if n % 2 else 0)


@pytest.mark.acceptance(4, "tensor power identity on 1000 random pairs")
def test_tensor_identity():
    ctx = PrimeContext(3)
    x, y = FrameConfig.of(3, 2, [[1, 2], [3, 4]]).vectors
    assert sym_inner(lift(x, 2), lift(y, 2)) == 121 == inner(x, y) ** 2
    rng = random.Random(20226)

    def q():
        return Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))

    for _ in range(1000):
        d, m = rng.randint(1, 4), rng.randint(1, 3)
        x = FrameConfig(ctx, d, ([q() for _ in range(d)],)).vectors[0]
        y = FrameConfig(ctx, d, ([q() for _ in range(d)],)).vectors[0]
        assert sym_inner(lift(x, m), lift(y, m)) == inner(x, y) ** m


@pytest.mark.acceptance(5, "trace identities on 300 random configurations")
def test_trace_identities():
    rng = random.Random(20227)
    for i in range(300):
        p = rng.choice(PRIMES)
        cfg = random_config(rng, p, rng.randint(1, 3), rng.randint(1, 7), height=8) if i % 3 else \
            _tight_family(rng, 1)[0]
        g = gram(cfg)
        n = cfg.n
        s = frame_operator(cfg)
        assert trace(s) == sum(g[j, j] for j in range(n))
        assert trace(s @ s) == sum(g[j, k] * g[k, j] for j in range(n) for k in range(n))
        if cfg.d <= 3:
            for m in (2, 3):
                sm = sym_frame_operator(cfg, m)
                assert trace(sm) == sum(g[j, j] ** m for j in range(n))
                assert trace(sm @ sm) == sum(g[j, k] ** m * g[k, j] ** m for j in range(n) for k in range(n))


@pytest.mark.acceptance(6, "Sym^m dimension equals multi-index count; multinomial row sums")
def test_sym_dimension():
    for d in range(1, 7):
        for m in range(1, 6):
            idx = enumerate_multi_indices(d, m)
            assert sym_dim(d, m) == len(idx) == len(set(idx))
            assert sum(multinomial(m, a) for a in idx) == d ** m


@pytest.mark.acceptance(7, "Kummer = Legendre = factorisation for all k <= n <= 300")
def test_kummer_legendre():
    for p in PRIMES:
        ctx = PrimeContext(p)
        leg = [legendre_factorial_valuation(ctx, n) for n in range(301)]
        for n in range(301):
            for k in range(n + 1):
                carries = kummer_carries(p, k, n - k)
                assert carries == leg[n] - leg[k] - leg[n - k]
                assert carries == trial_valuation(Fraction(binomial(n, k)), p)
                assert binomial_valuation(ctx, n, k) == carries


@pytest.mark.acceptance(8, "classical comparator values")
def test_classical_values():
    assert math.isclose(classical_welch(2, 4, 1)["max_bound"], 1 / 3, rel_tol=REL)
    assert gerzon(3, "C") == 9 and gerzon(3, "R") == 6
    assert classical_secondary_bounds(4, 17, "C").orthoplex == 0.5
    cb = classical_secondary_bounds(2, 5, "C")
    assert math.isclose(cb.levenstein, 2 / 3, rel_tol=REL)
    assert math.isclose(cb.exponential, 0.6, rel_tol=REL)
    assert math.isclose(classical_secondary_bounds(2, 4, "C").bukh_cox, 1 / math.sqrt(3), rel_tol=REL)


SEARCH_SPECS = [
    SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1)),
    SearchSpec(2, 1, 3, Mode.Q1, entries=(1, -1), symmetry_pruning=False),
    SearchSpec(2, 1, 2, Mode.Q1, entries=(1, -1)),
    SearchSpec(2, 2, 2, Mode.Q1, entries=(0, 1, -1)),
    SearchSpec(2, 2, 2, Mode.Q1, entries=(0, 1, -1), symmetry_pruning=False),
]


@pytest.mark.acceptance(9, "search hits identical for 1 and 4 workers; every hit re-validates")
def test_search_determinism():
    for spec in SEARCH_SPECS:
        a, b = run_search(spec, workers=1), run_search(spec, workers=4)
        ka = [tuple(v.coords for v in h.config.vectors) for h in a.hits]
        kb = [tuple(v.coords for v in h.config.vectors) for h in b.hits]
        assert ka == kb
        assert all(revalidate(spec, h) for h in a.hits + b.hits)
    assert len(run_search(SEARCH_SPECS[0]).hits) == 4
    assert run_search(SEARCH_SPECS[2]).hits == []


@pytest.mark.acceptance(10, "config round trip on 100 random configs; golden exit codes")
def test_cli_contract(tmp_path):
    rng = random.Random(20228)
    for _ in range(100):
        p = rng.choice((2, 3, 5, 7, 11, 10007))
        d, n = rng.randint(1, 5), rng.randint(1, 8)
        cfg = FrameConfig.of(p, d, [[Fraction(rng.randint(-10**40, 10**40), rng.randint(1, 10**25))
                                     for _ in range(d)] for _ in range(n)])
        text = render_config(cfg)
        back = parse_config(text)
        assert back == cfg and render_config(back) == text
    for i, (command, doc, extra, code) in enumerate(GOLDEN):
        got, _ = run([command, "--input", write(tmp_path, doc, f"g{i}.json")] + extra)
        assert got == code, (command, doc, extra)
