"""Acceptance criteria, one test each; the terminal summary prints a PASS/FAIL line per criterion."""

import random
import time
from collections import defaultdict
from statistics import mean

import pytest

from conftest import DATA, make_b6, make_bowtie, make_complete, random_graph
from triclub import conflict
from triclub.bounds import multi_lb, neighborhood_lower_bound
from triclub.fileio import parse_graph
from triclub.graph import delete_edge, delete_vertex
from triclub.metrics import compute_metrics
from triclub.oracle import brute_force_constrained, brute_force_opt
from triclub.reductions import (
    BranchContext,
    Variant,
    Workspace,
    cascading_rule,
    irr,
    lcr,
    ldr,
    ltr,
    matching_bound,
    mir,
    no_choice_rule,
    two_nr,
)
from triclub.solver import Algorithm, Instance, SolverConfig, solve, verify_solution

ALGORITHMS = [a.value for a in Algorithm]
VARIANTS = ["vertex", "edge"]
DENSITIES = [0.2, 0.4, 0.6, 0.8]


def random_instances(seed, count):
    """``count`` graphs, equally many per density, n uniform in [4, 12]."""
    rng = random.Random(seed)
    for i in range(count):
        yield random_graph(rng, rng.randint(4, 12), DENSITIES[i % 4])


@pytest.mark.criterion(1, "oracle equivalence, 800 random graphs x ell 1-3 x 2 variants x 4 algorithms")
def test_c1_oracle_equivalence(report):
    mismatches, invalid, solves = [], 0, 0
    for gi, g in enumerate(random_instances(1, 800)):
        for ell in (1, 2, 3):
            for variant in VARIANTS:
                opt = brute_force_opt(g.adj, ell, variant)[0]
                for algorithm in ALGORITHMS:
                    sol = solve(Instance(g, ell, variant), SolverConfig(algorithm))
                    solves += 1
                    if sol.size != opt:
                        mismatches.append((gi, ell, variant, algorithm, sol.size, opt))
                    if not verify_solution(g, sol.vertices, ell, variant)[0]:
                        invalid += 1
    report(f"{solves} solves, {len(mismatches)} size mismatches, {invalid} invalid witnesses")
    assert not mismatches and not invalid, mismatches[:5]


@pytest.mark.criterion(2, "fixed fixtures B6, bowtie, K4")
def test_c2_fixtures(report):
    expected = [("B6", make_b6(), 1, "vertex", 3), ("B6", make_b6(), 1, "edge", 3),
                ("bowtie", make_bowtie(), 1, "vertex", 5), ("bowtie", make_bowtie(), 1, "edge", 5),
                ("bowtie", make_bowtie(), 2, "vertex", 0)]
    expected += [("K4", make_complete(4), ell, "edge", 4) for ell in (0, 1, 2)]
    expected += [("K4", make_complete(4), ell, "vertex", 4) for ell in (0, 1, 2, 3)]
    wrong = []
    for name, g, ell, variant, size in expected:
        assert brute_force_opt(g.adj, ell, variant)[0] == size  # frozen values re-derived
        for algorithm in ALGORITHMS:
            got = solve(Instance(g, ell, variant), SolverConfig(algorithm)).size
            if got != size:
                wrong.append((name, ell, variant, algorithm, got, size))
    report(f"{len(expected)} fixtures x 4 algorithms, {len(wrong)} wrong")
    assert not wrong, wrong


def _rule_state(rng):
    g = random_graph(rng, rng.randint(3, 12), rng.choice(DENSITIES + [0.9]))
    ell, variant = rng.choice([1, 2, 3]), Variant(rng.choice(VARIANTS))
    marked = set(rng.sample(sorted(g.adj), rng.randint(0, min(3, g.n))))
    ws = Workspace(g, BranchContext(ell, variant, rng.randint(0, g.n - 2), marked))
    ws.attach_conflict_graph()
    if rng.random() < 0.5 and ltr(ws).infeasible:
        return None
    return ws


def _constrained(ws):
    return brute_force_constrained(ws.g.adj, ws.ctx.ell, ws.ctx.variant.value, ws.ctx.marked, ws.ctx.k)[0]


def _matching_rule(ws):
    # the rule prunes iff the bound is at most k; safe iff then no solution > k exists
    class Out:
        infeasible = ws.ctx.k > 0 and matching_bound(ws.gc) <= ws.ctx.k
    return Out


@pytest.mark.criterion(3, "rule safety for all nine rules on random reachable states")
def test_c3_rule_safety(report):
    rules = {"LDR": ldr, "LTR": ltr, "IRR": irr, "MIR": mir, "CR": cascading_rule, "NCR": no_choice_rule,
             "2-NR": two_nr, "LCR": lcr, "Matching": _matching_rule}
    violations = []
    fired = defaultdict(int)
    for seed, (name, rule) in enumerate(rules.items()):
        rng = random.Random(300 + seed)
        done = 0
        while done < 500:
            ws = _rule_state(rng)
            if ws is None:
                continue
            done += 1
            before = _constrained(ws)
            out = rule(ws)
            if out.infeasible:
                fired[name] += 1
                if before:
                    violations.append((name, "pruned", before))
                continue
            if getattr(out, "changed", False):
                fired[name] += 1
            after = _constrained(ws)
            if after != before:
                violations.append((name, before, after))
    report(f"9 rules x 500 states, fired: {dict(fired)}, {len(violations)} violations")
    assert not violations, violations[:5]
    assert all(fired[name] for name in rules)


@pytest.mark.criterion(4, "N-LB exact when the optimum lies in a closed neighborhood of one of its vertices")
def test_c4_nlb_exactness(report):
    rng = random.Random(4)
    qualifying, wrong = 0, []
    while qualifying < 200:
        g = random_graph(rng, rng.randint(4, 12), rng.choice(DENSITIES))
        ell, variant = rng.choice([1, 2, 3]), rng.choice(VARIANTS)
        opt, best = brute_force_opt(g.adj, ell, variant)
        if not opt or not any(best <= g.adj[v] | {v} for v in best):
            continue
        qualifying += 1
        value = neighborhood_lower_bound(g, ell, variant).value
        if value != opt:
            wrong.append((ell, variant, value, opt))
    report(f"{qualifying} qualifying instances, {len(wrong)} with N-LB != optimum")
    assert not wrong, wrong[:5]


@pytest.mark.criterion(6, "incremental conflict graph equals rebuild over 10^4 deletions")
def test_c6_conflict_graph_equivalence(report):
    rng = random.Random(6)
    steps = bad = 0
    while steps < 10_000:
        g = random_graph(rng, rng.randint(5, 40), rng.choice([0.1, 0.2, 0.3, 0.5]))
        gc = conflict.build(g)
        while g.n and steps < 10_000:
            if g.m and rng.random() < 0.5:
                u = rng.choice(sorted(v for v in g.adj if g.adj[v]))
                w = rng.choice(sorted(g.adj[u]))
                delete_edge(g, None, None, u, w)
                conflict.update_after_edge_deletion(gc, g, u, w)
            else:
                v = rng.choice(sorted(g.adj))
                nbrs = set(g.adj[v])
                delete_vertex(g, None, None, v)
                conflict.update_after_vertex_deletion(gc, g, v, nbrs)
            steps += 1
            bad += gc.edge_set() != conflict.build(g).edge_set()
    report(f"{steps} steps, {bad} divergences")
    assert bad == 0


# desk corpus criteria

# 15 networks with 10^2..10^4 vertices; see scripts/build_corpus.py for their sources
CORPUS = [
    "connectome_L6_LBC", "imports_matplotlib", "imports_networkx", "imports_numpy", "imports_pandas",
    "imports_scipy", "imports_sklearn", "mesh_airfoil", "road_minnesota", "words_gcide_3", "words_gcide_4",
    "words_gcide_5", "words_gcide_6", "words_web2_4", "words_web2_5",
]
CORPUS_ELLS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 16, 20, 30]
CELL_LIMIT = 120.0
BUCKETS = [("ell<=5", 1, 5), ("6<=ell<=15", 6, 15), ("ell>=16", 16, 10**9)]


def corpus_graph(name):
    return parse_graph(DATA / f"{name}.edges.gz")[0]


@pytest.fixture(scope="module")
def corpus_runs():
    """Multi-LB solves (which also record the N-LB value) for every corpus cell."""
    runs = {}
    for name in CORPUS:
        g = corpus_graph(name)
        for variant in VARIANTS:
            for ell in CORPUS_ELLS:
                sol = solve(Instance(g, ell, variant), SolverConfig("multi-lb", time_limit=CELL_LIMIT))
                runs[name, variant, ell] = (sol, compute_metrics(g, sol.vertices))
    return runs


@pytest.mark.criterion(5, "Multi-LB >= N-LB everywhere; average Multi-LB quality >= N-LB quality per ell bucket")
def test_c5_lower_bound_dominance_and_quality(report, corpus_runs):
    violations = []
    for g in random_instances(5, 400):
        for ell in (1, 2, 3):
            for variant in VARIANTS:
                n_val = neighborhood_lower_bound(g, ell, variant).value
                m_val = multi_lb(g, ell, variant).value
                opt = brute_force_opt(g.adj, ell, variant)[0]
                if not n_val <= m_val <= opt:
                    violations.append(("random", ell, variant, n_val, m_val, opt))
    quality = defaultdict(lambda: ([], []))
    for (name, variant, ell), (sol, _) in corpus_runs.items():
        st = sol.stats
        if st.multilb_value is not None and st.multilb_value < st.nlb_value:
            violations.append((name, ell, variant, st.nlb_value, st.multilb_value))
        if sol.proven_optimal and sol.size:
            bucket = next(b for b, lo, hi in BUCKETS if lo <= ell <= hi)
            nq, mq = quality[variant, bucket]
            nq.append(st.nlb_value / sol.size)
            mq.append(st.multilb_value / sol.size)
    lines, ordered = [], True
    for variant in VARIANTS:
        for bucket, _, _ in BUCKETS:
            nq, mq = quality[variant, bucket]
            if not nq:
                lines.append(f"{variant} {bucket}: no nonempty optimum")
                continue
            ordered &= mean(mq) >= mean(nq)
            lines.append(f"{variant} {bucket}: N-LB {100 * mean(nq):.1f}% vs Multi-LB {100 * mean(mq):.1f}% (n={len(nq)})")
    report("; ".join(lines) + f"; {len(violations)} dominance violations")
    assert not violations, violations[:5]
    assert ordered


@pytest.mark.criterion(7, "size monotone in ell and edge <= vertex on all solved corpus cells")
def test_c7_monotonicity(report, corpus_runs):
    bad, solved = [], 0
    for name in CORPUS:
        for variant in VARIANTS:
            cells = [(ell, corpus_runs[name, variant, ell][0]) for ell in CORPUS_ELLS]
            cells = [(ell, s.size) for ell, s in cells if s.proven_optimal]
            solved += len(cells)
            for (l1, s1), (l2, s2) in zip(cells, cells[1:]):
                if s2 > s1:
                    bad.append((name, variant, l1, s1, l2, s2))
        for ell in CORPUS_ELLS:
            v, e = corpus_runs[name, "vertex", ell][0], corpus_runs[name, "edge", ell][0]
            if v.proven_optimal and e.proven_optimal and e.size > v.size:
                bad.append((name, ell, "edge > vertex", e.size, v.size))
    total = len(CORPUS) * len(VARIANTS) * len(CORPUS_ELLS)
    report(f"{solved}/{total} cells solved within {CELL_LIMIT:.0f}s, {len(bad)} violations")
    assert not bad, bad[:5]


@pytest.mark.criterion(9, "average solution density and global CC at ell=10 >= at ell=1, both variants")
def test_c9_cohesion_grows_with_ell(report, corpus_runs):
    lines, ok = [], True
    for variant in VARIANTS:
        avg = {}
        for ell in (1, 10):
            ms = [m for name in CORPUS for sol, m in [corpus_runs[name, variant, ell]]
                  if sol.proven_optimal and sol.size]
            avg[ell] = (mean(m.density for m in ms), mean(m.global_cc for m in ms), len(ms))
        ok &= avg[10][0] >= avg[1][0] and avg[10][1] >= avg[1][1]
        lines.append(f"{variant}: density {avg[1][0]:.3f}->{avg[10][0]:.3f}, "
                     f"global CC {avg[1][1]:.3f}->{avg[10][1]:.3f} (networks {avg[1][2]}/{avg[10][2]})")
    report("; ".join(lines))
    assert ok


PERF_NETWORK = "words_web2_3to6"
PERF_LIMIT = 600.0


@pytest.mark.slow
@pytest.mark.criterion(8, "n>=1e4, m>=5e4 real network solved optimally, ell 1-6, both variants, N-LB, <=10 min per cell")
def test_c8_performance_smoke(report):
    g = corpus_graph(PERF_NETWORK)
    assert g.n >= 10_000 and g.m >= 50_000
    cells, failures = [], []
    for variant in VARIANTS:
        for ell in range(1, 7):
            start = time.perf_counter()
            sol = solve(Instance(g, ell, variant), SolverConfig("nlb", time_limit=PERF_LIMIT))
            elapsed = time.perf_counter() - start
            cells.append(elapsed)
            if not sol.proven_optimal or elapsed > PERF_LIMIT:
                failures.append((variant, ell, round(elapsed, 1), sol.proven_optimal))
    report(f"{PERF_NETWORK} n={g.n} m={g.m}: 12 cells, slowest {max(cells):.0f}s, total {sum(cells):.0f}s, "
           f"{len(failures)} failures")
    assert not failures, failures
