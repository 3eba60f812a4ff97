"""Reproducible verification suites over fixtures, random instances and gadgets.

Every suite is a pure function of its parameters (seeds included) and
renders a canonical plain-text report, so identical invocations are
byte-identical.  The command-line `verify` subcommand and the acceptance
tests both run these.
"""

import multiprocessing
import random
from itertools import combinations

from .attacks import (
    PLAIN,
    SBGP,
    AttackStrategy,
    evaluate,
    interception_route,
    trace_data_plane,
    REACHES_M,
)
from .errors import HijacksimError
from .finders import find_origin_spoofing, find_sbgp_bruteforce, oracle_origin_spoofing
from .gadgets import (
    CnfFormula,
    gen_gadget_origin,
    gen_gadget_sbgp,
    sat_bruteforce,
    sbgp_attack_for,
)
from .graph import valley_free_paths, vf_class_to
from .instances import RandomSpec, fixture, gen_random
from .routing import baseline_available, honest_board, simulate, simulate_from_honest


class SuiteReport:
    def __init__(self, name, params):
        self.name = name
        self.params = params  # list of (key, value) in fixed order
        self.lines = []
        self.failures = 0

    def check(self, ok, text):
        if ok:
            self.lines.append("ok %s" % text)
        else:
            self.failures += 1
            self.lines.append("FAIL %s" % text)
        return ok

    def note(self, text):
        self.lines.append("-- %s" % text)

    @property
    def ok(self):
        return self.failures == 0

    def params_lines(self):
        return ["param %s %s" % (key, value) for key, value in self.params]

    def render(self) -> str:
        out = ["suite %s" % self.name]
        out.extend(self.params_lines())
        out.extend(self.lines)
        out.append("result %s" % ("PASS" if self.ok else "FAIL"))
        return "\n".join(out) + "\n"


def _fmt(path):
    if path is None:
        return "-"
    return "(" + " ".join(str(v) for v in path) + ")"


# -- fixture checks -----------------------------------------------------------


def suite_examples() -> SuiteReport:
    """Pinned behavior of the three built-in networks."""
    rep = SuiteReport("examples", [])

    g, s, d, m = fixture("fig1")
    honest = simulate(g, d)
    rep.check(
        honest.selected[s] == (s, 6, 2, 1, d),
        "fig1 honest route at s is %s" % _fmt(honest.selected[s]),
    )
    origin = AttackStrategy.origin_claim(m, [2])
    out = evaluate(g, s, d, m, origin)
    rep.check(
        out.state.selected[s] == (s, 6, 2, m) and out.hijacked,
        "fig1 origin claim to {2} pulls s onto %s" % _fmt(out.state.selected[s]),
    )
    rep.check(
        not out.intercepted,
        "fig1 origin claim to {2} cannot forward onward",
    )
    sbgp = AttackStrategy(m, SBGP, {3: (m, 2, 1, d)})
    out = evaluate(g, s, d, m, sbgp)
    rep.check(
        out.state.selected[s] == (s, 6, 5, 4, 3, m, 2, 1, d),
        "fig1 re-announcement to 3 pulls s onto %s" % _fmt(out.state.selected[s]),
    )
    rep.check(out.hijacked and out.intercepted, "fig1 re-announcement intercepts")
    rep.check(
        out.data_plane_m is not None and out.data_plane_m.hops == (m, 2, 1, d),
        "fig1 onward delivery runs %s" % _fmt(out.data_plane_m.hops if out.data_plane_m else None),
    )
    pool = baseline_available(g, d, m)
    rep.check((m, 2, 1, d) in pool, "fig1 honest pool at m contains (m 2 1 d)")

    g, s, d, m = fixture("fig2")
    honest = simulate(g, d)
    rep.check(
        honest.selected[s] == (s, 4, d),
        "fig2 honest route at s is %s" % _fmt(honest.selected[s]),
    )
    rep.check(
        baseline_available(g, d, m) == (),
        "fig2 manipulator honestly receives nothing",
    )
    for targets in ((6,), (6, 7)):
        out = evaluate(g, s, d, m, AttackStrategy.origin_claim(m, targets))
        rep.check(
            not out.hijacked,
            "fig2 origin claim to %s fails" % (set(targets),),
        )
    out = evaluate(g, s, d, m, AttackStrategy.origin_claim(m, (6, 7)))
    rep.check(
        out.state.selected[s] == (s, 1, 2, 3, d),
        "fig2 under the two-sided claim s falls back to %s" % _fmt(out.state.selected[s]),
    )
    oracle = oracle_origin_spoofing(g, s, d, m)
    rep.check(
        not oracle.found and oracle.stats.simulations == 4,
        "fig2 all 4 origin-claim subsets fail",
    )

    g, s, d, m = fixture("fig5")
    pool = baseline_available(g, d, m)
    rep.check(
        set(pool) == {(m, 2, 1, d), (m, 3, 4, d)},
        "fig5 honest pool at m is {(m 2 1 d), (m 3 4 d)}",
    )
    same = find_sbgp_bruteforce(g, s, d, m, same_path=True)
    rep.check(not same.found, "fig5 single-path search fails")
    multi = find_sbgp_bruteforce(g, s, d, m)
    rep.check(multi.found, "fig5 crossed-path search succeeds")
    crossed = AttackStrategy(m, SBGP, {2: (m, 3, 4, d), 3: (m, 2, 1, d)})
    out = evaluate(g, s, d, m, crossed)
    rep.check(
        out.hijacked and not out.intercepted,
        "fig5 crossed announcement hijacks without interception",
    )
    if multi.found:
        mout = evaluate(g, s, d, m, multi.strategy)
        rep.check(
            mout.hijacked and not mout.intercepted,
            "fig5 found strategy hijacks without interception",
        )
    return rep


# -- seeded instance streams --------------------------------------------------


def _spec_stream(seed, tag, nv_range, density_range, peer_range, max_m_degree=None):
    """Deterministic RandomSpec stream; tag separates the suites' streams."""
    cursor = 0
    while True:
        k = (seed * 1_000_003 + cursor) * 31 + tag
        rng = random.Random(k)
        yield RandomSpec(
            seed=k,
            num_vertices=rng.randint(*nv_range),
            density=rng.uniform(*density_range),
            peer_fraction=rng.uniform(*peer_range),
            max_m_degree=max_m_degree,
        )
        cursor += 1


def _alg1_instances(seed, count):
    """Small instances on which every valley-free s-to-m route fits 8 hops."""
    out = []
    stream = _spec_stream(seed, 1, (6, 12), (0.25, 0.5), (0.0, 0.35), max_m_degree=8)
    for spec in stream:
        try:
            g, s, d, m = gen_random(spec)
        except HijacksimError:
            continue
        paths = valley_free_paths(g, s, m, max_len=11)
        if any(len(p) - 1 > 8 for p in paths):
            continue  # the bounded-length assumption must hold for the search
        out.append((spec.seed, g, s, d, m))
        if len(out) == count:
            return out
    raise AssertionError("unreachable")


def suite_alg1_oracle(seed=7, count=200) -> SuiteReport:
    """Candidate-route search vs the exhaustive oracle, verdict for verdict."""
    rep = SuiteReport("alg1-oracle", [("seed", seed), ("count", count)])
    agree = 0
    found = 0
    for inst_seed, g, s, d, m in _alg1_instances(seed, count):
        fast = find_origin_spoofing(g, s, d, m, max_len=8)
        slow = oracle_origin_spoofing(g, s, d, m, first_only=True)
        if fast.found == slow.found:
            agree += 1
            found += 1 if fast.found else 0
        else:
            rep.check(
                False,
                "instance %d: search=%s oracle=%s" % (inst_seed, fast.found, slow.found),
            )
    rep.note("attacks exist on %d of %d instances" % (found, count))
    rep.check(agree == count, "verdicts agree on %d/%d instances" % (agree, count))
    return rep


def _random_attack(rng, g, d, m, pool):
    """Mixed legal/illegal steady announcement map for convergence runs."""
    others = [v for v in sorted(g.vertices) if v != m]
    anns = {}
    for n in g.neighbors(m):
        roll = rng.random()
        if roll < 0.35:
            continue  # silence
        if roll < 0.55:
            anns[n] = (m,)  # bogus origin claim
        elif roll < 0.75 and pool:
            anns[n] = pool[rng.randrange(len(pool))]
        else:
            k = rng.randint(1, min(5, len(others)))
            anns[n] = (m,) + tuple(rng.sample(others, k))
    return AttackStrategy(m, PLAIN, anns)


def suite_convergence(seed=7, count=1000, sched_instances=100, sched_perms=5) -> SuiteReport:
    """Fixpoint existence under arbitrary steady announcements, plus
    schedule-independence of the fixpoint on small instances."""
    rep = SuiteReport(
        "convergence",
        [
            ("seed", seed),
            ("count", count),
            ("sched_instances", sched_instances),
            ("sched_perms", sched_perms),
        ],
    )
    converged = 0
    stream = _spec_stream(seed, 2, (8, 60), (0.08, 0.35), (0.0, 0.4))
    made = 0
    for spec in stream:
        if made == count:
            break
        try:
            g, s, d, m = gen_random(spec)
        except HijacksimError:
            continue
        made += 1
        rng = random.Random(spec.seed ^ 0x5EED)
        attack = _random_attack(rng, g, d, m, baseline_available(g, d, m))
        try:
            simulate(g, d, attack)
            converged += 1
        except HijacksimError as exc:
            rep.check(False, "instance %d did not converge: %s" % (spec.seed, exc))
    rep.check(converged == count, "converged on %d/%d runs" % (converged, count))

    stable = 0
    stream = _spec_stream(seed, 3, (6, 12), (0.25, 0.5), (0.0, 0.35))
    made = 0
    for spec in stream:
        if made == sched_instances:
            break
        try:
            g, s, d, m = gen_random(spec)
        except HijacksimError:
            continue
        made += 1
        rng = random.Random(spec.seed ^ 0xC0FFEE)
        attack = _random_attack(rng, g, d, m, baseline_available(g, d, m))
        base = simulate(g, d, attack)
        same = True
        verts = sorted(g.vertices)
        for _ in range(sched_perms):
            order = verts[:]
            rng.shuffle(order)
            other = simulate(g, d, attack, activation_order=order)
            if other.selected != base.selected or other.available != base.available:
                same = False
        if same:
            stable += 1
        else:
            rep.check(False, "instance %d: fixpoint depends on the schedule" % spec.seed)
    rep.check(
        stable == sched_instances,
        "schedule-independent fixpoint on %d/%d instances" % (stable, sched_instances),
    )
    return rep


def _same_path_candidates(g, d, m, pool):
    neighbors = g.neighbors(m)
    yield AttackStrategy(m, SBGP, {})
    for q in pool:
        eligible = [n for n in neighbors if n != d and n not in q]
        for mask in range(1, 1 << len(eligible)):
            subset = [eligible[i] for i in range(len(eligible)) if mask >> i & 1]
            yield AttackStrategy(m, SBGP, {n: q for n in subset})


def suite_thm5(seed=7, count=200) -> SuiteReport:
    """Single-path re-announcement attacks: hijack implies interception, and
    no attack denies a vertex the best route class it can reach without the
    manipulator."""
    rep = SuiteReport("thm5", [("seed", seed), ("count", count)])
    hijacks = 0
    interceptions = 0
    class_checks = 0
    bad = 0
    made = 0
    stream = _spec_stream(seed, 4, (6, 12), (0.25, 0.5), (0.0, 0.35), max_m_degree=8)
    for spec in stream:
        if made == count:
            break
        try:
            g, s, d, m = gen_random(spec)
        except HijacksimError:
            continue
        made += 1
        pool = sorted(baseline_available(g, d, m), key=lambda p: (len(p), p))
        board = honest_board(g, d)
        floor = vf_class_to(g, d, avoid=m)
        cmap = g.class_map()
        for strategy in _same_path_candidates(g, d, m, pool):
            state = simulate_from_honest(g, d, strategy, board)
            if trace_data_plane(state, s, m, d).terminal == REACHES_M:
                hijacks += 1
                if interception_route(g, state, m, d) is not None:
                    interceptions += 1
                else:
                    bad += 1
                    rep.check(
                        False,
                        "instance %d: hijack without interception under %r"
                        % (spec.seed, strategy.announcements),
                    )
            # route-class floor (independent of hijack success)
            for v, need in floor.items():
                if v == m or v == d:
                    continue
                cands = state.available[v]
                got = max((cmap[v][p[1]] for p in cands), default=0)
                class_checks += 1
                if got < need:
                    bad += 1
                    rep.check(
                        False,
                        "instance %d: vertex %d holds class %d < reachable %d"
                        % (spec.seed, v, got, need),
                    )
    rep.note(
        "%d hijacks, %d interceptions, %d class-floor checks over %d instances"
        % (hijacks, interceptions, class_checks, count)
    )
    rep.check(
        hijacks == interceptions,
        "every single-path hijack intercepts (%d/%d)" % (interceptions, hijacks),
    )
    rep.check(bad == 0, "no route-class floor violations")
    return rep


# -- gadget suites -------------------------------------------------------------


def sign_pattern_formulas(max_clauses=3):
    """Every formula over three variables whose clauses are distinct sign
    patterns of (x1, x2, x3), up to max_clauses clauses, canonical order."""
    patterns = []
    for bits in range(8):
        clause = tuple((var if bits >> (var - 1) & 1 else -var) for var in (1, 2, 3))
        patterns.append(clause)
    out = []
    for h in range(1, max_clauses + 1):
        for combo in combinations(range(8), h):
            out.append(CnfFormula.make(3, [patterns[i] for i in combo]))
    return out


def full_pattern_unsat():
    """All eight sign patterns together: no assignment survives."""
    return CnfFormula.make(3, [c for f in sign_pattern_formulas(1) for c in f.clauses])


def suite_gadget_origin(max_clauses=3, include_unsat=True, limit=None) -> SuiteReport:
    """Satisfiability vs exhaustive origin-claim search on generated instances."""
    formulas = sign_pattern_formulas(max_clauses)
    if limit is not None:
        formulas = formulas[:limit]
    if include_unsat:
        formulas.append(full_pattern_unsat())
    rep = SuiteReport(
        "gadget-origin",
        [("formulas", len(formulas)), ("max_clauses", max_clauses)],
    )
    agree = 0
    for idx, f in enumerate(formulas):
        sat = sat_bruteforce(f) is not None
        inst = gen_gadget_origin(f)
        res = oracle_origin_spoofing(
            inst.graph, inst.s, inst.d, inst.m, first_only=True
        )
        if res.found == sat:
            agree += 1
        else:
            rep.check(
                False,
                "formula %d (%r): sat=%s oracle=%s" % (idx, f.clauses, sat, res.found),
            )
    rep.check(agree == len(formulas), "agreement on %d/%d formulas" % (agree, len(formulas)))
    return rep


def _random_constrained_clause(rng, num_vars):
    size = rng.randint(1, min(3, num_vars))
    variables = rng.sample(range(1, num_vars + 1), size)
    return tuple(v * (1 if rng.random() < 0.3 else -1) for v in variables)


def _constraints_ok(f):
    try:
        from .gadgets import check_sbgp_constraints

        check_sbgp_constraints(f)
        return True
    except HijacksimError:
        return False


def _n1_constrained_formulas():
    """Every constrained formula over one variable, canonical order.

    Clause order matters to the generated wiring, so reorderings are
    distinct instances.  With clauses over distinct variables, the only
    one-variable clauses are (x1) and (-x1); the budget is at most three
    occurrences, at most one positive.
    """
    universe = [(1,), (-1,)]
    out = []

    def extend(prefix, occ, pos):
        if prefix:
            out.append(CnfFormula.make(1, list(prefix)))
        if len(prefix) == 3:
            return
        for clause in universe:
            dpos = 1 if clause[0] > 0 else 0
            if occ + 1 <= 3 and pos + dpos <= 1:
                extend(prefix + [clause], occ + 1, pos + dpos)

    extend([], 0, 0)
    out.sort(key=lambda f: (len(f.clauses), f.clauses))
    return out


def _n2_constrained_formulas(seed, count, max_unsat):
    """Seeded constrained two-variable formulas; at most max_unsat of them
    unsatisfiable (refuting one exhausts the whole strategy space, so the
    report notes the split)."""
    rng = random.Random(seed)
    seen = set()
    out = []
    unsat = 0
    while len(out) < count:
        h = rng.randint(1, 3)
        f = CnfFormula.make(
            2, [_random_constrained_clause(rng, 2) for _ in range(h)]
        )
        if not _constraints_ok(f) or f.clauses in seen:
            continue
        is_sat = sat_bruteforce(f) is not None
        if not is_sat:
            if unsat >= max_unsat:
                continue
            unsat += 1
        seen.add(f.clauses)
        out.append(f)
    return out


def _n3_constrained_sat_formulas(seed, count):
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < count:
        h = rng.randint(2, 4)
        f = CnfFormula.make(
            3, [_random_constrained_clause(rng, 3) for _ in range(h)]
        )
        if not _constraints_ok(f) or f.clauses in seen:
            continue
        if sat_bruteforce(f) is None:
            continue
        seen.add(f.clauses)
        out.append(f)
    return out


def _sbgp_case(formula):
    """Worker: satisfiability vs exhaustive search on one generated instance."""
    sat = sat_bruteforce(formula) is not None
    inst = gen_gadget_sbgp(formula)
    res = find_sbgp_bruteforce(inst.graph, inst.s, inst.d, inst.m, max_degree=8)
    return sat, res.found


def _pmap(fn, items, workers):
    """Order-preserving map, optionally fanned out to worker processes."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with multiprocessing.get_context("fork").Pool(workers) as pool:
        return pool.map(fn, items, chunksize=1)


def suite_gadget_sbgp(
    seed=7, count=200, max_unsat2=3, constructive3=10, workers=1
) -> SuiteReport:
    """Satisfiability vs brute-force re-announcement search on generated
    instances (one- and two-variable formulas; two variables already puts the
    manipulator at the search's default degree bound of 8), plus constructive
    checks on three-variable instances, whose degree-11 manipulator makes the
    product space unenumerable: the announcement map induced by a satisfying
    assignment must verifiably hijack.  The report does not depend on
    `workers`; refuting an unsatisfiable instance exhausts the whole strategy
    space, so those cases dominate the runtime."""
    formulas = _n1_constrained_formulas()
    n1 = len(formulas)
    if count > n1:
        formulas = formulas + _n2_constrained_formulas(seed, count - n1, max_unsat2)
    else:
        formulas = formulas[:count]
    rep = SuiteReport(
        "gadget-sbgp",
        [("seed", seed), ("count", len(formulas)), ("constructive3", constructive3)],
    )
    agree = 0
    sat_count = 0
    for idx, (sat, found) in enumerate(_pmap(_sbgp_case, formulas, workers)):
        sat_count += 1 if sat else 0
        if found == sat:
            agree += 1
        else:
            rep.check(
                False,
                "formula %d (%r): sat=%s search=%s"
                % (idx, formulas[idx].clauses, sat, found),
            )
    rep.note("%d of %d formulas satisfiable" % (sat_count, len(formulas)))
    rep.check(
        agree == len(formulas), "agreement on %d/%d formulas" % (agree, len(formulas))
    )

    built = 0
    for f in _n3_constrained_sat_formulas(seed ^ 0xBEEF, constructive3):
        inst = gen_gadget_sbgp(f)
        assignment = sat_bruteforce(f)
        pool = baseline_available(inst.graph, inst.d, inst.m)
        strategy = sbgp_attack_for(inst, assignment, pool)
        out = evaluate(inst.graph, inst.s, inst.d, inst.m, strategy, baseline=pool)
        if out.hijacked:
            built += 1
        else:
            rep.check(False, "n=3 constructive attack failed for %r" % (f.clauses,))
    rep.check(
        built == constructive3,
        "constructive n=3 attacks hijack on %d/%d instances" % (built, constructive3),
    )
    return rep


SUITE_NAMES = ("examples", "alg1-oracle", "thm5", "gadgets", "convergence")


def run_suite(name, seed=7, count=None, workers=1):
    """CLI entry: run one named suite at a modest default scale."""
    if name == "examples":
        return suite_examples()
    if name == "alg1-oracle":
        return suite_alg1_oracle(seed=seed, count=count or 100)
    if name == "thm5":
        return suite_thm5(seed=seed, count=count or 50)
    if name == "convergence":
        return suite_convergence(
            seed=seed, count=count or 200, sched_instances=30, sched_perms=3
        )
    if name == "gadgets":
        # CLI-scale probe; the acceptance tests run the full criteria.  The
        # one-variable formulas already include unsatisfiable ones, so the
        # cheap default still exercises both directions.
        origin = suite_gadget_origin(limit=count or 20, include_unsat=True)
        sbgp = suite_gadget_sbgp(
            seed=seed, count=count or 30, max_unsat2=0, constructive3=3, workers=workers
        )
        combined = SuiteReport("gadgets", [("seed", seed), ("count", count or 0)])
        combined.lines = (
            ["-- origin reduction --"]
            + origin.params_lines()
            + origin.lines
            + ["-- re-announcement reduction --"]
            + sbgp.params_lines()
            + sbgp.lines
        )
        combined.failures = origin.failures + sbgp.failures
        return combined
    raise HijacksimError("unknown suite %r" % (name,))
