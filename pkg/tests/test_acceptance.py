"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every criterion is driven through the verify suites, which render canonical
reports; the determinism criterion re-runs all of them with identical seeds
and compares the reports byte for byte.  Scales follow the stated minimums.
Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import os

from hijacksim import verify

SEED = 20240811
WORKERS = int(os.environ.get("HIJACKSIM_WORKERS", "2"))

_cache = {}


def _suite_runs():
    return {
        "examples": verify.suite_examples,
        "alg1": lambda: verify.suite_alg1_oracle(seed=SEED, count=500),
        "gadget-origin": lambda: verify.suite_gadget_origin(
            max_clauses=3, include_unsat=True
        ),
        "gadget-sbgp": lambda: verify.suite_gadget_sbgp(
            seed=SEED, count=200, max_unsat2=2, constructive3=10, workers=WORKERS
        ),
        "convergence": lambda: verify.suite_convergence(
            seed=SEED, count=1000, sched_instances=100, sched_perms=5
        ),
        "thm5": lambda: verify.suite_thm5(seed=SEED, count=500),
    }


def _run(key, fn):
    report = fn()
    _cache[key] = (report.render(), fn)
    return report


def _announce(num, text, ok):
    print("%s criterion %d: %s" % ("PASS" if ok else "FAIL", num, text))
    assert ok, "criterion %d failed:\n%s" % (num, text)


def test_criterion_1_fixture_behavior():
    rep = _run("examples", _suite_runs()["examples"])
    _announce(1, "pinned example routes, hijacks and interceptions", rep.ok)


def test_criterion_2_search_matches_oracle():
    rep = _run("alg1", _suite_runs()["alg1"])
    _announce(2, "origin-claim search agrees with the oracle on 500 instances", rep.ok)


def test_criterion_3_origin_reduction():
    rep = _run("gadget-origin", _suite_runs()["gadget-origin"])
    _announce(
        3,
        "satisfiability matches attack existence on all sign-pattern formulas",
        rep.ok,
    )


def test_criterion_4_sbgp_reduction():
    rep = _run("gadget-sbgp", _suite_runs()["gadget-sbgp"])
    _announce(
        4,
        "satisfiability matches brute-force attack existence on 200 formulas",
        rep.ok,
    )


def test_criterion_5_convergence_and_schedules():
    rep = _run("convergence", _suite_runs()["convergence"])
    _announce(5, "every steady-announcement run converges, schedule-independently", rep.ok)


def _thm5_report():
    if "thm5" not in _cache:
        _run("thm5", _suite_runs()["thm5"])
        _cache["thm5-object"] = _suite_runs()["thm5"]()
    return _cache["thm5-object"]


def test_criterion_6_single_path_hijacks_intercept():
    rep = _run("thm5", _suite_runs()["thm5"])
    _cache["thm5-object"] = rep
    _announce(6, "every single-path hijack is an interception (500 instances)", rep.ok)


def test_criterion_7_route_class_floor():
    rep = _thm5_report()
    floor_ok = not any(
        line.startswith("FAIL") and "class" in line for line in rep.lines
    )
    _announce(7, "no attack denies a vertex its manipulator-free route class", rep.ok and floor_ok)


def test_criterion_8_determinism():
    runs = _suite_runs()
    for key, fn in runs.items():
        if key not in _cache:
            _run(key, fn)  # running this criterion alone still exercises 1-7
    mismatches = []
    for key, fn in sorted(runs.items()):
        rendered, _ = _cache[key]
        if fn().render() != rendered:
            mismatches.append(key)
    _announce(8, "repeating criteria 1-7 reproduces byte-identical reports", not mismatches)
