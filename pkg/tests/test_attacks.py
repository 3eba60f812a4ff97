import random

import pytest

from hijacksim.attacks import (
    BLACKHOLE,
    ORIGIN_SPOOFING,
    PLAIN,
    REACHES_D,
    REACHES_M,
    SBGP,
    AttackStrategy,
    check_legal,
    evaluate,
    strategy_from_json,
    strategy_to_json,
    trace_data_plane,
)
from hijacksim.errors import RoleError, StrategyError
from hijacksim.graph import vf_class_to
from hijacksim.instances import RandomSpec, fixture, gen_random
from hijacksim.routing import baseline_available, simulate


def test_check_legal_capabilities():
    g, s, d, m = fixture("fig1")
    ok = check_legal(g, d, AttackStrategy(m, SBGP, {3: (m, 2, 1, d)}))
    assert ok.ok
    bad = check_legal(g, d, AttackStrategy(m, SBGP, {2: (m,)}))
    assert not bad.ok and "origin" in bad.violations[0]
    bad = check_legal(g, d, AttackStrategy(m, SBGP, {3: (m, 5, d)}))
    assert not bad.ok  # never received
    for cap in (ORIGIN_SPOOFING, SBGP, PLAIN):
        assert check_legal(g, d, AttackStrategy(m, cap, {})).ok
    bad = check_legal(g, d, AttackStrategy(m, ORIGIN_SPOOFING, {2: (m, 2, 1, d)}))
    assert not bad.ok
    bad = check_legal(g, d, AttackStrategy(m, PLAIN, {2: (m, 5, 5)}))
    assert not bad.ok  # repeated vertex
    bad = check_legal(g, d, AttackStrategy(m, PLAIN, {s: (m,)}))
    assert not bad.ok  # not a neighbor


def test_trace_data_plane():
    g, s, d, m = fixture("fig1")
    state = simulate(g, d, AttackStrategy(m, SBGP, {3: (m, 2, 1, d)}))
    tr = trace_data_plane(state, s, m, d)
    assert tr.hops == (s, 6, 5, 4, 3, m) and tr.terminal == REACHES_M

    honest = simulate(g, d)
    tr = trace_data_plane(honest, s, m, d)
    assert tr.hops == (s, 6, 2, 1, d) and tr.terminal == REACHES_D

    tr = trace_data_plane(honest, d, m, d)
    assert tr.hops == (d,) and tr.terminal == REACHES_D

    g2, s2, d2, m2 = fixture("fig2")
    mute = simulate(g2, d2, AttackStrategy(m2, SBGP, {}))
    assert trace_data_plane(mute, 6, m2, d2).terminal == BLACKHOLE


def test_evaluate_interception_cases():
    g, s, d, m = fixture("fig1")
    out = evaluate(g, s, d, m, AttackStrategy(m, SBGP, {3: (m, 2, 1, d)}))
    assert out.hijacked and out.intercepted
    assert out.data_plane_m.hops == (m, 2, 1, d)

    g, s, d, m = fixture("fig5")
    out = evaluate(g, s, d, m, AttackStrategy(m, SBGP, {2: (m, 3, 4, d), 3: (m, 2, 1, d)}))
    assert out.hijacked and not out.intercepted
    assert out.data_plane_m is None

    g, s, d, m = fixture("fig1")
    out = evaluate(g, s, d, m, AttackStrategy(m, SBGP, {}))
    assert not out.hijacked and not out.intercepted


def test_evaluate_rejects_bad_input():
    g, s, d, m = fixture("fig1")
    with pytest.raises(RoleError):
        evaluate(g, s, d, s, AttackStrategy(s, SBGP, {}))
    with pytest.raises(RoleError):
        evaluate(g, s, d, m, AttackStrategy(2, SBGP, {}))
    with pytest.raises(StrategyError):
        evaluate(g, s, d, m, AttackStrategy(m, SBGP, {2: (m,)}))


def test_intercepted_implies_hijacked_and_trace_agrees():
    rng = random.Random(3)
    for seed in range(40):
        spec = RandomSpec(seed=700 + seed, num_vertices=rng.randint(6, 12),
                          density=0.4, peer_fraction=0.25, max_m_degree=8)
        g, s, d, m = gen_random(spec)
        pool = baseline_available(g, d, m)
        anns = {}
        for n in g.neighbors(m):
            if pool and rng.random() < 0.6:
                q = pool[rng.randrange(len(pool))]
                if n not in q:
                    anns[n] = q
        out = evaluate(g, s, d, m, AttackStrategy(m, SBGP, anns))
        assert not out.intercepted or out.hijacked
        # control plane equals data plane up to the first manipulator hit
        sel = out.state.selected[s]
        if sel is not None:
            k = len(out.data_plane_s.hops)
            assert out.data_plane_s.hops == sel[:k]


def test_class_floor_under_sbgp_attacks():
    # no re-announcement-only attack can push a vertex below the best class
    # it can reach without the manipulator
    rng = random.Random(4)
    for seed in range(25):
        spec = RandomSpec(seed=900 + seed, num_vertices=rng.randint(6, 12),
                          density=0.4, peer_fraction=0.25, max_m_degree=8)
        g, s, d, m = gen_random(spec)
        pool = baseline_available(g, d, m)
        floor = vf_class_to(g, d, avoid=m)
        cmap = g.class_map()
        anns = {}
        for n in g.neighbors(m):
            if pool and rng.random() < 0.7:
                q = pool[rng.randrange(len(pool))]
                if n not in q:
                    anns[n] = q
        state = simulate(g, d, AttackStrategy(m, SBGP, anns))
        for v, need in floor.items():
            if v in (m, d):
                continue
            got = max((cmap[v][p[1]] for p in state.available[v]), default=0)
            assert got >= need


def test_outcome_report_is_canonical():
    g, s, d, m = fixture("fig1")
    strat = AttackStrategy(m, SBGP, {3: (m, 2, 1, d)})
    a = evaluate(g, s, d, m, strat).to_json()
    b = evaluate(g, s, d, m, strat).to_json()
    assert a == b
    assert '"hijacked": true' in a and '"intercepted": true' in a


def test_strategy_json_roundtrip():
    g, s, d, m = fixture("fig1")
    strat = AttackStrategy(m, SBGP, {3: (m, 2, 1, d)})
    again = strategy_from_json(strategy_to_json(strat))
    assert again == strat
    claim = AttackStrategy.origin_claim(m, [2, 3])
    text = strategy_to_json(claim)
    assert '"origin"' in text
    assert strategy_from_json(text) == claim
    with pytest.raises(StrategyError):
        strategy_from_json("{not json")
    with pytest.raises(StrategyError):
        strategy_from_json('{"capability": "s-bgp"}')
