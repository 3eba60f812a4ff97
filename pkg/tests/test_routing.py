import random

import pytest

from hijacksim.attacks import PLAIN, SBGP, AttackStrategy
from hijacksim.errors import PathError, RoleError
from hijacksim.graph import is_valley_free
from hijacksim.instances import RandomSpec, fixture, gen_random
from hijacksim.routing import (
    baseline_available,
    export_allowed,
    honest_board,
    preference_less,
    simulate,
    simulate_from_honest,
)


def test_preference_fig1():
    g, s, d, m = fixture("fig1")
    # customer route beats the shorter peer route at 6
    assert preference_less(g, 6, (6, 5, 4, 3, m, 2, 1, d), (6, 2, 1, d))
    # same class, shorter wins at 2
    assert preference_less(g, 2, (2, m), (2, 1, d))
    with pytest.raises(PathError):
        preference_less(g, 6, (5, 4), (6, 2, 1, d))


def test_preference_next_hop_tiebreak():
    g, s, d, m = fixture("fig5")
    # both provider routes, both two hops: lower next hop wins
    assert preference_less(g, s, (s, 1, d), (s, 4, d))
    assert not preference_less(g, s, (s, 4, d), (s, 1, d))


def test_export_allowed():
    g, s, d, m = fixture("fig1")
    # a provider-learned route may not be exported to another provider
    assert not export_allowed(g, m, (m, 2, 1, d), 3)
    # but the destination's own route goes everywhere
    assert export_allowed(g, d, (d,), 1)
    # a customer-learned route goes everywhere, e.g. at 5 toward provider 6
    assert export_allowed(g, 5, (5, 4, 3, m, 2, 1, d), 6)
    # peer-learned only to customers
    assert export_allowed(g, 6, (6, 2, 1, d), s)
    assert not export_allowed(g, 6, (6, 2, 1, d), 2)


def test_simulate_fixture_routes():
    g, s, d, m = fixture("fig1")
    state = simulate(g, d)
    assert state.selected[s] == (s, 6, 2, 1, d)
    assert state.selected[2] == (2, 1, d)
    assert state.selected[m] == (m, 2, 1, d)

    spoof = AttackStrategy.origin_claim(m, [2])
    state = simulate(g, d, spoof)
    assert state.selected[s] == (s, 6, 2, m)

    sbgp = AttackStrategy(m, SBGP, {3: (m, 2, 1, d)})
    state = simulate(g, d, sbgp)
    assert state.selected[s] == (s, 6, 5, 4, 3, m, 2, 1, d)

    g, s, d, m = fixture("fig2")
    state = simulate(g, d, AttackStrategy.origin_claim(m, [6, 7]))
    assert state.selected[s] == (s, 1, 2, 3, d)


def test_simulate_rejects_bad_roles():
    g, s, d, m = fixture("fig1")
    with pytest.raises(RoleError):
        simulate(g, 99)
    with pytest.raises(RoleError):
        simulate(g, d, AttackStrategy.origin_claim(d, [1]))


def test_baseline_available():
    g, s, d, m = fixture("fig5")
    assert set(baseline_available(g, d, m)) == {(m, 2, 1, d), (m, 3, 4, d)}
    g, s, d, m = fixture("fig1")
    assert (m, 2, 1, d) in baseline_available(g, d, m)
    g, s, d, m = fixture("fig2")
    assert baseline_available(g, d, m) == ()


def _random_attack(rng, g, d, m):
    pool = baseline_available(g, d, m)
    others = [v for v in sorted(g.vertices) if v != m]
    anns = {}
    for n in g.neighbors(m):
        roll = rng.random()
        if roll < 0.3:
            continue
        if roll < 0.5:
            anns[n] = (m,)
        elif roll < 0.7 and pool:
            anns[n] = pool[rng.randrange(len(pool))]
        else:
            anns[n] = (m,) + tuple(rng.sample(others, rng.randint(1, min(4, len(others)))))
    return AttackStrategy(m, PLAIN, anns)


def test_fixpoint_invariants_on_random_instances():
    # suffix consistency, optimality, loop-freeness of selections
    rng = random.Random(1)
    for seed in range(40):
        spec = RandomSpec(seed=seed, num_vertices=rng.randint(6, 14), density=0.4,
                          peer_fraction=0.25)
        g, s, d, m = gen_random(spec)
        attack = _random_attack(rng, g, d, m)
        state = simulate(g, d, attack)
        for v in g.vertices:
            sel = state.selected[v]
            if v == d or v == m or sel is None:
                continue
            assert sel[0] == v
            assert len(set(sel)) == len(sel)
            # the next hop's selection is the suffix the route promises,
            # unless the next hop is the manipulator, whose announcements
            # deliberately diverge from its own selection
            if sel[1] != m:
                assert state.selected[sel[1]] == sel[1:]
            # nothing available is strictly preferred to the selection
            for cand in state.available[v]:
                assert not preference_less(g, v, cand, sel)
            assert sel in state.available[v]


def test_honest_selections_are_valley_free():
    for seed in range(30):
        spec = RandomSpec(seed=100 + seed, num_vertices=12, density=0.4, peer_fraction=0.3)
        g, s, d, m = gen_random(spec)
        state = simulate(g, d)
        for v in g.vertices:
            sel = state.selected[v]
            if sel is not None and len(sel) > 1:
                assert is_valley_free(g, sel)


def test_warm_start_matches_cold_start():
    rng = random.Random(9)
    for seed in range(30):
        spec = RandomSpec(seed=300 + seed, num_vertices=rng.randint(6, 14), density=0.4,
                          peer_fraction=0.25)
        g, s, d, m = gen_random(spec)
        board = honest_board(g, d)
        for _ in range(3):
            attack = _random_attack(rng, g, d, m)
            cold = simulate(g, d, attack)
            warm = simulate_from_honest(g, d, attack, board)
            assert cold.selected == warm.selected
            assert cold.available == warm.available


def test_withdrawal_propagates():
    # s's only route runs through m; silencing m blackholes s
    g, s, d, m = fixture("fig2")
    claim = AttackStrategy.origin_claim(m, [6])
    state = simulate(g, d, claim)
    assert state.selected[6] == (6, m)
    silence = AttackStrategy(m, SBGP, {})
    state = simulate(g, d, silence)
    assert state.selected[6] is None


def test_simulate_is_deterministic():
    g, s, d, m = fixture("fig1")
    a = simulate(g, d, AttackStrategy.origin_claim(m, [2, 3]))
    b = simulate(g, d, AttackStrategy.origin_claim(m, [2, 3]))
    assert a.selected == b.selected
    assert a.available == b.available
    assert a.rounds == b.rounds


def test_state_exports_are_canonical():
    g, s, d, m = fixture("fig1")
    state = simulate(g, d)
    assert state.to_json() == simulate(g, d).to_json()
    text = state.to_text()
    assert text.startswith("rounds ")
    assert "%d: %d 6 2 1 %d" % (s, s, d) in text
