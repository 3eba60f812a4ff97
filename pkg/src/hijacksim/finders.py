"""Attack-strategy search.

Three searches, each returning a FinderResult whose strategy, when found, is
re-verified by a full standalone evaluation before being returned:

* find_origin_spoofing: candidate-route search for origin claims.  For each
  valley-free source-to-manipulator path (shortest first), it builds the
  maximal announcement set that cannot disrupt the candidate by better
  class, then simulates that single set.  With the longest valley-free path
  bounded, this is polynomial, in contrast to the exponential subset space.
* oracle_origin_spoofing: the exponential reference search over all
  2^deg(m) announcement subsets; used as the ground truth the candidate
  search is checked against.
* find_sbgp_bruteforce: per-neighbor product search over the legal
  re-announcement pool plus silence, with an optional same-path mode that
  announces one chosen path to a subset of neighbors.

Candidate evaluations share a warm-started simulator: the honest fixpoint
is computed once per instance and only the manipulator's delta re-converges.
Two per-option reductions are applied, both exact: announcing anything to
the destination changes nothing (it never reroutes), and announcing a path
to a neighbor contained in that path is indistinguishable from silence
(the neighbor drops it on import).  The silence representative is kept.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import DegreeBoundError, RoleError
from .attacks import (
    REACHES_M,
    SBGP,
    AttackStrategy,
    evaluate,
    trace_data_plane,
)
from .graph import best_class_reach, edge_class, valley_free_paths
from .routing import baseline_available, honest_board, simulate_from_honest


@dataclass
class FinderStats:
    candidates: int = 0
    simulations: int = 0


@dataclass
class FinderResult:
    found: bool
    strategy: AttackStrategy | None
    witness_path: tuple | None
    stats: FinderStats = field(default_factory=FinderStats)
    successes: tuple | None = None  # oracle only: every winning subset


def _check_roles(graph, s, d, m):
    if len({s, d, m}) != 3:
        raise RoleError("s, d, m must be pairwise distinct: %r %r %r" % (s, d, m))
    for v in (s, d, m):
        if v not in graph:
            raise RoleError("role vertex %r not in graph" % (v,))


def _hijacks(graph, d, s, m, strategy, board, stats):
    stats.simulations += 1
    state = simulate_from_honest(graph, d, strategy, board)
    return trace_data_plane(state, s, m, d).terminal == REACHES_M, state


def _confirm(graph, s, d, m, strategy, baseline=None):
    outcome = evaluate(graph, s, d, m, strategy, baseline=baseline)
    if not outcome.hijacked:
        raise AssertionError(
            "search accepted a strategy the standalone evaluation rejects: %r"
            % (strategy,)
        )
    return outcome


def find_origin_spoofing(graph, s, d, m, max_len=8) -> FinderResult:
    """Candidate-route search for an origin-claim hijack of the s->d flow.

    For each valley-free path p from s to m (at most max_len hops, shortest
    first then lexicographic): start the announcement set A with p's neighbor
    of m, then add every other neighbor n of m unless some valley-free path
    through the edge (n, m) would reach a vertex x of p with a class strictly
    better than x's own class along p (such an announcement could displace p
    at x by class, which no amount of shortness can win back).  Announce the
    origin claim to A and keep the first set that verifiably hijacks.
    """
    _check_roles(graph, s, d, m)
    stats = FinderStats()
    candidates = sorted(
        valley_free_paths(graph, s, m, max_len=max_len), key=lambda p: (len(p), p)
    )
    if not candidates:
        return FinderResult(False, None, None, stats)
    board = honest_board(graph, d)
    reach = {}  # per-neighbor best-class map, computed once
    neighbors = graph.neighbors(m)
    for p_sm in candidates:
        stats.candidates += 1
        w = p_sm[-2]
        announce_to = {w}
        for n in neighbors:
            if n == w:
                continue
            if n not in reach:
                reach[n] = best_class_reach(graph, m, n)
            table = reach[n]
            safe = True
            for i in range(len(p_sm) - 1):
                x = p_sm[i]
                got = table.get(x)
                if got is not None and got > edge_class(graph, x, p_sm[i + 1]):
                    safe = False
                    break
            if safe:
                announce_to.add(n)
        strategy = AttackStrategy.origin_claim(m, sorted(announce_to))
        hijacked, _ = _hijacks(graph, d, s, m, strategy, board, stats)
        if hijacked:
            outcome = _confirm(graph, s, d, m, strategy)
            return FinderResult(True, strategy, outcome.state.selected[s], stats)
    return FinderResult(False, None, None, stats)


def oracle_origin_spoofing(graph, s, d, m, max_degree=16, first_only=False) -> FinderResult:
    """Exhaustive origin-claim search over every neighbor subset.

    Returns every successful subset (canonical bitmask order over the sorted
    neighbor list) and the first one as the strategy; with first_only the
    scan stops at the first success and `successes` holds just that subset.
    Exponential in deg(m), hence the degree guard.
    """
    _check_roles(graph, s, d, m)
    neighbors = graph.neighbors(m)
    if len(neighbors) > max_degree:
        raise DegreeBoundError(
            "deg(m)=%d exceeds the oracle bound %d" % (len(neighbors), max_degree)
        )
    stats = FinderStats()
    board = honest_board(graph, d)
    wins = []
    first = None
    witness = None
    for mask in range(1 << len(neighbors)):
        subset = tuple(neighbors[i] for i in range(len(neighbors)) if mask >> i & 1)
        strategy = AttackStrategy.origin_claim(m, subset)
        stats.candidates += 1
        hijacked, state = _hijacks(graph, d, s, m, strategy, board, stats)
        if hijacked:
            wins.append(subset)
            if first is None:
                first = strategy
                witness = state.selected[s]
            if first_only:
                break
    if first is not None:
        _confirm(graph, s, d, m, first)
        return FinderResult(True, first, witness, stats, successes=tuple(wins))
    return FinderResult(False, None, None, stats, successes=())


def _sbgp_options(pool, receiver, dest):
    """Announcement options for one neighbor, silence represented as None.

    Announcing to the destination never changes routing, and a path that
    contains its receiver dies on import; both collapse onto silence, so
    only the silence representative is kept for them.
    """
    if receiver == dest:
        return (None,)
    return (None,) + tuple(q for q in pool if receiver not in q)


def find_sbgp_bruteforce(
    graph, s, d, m, max_degree=8, same_path=False
) -> FinderResult:
    """Exhaustive search over legal re-announcement strategies.

    Full mode assigns each neighbor independently one of {each honestly
    received path, silence}; the per-neighbor pool is the whole received
    set, so the space is (pool+1)^deg(m) before reduction, a superset of the
    (k+1)^k bound quoted for a shared pool.  same_path mode restricts to one
    chosen path announced to a subset of neighbors (silence elsewhere).
    Either way the first success in canonical order is returned.
    """
    _check_roles(graph, s, d, m)
    neighbors = graph.neighbors(m)
    if len(neighbors) > max_degree:
        raise DegreeBoundError(
            "deg(m)=%d exceeds the search bound %d" % (len(neighbors), max_degree)
        )
    stats = FinderStats()
    pool = sorted(baseline_available(graph, d, m), key=lambda p: (len(p), p))
    board = honest_board(graph, d)
    baseline = tuple(pool)

    def finish(strategy):
        outcome = _confirm(graph, s, d, m, strategy, baseline=baseline)
        return FinderResult(True, strategy, outcome.state.selected[s], stats)

    if same_path:
        # all-silence probe once, then one path to each neighbor subset
        silence = AttackStrategy(m, SBGP, {})
        stats.candidates += 1
        hijacked, _ = _hijacks(graph, d, s, m, silence, board, stats)
        if hijacked:
            return finish(silence)
        for q in pool:
            eligible = [n for n in neighbors if n != d and n not in q]
            for mask in range(1, 1 << len(eligible)):
                subset = [eligible[i] for i in range(len(eligible)) if mask >> i & 1]
                strategy = AttackStrategy(m, SBGP, {n: q for n in subset})
                stats.candidates += 1
                hijacked, _ = _hijacks(graph, d, s, m, strategy, board, stats)
                if hijacked:
                    return finish(strategy)
        return FinderResult(False, None, None, stats)

    # canonical order: by number of non-silent announcements ascending (the
    # most plausible, smallest-footprint attacks first), then receivers in
    # ascending-id combinations, then announcement choices in pool order
    options = []
    for n in neighbors:
        opts = [q for q in _sbgp_options(pool, n, d) if q is not None]
        if opts:
            options.append((n, opts))
    for k in range(0, len(options) + 1):
        for picked in combinations(range(len(options)), k):
            for combo in product(*(options[i][1] for i in picked)):
                strategy = AttackStrategy(
                    m,
                    SBGP,
                    {options[i][0]: q for i, q in zip(picked, combo)},
                )
                stats.candidates += 1
                hijacked, _ = _hijacks(graph, d, s, m, strategy, board, stats)
                if hijacked:
                    return finish(strategy)
    return FinderResult(False, None, None, stats)
