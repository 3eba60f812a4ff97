"""Attack strategies, capability legality, and hijack/interception verdicts.

A strategy fixes what the manipulator steadily announces to each neighbor:
a route claim of its own origin (the one-vertex path), a concrete path, or
silence.  Three capability levels exist:

* ``origin-spoofing``: only origin claims.
* ``s-bgp``: only paths the manipulator genuinely received in the honest
  stable state (never an origin claim); different neighbors may get
  different paths.
* ``plain``: any repeat-free sequence starting at the manipulator.

Success is judged on the data plane: the source's traffic is traced hop by
hop along selected routes, and the attack hijacks iff that trace ends at the
manipulator.  It intercepts iff, additionally, the manipulator still holds a
candidate route whose onward trace reaches the destination without touching
the manipulator again.
"""

import json
from dataclasses import dataclass, field

from .errors import RoleError, StrategyError
from .routing import baseline_available, preference_key, simulate

ORIGIN_SPOOFING = "origin-spoofing"
SBGP = "s-bgp"
PLAIN = "plain"
CAPABILITIES = (ORIGIN_SPOOFING, SBGP, PLAIN)

REACHES_D = "reaches-d"
REACHES_M = "reaches-m"
BLACKHOLE = "blackhole"
LOOP = "loop"


class AttackStrategy:
    """Per-neighbor announcement map for one manipulator.

    announcements maps neighbor -> path tuple; silence is simply absence.
    An origin claim is the one-vertex path (m,).
    """

    def __init__(self, manipulator, capability, announcements=None):
        if capability not in CAPABILITIES:
            raise StrategyError("unknown capability %r" % (capability,))
        self.manipulator = manipulator
        self.capability = capability
        anns = {}
        for n, path in (announcements or {}).items():
            if path is None:
                continue  # explicit silence
            anns[n] = tuple(path)
        self.announcements = anns

    def __eq__(self, other):
        return (
            isinstance(other, AttackStrategy)
            and self.manipulator == other.manipulator
            and self.capability == other.capability
            and self.announcements == other.announcements
        )

    def __repr__(self):
        return "AttackStrategy(m=%r, %s, %r)" % (
            self.manipulator,
            self.capability,
            self.announcements,
        )

    @classmethod
    def origin_claim(cls, manipulator, neighbors):
        """Origin-spoofing strategy announcing the bogus origin to `neighbors`."""
        return cls(
            manipulator,
            ORIGIN_SPOOFING,
            {n: (manipulator,) for n in neighbors},
        )

    @classmethod
    def silence(cls, manipulator, capability=SBGP):
        return cls(manipulator, capability, {})


class LegalityReport:
    def __init__(self, violations):
        self.violations = list(violations)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def check_legal(graph, dest, strategy, baseline=None) -> LegalityReport:
    """Check a strategy against its capability's constraints.

    For the route-attestation capability the legal pool is computed from the
    honest stable state unless a precomputed `baseline` is supplied.
    """
    v = []
    m = strategy.manipulator
    if m not in graph:
        v.append("manipulator %r not in graph" % (m,))
        return LegalityReport(v)
    nbrs = set(graph.neighbors(m))
    for n in strategy.announcements:
        if n not in nbrs:
            v.append("announcement target %r is not a neighbor of %r" % (n, m))
    for n, path in sorted(strategy.announcements.items()):
        if not path or path[0] != m:
            v.append("announcement to %r must start at the manipulator: %r" % (n, path))
        elif len(set(path)) != len(path):
            v.append("announcement to %r repeats a vertex: %r" % (n, path))
    if v:
        return LegalityReport(v)

    if strategy.capability == ORIGIN_SPOOFING:
        for n, path in sorted(strategy.announcements.items()):
            if path != (m,):
                v.append(
                    "origin-spoofing may only claim the origin; to %r got %r" % (n, path)
                )
    elif strategy.capability == SBGP:
        if baseline is None:
            baseline = baseline_available(graph, dest, m)
        pool = set(baseline)
        for n, path in sorted(strategy.announcements.items()):
            if path == (m,):
                v.append("capability forbids claiming the origin (to %r)" % (n,))
            elif path not in pool:
                v.append(
                    "path %r to %r was never received in the honest state" % (path, n)
                )
    # plain: any repeat-free sequence from m, already checked above
    return LegalityReport(v)


@dataclass
class Trace:
    """Data-plane walk: the vertices visited and why it stopped."""

    hops: tuple
    terminal: str


def trace_data_plane(state, start, m, dest) -> Trace:
    """Follow selected next hops from `start` until d, m, a blackhole or a loop."""
    hops = [start]
    seen = {start}
    cur = start
    while True:
        if cur == dest:
            return Trace(tuple(hops), REACHES_D)
        if cur == m:
            return Trace(tuple(hops), REACHES_M)
        sel = state.selected.get(cur)
        if sel is None or len(sel) < 2:
            return Trace(tuple(hops), BLACKHOLE)
        nxt = sel[1]
        if nxt in seen:
            hops.append(nxt)
            return Trace(tuple(hops), LOOP)
        hops.append(nxt)
        seen.add(nxt)
        cur = nxt


@dataclass
class AttackOutcome:
    hijacked: bool
    intercepted: bool
    data_plane_s: Trace
    data_plane_m: Trace | None
    state: object = field(repr=False)

    def to_json_dict(self):
        return {
            "hijacked": self.hijacked,
            "intercepted": self.intercepted,
            "data_plane_s": {
                "hops": list(self.data_plane_s.hops),
                "terminal": self.data_plane_s.terminal,
            },
            "data_plane_m": None
            if self.data_plane_m is None
            else {
                "hops": list(self.data_plane_m.hops),
                "terminal": self.data_plane_m.terminal,
            },
            "state": self.state.to_json_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def interception_route(graph, state, m, dest):
    """Most preferred candidate at m whose onward trace delivers to d, if any.

    The manipulator forwards caught traffic along its best remaining
    candidate; the onward walk follows the fixpoint's selected routes from
    the candidate's next hop and must reach the destination without coming
    back through the manipulator.
    """
    cands = sorted(
        state.available[m], key=lambda p: preference_key(graph, m, p)
    )
    for q in cands:
        cont = trace_data_plane(state, q[1], m, dest)
        if cont.terminal == REACHES_D:
            return Trace((m,) + cont.hops, REACHES_D)
    return None


def evaluate(graph, s, d, m, strategy, baseline=None, _state=None) -> AttackOutcome:
    """Simulate a strategy and judge hijack and interception.

    Raises RoleError on role collisions and StrategyError if the strategy is
    illegal for its capability.  `_state` lets a search pass in an already
    computed fixpoint for this exact strategy.
    """
    if len({s, d, m}) != 3:
        raise RoleError("s, d, m must be pairwise distinct: %r %r %r" % (s, d, m))
    for role, v in (("source", s), ("destination", d), ("manipulator", m)):
        if v not in graph:
            raise RoleError("%s %r not in graph" % (role, v))
    if strategy.manipulator != m:
        raise RoleError("strategy manipulator %r != m %r" % (strategy.manipulator, m))
    legal = check_legal(graph, d, strategy, baseline=baseline)
    if not legal.ok:
        raise StrategyError("; ".join(legal.violations))

    state = _state if _state is not None else simulate(graph, d, strategy)
    tr_s = trace_data_plane(state, s, m, d)
    hijacked = tr_s.terminal == REACHES_M
    tr_m = None
    intercepted = False
    if hijacked:
        tr_m = interception_route(graph, state, m, d)
        intercepted = tr_m is not None
    return AttackOutcome(hijacked, intercepted, tr_s, tr_m, state)


# -- strategy file format -----------------------------------------------------
#
# JSON object: {"capability": ..., "manipulator": N,
#               "announcements": [{"neighbor": N, "action": "origin"|"silence"|"path",
#                                  "path": [ids...]?}, ...]}


def strategy_to_json_dict(strategy):
    entries = []
    for n in sorted(strategy.announcements):
        path = strategy.announcements[n]
        if path == (strategy.manipulator,):
            entries.append({"neighbor": n, "action": "origin"})
        else:
            entries.append({"neighbor": n, "action": "path", "path": list(path)})
    return {
        "capability": strategy.capability,
        "manipulator": strategy.manipulator,
        "announcements": entries,
    }


def strategy_to_json(strategy) -> str:
    return json.dumps(strategy_to_json_dict(strategy), indent=2)


def strategy_from_json(text) -> AttackStrategy:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyError("strategy file is not valid JSON: %s" % exc) from None
    try:
        m = obj["manipulator"]
        cap = obj["capability"]
        entries = obj["announcements"]
    except (KeyError, TypeError):
        raise StrategyError(
            "strategy file needs capability, manipulator and announcements"
        ) from None
    anns = {}
    for e in entries:
        n = e.get("neighbor")
        action = e.get("action")
        if not isinstance(n, int):
            raise StrategyError("announcement neighbor must be an integer: %r" % (e,))
        if action == "silence":
            continue
        if action == "origin":
            anns[n] = (m,)
        elif action == "path":
            path = e.get("path")
            if not isinstance(path, list) or not all(isinstance(x, int) for x in path):
                raise StrategyError("announcement path must be a list of ids: %r" % (e,))
            anns[n] = tuple(path)
        else:
            raise StrategyError("unknown action %r" % (action,))
    return AttackStrategy(m, cap, anns)
