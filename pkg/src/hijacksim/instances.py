"""Built-in example networks and a seeded random-instance generator."""

import random
from dataclasses import dataclass

from .errors import FixtureError, GraphError
from .graph import ASGraph
from .routing import simulate

FIXTURES = ("fig1", "fig2", "fig5")


def fixture(name: str):
    """Return (graph, s, d, m) for one of the built-in networks."""
    if name == "fig1":
        return _fig1()
    if name == "fig2":
        return _fig2()
    if name == "fig5":
        return _fig5()
    raise FixtureError("unknown fixture %r (have %s)" % (name, ", ".join(FIXTURES)))


def _fig1():
    # Nine ASes: d=0, transit ASes 1..6, s=7, m=8.  The peering 2--6 is the
    # only settlement-free link.  Honestly, d's route climbs 1 -> 2, crosses
    # the peering to 6 and descends to the customers 7 (=s) and 5, then down
    # the provider chain 5 -> 4 -> 3 to m, so s routes (s 6 2 1 d) while m
    # sits below two providers (2 and 3) and re-announces nothing.
    g = ASGraph()
    s, d, m = 7, 0, 8
    g.add_c2p(d, 1)  # d buys transit from 1
    g.add_c2p(1, 2)  # 1 buys transit from 2
    g.add_p2p(2, 6)  # 2 and 6 peer
    g.add_c2p(s, 6)  # s is a customer of 6
    g.add_c2p(5, 6)  # 5 is a customer of 6
    g.add_c2p(4, 5)  # 4 is a customer of 5
    g.add_c2p(3, 4)  # 3 is a customer of 4
    g.add_c2p(m, 3)  # m is a customer of 3
    g.add_c2p(m, 2)  # m is also a customer of 2
    return g, s, d, m


def _fig2():
    # Twelve ASes: d=0, transit ASes 1..9, s=10, m=11.  s has only
    # providers (1, 4, 5), so every candidate at s ties on class and length
    # decides: honestly s picks the 2-hop (s 4 d) over the 4-hop
    # (s 1 2 3 d).  m's announcements can surface (s 5 6 m) and, through
    # the peerings 4--9 and 5--9, pull both 4 and 5 onto peer routes toward
    # m, which knocks out (s 4 d) and (s 5 6 m) at once; the always-alive
    # chain d -> 3 -> 2 -> 1 then wins at s.
    g = ASGraph()
    s, d, m = 10, 0, 11
    g.add_c2p(s, 4)  # 4 is a provider of s
    g.add_c2p(s, 1)  # 1 is a provider of s
    g.add_c2p(s, 5)  # 5 is a provider of s
    g.add_c2p(4, d)  # d is a provider of 4, so (4 d) is a provider route at 4
    g.add_c2p(d, 3)  # d is a customer of 3: the chain 3 -> 2 -> 1 always carries d
    g.add_c2p(3, 2)
    g.add_c2p(2, 1)
    g.add_c2p(m, 6)  # m is a customer of 6
    g.add_c2p(5, 6)  # 6 is a provider of 5
    g.add_c2p(m, 7)  # m is a customer of 7; 7 -> 8 -> 9 climbs to the peerings
    g.add_c2p(7, 8)
    g.add_c2p(8, 9)
    g.add_p2p(4, 9)  # 9 peers with 4 and 5
    g.add_p2p(5, 9)
    return g, s, d, m


def _fig5():
    # Seven ASes: d=0, 1..4, s=5, m=6.  Two symmetric provider chains hang
    # the destination above 1 and 4; m is a customer of both 2 and 3 and
    # honestly receives (m 2 1 d) and (m 3 4 d).  s reaches d only through
    # 1 and 4, so a hijack must displace both, which m can only do by
    # crossing the routes: announce the 3-side route to 2 and the 2-side
    # route to 3.  Both of m's own routes then die by loop detection, so
    # the catch cannot be forwarded on.
    g = ASGraph()
    s, d, m = 5, 0, 6
    g.add_c2p(m, 2)  # m is a customer of 2
    g.add_c2p(m, 3)  # m is a customer of 3
    g.add_c2p(2, 1)  # 2 is a customer of 1
    g.add_c2p(3, 4)  # 3 is a customer of 4
    g.add_c2p(1, d)  # d is a provider of 1
    g.add_c2p(4, d)  # d is a provider of 4
    g.add_c2p(s, 1)  # 1 is a provider of s
    g.add_c2p(s, 4)  # 4 is a provider of s
    return g, s, d, m


@dataclass
class RandomSpec:
    """Knobs for gen_random; the same spec always yields the same instance."""

    seed: int
    num_vertices: int
    density: float = 0.35
    peer_fraction: float = 0.2
    max_m_degree: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if not 0.0 <= self.peer_fraction <= 1.0:
            raise ValueError("peer_fraction must lie in [0, 1]")


def gen_random(spec: RandomSpec):
    """Seeded random instance: (graph, s, d, m), valid by construction.

    Directed edges follow a random topological order, so the provider
    hierarchy is acyclic without any checking.  Roles are redrawn until the
    source honestly routes to the destination (and the manipulator degree
    bound, if any, holds); after bounded retries a fresh graph is drawn.
    """
    if spec.num_vertices < 4:
        raise GraphError("need at least 4 vertices for the three roles")
    rng = random.Random(spec.seed)
    for _attempt in range(20):
        g = _random_graph(rng, spec)
        roles = _pick_roles(rng, g, spec)
        if roles is not None:
            s, d, m = roles
            return g, s, d, m
    raise GraphError(
        "no usable role assignment after 20 graphs; spec too sparse: %r" % (spec,)
    )


def _random_graph(rng, spec):
    n = spec.num_vertices
    order = list(range(n))
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    g = ASGraph()
    for v in range(n):
        g.add_vertex(v)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() >= spec.density:
                continue
            if rng.random() < spec.peer_fraction:
                g.add_p2p(u, v)
            elif rank[u] < rank[v]:
                g.add_c2p(v, u)  # u is higher in the hierarchy
            else:
                g.add_c2p(u, v)
    return g


def _pick_roles(rng, g, spec):
    verts = sorted(g.vertices)
    for _ in range(30):
        s, d, m = rng.sample(verts, 3)
        if spec.max_m_degree is not None and g.degree(m) > spec.max_m_degree:
            continue
        state = simulate(g, d)
        if state.selected[s] is not None:
            return s, d, m
    return None
