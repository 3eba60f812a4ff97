"""AS-graph data model, relationship semantics and valley-free path machinery.

Vertices are non-negative AS numbers.  Edges are either customer-to-provider
(directed, the customer pays the provider) or peer-to-peer (undirected).
Peer edges are stored once per unordered pair; direction is a view.

Paths are tuples of AS numbers written from the announcing vertex toward the
destination, e.g. ``(6, 2, 1, 0)`` is the route vertex 6 uses through its
peer 2.  The hop count of a path is ``len(path) - 1``.
"""

from collections import deque

from .errors import GraphError, MissingEdgeError, NotAdjacentError, PathError

# Preference classes of a neighbor/first hop, higher is better.
CUSTOMER = 3
PEER = 2
PROVIDER = 1

# Step direction along a path, read announcer-to-destination.
_UP = 0  # customer -> provider
_PEER_STEP = 1
_DOWN = 2  # provider -> customer


class ASGraph:
    """Policy-annotated AS graph.

    Treat instances as immutable once handed to the simulator or the path
    machinery: internal lookup caches are built on first use and mutation
    afterwards is rejected.
    """

    def __init__(self):
        self._providers = {}  # v -> set of v's providers
        self._customers = {}  # v -> set of v's customers
        self._peers = {}  # v -> set of v's peers
        self._frozen = False
        self._nbr_cache = None
        self._class_cache = None
        self._meta_cache = None

    # -- construction -----------------------------------------------------

    def _check_mutable(self):
        if self._frozen:
            raise GraphError("graph is frozen; build a new one instead of mutating")

    @staticmethod
    def _check_id(v):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise GraphError("AS id must be a non-negative integer, got %r" % (v,))

    def add_vertex(self, v: int):
        self._check_mutable()
        self._check_id(v)
        if v not in self._providers:
            self._providers[v] = set()
            self._customers[v] = set()
            self._peers[v] = set()

    def _check_new_edge(self, u, v):
        if u == v:
            raise GraphError("self-loop on AS %d" % u)
        self.add_vertex(u)
        self.add_vertex(v)
        if self.adjacent(u, v):
            raise GraphError("duplicate edge between %d and %d" % (u, v))

    def add_c2p(self, customer: int, provider: int):
        """Add a directed customer-to-provider edge."""
        self._check_mutable()
        self._check_new_edge(customer, provider)
        self._providers[customer].add(provider)
        self._customers[provider].add(customer)

    def add_p2p(self, u: int, v: int):
        """Add an undirected peer edge."""
        self._check_mutable()
        self._check_new_edge(u, v)
        self._peers[u].add(v)
        self._peers[v].add(u)

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self):
        return self._providers.keys()

    def __contains__(self, v):
        return v in self._providers

    def __len__(self):
        return len(self._providers)

    def adjacent(self, u, v) -> bool:
        if u not in self._providers or v not in self._providers:
            return False
        return (
            v in self._providers[u]
            or v in self._customers[u]
            or v in self._peers[u]
        )

    def providers(self, v):
        return self._providers[v]

    def customers(self, v):
        return self._customers[v]

    def peers(self, v):
        return self._peers[v]

    def degree(self, v) -> int:
        return len(self._providers[v]) + len(self._customers[v]) + len(self._peers[v])

    def neighbors(self, v):
        """Neighbors of v in ascending AS order."""
        return self._neighbor_map()[v]

    def _neighbor_map(self):
        if self._nbr_cache is None:
            self._frozen = True
            self._nbr_cache = {
                v: tuple(sorted(self._providers[v] | self._customers[v] | self._peers[v]))
                for v in self._providers
            }
        return self._nbr_cache

    def class_map(self):
        """Per-vertex map neighbor -> preference class (built once)."""
        if self._class_cache is None:
            self._frozen = True
            cache = {}
            for v in self._providers:
                row = {}
                for u in self._customers[v]:
                    row[u] = CUSTOMER
                for u in self._peers[v]:
                    row[u] = PEER
                for u in self._providers[v]:
                    row[u] = PROVIDER
                cache[v] = row
            self._class_cache = cache
        return self._class_cache

    def _activation_meta(self):
        """Per-vertex (class row, customer set, neighbor tuple), for the
        simulator's inner loop."""
        if self._meta_cache is None:
            cls = self.class_map()
            nbrs = self._neighbor_map()
            self._meta_cache = {
                v: (cls[v], self._customers[v], nbrs[v]) for v in self._providers
            }
        return self._meta_cache

    def edges(self):
        """Canonical edge listing: ('c2p', cust, prov) and ('p2p', lo, hi)."""
        out = []
        for v in sorted(self._providers):
            for p in sorted(self._providers[v]):
                out.append(("c2p", v, p))
        seen = set()
        for v in sorted(self._peers):
            for p in sorted(self._peers[v]):
                if (p, v) not in seen:
                    seen.add((v, p))
                    out.append(("p2p", v, p))
        return out


def edge_class(graph: ASGraph, v: int, u: int) -> int:
    """Class of neighbor u as seen from v: customer 3, peer 2, provider 1."""
    try:
        cls = graph.class_map()[v].get(u)
    except KeyError:
        raise NotAdjacentError("AS %r not in graph" % (v,)) from None
    if cls is None:
        raise NotAdjacentError("%r and %r are not adjacent" % (v, u))
    return cls


def _step(graph, u, v):
    cls = edge_class(graph, u, v)
    if cls == CUSTOMER:
        return _DOWN
    if cls == PEER:
        return _PEER_STEP
    return _UP


def path_class(graph: ASGraph, path) -> int:
    """Class of a path at its first vertex (the class of its first edge)."""
    if len(path) < 2:
        raise PathError("path %r has no first edge" % (path,))
    return edge_class(graph, path[0], path[1])


def is_valley_free(graph: ASGraph, path) -> bool:
    """Check the up*-peer?-down* shape of a path whose edges all exist.

    Once a peer or provider-to-customer step occurs, every later step must be
    provider-to-customer; this also limits the path to a single peer step.
    """
    descending = False
    for i in range(len(path) - 1):
        if not graph.adjacent(path[i], path[i + 1]):
            raise MissingEdgeError(
                "pair (%r, %r) of %r is not an edge" % (path[i], path[i + 1], path)
            )
        step = _step(graph, path[i], path[i + 1])
        if descending and step != _DOWN:
            return False
        if step != _UP:
            descending = True
    return True


def valley_free_paths(graph: ASGraph, frm: int, to: int, max_len: int = 8):
    """All simple valley-free paths from frm to to with at most max_len hops.

    The default bound of 8 hops gives plenty of headroom over observed
    AS-path lengths while keeping enumeration tractable.  Paths are returned
    in lexicographic AS-id order.
    """
    if max_len < 1:
        raise PathError("max_len must be >= 1, got %r" % (max_len,))
    if frm not in graph or to not in graph:
        raise GraphError("endpoint not in graph")
    cls = graph.class_map()
    out = []
    # stack frames: (vertex, descending-phase, path-so-far, visited)
    stack = [(frm, False, (frm,), frozenset((frm,)))]
    while stack:
        v, descending, path, visited = stack.pop()
        if len(path) - 1 >= max_len:
            continue
        # expand in reverse-sorted order so the stack pops lexicographically
        for u in reversed(graph.neighbors(v)):
            if u in visited:
                continue
            c = cls[v][u]
            if descending and c != CUSTOMER:
                continue
            new_path = path + (u,)
            if u == to:
                out.append(new_path)
                continue
            stack.append((u, descending or c != PROVIDER, new_path, visited | {u}))
    # DFS with sorted expansion emits prefixes in order, but appending `to`
    # terminates branches early; sort to pin the lexicographic contract.
    out.sort()
    return out


def best_class_reach(graph: ASGraph, m: int, n: int):
    """Best class any vertex can see over valley-free paths ending (n, m).

    For each vertex x, the maximum of the first-edge class over all simple
    valley-free paths from x to m whose final edge is (n, m); x is absent if
    no such path exists.  Implemented as a two-phase reachability search over
    (vertex, phase) states walked outward from m, which is exact: any walk
    reaching x can be spliced into a simple path with the same arrival edge.
    """
    if not graph.adjacent(m, n):
        raise NotAdjacentError("%r and %r are not adjacent" % (m, n))
    cls = graph.class_map()

    best = {}
    # Walk in announcement direction (m -> n -> ... -> x).  A step u->v whose
    # class at v is CUSTOMER means the path ascends; such steps are only
    # allowed while no peer/descending step has occurred (phase UP).
    first = cls[n][m]  # class of m as seen from n = arrival class at n
    start_phase_up = first == CUSTOMER  # m->n was an ascending step
    best[n] = first
    seen = {(n, start_phase_up)}
    queue = deque([(n, start_phase_up)])
    while queue:
        v, up = queue.popleft()
        for u in graph.neighbors(v):
            if u == m:
                continue
            arrival = cls[u][v]
            if arrival == CUSTOMER:
                # ascending step, pre-peak only
                if not up:
                    continue
                state = (u, True)
            elif arrival == PEER:
                # the single peer step sits at the peak
                if not up:
                    continue
                state = (u, False)
            else:
                # descending step
                state = (u, False)
            if best.get(u, 0) < arrival:
                best[u] = arrival
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return best


def vf_class_to(graph: ASGraph, dest: int, avoid=None):
    """Best class per vertex over valley-free paths to dest, skipping `avoid`.

    Same two-phase search as best_class_reach but anchored at the destination
    with no fixed final edge.
    """
    cls = graph.class_map()
    best = {}
    seen = set()
    queue = deque()
    for n in graph.neighbors(dest):
        if n == avoid:
            continue
        arrival = cls[n][dest]
        state = (n, arrival == CUSTOMER)
        best[n] = max(best.get(n, 0), arrival)
        if state not in seen:
            seen.add(state)
            queue.append(state)
    while queue:
        v, up = queue.popleft()
        for u in graph.neighbors(v):
            if u == dest or u == avoid:
                continue
            arrival = cls[u][v]
            if arrival == CUSTOMER:
                if not up:
                    continue
                state = (u, True)
            elif arrival == PEER:
                if not up:
                    continue
                state = (u, False)
            else:
                state = (u, False)
            if best.get(u, 0) < arrival:
                best[u] = arrival
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return best


class ValidationReport:
    def __init__(self, violations, cycle=None):
        self.violations = list(violations)
        self.cycle = cycle  # witness vertex sequence for a c2p cycle

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_graph(graph: ASGraph) -> ValidationReport:
    """Check structural invariants; the key one is an acyclic c2p hierarchy.

    A directed cycle of customer-to-provider edges would leave the commercial
    roles of the ASes on it undefined, so it is reported with a witness.
    Self-loops and duplicate edges cannot be built through the ASGraph API,
    but the supporting maps are re-checked anyway.
    """
    violations = []
    cycle = None
    for v in graph.vertices:
        if v in graph.providers(v) or v in graph.customers(v) or v in graph.peers(v):
            violations.append("self-loop on AS %d" % v)
        overlap = (graph.providers(v) & graph.peers(v)) | (
            graph.customers(v) & graph.peers(v)
        ) | (graph.providers(v) & graph.customers(v))
        for u in sorted(overlap):
            violations.append("conflicting duplicate edge between %d and %d" % (v, u))

    cycle = _find_c2p_cycle(graph)
    if cycle is not None:
        violations.append(
            "customer-provider cycle: %s" % " -> ".join(str(v) for v in cycle)
        )
    return ValidationReport(violations, cycle)


def _find_c2p_cycle(graph):
    # Iterative DFS over the customer->provider digraph, returns a cycle or None.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in graph.vertices}
    parent = {}
    for root in sorted(graph.vertices):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(graph.providers(root))))]
        color[root] = GRAY
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if color[u] == WHITE:
                    color[u] = GRAY
                    parent[u] = v
                    stack.append((u, iter(sorted(graph.providers(u)))))
                    advanced = True
                    break
                if color[u] == GRAY:
                    # back edge v -> u closes a cycle
                    cyc = [v]
                    w = v
                    while w != u:
                        w = parent[w]
                        cyc.append(w)
                    cyc.reverse()
                    return cyc
            if not advanced:
                color[v] = BLACK
                stack.pop()
    return None


# -- text format ------------------------------------------------------------
#
# One record per line: "c2p <customer> <provider>" or "p2p <id> <id>".
# '#' starts a comment line; blank lines are ignored.  Parsing is strict.


def parse_graph(text: str) -> ASGraph:
    graph = ASGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("c2p", "p2p"):
            raise GraphError("line %d: expected 'c2p A B' or 'p2p A B', got %r" % (lineno, raw))
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphError("line %d: AS ids must be integers" % lineno) from None
        try:
            if parts[0] == "c2p":
                graph.add_c2p(u, v)
            else:
                graph.add_p2p(u, v)
        except GraphError as exc:
            raise GraphError("line %d: %s" % (lineno, exc)) from None
    return graph


def format_graph(graph: ASGraph) -> str:
    lines = []
    for kind, u, v in graph.edges():
        lines.append("%s %d %d" % (kind, u, v))
    return "\n".join(lines) + ("\n" if lines else "")
