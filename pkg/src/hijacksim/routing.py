"""Route-propagation fixpoint under the standard commercial policy model.

Every vertex except the destination and the manipulator behaves honestly:
it keeps, per neighbor, the most recent announcement, drops announcements
containing itself (loop detection, and nothing else: honest vertices do not
re-check valley-freeness of received routes), selects the best candidate by
class, then hop count, then lowest next-hop AS number, and re-announces the
selection to every neighbor its export rule allows.

The destination steadily announces its own one-vertex route to all
neighbors and never withdraws.  A manipulator, when present, has its
announcements pinned for the whole run.

Activation is a deterministic round-robin sweep in ascending AS order;
a vertex whose inbox has not changed since its last activation is a no-op
and is skipped, which leaves the activation semantics intact.  The run
terminates when a full sweep produces no change.  Convergence is guaranteed
in this model even for arbitrary steady manipulator announcements, so
exceeding the |V|^2 sweep cap raises loudly instead of being tolerated.
"""

import json

from .errors import NonConvergenceError, PathError, RoleError, SimulationError
from .graph import CUSTOMER, edge_class, path_class


def preference_key(graph, v, path):
    """Sort key of a candidate path at v; smaller is more preferred."""
    if len(path) < 2 or path[0] != v:
        raise PathError("candidate %r is not rooted at %r with a next hop" % (path, v))
    return (-edge_class(graph, v, path[1]), len(path) - 1, path[1])


def preference_less(graph, v, p1, p2) -> bool:
    """True iff v strictly prefers p1 over p2.

    Higher class wins, then fewer hops, then the lower next-hop AS number.
    A neighbor announces at most one path, so candidates never tie on all
    three components.
    """
    return preference_key(graph, v, p1) < preference_key(graph, v, p2)


def export_allowed(graph, v, path, n) -> bool:
    """Export rule for an honest vertex.

    The destination exports its own route everywhere.  A customer-learned
    route (class 3) is exported to every neighbor; peer- and provider-learned
    routes only to customers, since carrying that traffic for a peer or a
    provider would be unpaid transit.
    """
    if len(path) == 1:
        return path[0] == v  # origin announcement
    if path[0] != v:
        raise PathError("path %r is not rooted at %r" % (path, v))
    if path_class(graph, path) == CUSTOMER:
        return True
    return n in graph.customers(v)


class RoutingState:
    """Stable outcome of a simulation run.

    selected maps each AS to its chosen path (rooted at that AS) or None;
    available maps each AS to the loop-filtered candidates offered by its
    neighbors, in ascending next-hop order (built on first access); rounds
    counts activation sweeps that performed work.
    """

    def __init__(self, selected, rounds, board):
        self.selected = selected
        self.rounds = rounds
        self._board = board
        self._available = None

    @property
    def available(self):
        if self._available is None:
            self._available = {
                v: tuple((v,) + row[u] for u in sorted(row) if v not in row[u])
                for v, row in self._board.items()
            }
        return self._available

    def to_json_dict(self):
        sel = {}
        for v in sorted(self.selected):
            path = self.selected[v]
            sel[str(v)] = list(path) if path is not None else None
        return {"rounds": self.rounds, "selected": sel}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = ["rounds %d" % self.rounds]
        for v in sorted(self.selected):
            path = self.selected[v]
            shown = " ".join(str(x) for x in path) if path else "-"
            lines.append("%d: %s" % (v, shown))
        return "\n".join(lines) + "\n"


def _pinned_rows(graph, dest, attack):
    """Board rows fixed for the whole run: destination plus manipulator."""
    pinned = {}
    for n in graph.neighbors(dest):
        pinned.setdefault(n, {})[dest] = (dest,)
    if attack is not None:
        m = attack.manipulator
        for n in graph.neighbors(m):
            ann = attack.announcements.get(n)
            if ann is not None:
                pinned.setdefault(n, {})[m] = tuple(ann)
    return pinned


def simulate(graph, dest, attack=None, activation_order=None):
    """Run routing for the destination's prefix to its unique fixpoint.

    attack, when given, pins the manipulator's announcements; neighbors it
    does not name receive silence.  activation_order overrides the default
    ascending-id sweep order (it must be a permutation of the vertices); the
    fixpoint itself does not depend on it.
    """
    if dest not in graph:
        raise RoleError("destination %r not in graph" % (dest,))
    manip = None
    if attack is not None:
        manip = attack.manipulator
        if manip not in graph:
            raise RoleError("manipulator %r not in graph" % (manip,))
        if manip == dest:
            raise RoleError("manipulator and destination coincide")
    if activation_order is None:
        order = sorted(graph.vertices)
    else:
        order = list(activation_order)
        if sorted(order) != sorted(graph.vertices):
            raise SimulationError("activation order must be a permutation of the vertices")

    incoming = {v: {} for v in graph.vertices}
    for n, row in _pinned_rows(graph, dest, attack).items():
        incoming[n].update(row)
    selected = {v: None for v in graph.vertices}
    selected[dest] = (dest,)
    skip = {dest} if manip is None else {dest, manip}
    dirty = set(graph.vertices) - skip
    rounds = _run_to_fixpoint(graph, incoming, selected, dirty, skip, order)
    return _finalize(graph, incoming, selected, manip, rounds)


def _run_to_fixpoint(graph, incoming, selected, dirty, skip, order, cow_rows=None):
    """Sweep dirty vertices in activation order until nothing changes.

    Each sweep takes a snapshot of the vertices whose inboxes changed,
    activates them in order, and queues newly affected vertices for the
    next sweep.  The fixpoint reached is schedule-independent, so this is
    equivalent to activating every vertex each sweep, just cheaper.
    cow_rows, when given, names inbox rows shared with a warm-start base
    that must be copied before their first write.
    """
    meta = graph._activation_meta()
    cap = len(order) ** 2
    rank = None
    if order != sorted(order):
        rank = {v: i for i, v in enumerate(order)}
    rounds = 0
    shared = cow_rows
    while dirty:
        rounds += 1
        if rounds > cap:
            raise NonConvergenceError(
                "no fixpoint after %d sweeps; the model forbids this" % cap
            )
        batch = sorted(dirty) if rank is None else sorted(dirty, key=rank.__getitem__)
        dirty = set()
        for v in batch:
            row = incoming[v]
            cls_v, cust, nbrs_v = meta[v]
            best_u = None
            best_cls = 0
            best_len = 0
            for u, p in row.items():
                if v in p:
                    continue
                c = cls_v[u]
                lp = len(p)
                if (
                    best_u is None
                    or c > best_cls
                    or (c == best_cls and (lp < best_len or (lp == best_len and u < best_u)))
                ):
                    best_u = u
                    best_cls = c
                    best_len = lp
            if best_u is None:
                sel = None
                selected[v] = None
                for n in nbrs_v:
                    inbox = incoming[n]
                    if v in inbox:
                        if shared is not None and n in shared:
                            inbox = dict(inbox)
                            incoming[n] = inbox
                            shared.discard(n)
                        del inbox[v]
                        if n not in skip:
                            dirty.add(n)
                continue
            sel = (v,) + row[best_u]
            selected[v] = sel
            export_all = best_cls == CUSTOMER
            for n in nbrs_v:
                val = sel if (export_all or n in cust) else None
                inbox = incoming[n]
                if inbox.get(v) != val:
                    if shared is not None and n in shared:
                        # row still belongs to the warm-start base; copy first
                        inbox = dict(inbox)
                        incoming[n] = inbox
                        shared.discard(n)
                    if val is None:
                        del inbox[v]
                    else:
                        inbox[v] = val
                    if n not in skip:
                        dirty.add(n)
    return rounds


def _finalize(graph, incoming, selected, manip, rounds):
    if manip is not None:
        # the manipulator's own best route, for interception checks
        row = incoming[manip]
        cands = [(manip,) + p for p in row.values() if manip not in p]
        selected[manip] = (
            min(cands, key=lambda p: preference_key(graph, manip, p)) if cands else None
        )
    return RoutingState(selected, rounds, incoming)


def honest_board(graph, dest):
    """Honest fixpoint board, reusable as a warm start for attack runs."""
    if dest not in graph:
        raise RoleError("destination %r not in graph" % (dest,))
    incoming = {v: {} for v in graph.vertices}
    for n, row in _pinned_rows(graph, dest, None).items():
        incoming[n].update(row)
    selected = {v: None for v in graph.vertices}
    selected[dest] = (dest,)
    order = sorted(graph.vertices)
    dirty = set(graph.vertices) - {dest}
    _run_to_fixpoint(graph, incoming, selected, dirty, {dest}, order)
    return incoming, selected


def simulate_from_honest(graph, dest, attack, board):
    """Re-converge from the honest fixpoint after the manipulator speaks.

    The network starts stable with everyone honest, then the manipulator
    pins its announcements; only the induced delta has to propagate.  The
    fixpoint is the same one simulate() reaches from scratch (it is unique),
    so this is purely a fast path for strategy searches.  Inbox rows are
    shared with the base and copied on first write.
    """
    base_incoming, base_selected = board
    m = attack.manipulator
    incoming = dict(base_incoming)
    shared = set(incoming)
    selected = dict(base_selected)
    skip = {dest, m}
    dirty = set()
    for n in graph.neighbors(m):
        ann = attack.announcements.get(n)
        val = tuple(ann) if ann is not None else None
        inbox = incoming[n]
        if inbox.get(m) != val:
            inbox = dict(inbox)
            incoming[n] = inbox
            shared.discard(n)
            if val is None:
                del inbox[m]
            else:
                inbox[m] = val
            if n not in skip:
                dirty.add(n)
    order = sorted(graph.vertices)
    rounds = _run_to_fixpoint(
        graph, incoming, selected, dirty, skip, order, cow_rows=shared
    )
    return _finalize(graph, incoming, selected, m, rounds)


def baseline_available(graph, dest, m):
    """Routes the manipulator could legitimately re-announce.

    These are the candidates available at m in the all-honest stable state;
    a route-attestation regime limits m's announcements to exactly this pool.
    """
    state = simulate(graph, dest, None)
    return state.available[m]
