"""CNF ingestion, a small SAT oracle, and formula-to-instance generators.

Both generators turn a CNF formula into a policy-annotated AS graph with
source, destination and manipulator roles such that the formula is
satisfiable iff the manipulator can attract the source's traffic.  The
graphs consist of four vertex groups:

* intermediate: the only short corridor from the manipulator to the source;
* short: one cheap source-to-destination route per clause;
* long: a fallback source-to-destination route, longer than the corridor;
* disruptive: per-variable machinery through which the manipulator can
  knock out exactly the short routes of clauses its announcements satisfy.

An attack succeeds iff the corridor route survives at the source while
every short route is displaced, which forces announcement choices that
encode a consistent, satisfying assignment.

Vertex numbering is fixed (d=0, s=1, m=2, then group vertices in listing
order) so tie-breaking on AS numbers is reproducible and identical formulas
yield identical instances.
"""

from dataclasses import dataclass, field

from .errors import FormulaError
from .attacks import SBGP, AttackStrategy
from .graph import ASGraph, format_graph


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple  # tuple of clauses, each a tuple of non-zero signed ints

    def __post_init__(self):
        if self.num_vars < 0:
            raise FormulaError("negative variable count")
        for clause in self.clauses:
            if not clause:
                raise FormulaError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError("literal %r out of range" % (lit,))

    @staticmethod
    def make(num_vars, clauses):
        return CnfFormula(num_vars, tuple(tuple(c) for c in clauses))

    def occurrences(self, var):
        total = sum(1 for c in self.clauses for lit in c if abs(lit) == var)
        positive = sum(1 for c in self.clauses for lit in c if lit == var)
        return total, positive


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; clause order is preserved.

    The declared clause count is not enforced (common practice), but a
    missing/odd header, out-of-range literals and an unterminated final
    clause are errors.
    """
    num_vars = None
    clauses = []
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError("malformed problem line: %r" % (raw,))
            try:
                num_vars = int(parts[2])
                int(parts[3])
            except ValueError:
                raise FormulaError("malformed problem line: %r" % (raw,)) from None
            continue
        if num_vars is None:
            raise FormulaError("clause data before the problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaError("bad literal token %r" % (tok,)) from None
            if lit == 0:
                if not current:
                    raise FormulaError("empty clause in input")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise FormulaError("literal %d out of range (n=%d)" % (lit, num_vars))
                current.append(lit)
    if num_vars is None:
        raise FormulaError("missing problem line")
    if current:
        raise FormulaError("unterminated clause at end of input: %r" % (current,))
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs(formula: CnfFormula) -> str:
    lines = ["p cnf %d %d" % (formula.num_vars, len(formula.clauses))]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def sat_bruteforce(formula: CnfFormula, max_vars=20):
    """First satisfying assignment in lexicographic order, or None.

    Assignments are ordered with variable 1 most significant and False
    before True, so the empty formula yields the all-false assignment.
    """
    n = formula.num_vars
    if n > max_vars:
        raise FormulaError("brute-force oracle capped at %d variables" % max_vars)
    for mask in range(1 << n):
        assign = {i: bool(mask >> (n - i) & 1) for i in range(1, n + 1)}
        if all(
            any(assign[abs(lit)] == (lit > 0) for lit in clause)
            for clause in formula.clauses
        ):
            return assign
    return None


@dataclass
class GadgetInstance:
    graph: ASGraph
    s: int
    d: int
    m: int
    structure_tags: dict
    formula: CnfFormula
    meta: dict = field(default_factory=dict)

    def graph_text(self) -> str:
        lines = ["# generated reduction instance"]
        for v in sorted(self.structure_tags):
            lines.append("# tag %d %s" % (v, self.structure_tags[v]))
        return "\n".join(lines) + "\n" + format_graph(self.graph)

    def roles_text(self) -> str:
        return "role s %d\nrole d %d\nrole m %d\n" % (self.s, self.d, self.m)


class _Ids:
    def __init__(self, start):
        self.next = start

    def take(self, count=1):
        ids = list(range(self.next, self.next + count))
        self.next += count
        return ids if count > 1 else ids[0]


def gen_gadget_origin(formula: CnfFormula) -> GadgetInstance:
    """Instance on which an origin-claiming manipulator wins iff f is satisfiable.

    Requires exactly three literals per clause.  Per variable there are two
    announcement targets (one per polarity) at the far end of long two-way
    ladders from the manipulator; claiming the origin toward a polarity
    vertex displaces, by class, both the short routes of clauses that
    polarity satisfies and the corridor rung of the opposite choice, so a
    winning announcement set must pick one polarity per variable and cover
    every clause: a satisfying assignment.
    """
    for clause in formula.clauses:
        if len(clause) != 3:
            raise FormulaError("clause %r must have exactly 3 literals" % (clause,))
    if formula.num_vars < 1:
        raise FormulaError("need at least one variable")
    n = formula.num_vars
    h = len(formula.clauses)
    g = ASGraph()
    d, s, m = 0, 1, 2
    tags = {d: "role", s: "role", m: "role"}
    ids = _Ids(3)

    # intermediate group: a two-rail ladder from s up to q_1, with m a
    # customer of q_1; rails through t_i and tbar_i share the q_i rungs
    q = {}
    t = {}
    tbar = {}
    for i in range(1, n + 1):
        q[i] = ids.take()
        t[i] = ids.take()
        tbar[i] = ids.take()
        tags[q[i]] = tags[t[i]] = tags[tbar[i]] = "intermediate"
    g.add_c2p(m, q[1])
    if n:
        g.add_c2p(s, t[n])
        g.add_c2p(s, tbar[n])
    for i in range(1, n + 1):
        g.add_c2p(t[i], q[i])
        g.add_c2p(tbar[i], q[i])
        if i >= 2:
            g.add_c2p(q[i], t[i - 1])
            g.add_c2p(q[i], tbar[i - 1])

    # short group: one 4-hop route per clause
    c = {}
    for i in range(1, h + 1):
        row = [ids.take() for _ in range(3)]
        for v in row:
            tags[v] = "short"
        c[i] = row
        g.add_c2p(s, row[0])
        g.add_c2p(row[0], row[1])
        g.add_c2p(row[1], row[2])
        g.add_c2p(row[2], d)

    # long group: a (2n+3)-hop fallback route
    w = [ids.take() for _ in range(2 * n + 2)]
    for v in w:
        tags[v] = "long"
    g.add_c2p(s, w[0])
    for a, b in zip(w, w[1:]):
        g.add_c2p(a, b)
    g.add_c2p(w[-1], d)

    # disruptive group: per polarity, a ladder of 2n+2 hops from m up to the
    # polarity vertex, which peers with its rung of the intermediate ladder
    pol = {}  # (var, sign) -> polarity vertex
    head = {}  # (var, sign) -> m's neighbor on that ladder
    for i in range(1, n + 1):
        for sign, rung in ((1, t[i]), (-1, tbar[i])):
            x = ids.take()
            chain = [ids.take() for _ in range(2 * n + 1)]
            tags[x] = "disruptive"
            for v in chain:
                tags[v] = "disruptive"
            pol[(i, sign)] = x
            head[(i, sign)] = chain[0]
            g.add_c2p(m, chain[0])
            for a, b in zip(chain, chain[1:]):
                g.add_c2p(a, b)
            g.add_c2p(chain[-1], x)
            g.add_p2p(x, rung)

    # clause wiring: each literal makes its polarity vertex a customer of
    # the matching short-route vertex
    for ci, clause in enumerate(formula.clauses, start=1):
        for pos, lit in enumerate(clause):
            g.add_c2p(pol[(abs(lit), 1 if lit > 0 else -1)], c[ci][pos])

    meta = {
        "q1": q[1],
        "polarity": pol,
        "announce_target": head,
        "clause_vertices": c,
    }
    return GadgetInstance(g, s, d, m, tags, formula, meta)


def origin_attack_for(instance: GadgetInstance, assignment) -> AttackStrategy:
    """The announcement set a satisfying assignment induces."""
    targets = [instance.meta["q1"]]
    for var in range(1, instance.formula.num_vars + 1):
        sign = 1 if assignment[var] else -1
        targets.append(instance.meta["announce_target"][(var, sign)])
    return AttackStrategy.origin_claim(instance.m, sorted(targets))


_SBGP_CHAIN_HOPS = 4  # ladder length from m to each r/t/x vertex


def check_sbgp_constraints(formula: CnfFormula):
    """Occurrence limits of the constrained satisfiability variant.

    Clauses are sets of literals over distinct variables; a clause that
    mentions a variable twice would let its own short route loop-block the
    displacement that variable's assignment is supposed to cause.
    """
    for clause in formula.clauses:
        if len(clause) > 3:
            raise FormulaError("clause %r has more than 3 literals" % (clause,))
        vars_seen = [abs(lit) for lit in clause]
        for var in set(vars_seen):
            if vars_seen.count(var) > 1:
                raise FormulaError(
                    "variable %d appears twice in clause %r" % (var, clause)
                )
    for var in range(1, formula.num_vars + 1):
        total, positive = formula.occurrences(var)
        if total > 3:
            raise FormulaError("variable %d occurs %d times (max 3)" % (var, total))
        if positive > 1:
            raise FormulaError(
                "variable %d occurs positively %d times (max 1)" % (var, positive)
            )


def gen_gadget_sbgp(formula: CnfFormula) -> GadgetInstance:
    """Instance on which a re-announcement-only manipulator wins iff f is satisfiable.

    Requires the constrained formula shape (each variable at most three
    occurrences, its positive literal at most once).  The manipulator must
    push its direct destination route through the corridor and, per
    variable, forward exactly one of the routes it received through that
    variable's ladders toward the x ladder; which one survives loop
    detection decides whether the positive or the negative clauses of the
    variable lose their short routes.  Any other use of the ladders feeds a
    customer route into the corridor's top rung and destroys it.
    """
    check_sbgp_constraints(formula)
    n = formula.num_vars
    h = len(formula.clauses)
    g = ASGraph()
    d, s, m = 0, 1, 2
    tags = {d: "role", s: "role", m: "role"}
    ids = _Ids(3)

    # long group: 6-hop fallback
    w = [ids.take() for _ in range(5)]
    for v in w:
        tags[v] = "long"
    g.add_c2p(s, w[0])
    for a, b in zip(w, w[1:]):
        g.add_c2p(a, b)
    g.add_c2p(w[-1], d)

    # intermediate group: s -> j3 -> j2 -> j1 with m a customer of j1
    j3, j2, j1 = ids.take(), ids.take(), ids.take()
    tags[j3] = tags[j2] = tags[j1] = "intermediate"
    g.add_c2p(s, j3)
    g.add_c2p(j3, j2)
    g.add_c2p(j2, j1)
    g.add_c2p(m, j1)

    # short group: one route per clause, v(C)+1 hops
    c = {}
    for i, clause in enumerate(formula.clauses, start=1):
        row = [ids.take() for _ in range(len(clause))]
        for v in row:
            tags[v] = "short"
        c[i] = row
        g.add_c2p(s, row[0])
        for a, b in zip(row, row[1:]):
            g.add_c2p(a, b)
        g.add_c2p(row[-1], d)

    # the manipulator's own route to the destination
    g.add_c2p(m, d)

    # disruptive group
    r = {}
    t = {}
    x = {}
    p = {}
    pp = {}
    head = {}  # (var, kind) -> m's neighbor on that ladder, kind in "rtx"
    for i in range(1, n + 1):
        r[i] = ids.take()
        t[i] = ids.take()
        x[i] = ids.take()
        p[i] = ids.take()
        pp[i] = ids.take()
        for v in (r[i], t[i], x[i], p[i], pp[i]):
            tags[v] = "disruptive"
        for kind, top in (("r", r[i]), ("t", t[i]), ("x", x[i])):
            chain = [ids.take() for _ in range(_SBGP_CHAIN_HOPS - 1)]
            for v in chain:
                tags[v] = "disruptive"
            head[(i, kind)] = chain[0]
            g.add_c2p(m, chain[0])
            for a, b in zip(chain, chain[1:]):
                g.add_c2p(a, b)
            g.add_c2p(chain[-1], top)
        g.add_c2p(t[i], p[i])
        g.add_c2p(x[i], p[i])
        g.add_c2p(x[i], pp[i])
        # r and t are announcement bait: any route either of them learns from
        # its ladder is a customer route and lands on the corridor's top rung
        # by class, killing the corridor.  The x ladder stays safe: what p
        # learns through x reaches t as a provider route, which t never
        # exports upward.
        g.add_c2p(r[i], j3)
        g.add_c2p(t[i], j3)
        g.add_c2p(p[i], d)

    # literal wiring
    for ci, clause in enumerate(formula.clauses, start=1):
        for pos, lit in enumerate(clause):
            i = abs(lit)
            cv = c[ci][pos]
            if lit < 0:
                g.add_p2p(p[i], cv)
            else:
                g.add_c2p(p[i], cv)
                g.add_c2p(r[i], cv)
                g.add_c2p(cv, j3)
                g.add_p2p(pp[i], cv)

    meta = {
        "j1": j1,
        "j3": j3,
        "r": r,
        "t": t,
        "x": x,
        "p": p,
        "pp": pp,
        "announce_target": head,
        "clause_vertices": c,
    }
    return GadgetInstance(g, s, d, m, tags, formula, meta)


def sbgp_attack_for(instance: GadgetInstance, assignment, baseline) -> AttackStrategy:
    """The announcement map a satisfying assignment induces.

    The corridor is opened by forwarding the direct destination route to j1.
    A true variable forwards the route received through its t ladder toward
    its x ladder (loop detection stops it at p, the survivor displaces the
    positive clause route); a false variable forwards the r-ladder route if
    the variable has a positive occurrence, else the direct destination
    route (both displace the negative clause routes at p).
    """
    m = instance.m
    meta = instance.meta
    anns = {meta["j1"]: (m, instance.d)}
    for var in range(1, instance.formula.num_vars + 1):
        target = meta["announce_target"][(var, "x")]
        _, positive = instance.formula.occurrences(var)
        if assignment[var]:
            path = _baseline_through(baseline, meta["t"][var])
            if path is not None and positive:
                anns[target] = path
        else:
            if positive:
                path = _baseline_through(baseline, meta["r"][var])
                if path is None:
                    raise FormulaError(
                        "no honest route through r_%d; generator invariant broken" % var
                    )
                anns[target] = path
            else:
                total, _ = instance.formula.occurrences(var)
                if total:
                    anns[target] = (m, instance.d)
    return AttackStrategy(m, SBGP, anns)


def _baseline_through(baseline, vertex):
    for q in baseline:
        if vertex in q:
            return q
    return None
