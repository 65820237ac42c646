"""Triangle-free 2-edge covers and their canonical form.

The minimum triangle-free 2-edge cover is computed by an exact desk-scale
branch-and-bound (a deliberate substitute for the polynomial-time
triangle-free 2-matching machinery, which is out of scope).  Canonicalization
is the bounded local search over swaps |F_A| <= |F_R| <= 2 that improves the
lexicographic objective (edges, components, bridges, cut vertices inside 2EC
components).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import Infeasible, NotCanonical
from .graph import BlockDecomposition, EdgeSubset, MultiGraph, decompose


@dataclass
class TwoEdgeCover:
    host: MultiGraph
    members: frozenset
    certified_minimum: bool = True
    _decomp: BlockDecomposition | None = field(default=None, repr=False)

    def __post_init__(self):
        self.members = frozenset(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def decomposition(self) -> BlockDecomposition:
        if self._decomp is None:
            self._decomp = decompose(EdgeSubset(self.host, self.members))
        return self._decomp

    def subgraph(self) -> MultiGraph:
        return EdgeSubset(self.host, self.members).subgraph()

    def component_edges(self, ci: int):
        comp = set(self.decomposition.components[ci])
        emap = self.host.edge_map()
        return sorted(e for e in self.members if emap[e][0] in comp)

    def classify_component(self, ci: int) -> str:
        """One of C4..C7, Large2EC, Complex, Other."""
        d = self.decomposition
        comp = d.components[ci]
        edges = self.component_edges(ci)
        if any(b in d.bridges for b in edges):
            return "Complex"
        k = len(edges)
        if k >= 8:
            return "Large2EC"
        if 4 <= k <= 7 and k == len(comp):
            # cycle check: every vertex of the component has degree exactly 2
            deg = {v: 0 for v in comp}
            emap = self.host.edge_map()
            for e in edges:
                u, v = emap[e]
                deg[u] += 1
                deg[v] += 1
            if all(x == 2 for x in deg.values()):
                return f"C{k}"
        return "Other"

    def classification(self):
        return [self.classify_component(i)
                for i in range(len(self.decomposition.components))]

    def replace(self, members, certified=None) -> "TwoEdgeCover":
        return TwoEdgeCover(self.host, frozenset(members),
                            self.certified_minimum if certified is None else certified)


# ---------------------------------------------------------------------------
# feasibility predicates

def is_tf_two_edge_cover(g: MultiGraph, members) -> bool:
    """Degree >= 2 everywhere and no triangle component."""
    emap = g.edge_map()
    deg = [0] * g.n
    adj = {v: [] for v in range(g.n)}
    for e in members:
        u, v = emap[e]
        if u == v:
            return False
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    if any(d < 2 for d in deg):
        return False
    # triangle components: exactly 3 vertices, each of degree 2 in the cover
    seen = set()
    for s in range(g.n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        edge_cnt = 0
        while stack:
            x = stack.pop()
            edge_cnt += len(adj[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        if len(comp) == 3 and edge_cnt // 2 == 3:
            return False
    return True


# ---------------------------------------------------------------------------
# minimum triangle-free 2-edge cover (exact, with heuristic fallback)

class _CoverSearch:
    """Branch and bound on edge inclusion.  Branching: smallest deficient
    vertex, candidate edges ascending by id; then triangle components."""

    def __init__(self, g: MultiGraph, budget_nodes: int):
        self.g = g
        self.emap = g.edge_map()
        self.cands = [(eid, u, v) for eid, u, v in sorted(g.edges) if u != v]
        self.by_vertex = {v: [] for v in range(g.n)}
        for eid, u, v in self.cands:
            self.by_vertex[u].append(eid)
            self.by_vertex[v].append(eid)
        self.budget = budget_nodes
        self.nodes = 0
        self.best = None
        self.exhausted = False

    def solve(self):
        self._go(set(), set())
        return self.best

    def _go(self, inc, exc):
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        deg = [0] * self.g.n
        for e in inc:
            u, v = self.emap[e]
            deg[u] += 1
            deg[v] += 1
        deficit = sum(max(0, 2 - d) for d in deg)
        if self.best is not None and len(inc) + (deficit + 1) // 2 >= self.best[0]:
            return
        branch = None
        for v in range(self.g.n):
            if deg[v] < 2:
                avail = [e for e in self.by_vertex[v] if e not in exc]
                if len(avail) < 2:
                    return
                branch = [e for e in avail if e not in inc]
                break
        if branch is None:
            tri = self._triangle(inc)
            if tri is None:
                if self.best is None or len(inc) < self.best[0]:
                    self.best = (len(inc), frozenset(inc))
                return
            branch = [e for e, u, v in self.cands
                      if e not in exc and e not in inc
                      and (u in tri) != (v in tri)]
            if not branch:
                return
        undo = []
        for e in branch:
            inc.add(e)
            self._go(inc, exc)
            inc.discard(e)
            exc.add(e)
            undo.append(e)
            if self.exhausted:
                break
        for e in undo:
            exc.discard(e)

    def _triangle(self, inc):
        adj = {}
        for e in inc:
            u, v = self.emap[e]
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        seen = set()
        for s in sorted(adj):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            seen.add(s)
            ecnt = 0
            while stack:
                x = stack.pop()
                ecnt += len(adj[x])
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            if len(comp) == 3 and ecnt // 2 == 3:
                return comp
        return None


def _heuristic_cover(g: MultiGraph):
    """Greedy 2-edge cover then triangle elimination; uncertified."""
    emap = g.edge_map()
    deg = [0] * g.n
    members = set()
    # greedily satisfy degree demands, preferring edges fixing two deficits
    edges = sorted((eid, u, v) for eid, u, v in g.edges if u != v)
    for rounds in range(2):
        for eid, u, v in edges:
            if eid in members:
                continue
            gain = (1 if deg[u] < 2 else 0) + (1 if deg[v] < 2 else 0)
            if gain >= 2 - rounds:
                members.add(eid)
                deg[u] += 1
                deg[v] += 1
    if any(d < 2 for d in deg):
        raise Infeasible("a vertex has degree < 2")
    # fix triangle components by adding a crossing edge
    changed = True
    while changed:
        changed = False
        if is_tf_two_edge_cover(g, members):
            break
        adj = {v: [] for v in range(g.n)}
        for e in members:
            u, v = emap[e]
            adj[u].append(v)
            adj[v].append(u)
        seen = set()
        for s in range(g.n):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            seen.add(s)
            ecnt = 0
            while stack:
                x = stack.pop()
                ecnt += len(adj[x])
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            if len(comp) == 3 and ecnt // 2 == 3:
                for eid, u, v in edges:
                    if eid not in members and (u in comp) != (v in comp):
                        members.add(eid)
                        changed = True
                        break
                break
    return members


def min_triangle_free_cover(g: MultiGraph, budget: int = 14,
                            budget_nodes: int = 5 * 10 ** 6) -> TwoEdgeCover:
    """Minimum triangle-free 2-edge cover; exact when |V| <= budget."""
    if any(g.degree(v) < 2 for v in range(g.n)):
        raise Infeasible("a vertex has degree < 2")
    if g.n <= budget:
        search = _CoverSearch(g, budget_nodes)
        best = search.solve()
        if best is not None and not search.exhausted:
            return TwoEdgeCover(g, best[1], certified_minimum=True)
        if best is None and not search.exhausted:
            raise Infeasible("no triangle-free 2-edge cover exists")
    members = _heuristic_cover(g)
    if not is_tf_two_edge_cover(g, members):
        raise Infeasible("heuristic could not remove all triangle components")
    return TwoEdgeCover(g, frozenset(members), certified_minimum=False)


# ---------------------------------------------------------------------------
# canonical form

@dataclass(frozen=True)
class CanonicalViolation:
    kind: str     # SmallNonCycleComponent | PendantBlockUnder6 | NonPendantBlockUnder4
    witness: tuple


def check_canonical(h: TwoEdgeCover):
    """Empty list iff h satisfies the canonical-form definition."""
    out = []
    d = h.decomposition
    for ci in range(len(d.components)):
        cls = h.classify_component(ci)
        if cls == "Other":
            out.append(CanonicalViolation("SmallNonCycleComponent",
                                          tuple(d.components[ci])))
    for bi, block in enumerate(d.blocks):
        if d.pendant_flags[bi] and len(block) < 6:
            out.append(CanonicalViolation("PendantBlockUnder6", tuple(block)))
        elif not d.pendant_flags[bi]:
            ci = d.block_component[bi]
            complex_comp = any(b in d.bridges for b in h.component_edges(ci))
            if complex_comp and len(block) < 4:
                out.append(CanonicalViolation("NonPendantBlockUnder4", tuple(block)))
    return out


def _objective(g: MultiGraph, members):
    d = decompose(EdgeSubset(g, members))
    # cut vertices restricted to 2EC (bridge-free) components
    complex_comps = set()
    emap = g.edge_map()
    for e in d.bridges:
        complex_comps.add(d.component_of[emap[e][0]])
    cutv = sum(1 for v in d.cut_vertices if d.component_of[v] not in complex_comps)
    return (len(members), len(d.components), len(d.bridges), cutv)


def _improving_move(g: MultiGraph, members, obj):
    """First improving swap (F_A added, F_R removed), |F_A| <= |F_R| <= 2.

    Candidate added edges are restricted to those that can matter: edges
    covering a degree deficit created by the removal, edges incident to the
    removed edges' endpoints, and edges joining distinct cover components.
    """
    emap = g.edge_map()
    deg = [0] * g.n
    for e in members:
        u, v = emap[e]
        deg[u] += 1
        deg[v] += 1
    non_members = [e for e, u, v in sorted(g.edges) if e not in members and u != v]
    d = decompose(EdgeSubset(g, members))
    comp_of = d.component_of

    def added_pool(removed):
        touched = set()
        for e in removed:
            u, v = emap[e]
            touched.add(u)
            touched.add(v)
        pool = []
        for e in non_members:
            u, v = emap[e]
            if u in touched or v in touched or comp_of[u] != comp_of[v]:
                pool.append(e)
        return pool

    def consider(removed, added):
        # cheap degree screen before the full feasibility check
        delta = {}
        for e in removed:
            u, v = emap[e]
            delta[u] = delta.get(u, 0) - 1
            delta[v] = delta.get(v, 0) - 1
        for e in added:
            u, v = emap[e]
            delta[u] = delta.get(u, 0) + 1
            delta[v] = delta.get(v, 0) + 1
        if any(deg[x] + d < 2 for x, d in delta.items()):
            return None
        new = (members - set(removed)) | set(added)
        if not is_tf_two_edge_cover(g, new):
            return None
        nobj = _objective(g, new)
        return (new, nobj) if nobj < obj else None

    mem_sorted = sorted(members)
    for fr_size in (1, 2):
        for removed in itertools.combinations(mem_sorted, fr_size):
            # degree feasibility screen: each endpoint losing below 2 must be
            # coverable, otherwise skip the whole removed set quickly
            loss = {}
            for e in removed:
                u, v = emap[e]
                loss[u] = loss.get(u, 0) + 1
                loss[v] = loss.get(v, 0) + 1
            pool = None
            for fa_size in range(0, fr_size + 1):
                if fa_size == 0:
                    if any(deg[v] - k < 2 for v, k in loss.items()):
                        continue
                    got = consider(removed, ())
                    if got:
                        return got
                    continue
                if pool is None:
                    pool = added_pool(removed)
                for added in itertools.combinations(pool, fa_size):
                    got = consider(removed, added)
                    if got:
                        return got
    return None


def canonicalize(g: MultiGraph, h: TwoEdgeCover, max_iters: int | None = None) -> TwoEdgeCover:
    """Local search to canonical form; raises NotCanonical if it stalls short.

    The objective strictly decreases each iteration, so the loop terminates;
    the iteration counter enforces the polynomial bound as a hard assertion.
    """
    if not is_tf_two_edge_cover(g, h.members):
        raise ValueError("input is not a triangle-free 2-edge cover")
    members = set(h.members)
    obj = _objective(g, members)
    if max_iters is None:
        max_iters = (len(members) + 1) * (g.n + 2) * 4 + 100
    iters = 0
    while True:
        got = _improving_move(g, members, obj)
        if got is None:
            break
        members, obj = got
        members = set(members)
        iters += 1
        if iters > max_iters:
            raise AssertionError("canonicalize exceeded its iteration bound")
    out = h.replace(members)
    violations = check_canonical(out)
    if violations:
        raise NotCanonical(violations)
    return out
