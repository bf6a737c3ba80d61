"""EF decision for simple graphs, parameterized by the number of heavy edges.

An edge is heavy when both endpoints value it and at least one values it at
2 or more.  After forcing one-sided-zero edges and dropping zero-zero edges,
everything that is not heavy is a unit-unit edge.  The solver branches over
the 2^k orientations of the k heavy edges; under each branch the residual
unit edges form an upper-degree-constrained orientation problem solved by
max-flow.  Per branch, vertex i needs final revenue at least

    d(i) = max({1} | out-values)   if i has an unoriented incident edge,
           max({0} | out-values)   otherwise,

where revenue r(i) sums the values of edges oriented towards i.  The branch
is infeasible outright when some deficit d(i) - r(i) exceeds the number of
unoriented edges at i; otherwise each vertex may send out at most
u(i) = unoriented_deg(i) - max(0, d(i) - r(i)) residual edges.

Branches are visited in Gray-code order so consecutive branches differ in a
single heavy edge, which makes the revenue/demand updates and the count of
violated vertices incremental.
"""

from typing import Optional, Sequence, Tuple

from .core import (
    CHARITY,
    TO_U,
    TO_V,
    CapExceededError,
    InputError,
    Instance,
    PartialOrientation,
    SolveReport,
    UnsupportedInstanceError,
)


def classify_heavy(inst: Instance) -> Tuple[frozenset, dict]:
    """Heavy edge ids and forced orientations for one-sided-zero edges.

    Zero-zero edges belong to neither set; everything else not returned here
    is a unit-unit residual edge.  Requires a simple graph: with parallel
    edges the per-vertex demand would have to account for bundles, which the
    branching argument does not support.
    """
    if not inst.is_simple():
        raise UnsupportedInstanceError(
            "heavy-edge branching requires a simple graph"
        )
    heavy = set()
    forced = {}
    for e, (u, v, w_u, w_v) in enumerate(inst.edges):
        if w_u == 0 and w_v == 0:
            continue
        if w_u == 0:
            forced[e] = TO_V
        elif w_v == 0:
            forced[e] = TO_U
        elif max(w_u, w_v) >= 2:
            heavy.add(e)
    return frozenset(heavy), forced


class _Dinic:
    """Deterministic Dinic max-flow on small integer capacities."""

    def __init__(self, size: int):
        self.graph = [[] for _ in range(size)]

    def add_edge(self, a: int, b: int, cap: int) -> None:
        self.graph[a].append([b, cap, len(self.graph[b])])
        self.graph[b].append([a, 0, len(self.graph[a]) - 1])

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * len(self.graph)
        self.level[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            for b, cap, _ in self.graph[x]:
                if cap > 0 and self.level[b] < 0:
                    self.level[b] = self.level[x] + 1
                    queue.append(b)
        return self.level[t] >= 0

    def _dfs(self, x: int, t: int, f: int) -> int:
        if x == t:
            return f
        while self.it[x] < len(self.graph[x]):
            arc = self.graph[x][self.it[x]]
            b, cap, rev = arc
            if cap > 0 and self.level[b] == self.level[x] + 1:
                pushed = self._dfs(b, t, min(f, cap))
                if pushed:
                    arc[1] -= pushed
                    self.graph[b][rev][1] += pushed
                    return pushed
            self.it[x] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        self.augmentations = 0
        while self._bfs(s, t):
            self.it = [0] * len(self.graph)
            while True:
                pushed = self._dfs(s, t, 1 << 60)
                if not pushed:
                    break
                total += pushed
                self.augmentations += 1
        return total


def udcgo_feasible(
    u_caps: Sequence[int],
    edges: Sequence[Tuple[int, int]],
    stats: Optional[dict] = None,
) -> Tuple[bool, Optional[list]]:
    """Orientation with outdeg(i) <= u_caps[i] for all i, if one exists.

    Max-flow network: source -> one node per edge (cap 1), edge node -> each
    endpoint (cap 1), endpoint i -> sink (cap u_caps[i]).  Feasible iff the
    flow saturates all edge arcs; a saturated edge-to-endpoint arc means the
    edge is oriented away from that endpoint.  Returns per-edge assignment
    codes (the code names the endpoint that receives the edge).
    """
    if any(c < 0 for c in u_caps):
        raise InputError("negative cap")
    n = len(u_caps)
    m = len(edges)
    if m == 0:
        return True, []
    source = 0
    sink = 1 + m + n
    net = _Dinic(sink + 1)
    for idx, (u, v) in enumerate(edges):
        net.add_edge(source, 1 + idx, 1)
        net.add_edge(1 + idx, 1 + m + u, 1)
        net.add_edge(1 + idx, 1 + m + v, 1)
    for i in range(n):
        if u_caps[i] > 0:
            net.add_edge(1 + m + i, sink, u_caps[i])
    value = net.max_flow(source, sink)
    if stats is not None:
        stats["augmentations"] = stats.get("augmentations", 0) + net.augmentations
    if value < m:
        return False, None
    codes = []
    for idx, (u, v) in enumerate(edges):
        arcs = net.graph[1 + idx]
        # arcs[0] is the reverse of source->edge; arcs[1]/arcs[2] go to u, v
        to_u = next(a for a in arcs if a[0] == 1 + m + u)
        codes.append(TO_V if to_u[1] == 0 else TO_U)
    return True, codes


def solve_heavy(
    inst: Instance, want: str = "certificate", branch_cap: Optional[int] = None
) -> SolveReport:
    """EF decision for a simple instance by heavy-edge branching.

    There is no minimum-charity variant: the branching argument only decides
    existence, so want="min_charity" is refused.
    """
    if want == "min_charity":
        raise UnsupportedInstanceError(
            "heavy-edge branching decides existence only"
        )
    if want not in ("decision", "certificate"):
        raise InputError(f"unknown want {want!r}")
    heavy_set, forced = classify_heavy(inst)
    n = inst.n
    heavy = sorted(heavy_set)
    k = len(heavy)
    if branch_cap is not None and k >= branch_cap.bit_length():
        raise CapExceededError(f"2^{k} heavy-edge branches exceed cap {branch_cap}")

    residual = []
    udeg = [0] * n
    for e, (u, v, w_u, w_v) in enumerate(inst.edges):
        if e in heavy_set or e in forced or (w_u == 0 and w_v == 0):
            continue
        residual.append((e, u, v))
        udeg[u] += 1
        udeg[v] += 1

    r = [0] * n
    for e, code in forced.items():
        u, v, w_u, w_v = inst.edges[e]
        r[u if code == TO_U else v] += w_u if code == TO_U else w_v

    # per-vertex heavy incidence: (heavy index, own value at this vertex)
    hinc = [[] for _ in range(n)]
    for pos, e in enumerate(heavy):
        u, v, w_u, w_v = inst.edges[e]
        hinc[u].append((pos, w_u))
        hinc[v].append((pos, w_v))

    bits = 0  # bit pos set -> heavy[pos] oriented ToV
    for e in heavy:  # initial branch: everything ToU
        r[inst.edges[e][0]] += inst.edges[e][2]

    def out_demand(i: int) -> int:
        d = 1 if udeg[i] else 0
        for pos, val in hinc[i]:
            e = heavy[pos]
            u = inst.edges[e][0]
            away = (bits >> pos) & 1 == (1 if u == i else 0)
            if away and val > d:
                d = val
        return d

    d = [out_demand(i) for i in range(n)]
    violated = [d[i] - r[i] > udeg[i] for i in range(n)]
    viol_count = sum(violated)

    def reassess(i: int) -> None:
        nonlocal viol_count
        d[i] = out_demand(i)
        now = d[i] - r[i] > udeg[i]
        if now != violated[i]:
            violated[i] = now
            viol_count += 1 if now else -1

    stats = {
        "heavy_count": k,
        "branches": 0,
        "pruned": 0,
        "flows": 0,
        "augmentations": 0,
    }
    residual_pairs = [(u, v) for _, u, v in residual]

    for b in range(1 << k):
        if b:
            pos = (b & -b).bit_length() - 1
            e = heavy[pos]
            u, v, w_u, w_v = inst.edges[e]
            if (bits >> pos) & 1:  # ToV -> ToU
                bits &= ~(1 << pos)
                r[v] -= w_v
                r[u] += w_u
            else:  # ToU -> ToV
                bits |= 1 << pos
                r[u] -= w_u
                r[v] += w_v
            reassess(u)
            reassess(v)
        stats["branches"] += 1
        if viol_count:
            stats["pruned"] += 1
            continue
        caps = [udeg[i] - max(0, d[i] - r[i]) for i in range(n)]
        feasible, codes = udcgo_feasible(caps, residual_pairs, stats)
        stats["flows"] += 1
        if not feasible:
            continue
        if want == "decision":
            return SolveReport(True, 0, None, stats)
        assignment = [TO_U] * inst.m  # zero-zero edges default here
        for e2, code in forced.items():
            assignment[e2] = code
        for pos, e2 in enumerate(heavy):
            assignment[e2] = TO_V if (bits >> pos) & 1 else TO_U
        for (e2, _, _), code in zip(residual, codes):
            assignment[e2] = code
        return SolveReport(True, 0, PartialOrientation(assignment), stats)

    return SolveReport(False, None, None, stats)
