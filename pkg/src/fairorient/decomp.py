"""Tree decompositions: construction, validation, nice form, PACE files.

The dynamic programs downstream consume a nice decomposition: a rooted
binary tree of leaf / introduce / forget / join nodes whose root bag is
empty.  Vertices are forgotten exactly once globally, so every edge of the
instance can be oriented at the forget node of its first-forgotten endpoint,
where the other endpoint is guaranteed to still sit in the bag.

Construction is heuristic (min-fill over the underlying simple support);
the solvers only need validity, not optimality.  An exhaustive exact
treewidth routine is included for cross-checking on tiny graphs.
"""

import sys
from typing import NamedTuple, Optional

from .core import CapExceededError, InputError, Instance

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


class TreeDecomposition(NamedTuple):
    n: int  # vertex count of the decomposed graph
    bags: tuple  # of frozensets of vertices
    tree_edges: tuple  # of (bag id, bag id), a tree over range(len(bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


class ValidationReport(NamedTuple):
    ok: bool
    condition: Optional[str]  # "tree", "vertex_coverage", "edge_coverage",
    # "connectivity"; None when ok
    detail: str


class NiceNode(NamedTuple):
    kind: str  # LEAF, INTRODUCE, FORGET or JOIN
    vertex: Optional[int]  # the introduced/forgotten vertex, else None
    bag: frozenset
    children: tuple  # indices of child nodes (always smaller than own index)


class NiceDecomposition(NamedTuple):
    nodes: tuple  # of NiceNode, in bottom-up order (children before parents)
    root: int  # index of the root node; its bag is empty

    @property
    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1


def _support_adjacency(inst: Instance) -> list:
    adj = [set() for _ in range(inst.n)]
    for u, v, _, _ in inst.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def heuristic_decomposition(inst: Instance) -> TreeDecomposition:
    """Min-fill elimination ordering, ties broken by smallest vertex id.

    Parallel edges collapse onto the simple support before elimination.
    Always valid; width is an upper bound on the true treewidth.
    """
    n = inst.n
    adj = _support_adjacency(inst)
    remaining = set(range(n))
    bags = []
    bag_of = {}  # vertex -> id of the bag created when it was eliminated
    order = []
    while remaining:
        best_v, best_fill = -1, None
        for v in sorted(remaining):
            nb = adj[v]
            fill = 0
            nb_list = sorted(nb)
            for idx, a in enumerate(nb_list):
                for b in nb_list[idx + 1:]:
                    if b not in adj[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        nb = sorted(adj[best_v])
        bags.append(frozenset([best_v] + nb))
        bag_of[best_v] = len(bags) - 1
        order.append(best_v)
        for idx, a in enumerate(nb):
            for b in nb[idx + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nb:
            adj[a].discard(best_v)
        remaining.discard(best_v)
    if not bags:
        return TreeDecomposition(n, (frozenset(),), ())

    position = {v: i for i, v in enumerate(order)}
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = [u for u in bags[i] if u != v]
        if later:
            parent = min(later, key=position.__getitem__)
            edges.append((i, bag_of[parent]))
        else:
            roots.append(i)
    # eliminations that closed off a component become roots; chain them to
    # the final bag so the result is a single tree
    anchor = roots[-1]
    for r in roots[:-1]:
        edges.append((r, anchor))
    return TreeDecomposition(n, tuple(bags), tuple(edges))


def validate(inst: Instance, td: TreeDecomposition) -> ValidationReport:
    """Check the three decomposition conditions, reporting the first failure.

    Also rejects structurally broken inputs (bag ids out of range, cycles,
    disconnected bag trees) under the condition name "tree".
    """
    k = len(td.bags)
    if td.n != inst.n:
        return ValidationReport(False, "tree", "vertex count mismatch")
    if k == 0:
        return ValidationReport(False, "tree", "no bags")
    for a, b in td.tree_edges:
        if not (0 <= a < k and 0 <= b < k):
            return ValidationReport(False, "tree", f"bag id out of range: ({a},{b})")
    if len(td.tree_edges) != k - 1:
        return ValidationReport(
            False, "tree", f"{len(td.tree_edges)} tree edges for {k} bags"
        )
    seen = {0}
    adj = [[] for _ in range(k)]
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != k:
        return ValidationReport(False, "tree", "bag tree is disconnected")
    for idx, bag in enumerate(td.bags):
        for v in bag:
            if not (0 <= v < inst.n):
                return ValidationReport(
                    False, "tree", f"bag {idx} holds unknown vertex {v}"
                )

    covered = set().union(*td.bags) if td.bags else set()
    for v in range(inst.n):
        if v not in covered:
            return ValidationReport(
                False, "vertex_coverage", f"vertex {v} is in no bag"
            )
    for e, (u, v, _, _) in enumerate(inst.edges):
        if not any(u in bag and v in bag for bag in td.bags):
            return ValidationReport(
                False, "edge_coverage", f"edge {e} endpoints {u},{v} share no bag"
            )
    for v in range(inst.n):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        seen = {holding[0]}
        stack = [holding[0]]
        hold_set = set(holding)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hold_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(holding):
            return ValidationReport(
                False, "connectivity", f"bags containing vertex {v} are disconnected"
            )
    return ValidationReport(True, None, "")


def make_nice(td: TreeDecomposition, root_choice: int = 0) -> NiceDecomposition:
    """Normalize a decomposition into nice form of the same width.

    The bag tree is rooted at root_choice; between adjacent bags the child's
    extra vertices are forgotten (ascending) before the parent's new ones are
    introduced (ascending); multi-child bags become left-deep join chains;
    the root bag's vertices are forgotten last, so the root bag is empty.
    Children always precede parents in the node list, so iterating nodes in
    index order is a valid bottom-up traversal.
    """
    k = len(td.bags)
    if not (0 <= root_choice < k):
        raise InputError(f"root_choice {root_choice} out of range")
    if len(td.tree_edges) != k - 1:
        raise InputError("not a tree: wrong edge count")
    adj = [[] for _ in range(k)]
    for a, b in td.tree_edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            raise InputError(f"bad tree edge ({a},{b})")
        adj[a].append(b)
        adj[b].append(a)
    for lst in adj:
        lst.sort()
    reached = {root_choice}
    stack = [root_choice]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in reached:
                reached.add(y)
                stack.append(y)
    if len(reached) != k:
        raise InputError("not a tree: bag graph is disconnected")

    nodes = []

    def add(kind, vertex, bag, children) -> int:
        nodes.append(NiceNode(kind, vertex, frozenset(bag), tuple(children)))
        return len(nodes) - 1

    def chain(cur: int, from_bag: frozenset, to_bag: frozenset) -> int:
        bag = set(from_bag)
        for v in sorted(from_bag - to_bag):
            bag.discard(v)
            cur = add(FORGET, v, bag, (cur,))
        for v in sorted(to_bag - from_bag):
            bag.add(v)
            cur = add(INTRODUCE, v, bag, (cur,))
        return cur

    def build(b: int, parent: Optional[int]) -> int:
        tops = []
        for c in adj[b]:
            if c == parent:
                continue
            sub = build(c, b)
            tops.append(chain(sub, td.bags[c], td.bags[b]))
        if not tops:
            leaf = add(LEAF, None, frozenset(), ())
            return chain(leaf, frozenset(), td.bags[b])
        acc = tops[0]
        for other in tops[1:]:
            acc = add(JOIN, None, td.bags[b], (acc, other))
        return acc

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * k + 100))
    try:
        top = build(root_choice, None)
    finally:
        sys.setrecursionlimit(old_limit)
    root = chain(top, td.bags[root_choice], frozenset())
    return NiceDecomposition(tuple(nodes), root)


def exact_treewidth(inst: Instance, cap: int = 10) -> int:
    """Exhaustive treewidth by subset dynamic programming (test aid).

    Q(S) is the best possible maximum elimination degree over orderings that
    eliminate exactly the set S first; the elimination degree of v counts the
    vertices outside S reachable from v through S.  Exponential in n.
    """
    n = inst.n
    if n > cap:
        raise CapExceededError(f"exact treewidth limited to n <= {cap}")
    if n == 0:
        return -1
    adj = [0] * n
    for u, v, _, _ in inst.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    def elim_degree(v: int, s_mask: int) -> int:
        inside = s_mask & ~(1 << v)
        comp = 1 << v
        frontier = 1 << v
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                f ^= low
                grow |= adj[low.bit_length() - 1]
            grow &= inside & ~comp
            comp |= grow
            frontier = grow
        outside = 0
        c = comp
        while c:
            low = c & -c
            c ^= low
            outside |= adj[low.bit_length() - 1]
        outside &= ~s_mask
        return bin(outside).count("1")

    full = (1 << n) - 1
    q = [0] * (full + 1)
    for s_mask in range(1, full + 1):
        best = n
        s = s_mask
        while s:
            low = s & -s
            s ^= low
            v = low.bit_length() - 1
            cand = max(q[s_mask ^ low], elim_degree(v, s_mask))
            if cand < best:
                best = cand
        q[s_mask] = best
    return q[full]


def write_td(td: TreeDecomposition) -> str:
    """Serialize in PACE-2017 .td format (1-based ids, canonical order)."""
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for i, bag in enumerate(td.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in sorted(tuple(sorted((x + 1, y + 1))) for x, y in td.tree_edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def read_td(text: str) -> TreeDecomposition:
    """Parse PACE-2017 .td text; comments allowed, one s-line required."""
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise InputError(f"line {lineno}: duplicate s line")
            if len(parts) != 5 or parts[1] != "td":
                raise InputError(f"line {lineno}: malformed s line")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise InputError(f"line {lineno}: malformed s line") from None
        elif parts[0] == "b":
            if header is None:
                raise InputError(f"line {lineno}: bag before s line")
            try:
                idx = int(parts[1])
                verts = [int(x) for x in parts[2:]]
            except ValueError:
                raise InputError(f"line {lineno}: malformed bag") from None
            if not (1 <= idx <= header[0]) or idx in bags:
                raise InputError(f"line {lineno}: bad bag id {idx}")
            if any(not (1 <= v <= header[2]) for v in verts):
                raise InputError(f"line {lineno}: bag vertex out of range")
            bags[idx] = frozenset(v - 1 for v in verts)
        else:
            if header is None:
                raise InputError(f"line {lineno}: edge before s line")
            try:
                a, b = (int(x) for x in parts)
            except ValueError:
                raise InputError(f"line {lineno}: malformed tree edge") from None
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise InputError(f"line {lineno}: tree edge id out of range")
            edges.append((a - 1, b - 1))
    if header is None:
        raise InputError("missing s line")
    n_bags, _, n = header
    bag_list = tuple(bags.get(i, frozenset()) for i in range(1, n_bags + 1))
    if len(bags) != n_bags:
        raise InputError(f"expected {n_bags} bags, found {len(bags)}")
    return TreeDecomposition(n, bag_list, tuple(edges))
