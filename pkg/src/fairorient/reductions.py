"""Generators that encode classic hard problems as orientation instances.

Each transformer emits an edge-weighted instance whose EF (or EFX)
orientability answers the source problem. They serve two purposes: as
documented constructions in their own right, and as factories for
adversarial test instances with known structure (bounded vertex cover,
3-regularity, controlled heavy-edge counts).

CNF formulas are plain tuples of clauses, each clause a tuple of nonzero
integers in the usual DIMACS convention (positive literal = variable,
negative = its negation). read_dimacs parses the file format.
"""

from typing import Iterable, Sequence

from .core import InputError, Instance

SIMPLE = "simple"
TWO_VERTEX_MULTIGRAPH = "two_vertex_multigraph"


def read_dimacs(text: str) -> tuple:
    """Parse DIMACS CNF text into a tuple of clauses.

    Accepts `c` comment lines, an optional `p cnf <vars> <clauses>` header,
    and whitespace-separated literals with 0 terminating each clause
    (clauses may span lines). Raises InputError on malformed input.
    """
    clauses = []
    current = []
    header = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if header is not None:
                raise InputError(f"line {lineno}: duplicate header")
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"line {lineno}: bad header {stripped!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise InputError(f"line {lineno}: bad header {stripped!r}")
            if header[0] < 0 or header[1] < 0:
                raise InputError(f"line {lineno}: negative header counts")
            continue
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise InputError(f"line {lineno}: bad literal {tok!r}")
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        raise InputError("unterminated clause (missing trailing 0)")
    if header is not None:
        n_vars, n_clauses = header
        if len(clauses) != n_clauses:
            raise InputError(
                f"header declares {n_clauses} clauses, found {len(clauses)}"
            )
        for cl in clauses:
            for lit in cl:
                if abs(lit) > n_vars:
                    raise InputError(f"literal {lit} exceeds declared variables")
    return tuple(clauses)


def _validated_clauses(cnf) -> list:
    clauses = [tuple(cl) for cl in cnf]
    if not clauses:
        raise InputError("formula has no clauses")
    out = []
    for pos, cl in enumerate(clauses):
        if not cl:
            raise InputError(f"clause {pos} is empty")
        seen = set()
        for lit in cl:
            if not isinstance(lit, int) or lit == 0:
                raise InputError(f"clause {pos}: bad literal {lit!r}")
            if -lit in seen:
                raise InputError(
                    f"clause {pos}: contains a variable and its negation"
                )
            seen.add(lit)
        out.append(tuple(sorted(seen, key=abs)))
    return out


def sat_to_ef(cnf) -> Instance:
    """Encode a CNF formula; the output is EF-orientable iff cnf is satisfiable.

    Per occurring variable: a truth edge t-f whose weight is the larger
    occurrence count, one unit-attached copy of each side per weight unit,
    copies wired to their clause vertices in clause-index order, and a unit
    triangle glued onto every unwired copy so it can still receive a good.
    Simple and symmetric; at most one heavy edge per variable.
    """
    clauses = _validated_clauses(cnf)
    variables = sorted({abs(lit) for cl in clauses for lit in cl})
    occ_pos = {x: [] for x in variables}
    occ_neg = {x: [] for x in variables}
    for j, cl in enumerate(clauses):
        for lit in cl:
            (occ_pos if lit > 0 else occ_neg)[abs(lit)].append(j)

    fresh = 0

    def new_vertex():
        nonlocal fresh
        fresh += 1
        return fresh - 1

    t = {}
    f = {}
    t_copy = {}
    f_copy = {}
    weight = {}
    for x in variables:
        weight[x] = max(len(occ_pos[x]), len(occ_neg[x]))
        t[x] = new_vertex()
        f[x] = new_vertex()
        t_copy[x] = [new_vertex() for _ in range(weight[x])]
        f_copy[x] = [new_vertex() for _ in range(weight[x])]
    clause_vertex = [new_vertex() for _ in clauses]

    edges = []
    for x in variables:
        edges.append((t[x], f[x], weight[x], weight[x]))
        for cp in t_copy[x]:
            edges.append((cp, t[x], 1, 1))
        for cp in f_copy[x]:
            edges.append((cp, f[x], 1, 1))
    leftovers = []
    for x in variables:
        for pos, cp in enumerate(t_copy[x]):
            if pos < len(occ_pos[x]):
                edges.append((cp, clause_vertex[occ_pos[x][pos]], 1, 1))
            else:
                leftovers.append(cp)
        for pos, cp in enumerate(f_copy[x]):
            if pos < len(occ_neg[x]):
                edges.append((cp, clause_vertex[occ_neg[x][pos]], 1, 1))
            else:
                leftovers.append(cp)
    for u in leftovers:
        a = new_vertex()
        b = new_vertex()
        edges.extend(((u, a, 1, 1), (a, b, 1, 1), (b, u, 1, 1)))
    return Instance(fresh, edges)


def sat2p2n_to_ef(cnf) -> Instance:
    """Encode a 2P2N-3SAT formula as a 3-regular instance with weights {1,2}.

    Requires every variable to occur exactly twice positively and twice
    negatively, and every clause to hold three literals of three distinct
    variables. Truth edges get weight 2; clause wiring is direct (each
    literal side has exactly two clause slots, matching its two copies'
    worth of capacity), so no leftover gadgets are needed.
    """
    clauses = _validated_clauses(cnf)
    variables = sorted({abs(lit) for cl in clauses for lit in cl})
    pos_count = {x: 0 for x in variables}
    neg_count = {x: 0 for x in variables}
    for j, cl in enumerate(clauses):
        if len(cl) != 3:
            raise InputError(f"clause {j} must have exactly 3 distinct variables")
        for lit in cl:
            if lit > 0:
                pos_count[lit] += 1
            else:
                neg_count[-lit] += 1
    for x in variables:
        if pos_count[x] != 2 or neg_count[x] != 2:
            raise InputError(
                f"variable {x} occurs {pos_count[x]}+/{neg_count[x]}- times; "
                "need exactly 2 of each"
            )
    t = {x: 2 * pos for pos, x in enumerate(variables)}
    f = {x: 2 * pos + 1 for pos, x in enumerate(variables)}
    base = 2 * len(variables)
    edges = [(t[x], f[x], 2, 2) for x in variables]
    for j, cl in enumerate(clauses):
        v_j = base + j
        for lit in cl:
            side = t[lit] if lit > 0 else f[-lit]
            edges.append((side, v_j, 1, 1))
    return Instance(base + len(clauses), edges)


def partition_to_ef(items: Iterable[int], mode: str = SIMPLE) -> Instance:
    """Encode equal-sum bipartition feasibility of a multiset.

    Simple mode: two hubs u1, u2 each anchored by a pendant edge of weight
    B = total/2, and every item doubly connected to both hubs; the hubs form
    a vertex cover of size 2. Multigraph mode: just the two hubs with one
    parallel edge per item. Odd totals are refused.
    """
    items = list(items)
    if not items:
        raise InputError("empty multiset")
    for s in items:
        if not isinstance(s, int) or s < 1:
            raise InputError(f"items must be positive integers, got {s!r}")
    total = sum(items)
    if total % 2:
        raise InputError(f"odd total {total}: no equal bipartition can exist")
    half = total // 2
    if mode == SIMPLE:
        edges = [(0, 2, half, half), (1, 3, half, half)]
        for pos, s in enumerate(items):
            v = 4 + pos
            edges.append((v, 0, s, s))
            edges.append((v, 1, s, s))
        return Instance(4 + len(items), edges)
    if mode == TWO_VERTEX_MULTIGRAPH:
        return Instance(2, [(0, 1, s, s) for s in items])
    raise InputError(f"unknown mode {mode!r}")


def too_to_ef(n: int, edges: Sequence[tuple], capacities: Sequence[int]) -> Instance:
    """Encode a target-outdegree-orientation question.

    Input: a simple graph with per-edge values and per-vertex capacities,
    asking for an orientation where every vertex receives exactly its
    capacity. Normalizations required up front: each value fits under both
    endpoint capacities, and total value equals total capacity. The output
    adds a universal hub a (edge to u worth c(u)) and a pendant b worth the
    full capacity sum, and is EF-orientable iff the targets are achievable.
    """
    if n < 1:
        raise InputError("need at least one vertex")
    capacities = list(capacities)
    if len(capacities) != n:
        raise InputError(f"expected {n} capacities, got {len(capacities)}")
    for c in capacities:
        if not isinstance(c, int) or c < 0:
            raise InputError(f"capacities must be nonnegative integers, got {c!r}")
    seen_pairs = set()
    total_value = 0
    out = []
    for pos, (u, v, value) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InputError(f"edge {pos}: bad endpoints ({u},{v})")
        key = (u, v) if u < v else (v, u)
        if key in seen_pairs:
            raise InputError(f"edge {pos}: parallel edge; input must be simple")
        seen_pairs.add(key)
        if not isinstance(value, int) or value < 0:
            raise InputError(f"edge {pos}: bad value {value!r}")
        if value > min(capacities[u], capacities[v]):
            raise InputError(
                f"edge {pos}: value {value} exceeds an endpoint capacity"
            )
        total_value += value
        out.append((u, v, value, value))
    if total_value != sum(capacities):
        raise InputError(
            f"total value {total_value} != total capacity {sum(capacities)}"
        )
    a = n
    b = n + 1
    for u in range(n):
        out.append((a, u, capacities[u], capacities[u]))
    out.append((a, b, sum(capacities), sum(capacities)))
    return Instance(n + 2, out)


def ef_to_efx(inst: Instance) -> Instance:
    """Lift an EF question to an EFX question on two extra vertices.

    Adds d1, d2 joined by a symmetric unit edge and connected to every
    original vertex by zero-weight edges. Whichever of d1/d2 wins the unit
    edge must shed all its zero edges, handing every original vertex a
    worthless good; strong envy then degenerates to plain envy, so the
    output is EFX-orientable iff the input is EF-orientable. Original edge
    ids are preserved as a prefix.
    """
    d1 = inst.n
    d2 = inst.n + 1
    edges = list(inst.edges)
    for v in range(inst.n):
        edges.append((v, d1, 0, 0))
    for v in range(inst.n):
        edges.append((v, d2, 0, 0))
    edges.append((d1, d2, 1, 1))
    return Instance(inst.n + 2, edges)
