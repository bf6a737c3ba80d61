"""Linear-time EF decision and minimum charity for binary valuations.

With all weights in {0,1}, zero-zero edges are irrelevant to EF and one-zero
edges can always be oriented towards the endpoint that values them.  What
remains is the prime graph: the edges both endpoints value at 1.  A connected
component of the prime graph admits an EF orientation exactly when it
satisfies one of four properties:

  P4  it is a single vertex;
  P2  some component vertex values a one-zero edge at 1 (that edge was forced
      towards it, so the vertex starts out happy);
  P3  some parallel bundle inside the component has even nonzero size;
  P1  the component contains a circuit on at least 3 vertices: a simple cycle,
      or two bundles of size >= 2 meeting at a vertex (a 4-edge closed trail).

A component satisfying none of them is repaired at minimum cost: removing one
edge from any odd bundle of size >= 3 leaves an even bundle (P3, cost 1);
otherwise every bundle is a single edge and all component edges must go to
charity.  Certificates are grown from the property's seed orientation by
happy-vertex propagation: a vertex holding a received 1-edge splits each
still-unoriented incident bundle, making its neighbor happy in turn.
"""

from typing import Iterable, NamedTuple, Optional

from .core import (
    CHARITY,
    TO_U,
    TO_V,
    EF,
    InputError,
    Instance,
    InternalError,
    PartialOrientation,
    SolveReport,
)

P1_CIRCUIT = "P1_circuit"
P2_EXTERNAL_ONE_ZERO = "P2_external_one_zero"
P3_EVEN_BUNDLE = "P3_even_bundle"
P4_SINGLETON = "P4_singleton"
NONE = "NONE"

REMOVE_ONE_EDGE = "remove_one_edge"
REMOVE_ALL_EDGES = "remove_all_edges"


class PrimeGraph(NamedTuple):
    """Preprocessed binary instance.

    prime, forced and discarded partition the instance's edge ids: prime
    edges are valued 1 by both endpoints, forced edges are one-zero edges
    together with the assignment code orienting them towards their valuing
    endpoint, and discarded edges are worth 0 to both.
    """

    inst: Instance
    prime: tuple
    forced: tuple  # (edge id, assignment code)
    discarded: tuple
    bundles: dict  # unordered pair -> tuple of prime edge ids


class ComponentDiagnosis(NamedTuple):
    vertices: tuple
    prop: str
    repair: Optional[tuple]  # (REMOVE_ONE_EDGE, pair) or (REMOVE_ALL_EDGES, ids)
    seed: dict  # edge id -> assignment code starting the propagation


def preprocess_binary(inst: Instance) -> PrimeGraph:
    """Split a binary instance into prime, forced and discarded edges."""
    prime = []
    forced = []
    discarded = []
    bundles = {}
    for e, (u, v, w_u, w_v) in enumerate(inst.edges):
        if w_u not in (0, 1) or w_v not in (0, 1):
            raise InputError(f"edge {e}: weights must be binary")
        if w_u == 0 and w_v == 0:
            discarded.append(e)
        elif w_u == 1 and w_v == 1:
            prime.append(e)
            key = (u, v) if u < v else (v, u)
            bundles.setdefault(key, []).append(e)
        else:
            forced.append((e, TO_U if w_u == 1 else TO_V))
    return PrimeGraph(
        inst,
        tuple(prime),
        tuple(forced),
        tuple(discarded),
        {k: tuple(ids) for k, ids in bundles.items()},
    )


def _adjacency(pg: PrimeGraph) -> dict:
    adj = {}
    for (u, v) in pg.bundles:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj


def _components(pg: PrimeGraph, stats: Optional[dict] = None) -> list:
    """Connected components of the prime graph, each sorted, in sorted order.

    Only vertices touching a prime edge or listed as isolated singletons of
    the instance appear; vertices with no prime edge form singleton
    components (P4) even when they have forced or discarded edges.
    """
    adj = _adjacency(pg)
    seen = set()
    comps = []
    for start in range(pg.inst.n):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp)))
    if stats is not None:
        stats["vertex_visits"] = stats.get("vertex_visits", 0) + len(seen)
        stats["edge_visits"] = stats.get("edge_visits", 0) + 2 * len(pg.bundles)
    return comps


def _find_simple_cycle(comp: Iterable[int], adj: dict) -> Optional[list]:
    """A simple cycle (length >= 3) in the component's support, or None."""
    comp = set(comp)
    parent = {}
    order = {}
    for root in sorted(comp):
        if root in order:
            continue
        parent[root] = None
        order[root] = len(order)
        stack = [(root, iter(sorted(adj.get(root, ()))))]
        while stack:
            x, it = stack[-1]
            advanced = False
            for y in it:
                if y == parent[x]:
                    continue
                if y in order:
                    # back edge: walk x up to y
                    cycle = [x]
                    z = x
                    while z != y:
                        z = parent[z]
                        cycle.append(z)
                    if len(cycle) >= 3:
                        return cycle
                    continue
                parent[y] = x
                order[y] = len(order)
                stack.append((y, iter(sorted(adj.get(y, ())))))
                advanced = True
                break
            if not advanced:
                stack.pop()
    return None


def _pair(u, v):
    return (u, v) if u < v else (v, u)


def _towards(inst: Instance, e: int, target: int) -> int:
    return TO_U if inst.edges[e][0] == target else TO_V


def diagnose_components(pg: PrimeGraph) -> list:
    """Per-component property check, in the order P4, P2, P3, P1.

    Depends only on the graph; the seed in each diagnosis is the
    deterministic starting orientation used for certificate construction.
    """
    inst = pg.inst
    adj = _adjacency(pg)
    forced_one_in = set()
    for e, code in pg.forced:
        u, v, w_u, w_v = inst.edges[e]
        forced_one_in.add(u if w_u == 1 else v)

    out = []
    for comp in _components(pg):
        if len(comp) == 1:
            out.append(ComponentDiagnosis(comp, P4_SINGLETON, None, {}))
            continue
        if any(x in forced_one_in for x in comp):
            out.append(ComponentDiagnosis(comp, P2_EXTERNAL_ONE_ZERO, None, {}))
            continue
        comp_pairs = sorted(
            key for key in (
                _pair(x, y) for x in comp for y in adj.get(x, ()) if x < y
            )
        )
        even = next(
            (key for key in comp_pairs if len(pg.bundles[key]) % 2 == 0), None
        )
        if even is not None:
            u, v = even
            ids = pg.bundles[even]
            half = len(ids) // 2
            seed = {e: _towards(inst, e, u) for e in ids[:half]}
            seed.update({e: _towards(inst, e, v) for e in ids[half:]})
            out.append(ComponentDiagnosis(comp, P3_EVEN_BUNDLE, None, seed))
            continue
        cycle = _find_simple_cycle(comp, adj)
        if cycle is not None:
            seed = {}
            for idx, x in enumerate(cycle):
                y = cycle[(idx + 1) % len(cycle)]
                e = min(pg.bundles[_pair(x, y)])
                seed[e] = _towards(inst, e, y)
            out.append(ComponentDiagnosis(comp, P1_CIRCUIT, None, seed))
            continue
        double = None
        for j in comp:
            fat = sorted(
                y for y in adj.get(j, ()) if len(pg.bundles[_pair(j, y)]) >= 2
            )
            if len(fat) >= 2:
                cand = (j, fat[0], fat[1])
                if double is None or cand < double:
                    double = cand
        if double is not None:
            j, i, k = double
            ij = pg.bundles[_pair(i, j)]
            jk = pg.bundles[_pair(j, k)]
            seed = {
                ij[0]: _towards(inst, ij[0], j),
                ij[1]: _towards(inst, ij[1], i),
                jk[0]: _towards(inst, jk[0], k),
                jk[1]: _towards(inst, jk[1], j),
            }
            out.append(ComponentDiagnosis(comp, P1_CIRCUIT, None, seed))
            continue
        # no property holds; repair per the minimum-charity rule
        fat_pair = next(
            (key for key in comp_pairs if len(pg.bundles[key]) > 1), None
        )
        if fat_pair is not None:
            repair = (REMOVE_ONE_EDGE, fat_pair)
        else:
            ids = tuple(
                sorted(e for key in comp_pairs for e in pg.bundles[key])
            )
            repair = (REMOVE_ALL_EDGES, ids)
        out.append(ComponentDiagnosis(comp, NONE, repair, {}))
    return out


def propagate_happy(pg: PrimeGraph, seeds: dict) -> PartialOrientation:
    """Grow a full EF orientation from seed assignments.

    A vertex is happy once it holds a received 1-valued edge; a happy vertex
    splits each still-unoriented incident bundle: even size p goes p/2 each
    way, odd size p goes (p-1)/2 to the happy vertex and (p+1)/2 to the
    neighbor, who becomes happy.  The donor of the credential edge must
    differ from the neighbor being processed; forced one-zero edges act as
    external donors.  Edges absent from the prime graph and from the seeds
    are left to charity (solve_binary removes repaired edges this way).

    Raises InternalError if some prime edge stays unreachable, which means
    the seeds do not cover every component as the diagnosis promised.
    """
    inst = pg.inst
    assignment = [CHARITY] * inst.m
    for e in pg.discarded:
        assignment[e] = TO_U  # worthless to both; any side preserves EF
    donors = {}  # vertex -> set of donors granting a received 1-edge
    for e, code in pg.forced:
        assignment[e] = code
        u, v, w_u, w_v = inst.edges[e]
        donors.setdefault(u if w_u == 1 else v, set()).add(-1)  # external
    for e, code in seeds.items():
        assignment[e] = code
        u, v, _, _ = inst.edges[e]
        receiver, giver = (u, v) if code == TO_U else (v, u)
        donors.setdefault(receiver, set()).add(giver)

    remaining = {key: [e for e in ids if assignment[e] == CHARITY]
                 for key, ids in pg.bundles.items()}
    by_vertex = {}
    for (u, v) in pg.bundles:
        by_vertex.setdefault(u, []).append(v)
        by_vertex.setdefault(v, []).append(u)

    queue = sorted(donors)
    queued = set(queue)
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        queued.discard(i)
        progressed = False
        ds = donors.get(i)
        if not ds:
            continue
        for k in by_vertex.get(i, ()):
            key = _pair(i, k)
            ids = remaining[key]
            if not ids or (len(ds) == 1 and k in ds):
                continue
            p = len(ids)
            mine = p // 2
            for e in ids[:mine]:
                assignment[e] = _towards(inst, e, i)
            for e in ids[mine:]:
                assignment[e] = _towards(inst, e, k)
            remaining[key] = ()
            progressed = True
            ds.add(k)
            donors.setdefault(k, set()).add(i)
            if k not in queued:
                queue.append(k)
                queued.add(k)
        # Requeue only after progress: a bundle skipped because the sole
        # donor was its own far endpoint may unblock once this vertex gains
        # another donor, and progress bounds the number of requeues.
        if progressed and i not in queued and any(
            remaining[_pair(i, k)] for k in by_vertex.get(i, ())
        ):
            queue.append(i)
            queued.add(i)

    for e in pg.prime:
        if assignment[e] == CHARITY and e not in seeds:
            raise InternalError(f"prime edge {e} unreached by propagation")
    return PartialOrientation(assignment)


def solve_binary(inst: Instance, want: str = "certificate") -> SolveReport:
    """EF decision, minimum charity and certificate for binary weights.

    want selects how much work to do: "decision" and "min_charity" skip the
    certificate construction; both values are always computed since the
    diagnosis yields them together.
    """
    if want not in ("decision", "min_charity", "certificate"):
        raise InputError(f"unknown want {want!r}")
    stats = {"vertex_visits": 0, "edge_visits": 0}
    pg = preprocess_binary(inst)
    stats["edge_visits"] += inst.m
    diagnoses = diagnose_components(pg)
    stats["vertex_visits"] += inst.n
    stats["edge_visits"] += 2 * len(pg.bundles)
    min_charity = 0
    removed = []
    for diag in diagnoses:
        if diag.prop != NONE:
            continue
        kind, payload = diag.repair
        if kind == REMOVE_ONE_EDGE:
            min_charity += 1
            removed.append(pg.bundles[payload][0])
        else:
            min_charity += len(payload)
            removed.extend(payload)
    decision = min_charity == 0
    stats["components"] = len(diagnoses)
    stats["min_charity"] = min_charity
    if want != "certificate":
        return SolveReport(decision, min_charity, None, stats)

    if removed:
        removed_set = set(removed)
        reduced = Instance(
            inst.n,
            [
                (u, v, 0, 0) if e in removed_set else (u, v, w_u, w_v)
                for e, (u, v, w_u, w_v) in enumerate(inst.edges)
            ],
        )
        pg2 = preprocess_binary(reduced)
        pg2 = PrimeGraph(
            inst,
            pg2.prime,
            pg2.forced,
            tuple(e for e in pg2.discarded if e not in removed_set),
            pg2.bundles,
        )
        stats["edge_visits"] += inst.m
        diagnoses2 = diagnose_components(pg2)
        stats["vertex_visits"] += inst.n
        stats["edge_visits"] += 2 * len(pg2.bundles)
    else:
        pg2, diagnoses2 = pg, diagnoses
    seeds = {}
    for diag in diagnoses2:
        if diag.prop == NONE:
            raise InternalError("repaired component still lacks a property")
        seeds.update(diag.seed)
    cert = propagate_happy(pg2, seeds)
    stats["edge_visits"] += inst.m
    assignment = list(cert.assignment)
    for e in removed:
        assignment[e] = CHARITY
    cert = PartialOrientation(assignment)
    return SolveReport(decision, min_charity, cert, stats)
