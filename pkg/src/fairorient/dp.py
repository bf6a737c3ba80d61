"""Minimum-charity dynamic programs over nice tree decompositions.

Both solvers sweep the nice decomposition bottom-up, keeping one table per
node that maps a signature (compressed per-bag-vertex state) to the fewest
charity edges achieving it.  All edges between a pair of vertices are
oriented in one shot at the forget node of whichever endpoint leaves a bag
first; the achievable splits of such a bundle are precomputed as bundle
tables.

EF signatures track, per bag vertex, the clamped value received so far (r)
and the largest value it assigns to any forgotten vertex's bundle (d).  A
vertex i is forgotten only if its final value R = r(i) + newly received
covers d(i), and every bag vertex j must not be envied by i beyond R.

EFX signatures extend this with per-vertex flags to reason about strong
envy, where the least-valued good of the envied bundle is discounted:
  b: received at least one good so far (zero-valued goods count);
  d: largest strong-envy threshold against any forgotten FINAL bundle;
  c: no forgotten vertex strongly envies this vertex's bundle as it stands;
  x: same, assuming at least one more good arrives (any later good is
     worth nothing to already-forgotten vertices, which is what makes a
     single flag sufficient).
The transition rules are spelled out inline; their validation is the
exhaustive oracle-equivalence test suite.
"""

from itertools import product
from typing import NamedTuple, Optional

from .core import (
    CHARITY,
    TO_U,
    TO_V,
    EF,
    EFX,
    InputError,
    Instance,
    InternalError,
    PartialOrientation,
    SolveReport,
)
from .decomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceDecomposition,
    heuristic_decomposition,
    make_nice,
)


class BundleTable(NamedTuple):
    """Achievable outcomes of orienting one bundle E_ij, with witnesses.

    Each key is a tuple describing one reachable outcome; entries maps it to
    the lexicographically first per-edge assignment achieving it, aligned
    with edge_ids.  EF keys: (a1, a2, b1, b2, k) = (value to i of the part
    kept by i, value to i of the part given to j, value to j of its part,
    value to j of i's part, charity count).  EFX keys append
    (m1, m2, f_i, f_j): the least value i assigns to a good inside j's part
    (None if empty), the least value j assigns to a good inside i's part,
    and nonemptiness flags of i's and j's parts.
    """

    i: int
    j: int
    variant: str
    edge_ids: tuple
    entries: dict


def _table_entries(pairs, variant: str) -> dict:
    """Per-edge DP over a bundle; pairs lists (value to i, value to j)."""
    if variant == EF:
        states = {(0, 0, 0, 0, 0): ()}
        for w_i, w_j in pairs:
            nxt = {}
            for (a1, a2, b1, b2, k), codes in states.items():
                nxt.setdefault((a1 + w_i, a2, b1, b2 + w_j, k), codes + ("i",))
                nxt.setdefault((a1, a2 + w_i, b1 + w_j, b2, k), codes + ("j",))
                nxt.setdefault((a1, a2, b1, b2, k + 1), codes + ("c",))
            states = nxt
        return states
    if variant == EFX:
        states = {(0, 0, 0, 0, 0, None, None, 0, 0): ()}
        for w_i, w_j in pairs:
            nxt = {}
            for (a1, a2, b1, b2, k, m1, m2, f_i, f_j), codes in states.items():
                low2 = w_j if m2 is None else min(m2, w_j)
                nxt.setdefault(
                    (a1 + w_i, a2, b1, b2 + w_j, k, m1, low2, 1, f_j),
                    codes + ("i",),
                )
                low1 = w_i if m1 is None else min(m1, w_i)
                nxt.setdefault(
                    (a1, a2 + w_i, b1 + w_j, b2, k, low1, m2, f_i, 1),
                    codes + ("j",),
                )
                nxt.setdefault(
                    (a1, a2, b1, b2, k + 1, m1, m2, f_i, f_j), codes + ("c",)
                )
            states = nxt
        return states
    raise InputError(f"unknown variant {variant!r}")


_TABLE_CACHE = {}
_TABLE_CACHE_LIMIT = 50000


def _cached_entries(pairs, variant: str):
    """Entries for a weight-sorted bundle, memoized across instances."""
    key = (variant, pairs)
    hit = _TABLE_CACHE.get(key)
    if hit is None:
        raw = _table_entries(pairs, variant)
        # deterministic iteration order for the DP: sort outcomes
        hit = dict(sorted(raw.items(), key=lambda kv: _none_key(kv[0])))
        if len(_TABLE_CACHE) < _TABLE_CACHE_LIMIT:
            _TABLE_CACHE[key] = hit
    return hit


def _none_key(t):
    return tuple(-1 if x is None else x for x in t)


def build_bundle_table(inst: Instance, i: int, j: int, variant: str = EF) -> BundleTable:
    """All achievable splits of the bundle E_ij, with witness assignments."""
    if not (0 <= i < inst.n and 0 <= j < inst.n) or i == j:
        raise InputError(f"bad vertex pair ({i},{j})")
    key = (i, j) if i < j else (j, i)
    ids = inst.pair_edges().get(key, ())
    order = sorted(range(len(ids)), key=lambda p: (
        inst.value_to(i, ids[p]), inst.value_to(j, ids[p]), p))
    pairs = tuple(
        (inst.value_to(i, ids[p]), inst.value_to(j, ids[p])) for p in order
    )
    raw = _cached_entries(pairs, variant)
    entries = {}
    for t, codes in raw.items():
        out = [None] * len(ids)
        for p, code in zip(order, codes):
            out[p] = code
        entries[t] = tuple(out)
    return BundleTable(i, j, variant, tuple(ids), entries)


def _codes_to_assignment(inst, ids, codes, i):
    """Translate 'i'/'j'/'c' bundle codes into assignment codes for i."""
    out = []
    for e, code in zip(ids, codes):
        if code == "c":
            out.append((e, CHARITY))
        else:
            receiver_is_i = code == "i"
            u = inst.edges[e][0]
            to_u = (u == i) == receiver_is_i
            out.append((e, TO_U if to_u else TO_V))
    return out


def _check_nice(inst: Instance, nd: NiceDecomposition):
    """Structural validation; returns (forget_of, handled_at).

    handled_at[node] lists (j, edge_ids) bundles to orient when that forget
    node drops its vertex i: exactly the bundles E_ij whose other endpoint j
    is still in the bag, which covers every edge exactly once.
    """
    nodes = nd.nodes
    if not nodes or not (0 <= nd.root < len(nodes)):
        raise InputError("nice decomposition has no usable root")
    referenced = set()
    forget_of = {}
    for idx, node in enumerate(nodes):
        for ch in node.children:
            if not (0 <= ch < idx):
                raise InputError("nice decomposition is not bottom-up")
            if ch in referenced:
                raise InputError("node referenced twice")
            referenced.add(ch)
        child_bags = [nodes[ch].bag for ch in node.children]
        if node.kind == LEAF:
            if node.bag or child_bags:
                raise InputError("leaf nodes must be empty and childless")
        elif node.kind == INTRODUCE:
            if len(child_bags) != 1 or node.vertex in child_bags[0] or node.bag != child_bags[0] | {node.vertex}:
                raise InputError("bad introduce node")
            if not (0 <= node.vertex < inst.n):
                raise InputError("introduced vertex out of range")
        elif node.kind == FORGET:
            if len(child_bags) != 1 or node.vertex not in child_bags[0] or node.bag != child_bags[0] - {node.vertex}:
                raise InputError("bad forget node")
            if node.vertex in forget_of:
                raise InputError(f"vertex {node.vertex} forgotten twice")
            forget_of[node.vertex] = idx
        elif node.kind == JOIN:
            if len(child_bags) != 2 or child_bags[0] != node.bag or child_bags[1] != node.bag:
                raise InputError("bad join node")
        else:
            raise InputError(f"unknown node kind {node.kind!r}")
    if len(referenced) != len(nodes) - 1 or nd.root in referenced:
        raise InputError("nice decomposition is not a single tree")
    if nodes[nd.root].bag:
        raise InputError("root bag must be empty")
    for v in range(inst.n):
        if v not in forget_of:
            raise InputError(f"vertex {v} appears in no bag")

    handled_at = {}
    for (u, v), ids in inst.pair_edges().items():
        fu, fv = forget_of[u], forget_of[v]
        if v in nodes[fu].bag:
            handled_at.setdefault(fu, []).append((v, ids))
        elif u in nodes[fv].bag:
            handled_at.setdefault(fv, []).append((u, ids))
        else:
            raise InputError(
                f"edge endpoints {u},{v} never share a bag at a forget node"
            )
    for lst in handled_at.values():
        lst.sort()
    return forget_of, handled_at


def _bundle_choices(inst, i, js_with_ids, variant):
    """Per bag-partner j: the bundle table entries for the pair (i, j)."""
    choices = []
    for j, ids in js_with_ids:
        order = sorted(
            range(len(ids)),
            key=lambda p: (inst.value_to(i, ids[p]), inst.value_to(j, ids[p]), p),
        )
        pairs = tuple(
            (inst.value_to(i, ids[p]), inst.value_to(j, ids[p])) for p in order
        )
        raw = _cached_entries(pairs, variant)
        entries = []
        for t, codes in raw.items():
            out = [None] * len(ids)
            for p, code in zip(order, codes):
                out[p] = code
            entries.append((t, _codes_to_assignment(inst, ids, out, i)))
        choices.append((j, entries))
    return choices


def _prepare(inst, nd, variant):
    if nd is None:
        nd = make_nice(heuristic_decomposition(inst))
    _, handled_at = _check_nice(inst, nd)
    bags_sorted = [tuple(sorted(node.bag)) for node in nd.nodes]
    plans = {}
    for idx, node in enumerate(nd.nodes):
        if node.kind == FORGET and idx in handled_at:
            plans[idx] = _bundle_choices(inst, node.vertex, handled_at[idx], variant)
    return nd, bags_sorted, plans


def _reconstruct(nd, tables, back, inst):
    """Walk back-pointers from the root's best signature to edge codes."""
    best_sig = None
    best_k = None
    for sig, k in tables[nd.root].items():
        if best_k is None or k < best_k:
            best_sig, best_k = sig, k
    assignment = [CHARITY] * inst.m
    stack = [(nd.root, best_sig)]
    while stack:
        idx, sig = stack.pop()
        node = nd.nodes[idx]
        info = back[idx][sig]
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            stack.append((node.children[0], info))
        elif node.kind == FORGET:
            child_sig, edge_codes = info
            for e, code in edge_codes:
                assignment[e] = code
            stack.append((node.children[0], child_sig))
        elif node.kind == JOIN:
            sig1, sig2 = info
            stack.append((node.children[0], sig1))
            stack.append((node.children[1], sig2))
    return assignment, best_k


def _dominance_filter_ef(table):
    """Drop signatures beaten on every coordinate (optional optimization)."""
    items = list(table.items())
    keep = {}
    for sig, k in items:
        dominated = False
        for sig2, k2 in items:
            if sig2 == sig or k2 > k:
                continue
            if all(
                sig2[p] >= sig[p] and sig2[p + 1] <= sig[p + 1]
                for p in range(0, len(sig), 2)
            ):
                dominated = True
                break
        if not dominated:
            keep[sig] = k
    return keep


def _dominance_filter_efx(table):
    items = list(table.items())
    keep = {}
    for sig, k in items:
        dominated = False
        for sig2, k2 in items:
            if sig2 == sig:
                continue
            if k2 > k:
                continue
            ok = True
            for p in range(0, len(sig), 5):
                r1, b1, d1, c1, x1 = sig[p:p + 5]
                r2, b2, d2, c2, x2 = sig2[p:p + 5]
                if b1 != b2 or r2 < r1 or d2 > d1 or c2 < c1 or x2 < x1:
                    ok = False
                    break
            if ok:
                dominated = True
                break
        if not dominated:
            keep[sig] = k
    return keep


def solve_ef_mc(
    inst: Instance,
    nd: Optional[NiceDecomposition] = None,
    *,
    use_dominance: bool = False,
) -> SolveReport:
    """Minimum charity for EF via the revenue/demand signature DP.

    Zero-zero edges never help or hurt EF, so they are removed up front and
    re-added to the certificate oriented to their first endpoint; this
    preserves the minimum exactly (charitying a worthless edge only wastes
    budget).
    """
    zz = [e for e, (u, v, w_u, w_v) in enumerate(inst.edges) if w_u == w_v == 0]
    reduced = inst
    if zz:
        zz_set = set(zz)
        keep = [e for e in range(inst.m) if e not in zz_set]
        reduced = Instance(inst.n, [inst.edges[e] for e in keep])
        rep = solve_ef_mc(reduced, nd, use_dominance=use_dominance)
        assignment = [TO_U] * inst.m
        if rep.certificate is not None:
            for pos, e in enumerate(keep):
                assignment[e] = rep.certificate[pos]
        return SolveReport(
            rep.decision, rep.min_charity, PartialOrientation(assignment), rep.stats
        )

    W = inst.max_shared_weight()
    nd, bags_sorted, plans = _prepare(inst, nd, EF)
    nodes = nd.nodes
    tables = [None] * len(nodes)
    back = [None] * len(nodes)
    stats = {"dp_states": 0, "max_node_states": 0, "width": nd.width, "W": W}

    for idx, node in enumerate(nodes):
        if node.kind == LEAF:
            table = {(): 0}
            binfo = {(): None}
        elif node.kind == INTRODUCE:
            child = node.children[0]
            pos = bags_sorted[idx].index(node.vertex)
            table = {}
            binfo = {}
            for sig, k in tables[child].items():
                new = sig[: 2 * pos] + (0, 0) + sig[2 * pos:]
                table[new] = k
                binfo[new] = sig
        elif node.kind == FORGET:
            child = node.children[0]
            cbag = bags_sorted[node.children[0]]
            pos = cbag.index(node.vertex)
            plan = plans.get(idx, [])
            jpos = [cbag.index(j) for j, _ in plan]
            entry_lists = [entries for _, entries in plan]
            table = {}
            binfo = {}
            for sig, k in tables[child].items():
                r_i = sig[2 * pos]
                d_i = sig[2 * pos + 1]
                for combo in product(*entry_lists):
                    received = r_i + sum(t[0] for t, _ in combo)
                    if d_i > received:
                        continue
                    if any(t[1] > received for t, _ in combo):
                        continue
                    out = list(sig)
                    k_new = k
                    for p, (t, _) in zip(jpos, combo):
                        out[2 * p] = min(out[2 * p] + t[2], W)
                        if t[3] > out[2 * p + 1]:
                            out[2 * p + 1] = t[3]
                        k_new += t[4]
                    del out[2 * pos:2 * pos + 2]
                    new = tuple(out)
                    old = table.get(new)
                    if old is None or k_new < old:
                        table[new] = k_new
                        codes = []
                        for (_, ec) in combo:
                            codes.extend(ec)
                        binfo[new] = (sig, tuple(codes))
        elif node.kind == JOIN:
            c1, c2 = node.children
            table = {}
            binfo = {}
            for sig1, k1 in tables[c1].items():
                for sig2, k2 in tables[c2].items():
                    merged = []
                    for p in range(0, len(sig1), 2):
                        merged.append(min(sig1[p] + sig2[p], W))
                        merged.append(max(sig1[p + 1], sig2[p + 1]))
                    new = tuple(merged)
                    k_new = k1 + k2
                    old = table.get(new)
                    if old is None or k_new < old:
                        table[new] = k_new
                        binfo[new] = (sig1, sig2)
        else:
            raise InternalError(f"unexpected node {node.kind}")
        if use_dominance and node.kind in (FORGET, JOIN):
            table = _dominance_filter_ef(table)
        tables[idx] = table
        back[idx] = binfo
        stats["dp_states"] += len(table)
        if len(table) > stats["max_node_states"]:
            stats["max_node_states"] = len(table)

    assignment, best_k = _reconstruct(nd, tables, back, inst)
    decision = best_k == 0
    return SolveReport(
        decision, best_k, PartialOrientation(assignment), stats
    )


def _collapse_zero_zero(inst: Instance):
    """Keep one representative per parallel zero-zero bundle (decision aid)."""
    seen_zz = {}
    keep = []
    twin_of = {}
    for e, (u, v, w_u, w_v) in enumerate(inst.edges):
        if w_u == 0 and w_v == 0:
            key = (u, v) if u < v else (v, u)
            rep = seen_zz.get(key)
            if rep is not None:
                twin_of[e] = rep
                continue
            seen_zz[key] = e
        keep.append(e)
    reduced = Instance(inst.n, [inst.edges[e] for e in keep])
    return reduced, keep, twin_of


def solve_efx_mc(
    inst: Instance,
    nd: Optional[NiceDecomposition] = None,
    *,
    use_dominance: bool = False,
    collapse_parallel_zero_zero: bool = False,
) -> SolveReport:
    """Minimum charity for EFX via the flagged signature DP.

    Zero-zero edges are kept: granting a worthless good can dissolve strong
    envy by becoming the discounted least-valued good.  The optional
    collapse of parallel zero-zero copies preserves the yes/no decision
    (duplicates mirror their representative) but the reported charity is
    then only an upper bound, so it stays off by default.
    """
    if collapse_parallel_zero_zero:
        reduced, keep, twin_of = _collapse_zero_zero(inst)
        if twin_of:
            rep = solve_efx_mc(reduced, nd, use_dominance=use_dominance)
            assignment = [CHARITY] * inst.m
            for pos, e in enumerate(keep):
                assignment[e] = rep.certificate[pos]
            for e, twin in twin_of.items():
                code = assignment[twin]
                if code != CHARITY:
                    receiver = inst.edges[twin][0 if code == TO_U else 1]
                    code = TO_U if inst.edges[e][0] == receiver else TO_V
                assignment[e] = code
            cert = PartialOrientation(assignment)
            return SolveReport(
                rep.decision, cert.charity_count, cert, rep.stats
            )

    W = inst.max_shared_weight()
    nd, bags_sorted, plans = _prepare(inst, nd, EFX)
    nodes = nd.nodes
    tables = [None] * len(nodes)
    back = [None] * len(nodes)
    stats = {"dp_states": 0, "max_node_states": 0, "width": nd.width, "W": W}

    for idx, node in enumerate(nodes):
        if node.kind == LEAF:
            table = {(): 0}
            binfo = {(): None}
        elif node.kind == INTRODUCE:
            child = node.children[0]
            pos = bags_sorted[idx].index(node.vertex)
            table = {}
            binfo = {}
            for sig, k in tables[child].items():
                new = sig[: 5 * pos] + (0, 0, 0, 1, 1) + sig[5 * pos:]
                table[new] = k
                binfo[new] = sig
        elif node.kind == FORGET:
            child = node.children[0]
            cbag = bags_sorted[node.children[0]]
            pos = cbag.index(node.vertex)
            plan = plans.get(idx, [])
            jpos = [cbag.index(j) for j, _ in plan]
            entry_lists = [entries for _, entries in plan]
            table = {}
            binfo = {}
            for sig, k in tables[child].items():
                r_i = sig[5 * pos]
                b_i = sig[5 * pos + 1]
                d_i = sig[5 * pos + 2]
                c_i = sig[5 * pos + 3]
                x_i = sig[5 * pos + 4]
                for combo in product(*entry_lists):
                    # (1) i must not envy any forgotten vertex
                    received = r_i + sum(t[0] for t, _ in combo)
                    if d_i > received:
                        continue
                    # (2) i's bundle is now final; forgotten vertices must
                    # tolerate it, with or without the goods gained here
                    got_new = any(t[7] for t, _ in combo)
                    if got_new:
                        if not x_i:
                            continue
                    elif not c_i:
                        continue
                    n_new_parts = sum(1 for t, _ in combo if t[7])
                    out = list(sig)
                    k_new = k
                    ok = True
                    for p, (t, _) in zip(jpos, combo):
                        a2, b1, b2, kk = t[1], t[2], t[3], t[4]
                        m1, m2, f_i, f_j = t[5], t[6], t[7], t[8]
                        # (3) j's strong-envy threshold against i's bundle:
                        # the discount is i's least good from j's view, which
                        # is 0 as soon as i holds any good outside this part
                        if b2:
                            # b2 > 0 implies f_i, so other parts exist iff
                            # the combo delivered more than this one
                            if b_i or n_new_parts > 1:
                                threshold = b2
                            else:
                                threshold = b2 - m2
                            if threshold > out[5 * p + 2]:
                                out[5 * p + 2] = min(threshold, W)
                        # (4) i's envy toward j, deferred into j's flags
                        ok_ext = received >= a2
                        if sig[5 * p + 1]:  # j already holds a good
                            nu = 0
                        elif f_j:
                            nu = m1
                        else:
                            nu = None  # j's bundle may stay empty: vacuous
                        ok_closed = True if nu is None else received >= a2 - nu
                        base_c = sig[5 * p + 4] if f_j else sig[5 * p + 3]
                        c_val = 1 if (base_c and ok_closed) else 0
                        x_val = 1 if (sig[5 * p + 4] and ok_ext) else 0
                        if not c_val and not x_val:
                            # j can neither stay as-is nor grow: dead state
                            ok = False
                            break
                        out[5 * p + 3] = c_val
                        out[5 * p + 4] = x_val
                        # (5) j's revenue and goods flag
                        out[5 * p] = min(out[5 * p] + b1, W)
                        if f_j:
                            out[5 * p + 1] = 1
                        k_new += kk
                    if not ok:
                        continue
                    del out[5 * pos:5 * pos + 5]
                    new = tuple(out)
                    old = table.get(new)
                    if old is None or k_new < old:
                        table[new] = k_new
                        codes = []
                        for (_, ec) in combo:
                            codes.extend(ec)
                        binfo[new] = (sig, tuple(codes))
        elif node.kind == JOIN:
            c1, c2 = node.children
            table = {}
            binfo = {}
            for sig1, k1 in tables[c1].items():
                for sig2, k2 in tables[c2].items():
                    merged = []
                    for p in range(0, len(sig1), 5):
                        r1, bb1, d1, cc1, xx1 = sig1[p:p + 5]
                        r2, bb2, d2, cc2, xx2 = sig2[p:p + 5]
                        c_val = (xx1 if bb2 else cc1) and (xx2 if bb1 else cc2)
                        x_val = xx1 and xx2
                        merged.extend(
                            (
                                min(r1 + r2, W),
                                bb1 | bb2,
                                max(d1, d2),
                                1 if c_val else 0,
                                1 if x_val else 0,
                            )
                        )
                    new = tuple(merged)
                    k_new = k1 + k2
                    old = table.get(new)
                    if old is None or k_new < old:
                        table[new] = k_new
                        binfo[new] = (sig1, sig2)
        else:
            raise InternalError(f"unexpected node {node.kind}")
        if use_dominance and node.kind in (FORGET, JOIN):
            table = _dominance_filter_efx(table)
        tables[idx] = table
        back[idx] = binfo
        stats["dp_states"] += len(table)
        if len(table) > stats["max_node_states"]:
            stats["max_node_states"] = len(table)

    assignment, best_k = _reconstruct(nd, tables, back, inst)
    decision = best_k == 0
    return SolveReport(
        decision, best_k, PartialOrientation(assignment), stats
    )
