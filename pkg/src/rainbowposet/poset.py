"""Finite strict partial orders on dense indices 0..n-1.

The relation is stored as bit rows: bit y of ``up[x]`` is set iff x < y.
All values are immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import BadParams, CapExceeded, CyclicInput


def _bits(mask: int):
    """Iterate set bit positions of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable strict order. ``less(x, y)`` is True iff x is strictly below y."""

    __slots__ = ("n", "_up", "_down", "labels", "_key", "_perm")

    def __init__(self, up, labels=None, validate=True):
        up = tuple(up)
        n = len(up)
        down = [0] * n
        for x in range(n):
            for y in _bits(up[x]):
                down[y] |= 1 << x
        self.n = n
        self._up = up
        self._down = tuple(down)
        self.labels = tuple(labels) if labels is not None else None
        self._key = None
        self._perm = None
        if self.labels is not None and len(self.labels) != n:
            raise BadParams("label count differs from element count")
        if validate:
            self._check_invariants()

    def _check_invariants(self):
        up, down, n = self._up, self._down, self.n
        for x in range(n):
            if up[x] >> x & 1:
                raise BadParams(f"relation is not irreflexive at {x}")
            if up[x] & down[x]:
                raise BadParams(f"relation is not antisymmetric at {x}")
            if up[x] >> n:
                raise BadParams(f"relation row {x} references elements >= n")
            for y in _bits(up[x]):
                if up[y] & ~up[x]:
                    raise BadParams(f"relation is not transitive at {x} < {y}")

    # --- basic queries ---------------------------------------------------

    def less(self, x: int, y: int) -> bool:
        return bool(self._up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x != y and bool((self._up[x] | self._down[x]) >> y & 1)

    def up_mask(self, x: int) -> int:
        return self._up[x]

    def down_mask(self, x: int) -> int:
        return self._down[x]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Poset(n={self.n}, covers={list(self.cover_pairs())})"

    def same_relation(self, other: "Poset") -> bool:
        """Equality as labeled relations (not up to isomorphism)."""
        return self.n == other.n and self._up == other._up

    def cover_pairs(self):
        """Hasse arcs (x, y), x covered by y, sorted."""
        out = []
        for x in range(self.n):
            ux = self._up[x]
            for y in _bits(ux):
                if not ux & self._down[y]:
                    out.append((x, y))
        return tuple(sorted(out))

    def maximal_elements(self):
        return tuple(x for x in range(self.n) if not self._up[x])

    def minimal_elements(self):
        return tuple(x for x in range(self.n) if not self._down[x])

    def restrict(self, elements) -> "Poset":
        """Induced subposet on the given elements (kept in sorted order)."""
        elems = sorted(elements)
        pos = {e: i for i, e in enumerate(elems)}
        if len(pos) != len(elems):
            raise BadParams("duplicate elements in restriction")
        rows = []
        for e in elems:
            row = 0
            for f in _bits(self._up[e]):
                if f in pos:
                    row |= 1 << pos[f]
            rows.append(row)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[e] for e in elems)
        return Poset(rows, labels=labels, validate=False)

    def delete(self, x: int) -> "Poset":
        return self.restrict([e for e in range(self.n) if e != x])


# --- constructors and algebra --------------------------------------------


def make_poset(n: int, covers, labels=None) -> Poset:
    """Poset whose relation is the transitive closure of the given cover arcs.

    Raises CyclicInput if the arcs contain a directed cycle.
    """
    if n < 0:
        raise BadParams("element count must be non-negative")
    succ = [0] * n
    for a, b in covers:
        if not (0 <= a < n and 0 <= b < n):
            raise BadParams(f"cover ({a}, {b}) references indices outside 0..{n - 1}")
        if a == b:
            raise CyclicInput(f"cover ({a}, {b}) is a self-loop")
        succ[a] |= 1 << b
    # Kahn topological order over the cover digraph.
    indeg = [0] * n
    for a in range(n):
        for b in _bits(succ[a]):
            indeg[b] += 1
    stack = [x for x in range(n) if indeg[x] == 0]
    topo = []
    while stack:
        x = stack.pop()
        topo.append(x)
        for y in _bits(succ[x]):
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    if len(topo) != n:
        raise CyclicInput("cover arcs contain a directed cycle")
    up = [0] * n
    for x in reversed(topo):
        row = succ[x]
        for y in _bits(succ[x]):
            row |= up[y]
        up[x] = row
    return Poset(up, labels=labels)


def dual(p: Poset) -> Poset:
    return Poset(p._down, labels=p.labels, validate=False)


def disjoint_sum(p: Poset, q: Poset) -> Poset:
    rows = list(p._up) + [row << p.n for row in q._up]
    labels = None
    if p.labels is not None or q.labels is not None:
        pl = p.labels or (None,) * p.n
        ql = q.labels or (None,) * q.n
        labels = pl + ql
    return Poset(rows, labels=labels, validate=False)


def linear_sum(p: Poset, q: Poset) -> Poset:
    """Every element of p strictly below every element of q."""
    above = ((1 << q.n) - 1) << p.n
    rows = [row | above for row in p._up] + [row << p.n for row in q._up]
    return Poset(rows, validate=False)


def adjoin_extremum(p: Poset, side: str) -> Poset:
    """Add one new element above (side='top') or below (side='bottom') all others."""
    if side == "top":
        rows = [row | (1 << p.n) for row in p._up] + [0]
    elif side == "bottom":
        rows = [row << 1 for row in p._up]
        rows.insert(0, ((1 << p.n) - 1) << 1)
    else:
        raise BadParams("side must be 'top' or 'bottom'")
    return Poset(rows, validate=False)


# --- structure -------------------------------------------------------------


@dataclass(frozen=True)
class RankPartition:
    """Canonical antichain partition: layer j holds the minimal elements of
    the poset restricted to layers >= j. Ranks are 1-based."""

    layers: tuple
    rank: tuple

    @property
    def height(self) -> int:
        return len(self.layers)


def rank_partition(p: Poset) -> RankPartition:
    n = p.n
    remaining = (1 << n) - 1
    layers = []
    rank = [0] * n
    while remaining:
        layer = [x for x in _bits(remaining) if not p._down[x] & remaining]
        layers.append(tuple(layer))
        for x in layer:
            rank[x] = len(layers)
            remaining &= ~(1 << x)
    return RankPartition(tuple(layers), tuple(rank))


def height(p: Poset) -> int:
    return rank_partition(p).height


def comparability_edges(p: Poset):
    """Undirected comparability graph as sorted (x, y) pairs with x < y."""
    out = []
    for x in range(p.n):
        for y in _bits(p._up[x] >> (x + 1)):
            out.append((x, x + 1 + y))
        for y in _bits(p._down[x] >> (x + 1)):
            out.append((x, x + 1 + y))
    return tuple(sorted(out))


def perp_value(p: Poset) -> int:
    k = p.n
    return k + k * (k - 1) // 2 - len(comparability_edges(p))


def is_tree_poset(p: Poset) -> bool:
    """True iff the unoriented cover graph is connected and acyclic."""
    n = p.n
    if n == 0:
        return False
    covers = p.cover_pairs()
    if len(covers) != n - 1:
        return False
    adj = [0] * n
    for a, b in covers:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    seen = 1
    frontier = 1
    while frontier:
        new = 0
        for x in _bits(frontier):
            new |= adj[x]
        frontier = new & ~seen
        seen |= new
    return seen == (1 << n) - 1


def down_set(p: Poset, x: int) -> Poset:
    """Induced subposet on {y : y <= x}."""
    return p.restrict(list(_bits(p._down[x] | (1 << x))))


def up_set(p: Poset, x: int) -> Poset:
    """Induced subposet on {y : x <= y}."""
    return p.restrict(list(_bits(p._up[x] | (1 << x))))


def width(p: Poset, cap: int = 20) -> int:
    """Largest antichain, by branch and bound. Diagnostic only."""
    if p.n > cap:
        raise CapExceeded(f"width is only computed for n <= {cap}")
    incomp = [~(p._up[x] | p._down[x] | (1 << x)) & ((1 << p.n) - 1) for x in range(p.n)]
    best = 0

    def grow(chosen_count, candidates):
        nonlocal best
        if chosen_count + candidates.bit_count() <= best:
            return
        if not candidates:
            best = max(best, chosen_count)
            return
        x = (candidates & -candidates).bit_length() - 1
        grow(chosen_count + 1, candidates & incomp[x])
        grow(chosen_count, candidates & ~(1 << x))

    grow(0, (1 << p.n) - 1)
    return best


# --- canonical keys and isomorphism ---------------------------------------


def _refined_classes(p: Poset):
    """Partition elements into order-invariant classes, sorted by signature.

    Iterates a degree/rank style refinement until stable; used to restrict
    the canonical-key search to class-respecting permutations.
    """
    n = p.n
    rk = rank_partition(p).rank
    sig = [(p._down[x].bit_count(), p._up[x].bit_count(), rk[x]) for x in range(n)]
    while True:
        code = {s: i for i, s in enumerate(sorted(set(sig)))}
        coded = [code[s] for s in sig]
        new = []
        for x in range(n):
            ups = sorted(coded[y] for y in _bits(p._up[x]))
            downs = sorted(coded[y] for y in _bits(p._down[x]))
            new.append((coded[x], tuple(ups), tuple(downs)))
        if len(set(new)) == len(set(sig)):
            break
        sig = new
    classes = {}
    for x in range(n):
        classes.setdefault(sig[x], []).append(x)
    return [classes[s] for s in sorted(classes)]


def _canonical_search(p: Poset):
    """Minimal relation bitstring over class-respecting relabelings.

    Positions are filled class block by class block; at depth i the 2i bits
    rel(i, j), rel(j, i) for j < i are appended, pruning against the best
    prefix so far. Returns (payload_int, total_bits, permutation) where
    permutation[position] = original element.
    """
    n = p.n
    slots = [list(block) for block in _refined_classes(p)]
    # position -> which block it draws from
    owner = []
    for bi, block in enumerate(slots):
        owner.extend([bi] * len(block))
    up = p._up
    total_bits = n * (n - 1)
    best_prefix = [None] * (n + 1)
    best_perm = None
    perm = [0] * n
    used = [[False] * len(b) for b in slots]

    def rec(i, cur):
        nonlocal best_perm
        if i == n:
            if best_prefix[n] is None or cur < best_prefix[n]:
                acc = cur
                for d in range(n, 0, -1):
                    best_prefix[d] = acc
                    acc >>= 2 * (d - 1)
                best_prefix[0] = 0
                best_perm = perm.copy()
            return
        block = slots[owner[i]]
        flags = used[owner[i]]
        for j, elem in enumerate(block):
            if flags[j]:
                continue
            bits = 0
            row = up[elem]
            for d in range(i):
                bits = (bits << 1) | (row >> perm[d] & 1)
            for d in range(i):
                bits = (bits << 1) | (up[perm[d]] >> elem & 1)
            nxt = (cur << (2 * i)) | bits
            if best_prefix[i + 1] is not None and nxt > best_prefix[i + 1]:
                continue
            flags[j] = True
            perm[i] = elem
            rec(i + 1, nxt)
            flags[j] = False
    rec(0, 0)
    return best_prefix[n] or 0, total_bits, best_perm or []


def canonical_key(p: Poset) -> bytes:
    """Total-order key: equal keys iff isomorphic. Leading byte is n."""
    if p._key is None:
        payload, total_bits, perm = _canonical_search(p)
        nbytes = (total_bits + 7) // 8
        p._key = bytes([p.n]) + payload.to_bytes(nbytes, "big")
        p._perm = tuple(perm)
    return p._key


def canonical_form(p: Poset) -> Poset:
    """Relabeled copy realizing the canonical key."""
    canonical_key(p)
    perm = p._perm  # position -> original element
    inv = {e: i for i, e in enumerate(perm)}
    rows = []
    for i in range(p.n):
        row = 0
        for y in _bits(p._up[perm[i]]):
            row |= 1 << inv[y]
        rows.append(row)
    return Poset(rows, validate=False)


def are_isomorphic(p: Poset, q: Poset) -> bool:
    return p.n == q.n and canonical_key(p) == canonical_key(q)


def isomorphic_by_bruteforce(p: Poset, q: Poset) -> bool:
    """Oracle: bijection search. Only sensible for small n."""
    if p.n != q.n:
        return False
    for perm in permutations(range(p.n)):
        if all(
            p.less(x, y) == q.less(perm[x], perm[y])
            for x in range(p.n)
            for y in range(p.n)
        ):
            return True
    return False


# --- induced copies --------------------------------------------------------


def induced_copies(host: Poset, pattern: Poset):
    """All element subsets of host that induce pattern, as sorted tuples in
    ascending lexicographic order. Exhaustive and duplicate-free."""
    m, n = pattern.n, host.n
    if m > n:
        return ()
    if m == 0:
        return ((),)
    deg = [
        (pattern._up[v] | pattern._down[v]).bit_count() for v in range(m)
    ]
    order = sorted(range(m), key=lambda v: (-deg[v], v))
    full = (1 << n) - 1
    incomp_host = [~(host._up[x] | host._down[x] | (1 << x)) & full for x in range(n)]
    found = set()
    image = [0] * m

    def rec(step, used_mask):
        if step == m:
            found.add(frozenset(image))
            return
        v = order[step]
        cand = full & ~used_mask
        for t in range(step):
            w = order[t]
            iw = image[w]
            if pattern.less(v, w):
                cand &= host._down[iw]
            elif pattern.less(w, v):
                cand &= host._up[iw]
            else:
                cand &= incomp_host[iw]
            if not cand:
                return
        for x in _bits(cand):
            image[v] = x
            rec(step + 1, used_mask | (1 << x))

    rec(0, 0)
    return tuple(sorted(tuple(sorted(s)) for s in found))


def contains_induced(host: Poset, pattern: Poset) -> bool:
    """Existence version of induced_copies."""
    from ._copies import exists_copy, plan_for

    return exists_copy(host._up, host._down, host.n, plan_for(pattern))


# --- text format ------------------------------------------------------------


def poset_to_text(p: Poset) -> str:
    lines = [f"poset n={p.n}"]
    if p.labels is not None:
        for i, name in enumerate(p.labels):
            if name:
                lines.append(f"# label {i} {name}")
    for a, b in p.cover_pairs():
        lines.append(f"{a} < {b}")
    return "\n".join(lines) + "\n"


def poset_from_text(text: str) -> Poset:
    n = None
    covers = []
    labels = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 2)
            if len(parts) == 3 and parts[0] == "label" and parts[1].isdigit():
                labels[int(parts[1])] = parts[2]
            continue
        if line.startswith("poset"):
            if n is not None:
                raise BadParams("more than one poset header in input")
            fields = dict(
                kv.split("=", 1) for kv in line.split()[1:] if "=" in kv
            )
            if "n" not in fields:
                raise BadParams("poset header is missing n=<count>")
            n = int(fields["n"])
            continue
        if "<" in line:
            a, b = line.split("<", 1)
            covers.append((int(a), int(b)))
            continue
        raise BadParams(f"unrecognized line in poset text: {raw!r}")
    if n is None:
        raise BadParams("missing poset header")
    label_tuple = None
    if labels:
        label_tuple = tuple(labels.get(i) for i in range(n))
    return make_poset(n, covers, labels=label_tuple)
