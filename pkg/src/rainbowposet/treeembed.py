"""Constructive rainbow embeddings of tree posets with checkable certificates.

The downtree embedder places a pattern's root at a highest-ranked host
element with usable color, then walks each child branch downward until the
slack rank(v) - |pattern below| - |blocked colors below v| hits zero on a
usable color; placing there keeps every later branch feasible. The
universal-tree embedder repeats this block by block over the appended
regions of the host, blocking only colors of earlier images that
comparability does not already separate.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constructions import UniversalTree
from .errors import BadParams, NotATreePoset, PreconditionViolated
from .forcing import Coloring, is_proper
from .poset import Poset, is_tree_poset, make_poset, rank_partition


# --- tree classification -----------------------------------------------------


@dataclass(frozen=True)
class TreeMeta:
    """Distance/side/originator decomposition of a tree poset relative to a
    fixed maximal base element."""

    base: int
    dist: tuple
    side: tuple  # "base" | "down" | "up"
    orig: tuple  # originator element, None for the base
    blocks: dict  # owner element -> tuple(owner, members...) in index order

    def block_of(self, owner):
        return self.blocks.get(owner, (owner,))


def classify_tree(t: Poset, base: Optional[int] = None) -> TreeMeta:
    """Distances are over the comparability graph; odd distance from the
    base makes an element down, even makes it up. The originator of z is
    the extreme-rank neighbor of z one step closer to the base, inside
    z's down-set for up elements and up-set for down elements; on any
    shortest comparability path directions alternate, so the candidate set
    is never empty."""
    if not is_tree_poset(t):
        raise NotATreePoset("classification needs a tree poset")
    n = t.n
    if base is None:
        base = min(t.maximal_elements())
    elif t.up_mask(base):
        raise PreconditionViolated("base element must be maximal")
    adj = [t.up_mask(x) | t.down_mask(x) for x in range(n)]
    dist = [-1] * n
    dist[base] = 0
    frontier = [base]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            rest = adj[x]
            while rest:
                low = rest & -rest
                y = low.bit_length() - 1
                rest ^= low
                if dist[y] < 0:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    if min(dist) < 0:
        raise NotATreePoset("comparability graph is disconnected")
    rank = rank_partition(t).rank
    side = tuple(
        "base" if x == base else ("down" if dist[x] % 2 else "up")
        for x in range(n)
    )
    orig = [None] * n
    for z in range(n):
        if z == base:
            continue
        if side[z] == "up":
            cands = [w for w in range(n) if t.less(w, z) and dist[w] == dist[z] - 1]
            cands.sort(key=lambda w: (-rank[w], w))
        else:
            cands = [w for w in range(n) if t.less(z, w) and dist[w] == dist[z] - 1]
            cands.sort(key=lambda w: (rank[w], w))
        if not cands:
            raise NotATreePoset(f"element {z} has no originator candidate")
        orig[z] = cands[0]
    members = {}
    for z in range(n):
        if z != base:
            members.setdefault(orig[z], []).append(z)
    blocks = {
        owner: tuple(sorted([owner] + members.get(owner, [])))
        for owner in range(n)
    }
    seen = [0] * n
    seen[base] += 1
    for owner, blk in blocks.items():
        for e in blk:
            if e != owner:
                seen[e] += 1
    if any(c != 1 for c in seen):
        raise AssertionError("originator blocks do not partition the tree")
    return TreeMeta(base=base, dist=tuple(dist), side=side, orig=tuple(orig), blocks=blocks)


# --- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Injective pattern-to-host map with the colors it consumed."""

    mapping: tuple  # pattern element i -> host element mapping[i]
    colors: tuple  # color of each image, same indexing

    def image(self):
        return tuple(sorted(self.mapping))


def verify_certificate(
    host: Poset, coloring: Coloring, pattern: Poset, cert: EmbeddingCertificate
) -> bool:
    """Definitional check, sharing no code with the embedders: injective,
    induced-order-preserving both ways, all image colors distinct."""
    m = cert.mapping
    if len(m) != pattern.n or len(set(m)) != len(m):
        return False
    if any(not 0 <= v < host.n for v in m):
        return False
    for i in range(pattern.n):
        for j in range(pattern.n):
            if i != j and pattern.less(i, j) != host.less(m[i], m[j]):
                return False
    cols = [coloring.colors[v] for v in m]
    if len(set(cols)) != len(cols):
        return False
    return tuple(cols) == cert.colors


# --- hosts ---------------------------------------------------------------------


class CompleteDowntreeHost:
    """Complete k-ary downtree of height h in breadth-first layout: node 0
    is the unique maximum, the children of v are k*v+1 .. k*v+k. Subtrees
    are contiguous per level, so color presence below a node reduces to
    binary searches in per-color occurrence lists."""

    def __init__(self, k: int, h: int, colors):
        if k < 1 or h < 1:
            raise BadParams("host needs k, h >= 1")
        self.k = k
        self.h = h
        offsets = [0]
        s = 0
        for d in range(h):
            s += k**d
            offsets.append(s)
        self.size = s
        self.offsets = offsets
        if len(colors) != s:
            raise BadParams("coloring does not cover the host")
        self.colors = np.asarray(colors, dtype=np.int64)
        self._occ = {}

    def depth(self, v: int) -> int:
        return bisect.bisect_right(self.offsets, v) - 1

    def rank(self, v: int) -> int:
        return self.h - self.depth(v)

    def children(self, v: int):
        first = self.k * v + 1
        if first >= self.size:
            return ()
        return tuple(range(first, first + self.k))

    def color(self, v: int) -> int:
        return int(self.colors[v])

    def less(self, a: int, b: int) -> bool:
        """a strictly below b in the downtree order: b is a tree ancestor."""
        while a != 0:
            a = (a - 1) // self.k
            if a == b:
                return True
        return False

    def _occurrences(self, color):
        occ = self._occ.get(color)
        if occ is None:
            idx = np.nonzero(self.colors == color)[0]
            occ = []
            for d in range(self.h):
                lo = np.searchsorted(idx, self.offsets[d])
                hi = np.searchsorted(idx, self.offsets[d + 1])
                occ.append(idx[lo:hi])
            self._occ[color] = occ
        return occ

    def has_color_below(self, v: int, color) -> bool:
        occ = self._occurrences(color)
        lo = hi = v
        for lvl in range(self.depth(v), self.h):
            arr = occ[lvl]
            if len(arr):
                pos = np.searchsorted(arr, lo)
                if pos < len(arr) and arr[pos] <= hi:
                    return True
            lo = self.k * lo + 1
            hi = self.k * hi + self.k
        return False

    def avoid_below(self, v: int, avoid) -> int:
        return sum(1 for c in avoid if self.has_color_below(v, c))

    def max_rank_usable(self, avoid) -> Optional[int]:
        if not avoid:
            return 0
        avoid_arr = np.fromiter(avoid, dtype=np.int64)
        for d in range(self.h):
            sl = self.colors[self.offsets[d] : self.offsets[d + 1]]
            usable = ~np.isin(sl, avoid_arr)
            idx = int(np.argmax(usable))
            if usable[idx]:
                return self.offsets[d] + idx
        return None


def random_downtree_coloring(k: int, h: int, rng):
    """Proper coloring of the complete k-ary downtree of height h: elements
    in random order, color uniform over feasible existing colors plus one
    fresh color. Feasibility tracks ancestor colors by one parent walk per
    node and descendant colors by bitmasks pushed up the same walk."""
    size = sum(k**d for d in range(h))
    order = list(range(size))
    rng.shuffle(order)
    colors = [-1] * size
    desc = [0] * size
    num = 0
    rnd = rng.random
    anc = [0] * h
    for e in order:
        forb = desc[e]
        a = e
        depth = 0
        while a:
            a = (a - 1) // k
            anc[depth] = a
            depth += 1
            c = colors[a]
            if c >= 0:
                forb |= 1 << c
        # uniform over feasible existing colors plus one fresh, by rejection
        while True:
            r = int(rnd() * (num + 1))
            if r >= num:
                c = num
                num += 1
                break
            if not forb >> r & 1:
                c = r
                break
        colors[e] = c
        bit = 1 << c
        for i in range(depth):
            desc[anc[i]] |= bit
    return colors


class OrientedTreeHost:
    """Adapter exposing a poset as a rooted complete tree with colors.

    Orientation 'down' reads the poset as is (root = unique maximum);
    'up' reads it upside down."""

    def __init__(self, poset: Poset, colors, orientation: str = "down", arity=None):
        n = poset.n
        up = poset._up if orientation == "down" else poset._down
        down = poset._down if orientation == "down" else poset._up
        roots = [x for x in range(n) if not up[x]]
        if len(roots) != 1:
            raise PreconditionViolated("host tree needs a unique extreme element")
        self.root = roots[0]
        self.colors = list(colors)
        kids = [[] for _ in range(n)]
        for x in range(n):
            rest = down[x]
            while rest:
                low = rest & -rest
                y = low.bit_length() - 1
                rest ^= low
                if not down[x] & up[y]:  # nothing strictly between: a cover
                    kids[x].append(y)
        self._children = [tuple(sorted(c)) for c in kids]
        depth = [-1] * n
        depth[self.root] = 0
        frontier = [self.root]
        levels = [tuple(frontier)]
        while frontier:
            nxt = []
            for v in frontier:
                for c in self._children[v]:
                    depth[c] = depth[v] + 1
                    nxt.append(c)
            if nxt:
                levels.append(tuple(sorted(nxt)))
            frontier = nxt
        if any(d < 0 for d in depth):
            raise PreconditionViolated("host tree is not connected from its root")
        self.h = len(levels)
        self.levels = levels
        self._depth = depth
        arities = {len(self._children[v]) for v in range(n) if self._children[v]}
        leaf_depths = {depth[v] for v in range(n) if not self._children[v]}
        if len(arities) > 1 or len(leaf_depths) != 1:
            raise PreconditionViolated("host is not a complete k-ary tree")
        self.k = arities.pop() if arities else (arity if arity is not None else 1)
        if arity is not None and self.k != arity:
            raise PreconditionViolated(
                f"host arity {self.k} differs from required {arity}"
            )
        self._subtree = [down[x] | (1 << x) for x in range(n)]
        self._colormask = {}
        for x in range(n):
            c = self.colors[x]
            self._colormask[c] = self._colormask.get(c, 0) | (1 << x)

    def rank(self, v: int) -> int:
        return self.h - self._depth[v]

    def children(self, v: int):
        return self._children[v]

    def color(self, v: int):
        return self.colors[v]

    def has_color_below(self, v: int, color) -> bool:
        return bool(self._colormask.get(color, 0) & self._subtree[v])

    def avoid_below(self, v: int, avoid) -> int:
        return sum(1 for c in avoid if self.has_color_below(v, c))

    def max_rank_usable(self, avoid) -> Optional[int]:
        for level in self.levels:
            for v in level:
                if self.colors[v] not in avoid:
                    return v
        return None


# --- the embedding core ---------------------------------------------------------


def _pattern_downtree(t: Poset, orientation: str = "down"):
    """(root, children lists, subtree sizes) of a pattern tree read as a
    downtree in the given orientation."""
    if not is_tree_poset(t):
        raise NotATreePoset("pattern must be a tree poset")
    up = t._up if orientation == "down" else t._down
    down = t._down if orientation == "down" else t._up
    roots = [x for x in range(t.n) if not up[x]]
    if len(roots) != 1:
        raise PreconditionViolated("pattern needs a unique extreme element")
    kids = [[] for _ in range(t.n)]
    parent_count = [0] * t.n
    for x in range(t.n):
        rest = down[x]
        while rest:
            low = rest & -rest
            y = low.bit_length() - 1
            rest ^= low
            if not down[x] & up[y]:
                kids[x].append(y)
                parent_count[y] += 1
    if any(parent_count[x] != 1 for x in range(t.n) if x != roots[0]):
        raise PreconditionViolated("pattern is not a downtree")
    sizes = [down[x].bit_count() + 1 for x in range(t.n)]
    return roots[0], [tuple(sorted(k)) for k in kids], sizes


def _embed_block(root, children_of, sizes, host, avoid):
    """Place a downtree pattern into the host, growing `avoid` with every
    consumed color. Returns {pattern element: host node}.

    The root goes to a highest-ranked usable element; every other element
    walks down from its assigned entry child until the slack
    rank - size - blocked_below reaches zero at a usable color. Each child
    subtree is completed before its next sibling starts, which keeps every
    entry slack non-negative; a violation raises instead of repairing."""
    image = {}
    x = host.max_rank_usable(avoid)
    if x is None:
        raise PreconditionViolated("no usable color anywhere in the host")
    if host.rank(x) < sizes[root] + host.avoid_below(x, avoid):
        raise PreconditionViolated("host cannot fit the pattern below its usable top")
    image[root] = x
    avoid.add(host.color(x))

    def place_children(t, z):
        kids = children_of[t]
        if not kids:
            return
        entries = host.children(z)
        if len(kids) > len(entries):
            raise PreconditionViolated("host arity below pattern branching")
        for i, tc in enumerate(kids):
            v = entries[i]
            while True:
                slack = host.rank(v) - sizes[tc] - host.avoid_below(v, avoid)
                if slack < 0:
                    raise PreconditionViolated("embedding walk lost its slack invariant")
                if slack == 0 and host.color(v) not in avoid:
                    break
                nxt = host.children(v)
                if not nxt:
                    raise PreconditionViolated("embedding walk ran out of height")
                v = nxt[0]
            image[tc] = v
            avoid.add(host.color(v))
            place_children(tc, v)

    place_children(root, x)
    return image


def check_block_properties(host, root, sizes, unusable, image, consumed):
    """The three per-certificate guarantees of the downtree embedder:
    (1) the root sits at a highest-ranked host element with usable color,
    (2) no image color is unusable,
    (3) every non-root image z has rank(z) <= |pattern below| + number of
        unusable-or-consumed colors appearing in the host below z."""
    best = host.max_rank_usable(set(unusable))
    if host.rank(image[root]) != host.rank(best):
        raise AssertionError("root image is not at the highest usable rank")
    relevant = set(unusable) | set(consumed)
    for t, v in image.items():
        if host.color(v) in unusable:
            raise AssertionError("certificate uses an unusable color")
        if t != root and host.rank(v) > sizes[t] + host.avoid_below(v, relevant):
            raise AssertionError("rank bound violated at a non-root image")


def embed_downtree(
    t: Poset, unusable, host: Poset, coloring: Coloring
) -> EmbeddingCertificate:
    """Rainbow copy of the downtree t in a properly colored complete k-ary
    downtree host of height k, avoiding the unusable colors; requires
    k >= |t| + |unusable|."""
    unusable = set(unusable)
    if not is_proper(host, coloring):
        raise PreconditionViolated("host coloring must be proper")
    view = OrientedTreeHost(host, coloring.colors, "down")
    if view.h != view.k:
        raise PreconditionViolated("host must have arity equal to its height")
    if view.k < t.n + len(unusable):
        raise PreconditionViolated(
            f"need k >= |t| + |unusable| = {t.n + len(unusable)}, host has k={view.k}"
        )
    root, kids, sizes = _pattern_downtree(t, "down")
    avoid = set(unusable)
    image = _embed_block(root, kids, sizes, view, avoid)
    consumed = [view.color(v) for v in image.values()]
    check_block_properties(view, root, sizes, unusable, image, consumed)
    mapping = tuple(image[i] for i in range(t.n))
    cert = EmbeddingCertificate(
        mapping=mapping, colors=tuple(coloring.colors[v] for v in mapping)
    )
    if not verify_certificate(host, coloring, t, cert):
        raise AssertionError("embedding produced an invalid certificate")
    return cert


def embed_downtree_on_host(t: Poset, unusable, host: CompleteDowntreeHost):
    """Fuzzing entry point: the same algorithm against the breadth-first
    arithmetic host, validated with the host's own ancestor arithmetic."""
    unusable = set(unusable)
    if host.k < t.n + len(unusable):
        raise PreconditionViolated("need k >= |t| + |unusable|")
    if host.h != host.k:
        raise PreconditionViolated("fuzzing host must have height equal to arity")
    root, kids, sizes = _pattern_downtree(t, "down")
    avoid = set(unusable)
    image = _embed_block(root, kids, sizes, host, avoid)
    consumed = [host.color(v) for v in image.values()]
    check_block_properties(host, root, sizes, unusable, image, consumed)
    mapping = tuple(image[i] for i in range(t.n))
    cols = [host.color(v) for v in mapping]
    if len(set(mapping)) != t.n or len(set(cols)) != t.n:
        raise AssertionError("fuzz certificate not injective/rainbow")
    for i in range(t.n):
        for j in range(t.n):
            if i != j and t.less(i, j) != host.less(mapping[i], mapping[j]):
                raise AssertionError("fuzz certificate order mismatch")
    return EmbeddingCertificate(mapping=mapping, colors=tuple(cols))


# --- the universal-tree embedder -------------------------------------------------


def embed_universal(
    t: Poset, ut: UniversalTree, coloring: Coloring
) -> EmbeddingCertificate:
    """Rainbow copy of the tree poset t (|t| <= k) in the universal tree of
    order k under any proper coloring.

    Blocks of t are embedded in distance order: the base's down-set into
    the core downtree, every other block into the appended region at its
    owner's image, blocking exactly the colors of earlier images that
    comparability leaves unconstrained. Any slack violation surfaces as
    PreconditionViolated rather than a wrong certificate."""
    if t.n > ut.k:
        raise PreconditionViolated("pattern larger than the universal tree order")
    if not is_proper(ut.poset, coloring):
        raise PreconditionViolated("host coloring must be proper")
    meta = classify_tree(t)
    host = ut.poset
    mapping = {}

    def embed_region(block, owner, region_elems, orientation, avoid):
        sub = host.restrict(region_elems)
        local_color = [coloring.colors[e] for e in region_elems]
        view = OrientedTreeHost(sub, local_color, orientation, arity=ut.k)
        blk = t.restrict(block)
        root, kids, sizes = _pattern_downtree(
            blk, "down" if orientation == "down" else "up"
        )
        blocked_here = view.avoid_below(view.root, avoid)
        if view.h < len(block) + blocked_here:
            raise PreconditionViolated(
                "region too short for its block and blocked colors; the rank "
                "bookkeeping for appended components does not close"
            )
        image_local = _embed_block(root, kids, sizes, view, avoid)
        return {block[bi]: region_elems[local] for bi, local in image_local.items()}

    base_block = meta.block_of(meta.base)
    core = tuple(sorted(ut.core))
    got = embed_region(base_block, meta.base, core, "down", set())
    if got[meta.base] != ut.center:
        raise AssertionError("base did not land on the universal tree center")
    mapping.update(got)

    for z in sorted(range(t.n), key=lambda z: (meta.dist[z], z)):
        if z == meta.base:
            continue
        block = meta.block_of(z)
        if len(block) == 1:
            continue
        x_z = mapping[z]
        region = ut.regions.get(x_z)
        if region is None:
            raise PreconditionViolated(
                f"no appended region at host element {x_z} for block owner {z}"
            )
        region_elems = tuple(sorted(region))
        if meta.side[z] == "down":
            orientation = "up"

            def separated(img):
                return host.less(img, x_z) or img == x_z

        else:
            orientation = "down"

            def separated(img):
                return host.less(x_z, img) or img == x_z

        avoid = {
            coloring.colors[img] for img in mapping.values() if not separated(img)
        }
        got = embed_region(block, z, region_elems, orientation, avoid)
        if got[z] != mapping[z]:
            raise AssertionError("region embedding moved the block owner")
        for el, img in got.items():
            if el != z:
                mapping[el] = img

    mapping_t = tuple(mapping[i] for i in range(t.n))
    cert = EmbeddingCertificate(
        mapping=mapping_t, colors=tuple(coloring.colors[v] for v in mapping_t)
    )
    if not verify_certificate(host, coloring, t, cert):
        raise AssertionError("universal embedding produced an invalid certificate")
    return cert


# --- fuzzing schedule -------------------------------------------------------------


def downtree_fuzz_case(seed: int) -> dict:
    """One seeded fuzz run of the downtree embedder: a random downtree on
    up to 4 elements, a random unusable set, and a random proper coloring
    of a complete k-ary host, k up to 8. Host sizes grow geometrically with
    k, so the schedule visits k=7 and k=8 on a thin deterministic cadence.

    Raises if the embedding fails or any certificate property breaks;
    returns run statistics otherwise.
    """
    rng = random.Random(f"downtree-fuzz-{seed}")
    tn = rng.randint(1, 4)
    pattern = make_poset(tn, [(i, rng.randrange(i)) for i in range(1, tn)])
    if seed % 2500 == 1249:
        u_ct = min(4, 8 - tn)
        k = 8
    elif seed % 250 == 137:
        u_ct = rng.randrange(0, min(4, 7 - tn) + 1)
        k = 7
    else:
        u_ct = rng.randrange(0, min(4, 6 - tn) + 1)
        k = min(6, tn + u_ct + rng.choice((0, 0, 0, 1, 1, 2)))
    cols = random_downtree_coloring(k, k, rng)
    host = CompleteDowntreeHost(k, k, cols)
    palette = max(cols) + 1
    unusable = set(rng.sample(range(palette + 2), min(u_ct, palette + 2)))
    cert = embed_downtree_on_host(pattern, unusable, host)
    return {
        "k": k,
        "pattern_size": tn,
        "unusable": len(unusable),
        "host_size": host.size,
        "image": cert.image(),
    }
