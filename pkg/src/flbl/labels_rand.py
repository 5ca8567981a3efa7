"""Randomized edge-fault labeling schemes.

Long scheme: per-edge uniformly random XOR sketches of f + c log n bits;
subtree aggregates cancel to the cut XOR, and components of G - F are
recovered by GF(2) elimination over the fault-split tree regions.

Short scheme: log^2 n-bit XOR part plus an l0 cut-sketch matrix of
rank-bucketed edge uids, queried with probabilistic Boruvka steps and
finished with elimination on the XOR part.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph
from .labels_simple import SchemeMeta

SIG_C_DEFAULT = 4


def _bits(n: int) -> int:
    return max(1, (max(n, 2) - 1).bit_length())


# ---------------------------------------------------------------------------
# spanning structure shared by both schemes


class BfsForest:
    """BFS spanning forest with preorder numbering, smallest-id roots."""

    def __init__(self, g: Graph):
        self.graph = g
        n = g.n
        self.parent = [-1] * n
        self.parent_edge = [-1] * n
        self.order: list[int] = []
        self.comp_of = [-1] * n
        self.comp_roots: list[int] = []
        seen = [False] * n
        for root in range(n):
            if seen[root]:
                continue
            self.comp_roots.append(root)
            ci = len(self.comp_roots) - 1
            seen[root] = True
            queue = [root]
            qi = 0
            while qi < len(queue):
                x = queue[qi]
                qi += 1
                self.comp_of[x] = ci
                for y, eid in sorted(g.adjacency[x]):
                    if not seen[y]:
                        seen[y] = True
                        self.parent[y] = x
                        self.parent_edge[y] = eid
                        queue.append(y)
            self.order.extend(self._preorder(root))
        self.pre = [0] * n
        for i, v in enumerate(self.order):
            self.pre[v] = i
        self.size = [1] * n
        for v in reversed(self.order):
            if self.parent[v] != -1:
                self.size[self.parent[v]] += self.size[v]
        self.tree_edges = {e for e in self.parent_edge if e != -1}
        self.comp_pre_starts = [self.pre[r] for r in self.comp_roots]

    def _preorder(self, root: int) -> list[int]:
        out = []
        kids: dict[int, list[int]] = {}
        for v, p in enumerate(self.parent):
            if p != -1 and self.comp_of[v] == self.comp_of[root]:
                kids.setdefault(p, []).append(v)
        stack = [root]
        while stack:
            x = stack.pop()
            out.append(x)
            for y in sorted(kids.get(x, ()), reverse=True):
                stack.append(y)
        return out

    def subtree_range(self, v: int) -> tuple[int, int]:
        return self.pre[v], self.pre[v] + self.size[v] - 1


def _edge_bits(seed: int, tag: str, eid: int, nbits: int) -> int:
    return random.Random(f"{seed}:{tag}:{eid}").getrandbits(nbits)


# ---------------------------------------------------------------------------
# singleton detection (Sample distinguisher, uid, signature)


def sample_bit(a: int, t: int, x: int, w: int) -> int:
    """1 iff a*x mod 2^w < t; a must be odd."""
    if a % 2 == 0:
        raise ValueError("distinguisher multiplier must be odd")
    return 1 if (a * x) % (1 << w) < t else 0


@dataclass
class SingletonSeed:
    w: int
    pairs: list[tuple[int, int]]  # (a odd, t)

    @staticmethod
    def generate(seed: int, n: int, c: int = SIG_C_DEFAULT) -> "SingletonSeed":
        w = 2 * _bits(n)
        rng = random.Random(f"{seed}:sig")
        pairs = []
        for _ in range(c * _bits(n)):
            a = rng.getrandbits(w) | 1
            t = rng.getrandbits(w)
            pairs.append((a, t))
        return SingletonSeed(w=w, pairs=pairs)

    @property
    def sig_bits(self) -> int:
        return len(self.pairs)

    def sig(self, x: int) -> int:
        out = 0
        for i, (a, t) in enumerate(self.pairs):
            out |= sample_bit(a, t, x, self.w) << i
        return out

    def uid(self, x: int) -> int:
        """uid(x) = (x, Sig(x)) packed with the name in the low bits."""
        return (self.sig(x) << self.w) | x

    @property
    def uid_bits(self) -> int:
        return self.w + self.sig_bits

    def singleton(self, agg: int) -> int | None:
        """Recover the packed name when agg is the uid of one edge; an
        aggregate of several uids is rejected unless its signature happens
        to match (probability bounded by the distinguisher analysis)."""
        if agg == 0:
            return None
        x = agg & ((1 << self.w) - 1)
        sig = agg >> self.w
        if self.sig(x) == sig:
            return x
        return None


# ---------------------------------------------------------------------------
# long scheme


@dataclass
class RandEdgeLabel:
    is_tree: bool
    lo: int                    # subtree pre-min (tree) or pre(u) (non-tree)
    hi: int                    # subtree pre-max (tree) or pre(v) (non-tree)
    sk0: int                   # cut aggregate (tree) or edge sketch
    skmat: int = 0             # short scheme only: packed sketch matrix


@dataclass
class RandMeta(SchemeMeta):
    c: int = SIG_C_DEFAULT
    short: bool = False
    B: int = 0
    jcols: int = 0

    @property
    def sk0_bits(self) -> int:
        if self.short:
            return _bits(self.n) ** 2
        return self.f + self.c * _bits(self.n)

    def sig_seed(self) -> SingletonSeed:
        return SingletonSeed.generate(self.seed, self.n, self.c)


def short_regime_ok(n: int, f: int) -> bool:
    return f >= 2 * _bits(n) ** 2


def _boruvka_params(n: int, f: int) -> tuple[int, int]:
    lg2 = _bits(n) ** 2
    B = max(1, math.ceil(math.log2(max(f / max(lg2, 1), 2))) + 3)
    return B, 0


def build_rand_long(g: Graph, f: int, seed: int, c: int = SIG_C_DEFAULT):
    forest = BfsForest(g)
    meta = RandMeta(
        n=g.n, aux_n=g.n, m=g.m, f=f, phi=Fraction(1, 2), h=1,
        comp_roots=forest.comp_pre_starts, seed=seed, c=c, short=False,
    )
    nbits = meta.sk0_bits
    sk_edge = [0] * g.m
    for eid in range(g.m):
        if eid not in forest.tree_edges:
            sk_edge[eid] = _edge_bits(seed, "sk0", eid, nbits)
    # subtree aggregates: XOR of sk0 over non-tree edges with one endpoint
    # below; per-vertex star XOR then a bottom-up pass
    agg = [0] * g.n
    for eid in range(g.m):
        if eid in forest.tree_edges:
            continue
        u, v = g.edges[eid]
        agg[u] ^= sk_edge[eid]
        agg[v] ^= sk_edge[eid]
    sub = list(agg)
    for v in reversed(forest.order):
        p = forest.parent[v]
        if p != -1:
            sub[p] ^= sub[v]
    labels = []
    for eid in range(g.m):
        u, v = g.edges[eid]
        if eid in forest.tree_edges:
            child = v if forest.parent[v] == u else u
            lo, hi = forest.subtree_range(child)
            labels.append(RandEdgeLabel(is_tree=True, lo=lo, hi=hi, sk0=sub[child]))
        else:
            labels.append(
                RandEdgeLabel(
                    is_tree=False, lo=forest.pre[u], hi=forest.pre[v],
                    sk0=sk_edge[eid],
                )
            )
    vertex_labels = [forest.subtree_range(v) for v in range(g.n)]
    return vertex_labels, labels, meta


class _Regions:
    """Fault-split regions of the spanning forest, from fault labels."""

    def __init__(self, records: dict[int, RandEdgeLabel], comp_starts: list[int]):
        self.ranges: list[tuple[int, int]] = []   # child-subtree ranges
        for eid, lab in sorted(records.items()):
            if lab.is_tree:
                self.ranges.append((lab.lo, lab.hi))
        self.comp_starts = comp_starts
        # region ids: 0..len(ranges)-1 for subtree regions; component roots
        # get ids len(ranges) + ci
        self.k = len(self.ranges)

    def comp_of_pre(self, pre: int) -> int:
        from bisect import bisect_right
        return bisect_right(self.comp_starts, pre) - 1

    def region_of(self, pre: int) -> int:
        best = None
        for i, (a, b) in enumerate(self.ranges):
            if a <= pre <= b:
                if best is None or b - a < self.ranges[best][1] - self.ranges[best][0]:
                    best = i
        if best is None:
            return self.k + self.comp_of_pre(pre)
        return best

    def parent_region(self, i: int) -> int:
        """Region just above subtree-range i (its surrounding region)."""
        a, b = self.ranges[i]
        best = None
        for j, (a2, b2) in enumerate(self.ranges):
            if j != i and a2 <= a and b <= b2:
                if best is None or b2 - a2 < self.ranges[best][1] - self.ranges[best][0]:
                    best = j
        if best is None:
            return self.k + self.comp_of_pre(a)
        return best

    def all_region_ids(self, records) -> list[int]:
        ids = set(range(self.k))
        for i in range(self.k):
            ids.add(self.parent_region(i))
        for eid, lab in records.items():
            if not lab.is_tree:
                ids.add(self.region_of(lab.lo))
                ids.add(self.region_of(lab.hi))
        return sorted(ids)


def _null_space_classes(vectors: dict[int, int]) -> dict[int, tuple]:
    """Group region ids by their pattern across a GF(2) null-space basis
    of the aggregate vectors (zero-XOR subsets <=> unions of components)."""
    ids = sorted(vectors)
    rows = []
    for pos, i in enumerate(ids):
        rows.append((vectors[i], 1 << pos))
    pivots: list[tuple[int, int]] = []
    null_markers: list[int] = []
    for vec, marker in rows:
        for pv, pm in pivots:
            if vec ^ pv < vec:
                vec ^= pv
                marker ^= pm
        if vec == 0:
            null_markers.append(marker)
        else:
            pivots.append((vec, marker))
            pivots.sort(key=lambda t: -t[0])
    patterns: dict[int, tuple] = {}
    for pos, i in enumerate(ids):
        patterns[i] = tuple((mk >> pos) & 1 for mk in null_markers)
    return patterns


@dataclass
class RandQueryResult:
    meta: RandMeta
    regions: _Regions
    class_by_region: dict[int, tuple]
    part_history: list[int] = field(default_factory=list)

    def class_of(self, lv: tuple[int, int]):
        pre = lv[0]
        rid = self.regions.region_of(pre)
        if rid in self.class_by_region:
            return ("r", self.class_by_region[rid])
        return ("c", self.regions.comp_of_pre(pre))

    def connected(self, lv_s, lv_t) -> bool:
        return self.class_of(lv_s) == self.class_of(lv_t)

    def component_count(self) -> int:
        n_comps = len(self.regions.comp_starts)
        touched_comps = set()
        classes = set()
        for rid, cl in self.class_by_region.items():
            classes.add(cl)
            if rid >= self.regions.k:
                touched_comps.add(rid - self.regions.k)
            else:
                touched_comps.add(
                    self.regions.comp_of_pre(self.regions.ranges[rid][0])
                )
        return len(classes) + n_comps - len(touched_comps)


def _region_aggregates(records, regions: _Regions, attr: str) -> dict[int, int]:
    """sk_{E-F} aggregates per region: tree-fault subtree sketches XORed
    into both sides, then non-tree faults removed from their cut."""
    agg: dict[int, int] = {i: 0 for i in regions.all_region_ids(records)}
    ranges_idx = {}
    i = 0
    for eid, lab in sorted(records.items()):
        if lab.is_tree:
            ranges_idx[eid] = i
            i += 1
    for eid, lab in sorted(records.items()):
        if lab.is_tree:
            i = ranges_idx[eid]
            sk = getattr(lab, attr)
            agg[i] ^= sk
            agg[regions.parent_region(i)] ^= sk
        else:
            ra = regions.region_of(lab.lo)
            rb = regions.region_of(lab.hi)
            if ra != rb:
                sk = getattr(lab, attr)
                agg[ra] ^= sk
                agg[rb] ^= sk
    return agg


def query_rand_long(records: dict[int, RandEdgeLabel], meta: RandMeta) -> RandQueryResult:
    if len(records) > meta.f:
        raise ValueError(f"fault set of size {len(records)} exceeds f={meta.f}")
    regions = _Regions(records, meta.comp_roots)
    agg = _region_aggregates(records, regions, "sk0")
    patterns = _null_space_classes(agg)
    return RandQueryResult(meta=meta, regions=regions, class_by_region=patterns)


# ---------------------------------------------------------------------------
# short scheme


def rank_of(seed: int, i: int, eid: int, jcols: int) -> int:
    """Geometric rank, Pr(rank = j) = 2^-j, capped at jcols."""
    rng = random.Random(f"{seed}:rank:{i}:{eid}")
    j = 1
    while j < jcols and rng.getrandbits(1):
        j += 1
    return j


def build_rand_short(g: Graph, f: int, seed: int, c: int = SIG_C_DEFAULT):
    if not short_regime_ok(g.n, f):
        raise ValueError(
            f"short scheme needs f >= 2 log^2 n = {2 * _bits(g.n) ** 2}; route "
            "small f to the long scheme"
        )
    forest = BfsForest(g)
    B, _ = _boruvka_params(g.n, f)
    jcols = max(1, _bits(max(g.m, 2))) + 2
    meta = RandMeta(
        n=g.n, aux_n=g.n, m=g.m, f=f, phi=Fraction(1, 2), h=1,
        comp_roots=forest.comp_pre_starts, seed=seed, c=c, short=True,
        B=B, jcols=jcols,
    )
    sig = meta.sig_seed()
    nbits0 = meta.sk0_bits
    cell = sig.uid_bits
    nb = _bits(g.n)

    def edge_name(eid: int) -> int:
        u, v = g.edges[eid]
        a, b = sorted((forest.pre[u], forest.pre[v]))
        return (a << nb) | b

    sk0_edge = [0] * g.m
    mat_edge = [0] * g.m
    for eid in range(g.m):
        if eid in forest.tree_edges:
            continue
        sk0_edge[eid] = _edge_bits(seed, "sk0s", eid, nbits0)
        uid = sig.uid(edge_name(eid))
        m = 0
        for i in range(B):
            j = rank_of(seed, i, eid, jcols)
            m |= uid << ((i * jcols + (j - 1)) * cell)
        mat_edge[eid] = m
    agg0 = [0] * g.n
    aggm = [0] * g.n
    for eid in range(g.m):
        if eid in forest.tree_edges:
            continue
        u, v = g.edges[eid]
        agg0[u] ^= sk0_edge[eid]
        agg0[v] ^= sk0_edge[eid]
        aggm[u] ^= mat_edge[eid]
        aggm[v] ^= mat_edge[eid]
    sub0 = list(agg0)
    subm = list(aggm)
    for v in reversed(forest.order):
        p = forest.parent[v]
        if p != -1:
            sub0[p] ^= sub0[v]
            subm[p] ^= subm[v]
    labels = []
    for eid in range(g.m):
        u, v = g.edges[eid]
        if eid in forest.tree_edges:
            child = v if forest.parent[v] == u else u
            lo, hi = forest.subtree_range(child)
            labels.append(
                RandEdgeLabel(is_tree=True, lo=lo, hi=hi, sk0=sub0[child], skmat=subm[child])
            )
        else:
            labels.append(
                RandEdgeLabel(
                    is_tree=False, lo=forest.pre[u], hi=forest.pre[v],
                    sk0=sk0_edge[eid], skmat=mat_edge[eid],
                )
            )
    vertex_labels = [forest.subtree_range(v) for v in range(g.n)]
    return vertex_labels, labels, meta


def query_rand_short(records: dict[int, RandEdgeLabel], meta: RandMeta) -> RandQueryResult:
    if len(records) > meta.f:
        raise ValueError(f"fault set of size {len(records)} exceeds f={meta.f}")
    sig = meta.sig_seed()
    cell = sig.uid_bits
    cellmask = (1 << cell) - 1
    nb = _bits(meta.n)
    regions = _Regions(records, meta.comp_roots)
    agg0 = _region_aggregates(records, regions, "sk0")
    aggm = _region_aggregates(records, regions, "skmat")
    fault_name_set = set()
    for eid, lab in records.items():
        if not lab.is_tree:
            a, b = sorted((lab.lo, lab.hi))
            fault_name_set.add((a << nb) | b)
    ids = sorted(agg0)
    uf = {i: i for i in ids}

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    mat = dict(aggm)
    sk0 = dict(agg0)
    history = []
    for step in range(meta.B):
        parts = {}
        for i in ids:
            parts.setdefault(find(i), None)
        live = [p for p in parts if sk0[p] != 0]
        history.append(len(live))
        if len(live) <= 1:
            break
        merges = []
        for p in live:
            row = mat[p] >> (step * meta.jcols * cell)
            for j in range(meta.jcols):
                agg = (row >> (j * cell)) & cellmask
                x = sig.singleton(agg)
                if x is None or x in fault_name_set:
                    continue
                pa, pb = x >> nb, x & ((1 << nb) - 1)
                ra, rb = regions.region_of(pa), regions.region_of(pb)
                if ra not in uf or rb not in uf:
                    continue
                fa, fb = find(ra), find(rb)
                if fa != fb:
                    merges.append((fa, fb))
                    break
        for fa, fb in merges:
            ra, rb = find(fa), find(fb)
            if ra == rb:
                continue
            uf[rb] = ra
            mat[ra] ^= mat[rb]
            sk0[ra] ^= sk0[rb]
    # final: group surviving parts by sk0 elimination
    final_parts = sorted({find(i) for i in ids})
    vectors = {p: sk0[p] for p in final_parts}
    patterns = _null_space_classes(vectors)
    class_by_region = {i: patterns[find(i)] for i in ids}
    return RandQueryResult(
        meta=meta, regions=regions, class_by_region=class_by_region,
        part_history=history,
    )
