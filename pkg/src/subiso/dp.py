"""Color-coding dynamic programming over a nice tree decomposition.

The target graph is colored uniformly at random with one color per pattern
vertex; a run then sweeps the decomposition bottom-up, keeping per node only
the configurations that are realizable: pairs of a partial mapping (an
ordered tuple of target vertices, one per bag position) and the ascending
list of color-set masks usable by some colorful embedding of the pattern
vertices covered so far.  Lists are archived in compressed form so a later
reconstruction pass can replay how each configuration arose.

Color sets are 32-bit masks (bit i = color i+1); colors are 0-based bits
internally.  Entry lists stay sorted by mapping tuple, which lets forget and
join nodes run as merges without hashing.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .codec import compress
from .graph import Graph, MAX_PATTERN_VERTICES, vertices_within
from .treedecomp import (FORGET, INTRODUCE, JOIN, LEAF, NiceNode,
                         NiceTreeDecomposition)


class MemoryBudgetExceeded(RuntimeError):
    """Configuration storage outgrew the configured budget."""

    def __init__(self, node: int, entry_count: int, total_bytes: int):
        super().__init__(
            f"memory budget exceeded at node {node}: "
            f"{entry_count} entries in flight, {total_bytes} bytes archived"
        )
        self.node = node
        self.entry_count = entry_count
        self.total_bytes = total_bytes


class DeadlineExceeded(RuntimeError):
    """Raised from inner loops once the configured deadline has passed."""


@dataclass
class ConfigList:
    """The realizable slice of one node's table: (mapping, colorsets) pairs,
    sorted by mapping, color sets ascending and duplicate-free."""

    node: int
    entries: list = field(default_factory=list)


def random_coloring(n_target: int, n_pattern: int, rng) -> list[int]:
    """Independent uniform color per target vertex, 0-based."""
    if n_pattern < 1:
        raise ValueError("need at least one color")
    randrange = rng.randrange
    return [randrange(n_pattern) for _ in range(n_target)]


def iteration_count(n_pattern: int, epsilon: float) -> int:
    """Colorings needed so a fixed occurrence is missed with probability
    at most epsilon; a single occurrence turns colorful with probability
    n!/n^n per coloring."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be strictly between 0 and 1")
    hit = math.factorial(n_pattern) / n_pattern ** n_pattern
    return max(1, math.ceil(math.log(1.0 / epsilon) / hit))


class _Guard:
    """Cheap periodic deadline and memory-budget checks for hot loops."""

    __slots__ = ("deadline", "budget", "archived", "pending", "since_check",
                 "current_node")

    CHECK_EVERY = 4096

    def __init__(self, deadline=None, budget=None):
        self.deadline = deadline
        self.budget = budget
        self.archived = 0
        self.pending = 0
        self.since_check = 0
        self.current_node = -1

    def tick(self, entry_count: int, entry_cost: int):
        # entry_cost approximates bytes held per in-flight entry
        self.pending += entry_cost
        self.since_check += 1
        if self.since_check < self.CHECK_EVERY:
            return
        self.since_check = 0
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded()
        if self.budget is not None and self.archived + self.pending > self.budget:
            raise MemoryBudgetExceeded(self.current_node, entry_count, self.archived)

    def archived_bytes(self, count: int):
        self.archived += count
        self.pending = 0
        if self.budget is not None and self.archived > self.budget:
            raise MemoryBudgetExceeded(self.current_node, 0, self.archived)

    def check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded()


def process_leaf(node: NiceNode, g: Graph, mask, coloring) -> ConfigList:
    """One entry per allowed target vertex; its color set is the singleton
    color of that vertex."""
    u = node.bag[0]
    entries = [((x,), [1 << coloring[x]])
               for x in range(g.vertex_count) if mask[x] >> u & 1]
    return ConfigList(node=-1, entries=entries)


def process_introduce(node: NiceNode, child_list: ConfigList, g: Graph,
                      f: Graph, coloring, mask, dist,
                      ball_cache=None, guard: _Guard | None = None) -> ConfigList:
    """Extend every child configuration by a placement of the new vertex.

    Candidates come from the strongest applicable pruning: common
    neighbourhood of the images of the new vertex's bag neighbours; else
    the ball around the image of the nearest bag vertex in the pattern
    metric; else every target vertex.
    """
    u = node.vertex
    bag = node.bag
    pos = bag.index(u)
    child_bag = bag[:pos] + bag[pos + 1:]
    n_f = f.vertex_count
    neighbor_positions = [i for i, w in enumerate(child_bag) if f.has_edge(u, w)]
    anchor = None
    if not neighbor_positions and child_bag:
        finite = [(dist[w][u], i) for i, w in enumerate(child_bag)
                  if dist[w][u] < n_f]
        if finite:
            anchor = min(finite)
    if ball_cache is None:
        ball_cache = {}

    neighbor_sets = g.neighbor_sets
    bit_of = [1 << c for c in coloring]
    out = []
    append = out.append
    everyone = range(g.vertex_count)
    for mapping, colorsets in child_list.entries:
        if neighbor_positions:
            if len(neighbor_positions) == 1:
                candidates = neighbor_sets[mapping[neighbor_positions[0]]]
            else:
                candidates = frozenset.intersection(
                    *(neighbor_sets[mapping[i]] for i in neighbor_positions)
                )
        elif anchor is not None:
            radius, anchor_pos = anchor
            source = mapping[anchor_pos]
            key = (source, radius)
            ball = ball_cache.get(key)
            if ball is None:
                ball = vertices_within(g, source, radius)
                ball_cache[key] = ball
            candidates = ball
        else:
            candidates = everyone
        head = mapping[:pos]
        tail = mapping[pos:]
        for x in candidates:
            if not mask[x] >> u & 1:
                continue
            color_bit = bit_of[x]
            extended = [c | color_bit for c in colorsets if not c & color_bit]
            if extended:
                append((head + (x,) + tail, extended))
                if guard is not None:
                    guard.tick(len(out), 40 + 9 * len(extended))
    out.sort(key=_mapping_key)
    return ConfigList(node=-1, entries=out)


def _mapping_key(entry):
    return entry[0]


def process_forget(node: NiceNode, child_list: ConfigList) -> ConfigList:
    """Drop the forgotten position; configurations whose shortened mappings
    collide merge their color-set lists."""
    u = node.vertex
    child_bag = tuple(sorted(node.bag + (u,)))
    pos = child_bag.index(u)
    buckets: dict = {}
    for mapping, colorsets in child_list.entries:
        key = mapping[:pos] + mapping[pos + 1:]
        slot = buckets.get(key)
        if slot is None:
            buckets[key] = [colorsets]
        else:
            slot.append(colorsets)
    entries = []
    for key in sorted(buckets):
        lists = buckets[key]
        if len(lists) == 1:
            merged = list(lists[0])
        else:
            merged = sorted(set().union(*lists))
        entries.append((key, merged))
    return ConfigList(node=-1, entries=entries)


def process_join(node: NiceNode, left: ConfigList, right: ConfigList,
                 coloring) -> ConfigList:
    """Keep mappings present in both children; a pair of color sets glues
    iff it overlaps exactly in the bag colors."""
    bit_of = [1 << c for c in coloring]
    entries = []
    a, b = left.entries, right.entries
    i = j = 0
    while i < len(a) and j < len(b):
        mapping = a[i][0]
        other = b[j][0]
        if mapping < other:
            i += 1
            continue
        if mapping > other:
            j += 1
            continue
        bag_mask = 0
        for t in mapping:
            bag_mask |= bit_of[t]
        combos = {ca | cb
                  for ca in a[i][1] for cb in b[j][1]
                  if ca & cb == bag_mask}
        if combos:
            entries.append((mapping, sorted(combos)))
        i += 1
        j += 1
    return ConfigList(node=-1, entries=entries)


def run_iteration(g: Graph, f: Graph, ntd: NiceTreeDecomposition, coloring,
                  mask, dist, memory_budget=None, deadline=None,
                  ball_cache=None) -> tuple[ConfigList, dict[int, bytes]]:
    """One bottom-up sweep under a fixed coloring.

    Returns the root list (empty, or exactly one entry pairing the empty
    mapping with the full color mask) and the per-node compressed archive
    needed to reconstruct occurrences.
    """
    n_f = f.vertex_count
    if n_f > MAX_PATTERN_VERTICES:
        raise ValueError(
            f"pattern graph too large: {n_f} vertices (limit {MAX_PATTERN_VERTICES})"
        )
    guard = _Guard(deadline=deadline, budget=memory_budget)
    archive: dict[int, bytes] = {}
    live: dict[int, ConfigList] = {}
    for nid in ntd.post_order():
        guard.check_deadline()
        guard.current_node = nid
        node = ntd.nodes[nid]
        if node.kind == LEAF:
            result = process_leaf(node, g, mask, coloring)
        elif node.kind == INTRODUCE:
            child = node.children[0]
            result = process_introduce(node, live.pop(child), g, f, coloring,
                                       mask, dist, ball_cache, guard)
        elif node.kind == FORGET:
            result = process_forget(node, live.pop(node.children[0]))
        else:
            first, second = node.children
            result = process_join(node, live.pop(first), live.pop(second),
                                  coloring)
        result.node = nid
        live[nid] = result
        buf = compress(result.entries)
        archive[nid] = buf
        guard.archived_bytes(len(buf))

    root_list = live[ntd.root]
    if root_list.entries:
        full = (1 << n_f) - 1
        if len(root_list.entries) != 1 or root_list.entries[0] != ((), [full]):
            raise RuntimeError("root configuration list is inconsistent")
    return root_list, archive
