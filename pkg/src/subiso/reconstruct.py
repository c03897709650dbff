"""Turning archived configuration lists back into full embeddings.

Starting from a batch of (mapping, color set) queries at one node, the pass
walks the decomposition asking each child which of its configurations could
have produced the queried ones, then glues the children's answers back
together: introduce nodes append the placed vertex, forget nodes flatten the
lists of the child pairs that restrict to the query, and join nodes combine
every compatible pair of halves.  Each node's archive is decompressed at
most once per call; queries are batched so the tree is traversed once.

Full embeddings are tuples over the node's covered pattern vertices in
ascending vertex order, so the root's answers are occurrence tuples indexed
by pattern vertex id.
"""

from __future__ import annotations

import time

from .codec import decompress
from .dp import DeadlineExceeded
from .treedecomp import FORGET, INTRODUCE, LEAF, NiceTreeDecomposition

ALL_MAPPINGS = "all-mappings"
DISTINCT_VERTEX_SETS = "distinct-vertex-sets"
MODES = (ALL_MAPPINGS, DISTINCT_VERTEX_SETS)


class ArchiveCorruption(RuntimeError):
    """A queried configuration is missing from the archive it came from."""


class ArchiveView:
    """Decompress-once access to a per-node archive, with access counters."""

    def __init__(self, ntd: NiceTreeDecomposition, archive: dict[int, bytes]):
        self._ntd = ntd
        self._archive = archive
        self._cache: dict[int, list] = {}
        self.decompress_counts: dict[int, int] = {}

    def get(self, nid: int) -> list:
        entries = self._cache.get(nid)
        if entries is None:
            bag_size = len(self._ntd.nodes[nid].bag)
            entries = decompress(self._archive[nid], bag_size)
            self._cache[nid] = entries
            self.decompress_counts[nid] = self.decompress_counts.get(nid, 0) + 1
        return entries


class OccurrenceSet:
    """Deduplicated occurrences, keyed per mode, in insertion order.

    all-mappings keys every embedding tuple; distinct-vertex-sets keys the
    sorted image set and keeps the first embedding seen as representative.
    """

    def __init__(self, mode: str = ALL_MAPPINGS):
        if mode not in MODES:
            raise ValueError(f"unknown occurrence mode: {mode!r}")
        self.mode = mode
        self._items: dict[tuple, tuple] = {}

    def key_for(self, mapping: tuple) -> tuple:
        if self.mode == ALL_MAPPINGS:
            return mapping
        return tuple(sorted(mapping))

    def add(self, mapping: tuple) -> bool:
        key = self.key_for(mapping)
        if key in self._items:
            return False
        self._items[key] = mapping
        return True

    def mappings(self) -> list[tuple]:
        return list(self._items.values())

    def keys(self) -> set[tuple]:
        return set(self._items)

    def __contains__(self, mapping: tuple) -> bool:
        return self.key_for(mapping) in self._items

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items.values())


def enumerate_occurrences(root_results: list[list[tuple]], mode: str,
                          cap: int) -> OccurrenceSet:
    """Collect the root query's embeddings into a fresh set, stopping at cap."""
    occurrences = OccurrenceSet(mode)
    for mapping in root_results[0]:
        if len(occurrences) >= cap:
            break
        occurrences.add(mapping)
    return occurrences


class _Ticker:
    """Periodic deadline check for the assembly loops."""

    __slots__ = ("deadline", "count")

    def __init__(self, deadline):
        self.deadline = deadline
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count & 0xFFF:
            return
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded()


def reconstruct(ntd: NiceTreeDecomposition, start: int, queries: list,
                archive, coloring, limit=None, deadline=None) -> list[list[tuple]]:
    """Answer each (mapping, color set) query at ``start`` with the list of
    full embeddings of the covered pattern subgraph that realize it.

    ``limit`` truncates every per-query list (used to honor result caps
    without materializing everything); ``deadline`` aborts long rebuilds.
    """
    view = archive if isinstance(archive, ArchiveView) else ArchiveView(ntd, archive)
    nodes = ntd.nodes
    subtree_masks = ntd.subtree_masks()

    def covered(nid: int) -> tuple[int, ...]:
        mask = subtree_masks[nid]
        return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)

    preorder = []
    stack = [start]
    while stack:
        nid = stack.pop()
        preorder.append(nid)
        stack.extend(nodes[nid].children)

    queries_of: dict[int, list] = {start: list(queries)}
    index_of: dict[int, dict] = {start: {pair: i for i, pair in enumerate(queries)}}
    if len(index_of[start]) != len(queries):
        raise ValueError("duplicate query pairs")
    wiring: dict[int, tuple] = {}

    def child_slot(nid: int, pair) -> int:
        idx = index_of.setdefault(nid, {})
        slot = idx.get(pair)
        if slot is None:
            slot = len(idx)
            idx[pair] = slot
            queries_of.setdefault(nid, []).append(pair)
        return slot

    # Pass 1, parents before children: verify each query against the node's
    # own archived list, then derive child queries (deduplicated) plus the
    # wiring needed to assemble answers on the way back up.
    for nid in preorder:
        pairs = queries_of.get(nid)
        if not pairs:
            continue
        if deadline is not None and time.monotonic() > deadline:
            raise DeadlineExceeded()
        node = nodes[nid]
        own: dict[tuple, frozenset] = {}
        for mapping, colorsets in view.get(nid):
            own[mapping] = frozenset(colorsets)
        for mapping, colorset in pairs:
            if colorset not in own.get(mapping, ()):
                raise ArchiveCorruption(
                    f"queried configuration missing at node {nid}"
                )
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            child = node.children[0]
            pos = node.bag.index(node.vertex)
            plan = []
            for mapping, colorset in pairs:
                placed = mapping[pos]
                reduced = mapping[:pos] + mapping[pos + 1:]
                inner = colorset & ~(1 << coloring[placed])
                if inner == colorset:
                    raise ArchiveCorruption(
                        f"color of introduced vertex missing at node {nid}"
                    )
                plan.append(child_slot(child, (reduced, inner)))
            wiring[nid] = (pos, plan)
        elif node.kind == FORGET:
            child = node.children[0]
            child_bag = tuple(sorted(node.bag + (node.vertex,)))
            pos = child_bag.index(node.vertex)
            by_restriction: dict[tuple, list] = {}
            for mapping, colorsets in view.get(child):
                key = mapping[:pos] + mapping[pos + 1:]
                by_restriction.setdefault(key, []).append(
                    (mapping, frozenset(colorsets))
                )
            plan = []
            for mapping, colorset in pairs:
                slots = [child_slot(child, (full, colorset))
                         for full, available in by_restriction.get(mapping, ())
                         if colorset in available]
                if not slots:
                    raise ArchiveCorruption(
                        f"no child configuration explains node {nid}"
                    )
                plan.append(slots)
            wiring[nid] = (None, plan)
        else:  # join: C' determines its partner C'' = (C \ C') | bag colors
            left, right = node.children
            left_sets = {m: cs for m, cs in view.get(left)}
            right_sets = {m: frozenset(cs) for m, cs in view.get(right)}
            bit_of = [1 << c for c in coloring]
            plan = []
            for mapping, colorset in pairs:
                bag_mask = 0
                for t in mapping:
                    bag_mask |= bit_of[t]
                combos = []
                for ca in left_sets.get(mapping, ()):
                    if ca & ~colorset or ca & bag_mask != bag_mask:
                        continue
                    cb = (colorset & ~ca) | bag_mask
                    if cb in right_sets.get(mapping, ()):
                        combos.append((child_slot(left, (mapping, ca)),
                                       child_slot(right, (mapping, cb))))
                if not combos:
                    raise ArchiveCorruption(
                        f"no child configurations explain join node {nid}"
                    )
                plan.append(combos)
            wiring[nid] = (None, plan)

    # Pass 2, children before parents: assemble embedding lists per query.
    ticker = _Ticker(deadline)
    results: dict[int, list] = {}
    for nid in reversed(preorder):
        pairs = queries_of.get(nid)
        if not pairs:
            continue
        node = nodes[nid]
        if node.kind == LEAF:
            results[nid] = [[mapping] for mapping, _ in pairs]
            continue
        if node.kind == INTRODUCE:
            child = node.children[0]
            pos_bag, plan = wiring[nid]
            insert_at = covered(nid).index(node.vertex)
            child_results = results[child]
            answer = []
            for (mapping, _), slot in zip(pairs, plan):
                placed = mapping[pos_bag]
                built = []
                for phi in child_results[slot]:
                    built.append(phi[:insert_at] + (placed,) + phi[insert_at:])
                    ticker.tick()
                    if limit is not None and len(built) >= limit:
                        break
                answer.append(built)
            results[nid] = answer
        elif node.kind == FORGET:
            child = node.children[0]
            _, plan = wiring[nid]
            child_results = results[child]
            answer = []
            for slots in plan:
                built = []
                for slot in slots:
                    for phi in child_results[slot]:
                        built.append(phi)
                        ticker.tick()
                        if limit is not None and len(built) >= limit:
                            break
                    if limit is not None and len(built) >= limit:
                        break
                answer.append(built)
            results[nid] = answer
        else:  # join
            left, right = node.children
            _, plan = wiring[nid]
            left_positions = {v: i for i, v in enumerate(covered(left))}
            right_positions = {v: i for i, v in enumerate(covered(right))}
            # Shared vertices (exactly the bag) are read from the left half.
            sources = [(True, left_positions[v]) if v in left_positions
                       else (False, right_positions[v])
                       for v in covered(nid)]
            left_results, right_results = results[left], results[right]
            answer = []
            for combos in plan:
                built = []
                for lslot, rslot in combos:
                    for phi_a in left_results[lslot]:
                        for phi_b in right_results[rslot]:
                            built.append(tuple(
                                phi_a[i] if from_left else phi_b[i]
                                for from_left, i in sources
                            ))
                            ticker.tick()
                            if limit is not None and len(built) >= limit:
                                break
                        if limit is not None and len(built) >= limit:
                            break
                    if limit is not None and len(built) >= limit:
                        break
                answer.append(built)
            results[nid] = answer

    return results[start] if queries else []
