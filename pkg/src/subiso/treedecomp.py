"""Tree decompositions of the pattern graph.

Exact width is found via dynamic programming over subsets of eliminated
vertices: for each S the table holds the best width achievable when S is
eliminated first, and the transition cost for eliminating v after S is the
number of vertices reachable from v through S (v's clique size at that point
in the filled graph).  The optimal elimination ordering is then turned into a
decomposition whose bags are the elimination cliques, and finally into the
nice form (leaf/introduce/forget/join) used by the dynamic programming over
partial mappings.  Leaf bags hold a single vertex and the root bag is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph, MAX_PATTERN_VERTICES

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"

# Full subset DP tables are kept up to this size; beyond it the search
# switches to iterative deepening over the same subset space with memoized
# dead states (identical results, bounded memory).
_FULL_TABLE_LIMIT = 16


@dataclass
class TreeDecomposition:
    """Bags indexed by node id, tree edges over node ids, and a root."""

    bags: list[tuple[int, ...]]
    edges: list[tuple[int, int]]
    root: int

    @property
    def width(self) -> int:
        return max(len(bag) for bag in self.bags) - 1


@dataclass
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    children: tuple[int, ...]
    vertex: Optional[int] = None  # introduced or forgotten vertex


@dataclass
class NiceTreeDecomposition:
    nodes: list[NiceNode] = field(default_factory=list)
    root: int = 0

    @property
    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1

    def post_order(self) -> list[int]:
        """Children-before-parent order, computed without recursion."""
        order = []
        stack = [(self.root, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                order.append(nid)
                continue
            stack.append((nid, True))
            for child in self.nodes[nid].children:
                stack.append((child, False))
        return order

    def subtree_masks(self) -> list[int]:
        """Per node, bitmask of pattern vertices in its bag or any descendant's."""
        masks = [0] * len(self.nodes)
        for nid in self.post_order():
            node = self.nodes[nid]
            mask = 0
            for v in node.bag:
                mask |= 1 << v
            for child in node.children:
                mask |= masks[child]
            masks[nid] = mask
        return masks


def _adjacency_masks(f: Graph) -> list[int]:
    masks = []
    for v in range(f.vertex_count):
        bits = 0
        for w in f.adjacency[v]:
            bits |= 1 << w
        masks.append(bits)
    return masks


def _fill_degree(adj_masks: list[int], through: int, v: int) -> int:
    """Number of vertices outside ``through`` (and != v) reachable from v
    via paths whose interior lies inside ``through``."""
    border = adj_masks[v]
    component = 0
    frontier = border & through
    while frontier:
        component |= frontier
        grow = 0
        m = frontier
        while m:
            low = m & -m
            grow |= adj_masks[low.bit_length() - 1]
            m ^= low
        border |= grow
        frontier = grow & through & ~component
    return (border & ~through & ~(1 << v)).bit_count()


def _subset_dp(adj_masks: list[int], n: int) -> tuple[int, list[int]]:
    size = 1 << n
    best = [0] * size
    best[0] = -1
    fill_degree = _fill_degree
    for subset in range(1, size):
        m = subset
        value = n
        while m:
            bit = m & -m
            m ^= bit
            rest = subset ^ bit
            cost = best[rest]
            degree = fill_degree(adj_masks, rest, bit.bit_length() - 1)
            if degree > cost:
                cost = degree
            if cost < value:
                value = cost
        best[subset] = value
    # Walk back from the full set, repeatedly picking the vertex eliminated
    # last; ties broken towards the lowest vertex id for determinism.
    ordering_rev = []
    subset = size - 1
    while subset:
        target = best[subset]
        m = subset
        while m:
            bit = m & -m
            m ^= bit
            rest = subset ^ bit
            v = bit.bit_length() - 1
            if max(best[rest], fill_degree(adj_masks, rest, v)) == target:
                ordering_rev.append(v)
                subset = rest
                break
        else:  # pragma: no cover - table is self-consistent by construction
            raise AssertionError("inconsistent elimination table")
    ordering_rev.reverse()
    return best[size - 1], ordering_rev


def _min_fill_ordering(f: Graph) -> tuple[int, list[int]]:
    """Greedy minimum-fill elimination; yields an upper bound on the width."""
    work = [set(neigh) for neigh in f.adjacency]
    alive = set(range(f.vertex_count))
    ordering = []
    width = 0
    while alive:
        best_v, best_fill = -1, None
        for v in sorted(alive):
            nbrs = work[v]
            fill = 0
            nbr_list = list(nbrs)
            for i, a in enumerate(nbr_list):
                for b in nbr_list[i + 1:]:
                    if b not in work[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        nbrs = sorted(work[best_v])
        width = max(width, len(nbrs))
        for i, a in enumerate(nbrs):
            work[a].discard(best_v)
            for b in nbrs[i + 1:]:
                work[a].add(b)
                work[b].add(a)
        alive.remove(best_v)
        ordering.append(best_v)
    return width, ordering


def _degeneracy(f: Graph) -> int:
    work = [set(neigh) for neigh in f.adjacency]
    alive = set(range(f.vertex_count))
    worst = 0
    while alive:
        v = min(alive, key=lambda u: (len(work[u]), u))
        worst = max(worst, len(work[v]))
        for w in work[v]:
            work[w].discard(v)
        alive.remove(v)
    return worst


def _deepening_search(adj_masks: list[int], n: int, lower: int,
                      upper: int, upper_order: list[int]) -> tuple[int, list[int]]:
    """Exact width via feasibility checks k = lower..upper-1 over the subset
    space, memoizing subsets proven infeasible for the current k."""
    for k in range(lower, upper):
        dead: set[int] = set()
        order: list[int] = []

        def feasible(subset: int) -> bool:
            remaining = n - subset.bit_count()
            if remaining <= k + 1:
                for v in range(n):
                    if not subset >> v & 1:
                        order.append(v)
                return True
            for v in range(n):
                bit = 1 << v
                if subset & bit:
                    continue
                if _fill_degree(adj_masks, subset, v) > k:
                    continue
                extended = subset | bit
                if extended in dead:
                    continue
                order.append(v)
                if feasible(extended):
                    return True
                order.pop()
                dead.add(extended)
            return False

        if feasible(0):
            return k, order
    return upper, upper_order


def exact_treewidth(f: Graph) -> tuple[int, list[int]]:
    """Exact treewidth of the pattern and an optimal elimination ordering."""
    n = f.vertex_count
    if n == 0:
        raise ValueError("pattern graph is empty")
    if n > MAX_PATTERN_VERTICES:
        raise ValueError(
            f"pattern graph too large: {n} vertices (limit {MAX_PATTERN_VERTICES})"
        )
    if n == 1:
        return 0, [0]
    adj_masks = _adjacency_masks(f)
    if n <= _FULL_TABLE_LIMIT:
        return _subset_dp(adj_masks, n)
    upper, upper_order = _min_fill_ordering(f)
    lower = _degeneracy(f)
    if lower >= upper:
        return upper, upper_order
    return _deepening_search(adj_masks, n, lower, upper, upper_order)


def decomposition_from_ordering(f: Graph, ordering: list[int]) -> TreeDecomposition:
    """Decomposition whose bags are the elimination cliques of ``ordering``."""
    n = f.vertex_count
    if sorted(ordering) != list(range(n)):
        raise ValueError("ordering is not a permutation of the pattern vertices")
    position = {v: i for i, v in enumerate(ordering)}
    work = [set(neigh) for neigh in f.adjacency]
    bags: list[tuple[int, ...]] = []
    edges: list[tuple[int, int]] = []
    for i, v in enumerate(ordering):
        nbrs = sorted(work[v])
        bags.append(tuple(sorted([v] + nbrs)))
        if nbrs:
            # Attach to the bag of the neighbour eliminated soonest after v;
            # the clique formed below guarantees the shared vertices persist.
            parent = min(position[w] for w in nbrs)
            edges.append((i, parent))
        elif i + 1 < n:
            edges.append((i, i + 1))
        for j, a in enumerate(nbrs):
            work[a].discard(v)
            for b in nbrs[j + 1:]:
                work[a].add(b)
                work[b].add(a)
    return TreeDecomposition(bags=bags, edges=edges, root=max(n - 1, 0))


def _children_lists(node_count: int, edges: list[tuple[int, int]],
                    root: int) -> list[list[int]]:
    neighbors: list[list[int]] = [[] for _ in range(node_count)]
    for a, b in edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    children: list[list[int]] = [[] for _ in range(node_count)]
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in neighbors[x]:
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                stack.append(y)
    if len(seen) != node_count:
        raise ValueError("decomposition tree is not connected")
    return children


def _prune_empty_bags(td: TreeDecomposition) -> TreeDecomposition:
    """Drop empty bags, reattaching their neighbours to one hub node."""
    if all(td.bags):
        return td
    bags = list(td.bags)
    neighbors = {i: set() for i in range(len(bags))}
    for a, b in td.edges:
        neighbors[a].add(b)
        neighbors[b].add(a)
    root = td.root
    for i, bag in enumerate(bags):
        if bag:
            continue
        around = sorted(neighbors[i])
        for x in around:
            neighbors[x].discard(i)
        if around:
            hub = around[0]
            for x in around[1:]:
                neighbors[hub].add(x)
                neighbors[x].add(hub)
            if root == i:
                root = hub
        elif root == i:
            raise ValueError("decomposition contains only empty bags")
        del neighbors[i]
    keep = sorted(neighbors)
    renumber = {old: new for new, old in enumerate(keep)}
    new_edges = sorted(
        {(min(renumber[a], renumber[b]), max(renumber[a], renumber[b]))
         for a in neighbors for b in neighbors[a]}
    )
    return TreeDecomposition(
        bags=[bags[i] for i in keep], edges=new_edges, root=renumber[root]
    )


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Rebuild a decomposition in nice form.

    Bags are held as ascending tuples throughout, which fixes one global
    order for every mapping tuple downstream.  Width is preserved, leaves
    carry exactly one vertex, and the root is the final forget with an
    empty bag.
    """
    td = _prune_empty_bags(td)
    bags = [tuple(sorted(bag)) for bag in td.bags]
    children = _children_lists(len(bags), td.edges, td.root)
    nodes: list[NiceNode] = []

    def add(kind: str, bag: tuple[int, ...], kids: tuple[int, ...],
            vertex: Optional[int] = None) -> int:
        nodes.append(NiceNode(kind, bag, kids, vertex))
        return len(nodes) - 1

    def adapt(top: int, from_bag: tuple[int, ...], to_bag: tuple[int, ...]) -> int:
        cur, cur_bag = top, from_bag
        for v in sorted(set(from_bag) - set(to_bag)):
            cur_bag = tuple(x for x in cur_bag if x != v)
            cur = add(FORGET, cur_bag, (cur,), v)
        for v in sorted(set(to_bag) - set(from_bag)):
            cur_bag = tuple(sorted(cur_bag + (v,)))
            cur = add(INTRODUCE, cur_bag, (cur,), v)
        return cur

    def build(x: int) -> int:
        bag = bags[x]
        if not children[x]:
            cur = add(LEAF, (bag[0],), ())
            return adapt(cur, (bag[0],), bag)
        tops = [adapt(build(y), bags[y], bag) for y in children[x]]
        cur = tops[0]
        for other in tops[1:]:
            cur = add(JOIN, bag, (cur, other))
        return cur

    top = adapt(build(td.root), bags[td.root], ())
    return NiceTreeDecomposition(nodes=nodes, root=top)


def _tree_shape_violations(node_count: int, edges: list[tuple[int, int]],
                           root: int) -> list[str]:
    problems = []
    if not 0 <= root < node_count:
        return [f"root id {root} out of range"]
    if len(edges) != node_count - 1:
        problems.append(
            f"{len(edges)} tree edges for {node_count} nodes (expected {node_count - 1})"
        )
    neighbors: list[list[int]] = [[] for _ in range(node_count)]
    for a, b in edges:
        if not (0 <= a < node_count and 0 <= b < node_count):
            problems.append(f"tree edge ({a}, {b}) out of range")
            continue
        neighbors[a].append(b)
        neighbors[b].append(a)
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in neighbors[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != node_count:
        problems.append("decomposition tree is not connected")
    return problems


def _definition_violations(bags: list[tuple[int, ...]], edges: list[tuple[int, int]],
                           root: int, f: Graph) -> list[str]:
    problems = _tree_shape_violations(len(bags), edges, root)
    covered = set()
    for bag in bags:
        covered.update(bag)
    for v in range(f.vertex_count):
        if v not in covered:
            problems.append(f"vertex {v} in no bag")
    for v in covered:
        if not 0 <= v < f.vertex_count:
            problems.append(f"unknown vertex {v} in a bag")
    for u, v in f.edges():
        if not any(u in bag and v in bag for bag in bags):
            problems.append(f"edge {{{u},{v}}} uncovered")
    neighbors: list[list[int]] = [[] for _ in bags]
    for a, b in edges:
        if 0 <= a < len(bags) and 0 <= b < len(bags):
            neighbors[a].append(b)
            neighbors[b].append(a)
    for v in sorted(covered & set(range(f.vertex_count))):
        holders = {i for i, bag in enumerate(bags) if v in bag}
        start = next(iter(holders))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in neighbors[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            problems.append(f"bags containing vertex {v} are disconnected")
    return problems


def _nice_violations(ntd: NiceTreeDecomposition, f: Graph) -> list[str]:
    nodes = ntd.nodes
    edges = [(nid, child) for nid, node in enumerate(nodes)
             for child in node.children]
    problems = _definition_violations(
        [node.bag for node in nodes], edges, ntd.root, f
    )
    root = nodes[ntd.root]
    if root.bag:
        problems.append("root bag is not empty")
    if len(root.children) != 1:
        problems.append("root does not have exactly one child")
    for nid, node in enumerate(nodes):
        if list(node.bag) != sorted(set(node.bag)):
            problems.append(f"node {nid} bag is not in ascending order")
        kids = node.children
        if node.kind == LEAF:
            if kids or len(node.bag) != 1:
                problems.append(f"leaf node {nid} malformed")
        elif node.kind == INTRODUCE:
            if len(kids) != 1 or node.vertex is None:
                problems.append(f"introduce node {nid} malformed")
            elif (node.vertex in nodes[kids[0]].bag
                  or node.bag != tuple(sorted(nodes[kids[0]].bag + (node.vertex,)))):
                problems.append(f"introduce node {nid} bag algebra violated")
        elif node.kind == FORGET:
            if len(kids) != 1 or node.vertex is None:
                problems.append(f"forget node {nid} malformed")
            elif node.bag != tuple(x for x in nodes[kids[0]].bag if x != node.vertex) \
                    or node.vertex not in nodes[kids[0]].bag:
                problems.append(f"forget node {nid} bag algebra violated")
        elif node.kind == JOIN:
            if len(kids) != 2:
                problems.append(f"join node {nid} malformed")
            elif not (node.bag == nodes[kids[0]].bag == nodes[kids[1]].bag):
                problems.append(f"join node {nid} children bags differ")
        else:
            problems.append(f"node {nid} has unknown kind {node.kind!r}")
    return problems


def validate(decomposition, f: Graph) -> list[str]:
    """All violated decomposition invariants; empty means valid."""
    if isinstance(decomposition, NiceTreeDecomposition):
        return _nice_violations(decomposition, f)
    if isinstance(decomposition, TreeDecomposition):
        return _definition_violations(
            [tuple(bag) for bag in decomposition.bags],
            decomposition.edges, decomposition.root, f,
        )
    raise TypeError(f"cannot validate {type(decomposition).__name__}")
