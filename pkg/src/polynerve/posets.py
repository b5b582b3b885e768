"""Finite posets with the order-theoretic primitives everything else builds on:
upsets, heights, chains, connectivity, connectedness types, gradedness,
diamonds, completions, and tree unravellings.

Elements are indexed internally; labels are strings for I/O.  The order is
held as per-element bitmasks so that component and chain analysis stays fast
even on the larger posets the constructions produce.  All values are
immutable after construction and safe to share between concurrent tasks.
"""
from __future__ import annotations

import json
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    CycleDetected,
    DuplicateLabel,
    EmptyPoset,
    IndexOutOfRange,
    LabelCollision,
    NotATree,
    NotComparable,
    NotRooted,
    SizeBudgetExceeded,
    UnknownElement,
)
from .signatures import EPSILON, Signature

COMPLETION_LABEL = "inf"
WIDTH_CAP = 20
CHAIN_BUDGET = 10**6


class FinitePoset:
    """A finite poset over distinct string labels.

    ``up_masks[i]`` has bit ``j`` set iff element ``i <= j`` (reflexive).
    The constructor checks reflexivity, antisymmetry and transitivity; use
    :func:`validate_poset` to build a poset from a raw generator relation.
    """

    def __init__(self, labels: Sequence[str], up_masks: Sequence[int], _trusted: bool = False):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("element labels must be pairwise distinct")
        up_masks = tuple(up_masks)
        if len(up_masks) != len(labels):
            raise ValueError("one relation row per element required")
        if not _trusted:
            _check_partial_order(up_masks)
        self.labels = labels
        self._up = up_masks
        self._index = {lab: i for i, lab in enumerate(labels)}

    # -- indexing ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def is_empty(self) -> bool:
        return not self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"no element labelled {label!r}") from None

    def leq(self, a: str, b: str) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePoset)
            and self.labels == other.labels
            and self._up == other._up
        )

    def __hash__(self):
        return hash((self.labels, self._up))

    def __repr__(self) -> str:
        return f"FinitePoset({len(self.labels)} elements, height {-1 if self.is_empty else max(self.heights, default=0)})"

    # -- masks -----------------------------------------------------------------

    @cached_property
    def _down(self) -> Tuple[int, ...]:
        down = [0] * self.n
        for i, mask in enumerate(self._up):
            m = mask
            while m:
                b = m & -m
                m ^= b
                down[b.bit_length() - 1] |= 1 << i
        return tuple(down)

    @cached_property
    def _comparable(self) -> Tuple[int, ...]:
        return tuple(u | d for u, d in zip(self._up, self._down))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, labels: Iterable[str]) -> int:
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return mask

    def labels_of(self, mask: int) -> frozenset:
        out = []
        while mask:
            b = mask & -mask
            mask ^= b
            out.append(self.labels[b.bit_length() - 1])
        return frozenset(out)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def strict_up_mask(self, i: int) -> int:
        return self._up[i] & ~(1 << i)

    def strict_down_mask(self, i: int) -> int:
        return self._down[i] & ~(1 << i)

    # -- covers and heights ------------------------------------------------------

    @cached_property
    def covers_up(self) -> Tuple[Tuple[int, ...], ...]:
        """covers_up[i] lists j such that j covers i (immediate successors)."""
        out = []
        for i in range(self.n):
            strict = self.strict_up_mask(i)
            covers = []
            m = strict
            while m:
                b = m & -m
                m ^= b
                j = b.bit_length() - 1
                if not (self.strict_up_mask(i) & self.strict_down_mask(j)):
                    covers.append(j)
            out.append(tuple(covers))
        return tuple(out)

    @cached_property
    def covers_down(self) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in range(self.n)]
        for i, ups in enumerate(self.covers_up):
            for j in ups:
                out[j].append(i)
        return tuple(tuple(v) for v in out)

    @cached_property
    def heights(self) -> Tuple[int, ...]:
        """Height of each element: longest chain in its downset, minus one."""
        order = sorted(range(self.n), key=lambda i: bin(self._down[i]).count("1"))
        h = [0] * self.n
        for i in order:
            below = self.strict_down_mask(i)
            best = -1
            m = below
            while m:
                b = m & -m
                m ^= b
                best = max(best, h[b.bit_length() - 1])
            h[i] = best + 1
        return tuple(h)

    @cached_property
    def depths(self) -> Tuple[int, ...]:
        order = sorted(range(self.n), key=lambda i: bin(self._up[i]).count("1"))
        d = [0] * self.n
        for i in order:
            above = self.strict_up_mask(i)
            best = -1
            m = above
            while m:
                b = m & -m
                m ^= b
                best = max(best, d[b.bit_length() - 1])
            d[i] = best + 1
        return tuple(d)

    @cached_property
    def _by_height(self) -> Tuple[int, ...]:
        return tuple(sorted(range(self.n), key=lambda i: (self.heights[i], i)))

    def maximal_elements(self) -> frozenset:
        return frozenset(self.labels[i] for i in range(self.n) if self.depths[i] == 0)

    def minimal_elements(self) -> frozenset:
        return frozenset(self.labels[i] for i in range(self.n) if self.heights[i] == 0)

    def root(self) -> Optional[str]:
        """The minimum element, if there is one."""
        for i in range(self.n):
            if self._up[i] == self.full_mask:
                return self.labels[i]
        return None

    # -- component / chain analysis on arbitrary sub-masks -------------------------

    def component_masks(self, mask: int) -> List[int]:
        """Connected components of the subposet induced on ``mask``."""
        comps = []
        remaining = mask
        while remaining:
            seed = remaining & -remaining
            comp = seed
            frontier = seed
            while frontier:
                grown = 0
                m = frontier
                while m:
                    b = m & -m
                    m ^= b
                    grown |= self._comparable[b.bit_length() - 1]
                frontier = (grown & mask) & ~comp
                comp |= frontier
            comps.append(comp)
            remaining &= ~comp
        return comps

    def mask_height(self, mask: int) -> int:
        """Longest chain inside ``mask``, minus one; -1 for the empty mask."""
        if not mask:
            return -1
        best: Dict[int, int] = {}
        top = -1
        for i in self._by_height:
            if not (mask >> i) & 1:
                continue
            below = self.strict_down_mask(i) & mask
            h = 0
            m = below
            while m:
                b = m & -m
                m ^= b
                h = max(h, best[b.bit_length() - 1] + 1)
            best[i] = h
            top = max(top, h)
        return top

    def contype_of_mask(self, mask: int) -> Signature:
        return Signature.from_heights(
            self.mask_height(c) + 1 for c in self.component_masks(mask)
        )

    @cached_property
    def strict_up_contypes(self) -> frozenset:
        """Distinct ConType(strict upset of x) over all x; used heavily by the
        connectedness checks."""
        return frozenset(
            self.contype_of_mask(self.strict_up_mask(i)) for i in range(self.n)
        )

    @cached_property
    def diamond_contypes(self) -> frozenset:
        """Distinct ConType(strict diamond of x,y) over all pairs x < y."""
        out = set()
        seen_empty = False
        for i in range(self.n):
            m = self.strict_up_mask(i)
            while m:
                b = m & -m
                m ^= b
                j = b.bit_length() - 1
                dia = self.strict_up_mask(i) & self.strict_down_mask(j)
                if dia:
                    out.add(self.contype_of_mask(dia))
                else:
                    seen_empty = True
        if seen_empty:
            out.add(EPSILON)
        return frozenset(out)

    @cached_property
    def completion(self) -> "FinitePoset":
        return check_completion(self)

    # -- chains ---------------------------------------------------------------------

    def count_chains(self) -> int:
        """Number of nonempty chains (computed without materialising them)."""
        ending = [0] * self.n
        for i in self._by_height:
            total = 1
            m = self.strict_down_mask(i)
            while m:
                b = m & -m
                m ^= b
                total += ending[b.bit_length() - 1]
            ending[i] = total
        return sum(ending)

    def iter_chain_masks(self, budget: int = CHAIN_BUDGET):
        """Yield every nonempty chain as a bitmask, each exactly once."""
        produced = 0
        n = self.n

        def extend(mask: int, candidates: int):
            nonlocal produced
            m = candidates
            while m:
                b = m & -m
                m ^= b
                i = b.bit_length() - 1
                new_mask = mask | b
                produced += 1
                if produced > budget:
                    raise SizeBudgetExceeded(
                        f"chain enumeration exceeds budget {budget}"
                    )
                yield new_mask
                # only extend with higher-indexed comparable elements so each
                # chain is produced once
                rest = candidates & self._comparable[i] & ~((1 << (i + 1)) - 1)
                yield from extend(new_mask, rest)

        yield from extend(0, self.full_mask)

    def restrict(self, labels: Iterable[str]) -> "FinitePoset":
        """Induced subposet on the given elements (original label order)."""
        keep = sorted((self.index(lab) for lab in labels))
        new_labels = [self.labels[i] for i in keep]
        pos = {old: new for new, old in enumerate(keep)}
        masks = []
        for old in keep:
            m = 0
            u = self._up[old]
            for other in keep:
                if (u >> other) & 1:
                    m |= 1 << pos[other]
            masks.append(m)
        return FinitePoset(new_labels, masks, _trusted=True)

    # -- serialisation -----------------------------------------------------------------

    def cover_edges(self) -> List[Tuple[str, str]]:
        edges = []
        for i in range(self.n):
            for j in self.covers_up[i]:
                edges.append((self.labels[i], self.labels[j]))
        edges.sort()
        return edges

    def to_json(self) -> str:
        payload = {"elements": list(self.labels), "edges": [list(e) for e in self.cover_edges()]}
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FinitePoset":
        payload = json.loads(text)
        return validate_poset(payload["elements"], [tuple(e) for e in payload["edges"]])

    def to_dot(self, name: str = "poset") -> str:
        lines = [f"digraph {name} {{"]
        for lab in self.labels:
            lines.append(f'  "{lab}";')
        for a, b in self.cover_edges():
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_partial_order(up_masks: Sequence[int]) -> None:
    n = len(up_masks)
    for i, mask in enumerate(up_masks):
        if not (mask >> i) & 1:
            raise ValueError(f"relation not reflexive at element {i}")
        m = mask & ~(1 << i)
        while m:
            b = m & -m
            m ^= b
            j = b.bit_length() - 1
            if (up_masks[j] >> i) & 1:
                raise CycleDetected(f"elements {i} and {j} are mutually related")
            if up_masks[j] & ~mask:
                raise ValueError(f"relation not transitive at {i} <= {j}")


# -- construction ----------------------------------------------------------------------


def validate_poset(elements: Sequence[str], edges: Iterable[Tuple[str, str]]) -> FinitePoset:
    """Build a poset from generators ``a < b``, applying reflexive-transitive
    closure. Rejects duplicate labels and cycles."""
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel("element labels must be pairwise distinct")
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    adj: List[int] = [0] * n
    for a, b in edges:
        if a not in index:
            raise UnknownElement(f"edge endpoint {a!r} not among elements")
        if b not in index:
            raise UnknownElement(f"edge endpoint {b!r} not among elements")
        if a == b:
            raise CycleDetected(f"self-loop at {a!r}")
        adj[index[a]] |= 1 << index[b]

    up = [0] * n
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    for start in range(n):
        if state[start]:
            continue
        stack = [(start, list(_bits(adj[start])))]
        state[start] = 1
        up[start] = 1 << start
        while stack:
            i, todo = stack[-1]
            if todo:
                j = todo.pop()
                if state[j] == 1:
                    raise CycleDetected(f"cycle through {labels[i]!r} and {labels[j]!r}")
                if state[j] == 0:
                    state[j] = 1
                    up[j] = 1 << j
                    stack.append((j, list(_bits(adj[j]))))
                else:
                    up[i] |= up[j]
            else:
                stack.pop()
                state[i] = 2
                if stack:
                    up[stack[-1][0]] |= up[i]
    return FinitePoset(labels, up, _trusted=True)


def _bits(mask: int):
    while mask:
        b = mask & -mask
        mask ^= b
        yield b.bit_length() - 1


def poset_from_cover_dag(labels: Sequence[str], covers_up: Sequence[Sequence[int]]) -> FinitePoset:
    """Fast trusted construction from an acyclic cover relation given in a
    topological order (every cover target has a larger index)."""
    n = len(labels)
    up = [0] * n
    for i in range(n - 1, -1, -1):
        mask = 1 << i
        for j in covers_up[i]:
            mask |= up[j]
        up[i] = mask
    return FinitePoset(labels, up, _trusted=True)


# -- the basic operations ------------------------------------------------------------------


def up_set(poset: FinitePoset, x: str) -> frozenset:
    return poset.labels_of(poset.up_mask(poset.index(x)))


def down_set(poset: FinitePoset, x: str) -> frozenset:
    return poset.labels_of(poset.down_mask(poset.index(x)))


def strict_up(poset: FinitePoset, x: str) -> frozenset:
    return poset.labels_of(poset.strict_up_mask(poset.index(x)))


def strict_down(poset: FinitePoset, x: str) -> frozenset:
    return poset.labels_of(poset.strict_down_mask(poset.index(x)))


def height(poset: FinitePoset) -> int:
    if poset.is_empty:
        raise EmptyPoset("height of the empty poset is undefined")
    return max(poset.heights)


def height_of(poset: FinitePoset, x: str) -> int:
    return poset.heights[poset.index(x)]


def depth_of(poset: FinitePoset, x: str) -> int:
    return poset.depths[poset.index(x)]


def width(poset: FinitePoset) -> int:
    """Size of the largest antichain, by exhaustive search. Desk scale only:
    posets beyond WIDTH_CAP elements are refused."""
    if poset.is_empty:
        raise EmptyPoset("width of the empty poset is undefined")
    if poset.n > WIDTH_CAP:
        raise SizeBudgetExceeded(
            f"width search is capped at {WIDTH_CAP} elements, got {poset.n}"
        )
    best = 0

    def grow(i: int, chosen: int, size: int):
        nonlocal best
        if size > best:
            best = size
        for j in range(i, poset.n):
            if not (chosen & poset._comparable[j]):
                grow(j + 1, chosen | (1 << j), size + 1)

    grow(0, 0, 0)
    return best


def connected_components(poset: FinitePoset) -> List[frozenset]:
    """Partition of the carrier into path components; each is up- and
    down-closed. Empty poset gives []. Deterministic order."""
    comps = poset.component_masks(poset.full_mask)
    return [poset.labels_of(c) for c in comps]


def con_type(poset: FinitePoset) -> Signature:
    return poset.contype_of_mask(poset.full_mask)


def is_graded(poset: FinitePoset) -> Optional[Dict[str, int]]:
    """The unique rank function (ranks = heights) if the poset is graded,
    else None."""
    if poset.is_empty:
        raise EmptyPoset("gradedness of the empty poset is undefined")
    h = poset.heights
    for i in range(poset.n):
        for j in poset.covers_up[i]:
            if h[j] != h[i] + 1:
                return None
    return {poset.labels[i]: h[i] for i in range(poset.n)}


def diamond(poset: FinitePoset, x: str, y: str) -> frozenset:
    i, j = poset.index(x), poset.index(y)
    if i == j or not (poset._up[i] >> j & 1):
        raise NotComparable(f"{x!r} < {y!r} does not hold")
    return poset.labels_of(poset.up_mask(i) & poset.down_mask(j))


def strict_diamond(poset: FinitePoset, x: str, y: str) -> frozenset:
    i, j = poset.index(x), poset.index(y)
    if i == j or not (poset._up[i] >> j & 1):
        raise NotComparable(f"{x!r} < {y!r} does not hold")
    return poset.labels_of(poset.strict_up_mask(i) & poset.strict_down_mask(j))


def check_completion(poset: FinitePoset) -> FinitePoset:
    """The poset plus a fresh top above everything, labelled "inf"."""
    if COMPLETION_LABEL in poset:
        raise LabelCollision(f"label {COMPLETION_LABEL!r} already in use")
    n = poset.n
    top_bit = 1 << n
    masks = [m | top_bit for m in poset._up]
    masks.append(top_bit)
    return FinitePoset(poset.labels + (COMPLETION_LABEL,), masks, _trusted=True)


def is_tree(poset: FinitePoset) -> bool:
    """Rooted, and every non-root element has exactly one immediate
    predecessor."""
    if poset.is_empty or poset.root() is None:
        return False
    root_idx = poset.index(poset.root())
    return all(
        len(poset.covers_down[i]) == 1
        for i in range(poset.n)
        if i != root_idx
    )


def _chain_label(labels: Sequence[str]) -> str:
    return "(" + "|".join(labels) + ")"


def tree_unravelling(poset: FinitePoset):
    """Tree(F): chains maximal in the downset of their own maximum, ordered by
    inclusion, together with the p-morphism sending a chain to its maximum.

    Returns ``(tree, last)``. Chains are labelled by their members in
    ascending order, joined with "/".
    """
    from .morphisms import PMorphism  # deferred: morphisms depends on posets

    if poset.root() is None:
        raise NotRooted("tree unravelling needs a rooted poset")
    # cover-paths from the root to each element, grown bottom-up
    paths_to: List[List[Tuple[int, ...]]] = [[] for _ in range(poset.n)]
    root_idx = poset.index(poset.root())
    order = sorted(range(poset.n), key=lambda i: (poset.heights[i], i))
    for i in order:
        if i == root_idx:
            paths_to[i] = [(i,)]
            continue
        acc = []
        for below in poset.covers_down[i]:
            acc.extend(path + (i,) for path in paths_to[below])
        paths_to[i] = acc

    all_paths = [p for plist in paths_to for p in plist]
    all_paths.sort(key=lambda p: (len(p), p))
    labels = ["/".join(poset.labels[i] for i in p) for p in all_paths]
    position = {p: k for k, p in enumerate(all_paths)}
    covers: List[List[int]] = [[] for p in all_paths]
    for p in all_paths:
        if len(p) > 1:
            covers[position[p[:-1]]].append(position[p])
    tree = poset_from_cover_dag(labels, covers)
    mapping = {labels[k]: poset.labels[p[-1]] for k, p in enumerate(all_paths)}
    last = PMorphism(tree, poset, frozenset(labels), mapping)
    return tree, last


def chain_element_at(tree: FinitePoset, x: str, k: int) -> str:
    """The element of the (unique) chain below ``x`` at height ``k``;
    negative ``k`` counts down from ``x`` (so -1 is the immediate
    predecessor)."""
    if not is_tree(tree):
        raise NotATree("chain positions only make sense in a tree")
    i = tree.index(x)
    target = tree.heights[i] + k if k < 0 else k
    if not 0 <= target <= tree.heights[i]:
        raise IndexOutOfRange(
            f"no element of height {target} below {x!r} (height {tree.heights[i]})"
        )
    m = tree.down_mask(i)
    while m:
        b = m & -m
        m ^= b
        j = b.bit_length() - 1
        if tree.heights[j] == target:
            return tree.labels[j]
    raise IndexOutOfRange(f"no element of height {target} below {x!r}")
