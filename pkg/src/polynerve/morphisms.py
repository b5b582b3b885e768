"""p-morphisms, up-reductions, and the backtracking searches built on them:
forbidden-configuration validity, poset isomorphism, monotone surjections.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .errors import (
    DomainNotUpClosed,
    NotComparableSignatures,
    SearchBudgetExceeded,
    TargetNotRooted,
    UnknownElement,
)
from .posets import FinitePoset
from .signatures import Signature

SEARCH_BUDGET = 10**7


@dataclass(frozen=True, eq=True)
class PMorphism:
    """A declared map between posets: total on ``domain``, which is expected
    to be an up-closed subset of the source. Whether the map actually
    satisfies the forth/back conditions is checked by :func:`is_p_morphism`,
    not at construction."""

    source: FinitePoset
    target: FinitePoset
    domain: FrozenSet[str]
    mapping: Dict[str, str] = field(hash=False)

    def __post_init__(self):
        for lab in self.domain:
            self.source.index(lab)
        if set(self.mapping) != set(self.domain):
            raise UnknownElement("mapping must be defined exactly on the domain")
        for value in self.mapping.values():
            self.target.index(value)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    @property
    def is_total(self) -> bool:
        return len(self.domain) == self.source.n

    def to_json(self) -> str:
        return json.dumps(
            {"domain": sorted(self.domain), "map": dict(sorted(self.mapping.items()))},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str, source: FinitePoset, target: FinitePoset) -> "PMorphism":
        payload = json.loads(text)
        return cls(source, target, frozenset(payload["domain"]), dict(payload["map"]))


def _domain_mask(f: PMorphism) -> int:
    return f.source.mask_of(f.domain)


def _check_domain_up_closed(f: PMorphism) -> int:
    mask = _domain_mask(f)
    src = f.source
    m = mask
    while m:
        b = m & -m
        m ^= b
        if src.up_mask(b.bit_length() - 1) & ~mask:
            raise DomainNotUpClosed("the declared domain is not upward-closed")
    return mask


def is_p_morphism(f: PMorphism) -> bool:
    """Forth and back conditions on the declared (up-closed) domain."""
    mask = _check_domain_up_closed(f)
    src, tgt = f.source, f.target
    idx = [None] * src.n
    m = mask
    while m:
        b = m & -m
        m ^= b
        i = b.bit_length() - 1
        idx[i] = tgt.index(f.mapping[src.labels[i]])
    m = mask
    while m:
        b = m & -m
        m ^= b
        i = b.bit_length() - 1
        fi = idx[i]
        # forth: everything above i maps above f(i)
        image_above = 0
        above = src.strict_up_mask(i)  # subset of mask since domain up-closed
        a = above
        while a:
            ab = a & -a
            a ^= ab
            j = ab.bit_length() - 1
            if not (tgt.up_mask(fi) >> idx[j]) & 1:
                return False
            image_above |= 1 << idx[j]
        # back: everything above f(i) is hit by something above i
        if tgt.strict_up_mask(fi) & ~image_above:
            return False
    return True


def is_up_reduction(f: PMorphism) -> bool:
    """A surjective p-morphism from an up-closed subset onto the target."""
    if not is_p_morphism(f):
        return False
    return set(f.mapping.values()) == set(f.target.labels)


def compose(first: PMorphism, then: PMorphism) -> PMorphism:
    """then o first, with the domain pulled back so the composite is total on
    it. Sources/targets must line up."""
    if first.target is not then.source and first.target != then.source:
        raise UnknownElement("composition needs first.target == then.source")
    domain = frozenset(
        x for x in first.domain if first.mapping[x] in then.domain
    )
    mapping = {x: then.mapping[first.mapping[x]] for x in domain}
    return PMorphism(first.source, then.target, domain, mapping)


def find_up_reduction(
    poset: FinitePoset,
    target: FinitePoset,
    budget: int = SEARCH_BUDGET,
) -> Optional[PMorphism]:
    """Some up-reduction of ``poset`` onto the rooted ``target``, or None.

    The search ranges over pointed up-reductions only (domain an upset of a
    single apex, apex the unique preimage of the root), which is no loss of
    generality. Apexes are tried by decreasing height; fibre values by target
    height from the root. The first witness found under that fixed order is
    returned, so reruns are reproducible.
    """
    root = target.root()
    if root is None:
        raise TargetNotRooted("up-reduction targets must be rooted")
    root_idx = target.index(root)
    tgt_n = target.n
    # candidate values for non-apex elements, root excluded
    value_order = sorted(
        (j for j in range(tgt_n) if j != root_idx),
        key=lambda j: (target.heights[j], j),
    )
    apexes = sorted(range(poset.n), key=lambda i: (-poset.heights[i], i))
    visited = 0

    for apex in apexes:
        if poset.heights and target.heights:
            if max(
                poset.heights[j]
                for j in _mask_bits(poset.up_mask(apex))
            ) - poset.heights[apex] < max(target.heights):
                continue  # not enough height above the apex
        domain_bits = [
            i
            for i in sorted(
                _mask_bits(poset.up_mask(apex)),
                key=lambda i: (-poset.heights[i], i),
            )
        ]
        assignment: Dict[int, int] = {apex: root_idx}
        order = [i for i in domain_bits if i != apex]  # decreasing height

        def assign(k: int) -> bool:
            nonlocal visited
            if k == len(order):
                # back condition at the apex: image must cover the target
                image = 0
                for v in assignment.values():
                    image |= 1 << v
                return image == target.full_mask
            i = order[k]
            for v in value_order:
                visited += 1
                if visited > budget:
                    raise SearchBudgetExceeded(
                        f"up-reduction search exceeded {budget} states"
                    )
                # forth against everything already assigned above i
                ok = True
                image_above = 0
                m = poset.strict_up_mask(i) & poset.up_mask(apex)
                while m:
                    b = m & -m
                    m ^= b
                    j = b.bit_length() - 1
                    fj = assignment[j]  # assigned: higher elements come first
                    if not (target.up_mask(v) >> fj) & 1:
                        ok = False
                        break
                    image_above |= 1 << fj
                if not ok:
                    continue
                # back at i is fully checkable now
                if target.strict_up_mask(v) & ~image_above:
                    continue
                assignment[i] = v
                if assign(k + 1):
                    return True
                del assignment[i]
            return False

        if assign(0):
            domain = frozenset(poset.labels[i] for i in domain_bits)
            mapping = {
                poset.labels[i]: target.labels[v] for i, v in assignment.items()
            }
            witness = PMorphism(poset, target, domain, mapping)
            if not is_up_reduction(witness):
                raise RuntimeError("internal error: search returned a bad witness")
            return witness
    return None


def _mask_bits(mask: int):
    while mask:
        b = mask & -mask
        mask ^= b
        yield b.bit_length() - 1


def validates_jankov(poset: FinitePoset, target: FinitePoset, budget: int = SEARCH_BUDGET) -> bool:
    """Validity of the forbidden-configuration formula of ``target``: true iff
    there is no up-reduction onto it."""
    return find_up_reduction(poset, target, budget=budget) is None


def signature_reduction(beta: Signature, alpha: Signature) -> PMorphism:
    """The canonical p-morphism from the starlike tree of ``beta`` onto the
    starlike tree of ``alpha``, defined when alpha <= beta: branch j maps onto
    branch j (excess collapsing to the branch top), leftover branches map to
    the top of the first branch."""
    from .starlike import starlike_tree  # deferred: starlike depends on us

    if not alpha.leq(beta):
        raise NotComparableSignatures(f"{alpha} is not below {beta}")
    source = starlike_tree(beta)
    target = starlike_tree(alpha)
    if alpha.is_empty:
        mapping = {lab: target.labels[0] for lab in source.labels}
        witness = PMorphism(source, target, frozenset(source.labels), mapping)
    else:
        a_heights = alpha.heights
        b_heights = beta.heights
        mapping = {"r": "r"}
        for j in range(1, beta.size + 1):
            for h in range(1, b_heights[j - 1] + 1):
                src_lab = f"b{j}.{h}"
                if j <= alpha.size:
                    tgt_h = min(h, a_heights[j - 1])
                    mapping[src_lab] = f"b{j}.{tgt_h}"
                else:
                    mapping[src_lab] = f"b1.{a_heights[0]}"
        witness = PMorphism(source, target, frozenset(source.labels), mapping)
    if not is_p_morphism(witness):
        raise RuntimeError("internal error: signature reduction is not a p-morphism")
    return witness


def are_isomorphic(
    poset: FinitePoset, other: FinitePoset, budget: int = SEARCH_BUDGET
) -> Optional[Dict[str, str]]:
    """An order-isomorphism as a label bijection, or None. Backtracking with
    height/degree invariant pruning."""
    if poset.n != other.n:
        return None

    def profile(p: FinitePoset, i: int):
        return (
            p.heights[i],
            p.depths[i],
            len(p.covers_up[i]),
            len(p.covers_down[i]),
            bin(p.up_mask(i)).count("1"),
            bin(p.down_mask(i)).count("1"),
        )

    def refined(p: FinitePoset):
        base = [profile(p, i) for i in range(p.n)]
        return [
            (
                base[i],
                tuple(sorted(base[j] for j in p.covers_up[i])),
                tuple(sorted(base[j] for j in p.covers_down[i])),
            )
            for i in range(p.n)
        ]

    prof_left = refined(poset)
    prof_right = refined(other)
    left = sorted(range(poset.n), key=lambda i: (prof_left[i], i))
    if sorted(prof_left) != sorted(prof_right):
        return None
    candidates = {
        i: [j for j in range(other.n) if prof_right[j] == prof_left[i]]
        for i in range(poset.n)
    }
    assignment: Dict[int, int] = {}
    used = set()
    visited = 0

    def assign(k: int) -> bool:
        nonlocal visited
        if k == poset.n:
            return True
        i = left[k]
        for j in candidates[i]:
            visited += 1
            if visited > budget:
                raise SearchBudgetExceeded(f"isomorphism search exceeded {budget} states")
            if j in used:
                continue
            consistent = all(
                ((poset.up_mask(i) >> i2) & 1) == ((other.up_mask(j) >> j2) & 1)
                and ((poset.up_mask(i2) >> i) & 1) == ((other.up_mask(j2) >> j) & 1)
                for i2, j2 in assignment.items()
            )
            if not consistent:
                continue
            assignment[i] = j
            used.add(j)
            if assign(k + 1):
                return True
            del assignment[i]
            used.discard(j)
        return False

    if assign(0):
        return {poset.labels[i]: other.labels[j] for i, j in assignment.items()}
    return None


def exists_monotone_surjection(
    poset: FinitePoset, other: FinitePoset, budget: int = SEARCH_BUDGET
) -> bool:
    """Whether some order-preserving onto map poset -> other exists."""
    if other.is_empty:
        return poset.is_empty
    if poset.n < other.n:
        return False
    order = sorted(range(poset.n), key=lambda i: (poset.heights[i], i))
    assignment: Dict[int, int] = {}
    hit: List[int] = [0] * other.n
    missing = other.n
    visited = 0

    def assign(k: int) -> bool:
        nonlocal visited, missing
        if poset.n - k < missing:
            return False  # cannot cover the remaining targets
        if k == poset.n:
            return missing == 0
        i = order[k]
        for v in range(other.n):
            visited += 1
            if visited > budget:
                raise SearchBudgetExceeded(
                    f"monotone surjection search exceeded {budget} states"
                )
            ok = True
            for i2, v2 in assignment.items():
                below = (poset.up_mask(i2) >> i) & 1
                above = (poset.up_mask(i) >> i2) & 1
                if below and not (other.up_mask(v2) >> v) & 1:
                    ok = False
                    break
                if above and not (other.up_mask(v) >> v2) & 1:
                    ok = False
                    break
            if not ok:
                continue
            assignment[i] = v
            hit[v] += 1
            if hit[v] == 1:
                missing -= 1
            if assign(k + 1):
                return True
            hit[v] -= 1
            if hit[v] == 0:
                missing += 1
            del assignment[i]
        return False

    return assign(0)
