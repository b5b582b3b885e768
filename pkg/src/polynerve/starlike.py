"""Starlike trees and the connectedness notions their formulas express.

A poset fails alpha-connectedness exactly where some strict upset splits into
open pieces matching the signature; the diamond variant asks the same of
strict diamonds, taken in the completion of the poset so that upsets and
diamonds are covered uniformly by one quantifier.
"""
from __future__ import annotations

from typing import List, Optional

from .errors import ForbiddenSignature
from .posets import FinitePoset, poset_from_cover_dag
from .signatures import DIFORK, EPSILON, Signature


def starlike_tree(alpha: Signature) -> FinitePoset:
    """The starlike tree of a signature: a root carrying one chain per
    branch, chain j of length alpha(j). The empty signature gives the
    singleton. Labels: root "r", branch elements "b<j>.<height>"."""
    labels = ["r"]
    covers: List[List[int]] = [[]]
    for j, branch_height in enumerate(alpha.heights, start=1):
        prev = 0  # the root
        for h in range(1, branch_height + 1):
            labels.append(f"b{j}.{h}")
            covers.append([])
            covers[prev].append(len(labels) - 1)
            prev = len(labels) - 1
    return poset_from_cover_dag(labels, covers)


def _mask_has_alpha_partition(poset: FinitePoset, mask: int, alpha: Signature) -> bool:
    if alpha == EPSILON:
        return mask == 0
    return alpha.leq(poset.contype_of_mask(mask))


def has_alpha_partition(poset: FinitePoset, alpha: Signature) -> bool:
    """Open partitions into |alpha| pieces with the prescribed heights exist
    iff alpha is below the connectedness type."""
    return _mask_has_alpha_partition(poset, poset.full_mask, alpha)


def alpha_partition(poset: FinitePoset, alpha: Signature) -> Optional[List[frozenset]]:
    """A witnessing partition, or None. Components are assigned to signature
    slots in descending height order; surplus components are merged into the
    first slot (any open superset keeps the required height)."""
    if alpha == EPSILON:
        return [] if poset.is_empty else None
    if not has_alpha_partition(poset, alpha):
        return None
    comps = sorted(
        poset.component_masks(poset.full_mask),
        key=lambda c: -poset.mask_height(c),
    )
    k = alpha.size
    blocks = comps[:k]
    for surplus in comps[k:]:
        blocks[0] |= surplus
    return [poset.labels_of(b) for b in blocks]


def is_alpha_connected(poset: FinitePoset, alpha: Signature) -> bool:
    """No element has an alpha-partition of its strict upset."""
    if alpha == EPSILON:
        return EPSILON not in poset.strict_up_contypes
    return not any(alpha.leq(ct) for ct in poset.strict_up_contypes)


def is_alpha_diamond_connected(poset: FinitePoset, alpha: Signature) -> bool:
    """No pair x < y in the completion (the poset plus a synthetic top) has
    an alpha-partition of its strict diamond. Pairs ending at the synthetic
    top contribute the strict upsets of the original poset."""
    contypes = poset.completion.diamond_contypes
    if alpha == EPSILON:
        return EPSILON not in contypes
    return not any(alpha.leq(ct) for ct in contypes)


def is_alpha_nerve_connected(poset: FinitePoset, alpha: Signature) -> bool:
    return is_alpha_connected(poset, alpha) and is_alpha_diamond_connected(poset, alpha)


def nerve_validates_starlike(poset: FinitePoset, alpha: Signature) -> bool:
    """Validity of the starlike formula on every iterated nerve, decided via
    alpha-nerve-connectedness. The two-pronged fork is not a legal signature
    at this layer."""
    if alpha == DIFORK:
        raise ForbiddenSignature("the signature 1^2 is excluded from the logic layer")
    return is_alpha_nerve_connected(poset, alpha)
