"""Validity on finite frames via the algebra of upward-closed sets.

An upset valuation assigns each variable an up-closed subset; connectives act
as intersection, union, and the relative pseudo-complement
U -> V = {x | up(x) ∩ U ⊆ V}. A formula is valid when every valuation sends
it to the whole carrier.
"""
from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple

from .errors import ForbiddenSignature, PreconditionViolated, SizeBudgetExceeded
from .formulas import And, Const, Formula, Imp, Or, Var
from .morphisms import validates_jankov
from .posets import FinitePoset, height
from .signatures import DIFORK, SCOTT, Signature
from .starlike import is_alpha_connected, starlike_tree

VALUATION_BUDGET = 10**7


class UpsetAlgebra:
    """The finite Heyting algebra of up-closed subsets of a poset, with
    elements represented as bitmasks over the carrier."""

    def __init__(self, poset: FinitePoset):
        self.poset = poset

    @cached_property
    def elements(self) -> Tuple[int, ...]:
        """Every up-closed subset, enumerated by branching on each element in
        decreasing-height order (an element may join only if its upper covers
        already did)."""
        poset = self.poset
        order = sorted(range(poset.n), key=lambda i: (-poset.heights[i], i))
        found = []

        def grow(k: int, mask: int):
            if k == len(order):
                found.append(mask)
                return
            i = order[k]
            grow(k + 1, mask)  # leave i out
            covers = 0
            for j in poset.covers_up[i]:
                covers |= 1 << j
            if covers & ~mask == 0:
                grow(k + 1, mask | (1 << i))

        grow(0, 0)
        found.sort(key=lambda m: (bin(m).count("1"), m))
        return tuple(found)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.poset.full_mask

    def meet(self, u: int, v: int) -> int:
        return u & v

    def join(self, u: int, v: int) -> int:
        return u | v

    def implies(self, u: int, v: int) -> int:
        out = 0
        for i in range(self.poset.n):
            if (self.poset.up_mask(i) & u) & ~v == 0:
                out |= 1 << i
        return out

    def members(self, mask: int) -> FrozenSet[str]:
        return self.poset.labels_of(mask)


def _evaluate(phi: Formula, env: Dict[str, int], algebra: UpsetAlgebra) -> int:
    if isinstance(phi, Var):
        return env[phi.name]
    if isinstance(phi, Const):
        return algebra.top if phi.value else algebra.bottom
    if isinstance(phi, And):
        return _evaluate(phi.left, env, algebra) & _evaluate(phi.right, env, algebra)
    if isinstance(phi, Or):
        return _evaluate(phi.left, env, algebra) | _evaluate(phi.right, env, algebra)
    if isinstance(phi, Imp):
        return algebra.implies(
            _evaluate(phi.left, env, algebra), _evaluate(phi.right, env, algebra)
        )
    raise TypeError(f"not a formula: {phi!r}")


def counter_valuation(
    poset: FinitePoset, phi: Formula, budget: int = VALUATION_BUDGET
) -> Optional[Dict[str, FrozenSet[str]]]:
    """A variable assignment refuting the formula on the frame, or None if it
    is valid. Exhausts all upset valuations (budgeted)."""
    algebra = UpsetAlgebra(poset)
    variables = phi.variables()
    count = len(algebra.elements) ** len(variables)
    if count > budget:
        raise SizeBudgetExceeded(
            f"{count} valuations exceed the budget of {budget}"
        )
    for choice in product(algebra.elements, repeat=len(variables)):
        env = dict(zip(variables, choice))
        if _evaluate(phi, env, algebra) != algebra.top:
            return {name: algebra.members(mask) for name, mask in env.items()}
    return None


def frame_validates(poset: FinitePoset, phi: Formula, budget: int = VALUATION_BUDGET) -> bool:
    return counter_valuation(poset, phi, budget=budget) is None


def validates_bd(poset: FinitePoset, n: int) -> bool:
    """Bounded-depth validity: the chain on n+1 elements is forbidden, which
    on finite frames is exactly height <= n-1. Both readings are computed and
    compared."""
    if n < 0:
        raise ValueError("the depth bound must be nonnegative")
    by_height = poset.is_empty or height(poset) <= n - 1
    if n == 0:
        chain = starlike_tree(Signature(()))
    else:
        chain = starlike_tree(Signature(((n, 1),)))
    by_search = validates_jankov(poset, chain)
    if by_height != by_search:
        raise RuntimeError("internal error: the two depth checks disagree")
    return by_height


def _check_lambdas(lambdas: Iterable[Signature]) -> Set[Signature]:
    lambdas = set(lambdas)
    if DIFORK in lambdas:
        raise ForbiddenSignature("1^2 is not a legal starlike axiom")
    return lambdas


def validates_sfl(poset: FinitePoset, lambdas: Iterable[Signature]) -> bool:
    """Frame validity of the starlike logic axiomatised by the given
    signatures, decided through the connectedness characterisation."""
    return all(is_alpha_connected(poset, alpha) for alpha in _check_lambdas(lambdas))


def logic_validates(poset: FinitePoset, spec: str) -> bool:
    """Validity against a named logic: "BD:3" for a depth bound, or
    "SFL:2.1,1^3" for a starlike axiom set."""
    name, _, argument = spec.partition(":")
    name = name.strip().upper()
    if name == "BD":
        if not argument:
            raise ValueError("BD needs a bound, e.g. BD:3")
        return validates_bd(poset, int(argument))
    if name == "SFL":
        lambdas = [Signature.parse(part) for part in argument.split(",") if part.strip()]
        if not lambdas:
            raise ValueError("SFL needs signatures, e.g. SFL:2.1,1^3")
        return validates_sfl(poset, lambdas)
    raise ValueError(f"unknown logic {spec!r}")


def scott_frame_conditions(poset: FinitePoset, lambdas: Iterable[Signature]) -> bool:
    """The three first-order frame conditions that characterise starlike
    validity once Scott's signature is among the axioms: a height bound from
    the least chain signature, a branching bound at depth 1 from the least
    fork, and connected strict upsets at depth above 1."""
    lambdas = _check_lambdas(lambdas)
    if SCOTT not in lambdas:
        raise PreconditionViolated("the Scott-form conditions need 2.1 in Lambda")
    chain_bound = min((a.entries[0][0] for a in lambdas if a.is_chain), default=None)
    fork_bound = min((a.entries[0][1] for a in lambdas if a.is_fork), default=None)
    if not poset.is_empty and chain_bound is not None and height(poset) >= chain_bound:
        return False
    for i in range(poset.n):
        d = poset.depths[i]
        up = poset.strict_up_mask(i)
        if d == 1 and fork_bound is not None:
            if bin(up).count("1") >= fork_bound:
                return False
        if d > 1 and len(poset.component_masks(up)) != 1:
            return False
    return True
