"""The acceptance gate: one test per criterion, exact checks only, each
printing a PASS line with its runtime. Run with `pytest tests/test_acceptance.py -v -s`."""
import random
import time
from fractions import Fraction as Fr

import pytest

import polynerve as pn
from polynerve import Signature, validate_poset
from polynerve.randposets import random_poset, random_rooted_poset
from polynerve.semantics import UpsetAlgebra

S = Signature.parse

ALPHAS = [S("2"), S("1^3"), S("2.1"), S("2^2"), S("3.1")]
LAMBDA_POOLS = [
    [S("2.1")],
    [S("1^3")],
    [S("2.1"), S("1^3")],
    [S("2^2")],
    [S("3.1"), S("1^4")],
]


def report(number: int, label: str, started: float, bound: float) -> None:
    elapsed = time.monotonic() - started
    assert elapsed < bound, f"criterion {number} exceeded its {bound}s budget"
    print(f"ACCEPTANCE {number}: PASS ({label}) in {elapsed:.2f}s")


def five_element_frame():
    return validate_poset(
        ["r", "a1", "a2", "b", "t"],
        [("r", "a1"), ("a1", "a2"), ("r", "b"), ("a2", "t"), ("b", "t")],
    )


def test_criterion_1_five_element_frame_reproduction():
    started = time.monotonic()
    frame = five_element_frame()
    scott = pn.starlike_tree(S("2.1"))
    assert len(frame) == 5
    assert pn.validates_jankov(frame, scott) is True
    nerve = pn.nerve(frame)
    assert len(nerve) == 19
    witness = pn.find_up_reduction(nerve, scott)
    assert witness is not None and pn.is_up_reduction(witness)
    assert pn.is_alpha_diamond_connected(frame, S("2.1")) is False
    report(1, "five-element frame: validity, 19-chain nerve, reduction witness", started, 1.0)


def test_criterion_2_connectedness_equals_search():
    started = time.monotonic()
    rng = random.Random(1002)
    checked = 0
    for _ in range(200):
        poset = random_poset(rng.randint(1, 8), rng)
        for alpha in ALPHAS:
            expected = pn.validates_jankov(poset, pn.starlike_tree(alpha))
            assert pn.is_alpha_connected(poset, alpha) == expected
            checked += 1
    assert checked == 1000
    report(2, "alpha-connectedness == forbidden-configuration search, 200 posets", started, 60.0)


def test_criterion_3_nerve_connectedness_three_ways():
    started = time.monotonic()
    rng = random.Random(1003)
    for _ in range(50):
        poset = random_rooted_poset(rng.randint(1, 6), rng)
        nerve = pn.nerve(poset)
        for alpha in ALPHAS:
            direct = pn.is_alpha_nerve_connected(poset, alpha)
            one_step = pn.is_alpha_connected(nerve, alpha)
            again = pn.is_alpha_nerve_connected(nerve, alpha)
            assert direct == one_step == again
    report(3, "nerve-connectedness matches the nerve, 50 rooted posets", started, 60.0)


def test_criterion_4_subdivision_is_the_nerve():
    started = time.monotonic()

    def unit(*coords):
        return tuple(Fr(c) for c in coords)

    shapes = [
        pn.Simplex((unit(0), unit(1))),
        pn.Simplex((unit(0, 0), unit(1, 0), unit(0, 1))),
        pn.Simplex((unit(0, 0, 0), unit(1, 0, 0), unit(0, 1, 0), unit(0, 0, 1))),
    ]
    for simplex in shapes:
        complex_ = pn.validate_complex(simplex.faces())
        subdivided = pn.barycentric_subdivision(complex_)
        face = pn.face_poset(complex_)
        assert pn.are_isomorphic(pn.face_poset(subdivided), pn.nerve(face)) is not None
        if simplex.dim == 2:
            assert len(subdivided) == 25
            assert face.count_chains() == 25
    report(4, "barycentric subdivision is the nerve of the face poset, dims 1-3", started, 5.0)


def test_criterion_5_signature_order_and_reductions():
    started = time.monotonic()
    chain = [S("1^3"), S("3.1^2"), S("3^2.2.1")]
    assert chain[0] < chain[1] < chain[2]
    assert S("2") < S("3.1^2")
    assert not chain[1].leq(chain[0]) and not chain[2].leq(chain[1])
    assert not S("3.1^2").leq(S("2"))
    rng = random.Random(1005)
    for _ in range(20):
        beta_heights = sorted((rng.randint(1, 4) for _ in range(rng.randint(1, 4))), reverse=True)
        alpha_heights = []
        ceiling = None
        for h in beta_heights[: rng.randint(0, len(beta_heights))]:
            pick = rng.randint(1, h if ceiling is None else min(h, ceiling))
            alpha_heights.append(pick)
            ceiling = pick
        beta = Signature.from_heights(beta_heights)
        alpha = Signature.from_heights(alpha_heights)
        assert alpha.leq(beta)
        assert pn.is_p_morphism(pn.signature_reduction(beta, alpha))
    report(5, "signature order relations and 20 verified reductions", started, 1.0)


def test_criterion_6_construction_pipeline():
    started = time.monotonic()
    rng = random.Random(0)
    completed = 0
    while completed < 100:
        poset = random_rooted_poset(rng.randint(1, 7), rng)
        lambdas = LAMBDA_POOLS[completed % len(LAMBDA_POOLS)]
        if not pn.validates_sfl(poset, lambdas):
            continue
        result = pn.starlike_witness(poset, lambdas)
        assert pn.is_up_reduction(result.witness)
        assert set(result.witness.mapping.values()) == set(poset.labels)
        assert pn.is_graded(result.output) is not None
        for alpha in lambdas:
            assert pn.is_alpha_nerve_connected(result.output, alpha)
            assert pn.nerve_is_alpha_connected(result.output, alpha)
        completed += 1
    report(6, "100 pipeline runs: verified witnesses, nerve-connected outputs", started, 300.0)


def test_criterion_7_heyting_laws():
    started = time.monotonic()
    rng = random.Random(1007)
    triples = 0
    for _ in range(20):
        poset = random_poset(rng.randint(1, 7), rng)
        algebra = UpsetAlgebra(poset)
        ups = algebra.elements
        for _ in range(10):
            u, v, w = (rng.choice(ups) for _ in range(3))
            below_imp = w & ~algebra.implies(u, v) == 0
            meet_below = (w & u) & ~v == 0
            assert below_imp == meet_below
            triples += 1
        assert pn.frame_validates(poset, pn.parse_formula("p->p"))
    assert triples == 200
    fork = pn.starlike_tree(S("1^2"))
    kc_witness = pn.counter_valuation(fork, pn.named_formula("KC"))
    assert kc_witness is not None and any(kc_witness.values())
    for n in range(1, 5):
        chain = validate_poset([f"c{i}" for i in range(n)], [(f"c{i}", f"c{i+1}") for i in range(n - 1)])
        assert pn.counter_valuation(chain, pn.named_formula("LC")) is None
    report(7, "residuation on 200 triples; fork refutes KC, chains validate LC", started, 30.0)


def test_criterion_8_rational_geometry():
    started = time.monotonic()
    assert pn.denominator((Fr(2, 3), Fr(1, 2))) == 6
    assert pn.homogeneous((Fr(2, 3), Fr(1, 2))) == (4, 3, 6)
    triangle = pn.Simplex(((Fr(0), Fr(0)), (Fr(1), Fr(0)), (Fr(0), Fr(1))))
    assert pn.farey_mediant(triangle) == (Fr(1, 3), Fr(1, 3))
    rng = random.Random(1008)
    base = pn.validate_complex(triangle.faces())
    for _ in range(20):
        complex_ = base
        for _ in range(5):
            candidates = sorted(complex_.simplices, key=lambda s: s.label())
            complex_ = pn.elementary_farey(complex_, rng.choice(candidates))
        assert pn.is_unimodular_complex(complex_)
    for _ in range(10):
        poset = random_poset(rng.randint(1, 5), rng)
        if poset.is_empty:
            continue
        assert pn.is_unimodular_complex(pn.geometric_realization(poset))
    report(8, "denominators, mediants, unimodularity across Farey subdivisions", started, 30.0)


def test_criterion_9_iterated_nerve_grows_a_fan():
    started = time.monotonic()
    chain = validate_poset(["x0", "x1", "x2"], [("x0", "x1"), ("x1", "x2")])
    twice = pn.iterated_nerve(chain, 2)
    fork = pn.starlike_tree(S("1^2"))
    witness = pn.find_up_reduction(twice, fork)
    assert witness is not None and pn.is_up_reduction(witness)
    # the witness apex carries the fan: 2^{k-1} = 2 top nodes above it for k = 2
    apex = min(witness.domain, key=lambda lab: twice.heights[twice.index(lab)])
    above = twice.labels_of(twice.strict_up_mask(twice.index(apex)))
    tops = [lab for lab in above if twice.depths[twice.index(lab)] == 0]
    assert len(tops) >= 2
    report(9, "second nerve of the 3-chain up-reduces to the fork via a fan", started, 10.0)


if __name__ == "__main__":
    import sys

    raise SystemExit(pytest.main([__file__, "-v", "-s"] + sys.argv[1:]))
