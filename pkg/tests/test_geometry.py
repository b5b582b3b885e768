import random
from fractions import Fraction as Fr

import pytest

import polynerve as pn
from polynerve import RationalComplex, Simplex, validate_poset
from polynerve.errors import (
    AffineDependence,
    BadIntersection,
    NotDownwardClosed,
    NotUpwardClosed,
    PointOutsideSupport,
)
from polynerve.exactla import smith_divisors

from conftest import brute_chains, sample_posets


def pt(*coords):
    return tuple(Fr(c) for c in coords)


def full_complex(*vertices):
    return pn.validate_complex(Simplex(tuple(vertices)).faces())


@pytest.fixture
def triangle():
    return full_complex(pt(0, 0), pt(1, 0), pt(0, 1))


@pytest.fixture
def segment():
    return full_complex(pt(0), pt(1))


# -- validation ---------------------------------------------------------------------


def test_triangle_has_seven_faces(triangle):
    assert len(triangle) == 7


def test_affine_dependence_rejected():
    with pytest.raises(AffineDependence):
        Simplex((pt(0, 0), pt(1, 1), pt(2, 2)))
    with pytest.raises(AffineDependence):
        Simplex((pt(0), pt(0)))


def test_missing_face_rejected():
    tri = Simplex((pt(0, 0), pt(1, 0), pt(0, 1)))
    broken = [s for s in tri.faces() if s.dim != 1]
    with pytest.raises(NotDownwardClosed):
        pn.validate_complex(broken)


def test_bad_intersection_rejected():
    # two segments crossing in their interiors
    a = Simplex((pt(0, 0), pt(2, 2)))
    b = Simplex((pt(0, 2), pt(2, 0)))
    sims = set(a.faces()) | set(b.faces())
    with pytest.raises(BadIntersection):
        pn.validate_complex(sims)
    # two triangles overlapping along half an edge
    t1 = Simplex((pt(0, 0), pt(2, 0), pt(0, 2)))
    t2 = Simplex((pt(1, 0), pt(3, 0), pt(2, -2)))
    sims = set(t1.faces()) | set(t2.faces())
    with pytest.raises(BadIntersection):
        pn.validate_complex(sims)


def test_shared_edge_is_fine():
    t1 = Simplex((pt(0, 0), pt(1, 0), pt(0, 1)))
    t2 = Simplex((pt(1, 0), pt(0, 1), pt(1, 1)))
    complex_ = pn.validate_complex(set(t1.faces()) | set(t2.faces()))
    assert len(complex_) == 11  # 4 vertices + 5 edges + 2 triangles


# -- carriers and stars ------------------------------------------------------------------


def test_carrier_examples(segment, triangle):
    edge = pn.carrier(segment, (Fr(1, 2),))
    assert edge.dim == 1
    vertex = pn.carrier(segment, (Fr(0),))
    assert vertex.dim == 0
    face = pn.carrier(triangle, (Fr(1, 3), Fr(1, 3)))
    assert face.dim == 2
    assert face.barycentric_coords((Fr(1, 3), Fr(1, 3))) == (
        Fr(1, 3),
        Fr(1, 3),
        Fr(1, 3),
    )
    with pytest.raises(PointOutsideSupport):
        pn.carrier(triangle, (Fr(2), Fr(2)))


def test_relint_and_open_star(triangle):
    tri = next(s for s in triangle.simplices if s.dim == 2)
    assert pn.relint_contains(tri, (Fr(1, 3), Fr(1, 3)))
    assert not pn.relint_contains(tri, (Fr(0), Fr(0)))
    vertex = Simplex((pt(0, 0),))
    star = pn.open_star(triangle, vertex)
    assert len(star) == 4  # the vertex, two edges, the face


# -- subdivisions -----------------------------------------------------------------------------


def test_stellar_at_edge_midpoint(triangle):
    divided = pn.elementary_stellar(triangle, (Fr(1, 2), Fr(0)))
    # split edge, apex joined: 4 vertices, 5 edges, 2 faces
    assert len([s for s in divided.simplices if s.dim == 0]) == 4
    assert len([s for s in divided.simplices if s.dim == 1]) == 5
    assert len([s for s in divided.simplices if s.dim == 2]) == 2
    pn.validate_complex(divided.simplices)


def test_stellar_at_vertex_is_identity(triangle):
    assert pn.elementary_stellar(triangle, (Fr(0), Fr(0))) == triangle


def test_stellar_outside_support(triangle):
    with pytest.raises(PointOutsideSupport):
        pn.elementary_stellar(triangle, (Fr(5), Fr(5)))


def test_segment_subdivision(segment):
    divided = pn.barycentric_subdivision(segment)
    assert len([s for s in divided.simplices if s.dim == 0]) == 3
    assert len([s for s in divided.simplices if s.dim == 1]) == 2
    pn.validate_complex(divided.simplices)


def test_triangle_subdivision_counts(triangle):
    sd = pn.barycentric_subdivision(triangle)
    by_dim = {d: len([s for s in sd.simplices if s.dim == d]) for d in range(3)}
    assert by_dim == {0: 7, 1: 12, 2: 6}
    assert len(sd) == 25
    pn.validate_complex(sd.simplices)


def test_derived_zero_is_identity(triangle):
    assert pn.derived(triangle, 0) == triangle


def test_tetrahedron_subdivision_count_matches_chain_oracle():
    tetra = full_complex(pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1))
    face_count = len(pn.barycentric_subdivision(tetra))
    fp = pn.face_poset(tetra)
    assert face_count == len(brute_chains(fp)) == fp.count_chains()


def test_sd_face_poset_is_nerve_of_face_poset():
    shapes = [
        full_complex(pt(0), pt(1)),
        full_complex(pt(0, 0), pt(1, 0), pt(0, 1)),
        full_complex(pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)),
    ]
    for complex_ in shapes:
        sd = pn.barycentric_subdivision(complex_)
        fp = pn.face_poset(complex_)
        assert pn.are_isomorphic(pn.face_poset(sd), pn.nerve(fp)) is not None


# -- denominators, mediants, unimodularity -----------------------------------------------------


def test_denominator_and_homogeneous():
    assert pn.denominator((Fr(2, 3), Fr(1, 2))) == 6
    assert pn.homogeneous((Fr(2, 3), Fr(1, 2))) == (4, 3, 6)
    assert pn.denominator((Fr(3), Fr(7))) == 1
    assert pn.homogeneous((Fr(0),)) == (0, 1)


def test_farey_mediant_examples(triangle):
    seg = Simplex((pt(0), pt(1)))
    assert pn.farey_mediant(seg) == (Fr(1, 2),)
    vertex = Simplex((pt(3, 4),))
    assert pn.farey_mediant(vertex) == (Fr(3), Fr(4))
    tri = next(s for s in triangle.simplices if s.dim == 2)
    assert pn.farey_mediant(tri) == (Fr(1, 3), Fr(1, 3))
    assert pn.denominator(pn.farey_mediant(tri)) == 3


def test_unimodularity():
    assert pn.is_unimodular(Simplex((pt(0), pt(1))))
    assert not pn.is_unimodular(Simplex((pt(0), pt(2))))
    # standard-basis simplices are unimodular by definition
    e = [pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)]
    assert pn.is_unimodular(Simplex(tuple(e)))
    assert pn.is_unimodular(Simplex((e[0], e[1])))


def test_smith_divisors_basics():
    assert smith_divisors([[1, 0], [0, 1]]) == [1, 1]
    assert smith_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert smith_divisors([[2, 4], [4, 8]]) == [2]


def test_farey_preserves_unimodularity(triangle):
    rng = random.Random(107)
    for _ in range(8):
        complex_ = triangle
        for _ in range(4):
            candidates = sorted(complex_.simplices, key=lambda s: s.label())
            simplex = rng.choice(candidates)
            complex_ = pn.elementary_farey(complex_, simplex)
        assert pn.is_unimodular_complex(complex_)
        pn.validate_complex(complex_.simplices)


def test_farey_isomorphic_to_barycentric(triangle):
    tri = next(s for s in triangle.simplices if s.dim == 2)
    farey = pn.elementary_farey(triangle, tri)
    bary = pn.elementary_barycentric(triangle, tri)
    assert (
        pn.are_isomorphic(pn.face_poset(farey), pn.face_poset(bary)) is not None
    )


# -- refinement ------------------------------------------------------------------------------------


def test_refinement(triangle, segment):
    sd = pn.barycentric_subdivision(triangle)
    assert pn.is_refinement(sd, triangle)
    assert not pn.is_refinement(triangle, sd)
    tri = next(s for s in triangle.simplices if s.dim == 2)
    assert pn.is_refinement(pn.elementary_farey(triangle, tri), triangle)
    assert pn.is_refinement(pn.derived(segment, 3), segment)
    assert pn.is_refinement(pn.derived(triangle, 3), triangle)
    # a plainly different support
    other = full_complex(pt(5, 5), pt(6, 5))
    assert not pn.is_refinement(other, triangle)


# -- realization ---------------------------------------------------------------------------------------


def test_geometric_realization_fork():
    fork = pn.starlike_tree(pn.Signature.parse("1^2"))
    complex_ = pn.geometric_realization(fork)
    assert len([s for s in complex_.simplices if s.dim == 0]) == 3
    assert len([s for s in complex_.simplices if s.dim == 1]) == 2
    assert len(complex_) == 5
    assert pn.is_unimodular_complex(complex_)


def test_geometric_realization_samples():
    single = validate_poset(["s"], [])
    assert len(pn.geometric_realization(single)) == 1
    chain = validate_poset(["a", "b"], [("a", "b")])
    realized = pn.geometric_realization(chain)
    assert len(realized) == 3
    assert pn.is_unimodular_complex(realized)
    for poset in sample_posets(6, 5, seed=109):
        if poset.is_empty:
            continue
        complex_ = pn.geometric_realization(poset)
        # face poset of the realization is the nerve (checked inside), and
        # every simplex is spanned by standard basis vectors
        assert pn.is_unimodular_complex(complex_)
        assert len(complex_) == poset.count_chains()


# -- upsets as opens ------------------------------------------------------------------------------------


def test_upset_to_open(triangle):
    tri = next(s for s in triangle.simplices if s.dim == 2)
    top_only = pn.upset_to_open(triangle, {tri})
    assert top_only.contains((Fr(1, 3), Fr(1, 3)))
    assert not top_only.contains((Fr(0), Fr(0)))
    everything = pn.upset_to_open(triangle, triangle.simplices)
    nothing = pn.upset_to_open(triangle, set())
    assert (top_only | nothing).members == top_only.members
    assert (everything & top_only).members == top_only.members
    with pytest.raises(NotUpwardClosed):
        pn.upset_to_open(triangle, {Simplex((pt(0, 0),))})


def test_open_set_heyting_ops_match_upset_algebra(triangle):
    from polynerve.semantics import UpsetAlgebra

    fp = pn.face_poset(triangle)
    algebra = UpsetAlgebra(fp)
    label_to_simplex = {s.label(): s for s in triangle.simplices}
    rng = random.Random(113)
    for _ in range(20):
        u_mask, v_mask = rng.choice(algebra.elements), rng.choice(algebra.elements)
        as_open = lambda mask: pn.upset_to_open(
            triangle, {label_to_simplex[lab] for lab in fp.labels_of(mask)}
        )
        u, v = as_open(u_mask), as_open(v_mask)
        imp_mask = algebra.implies(u_mask, v_mask)
        assert {s.label() for s in u.implies(v).members} == set(
            fp.labels_of(imp_mask)
        )
