import numpy as np
import pytest

from meshpress import shapes
from meshpress.hierarchy import build_hierarchy, simplify_once
from meshpress.mesh import TriMesh
from meshpress.wavelet import analyze, synthesize


@pytest.fixture(scope="module")
def quad_level():
    """One quadrisected triangle with hand-placed geometry."""
    fine = shapes.subdivide_midpoint(shapes.triangle())
    return simplify_once(fine)


def test_midpoint_odd_gives_zero_detail(quad_level):
    record = quad_level
    coeffs = analyze(record, record.fine_mesh.vertices, lifting=False)
    for detail in coeffs.details.values():
        assert np.allclose(detail, 0.0, atol=1e-15)


def test_detail_is_offset_from_parent_midpoint():
    base = TriMesh([[0, 0, 0], [2, 0, 0], [0, 2, 0]], [[0, 1, 2]])
    fine = shapes.subdivide_midpoint(base)
    record = simplify_once(fine)
    geometry = fine.vertices.copy()
    # move the midpoint of edge (0, 1) from (1, 0, 0) to (1, 1, 0)
    odd_on_01 = next(v for v, (a, b) in record.parent_edge.items()
                     if {a, b} == {0, 1})
    geometry[odd_on_01] = [1.0, 1.0, 0.0]
    coeffs = analyze(record, geometry, lifting=False)
    assert np.allclose(coeffs.details[odd_on_01], [0.0, 1.0, 0.0])
    # without lifting, even positions pass through unchanged
    assert np.allclose(coeffs.approx_geometry,
                       geometry[record.coarse_to_fine])
    # and synthesis recovers the moved vertex exactly
    back = synthesize(record, coeffs)
    assert np.allclose(back, geometry, atol=1e-15)


def test_zero_details_place_odds_at_midpoints(quad_level):
    record = quad_level
    coeffs = analyze(record, record.fine_mesh.vertices, lifting=False)
    for odd in coeffs.details:
        coeffs.details[odd] = np.zeros(3)
    fine = synthesize(record, coeffs)
    for odd, (a, b) in record.parent_edge.items():
        assert np.allclose(fine[odd], 0.5 * (fine[a] + fine[b]))


@pytest.mark.parametrize("lifting", [False, True])
def test_perfect_reconstruction_on_corpus(hierarchies, corpus, lifting):
    for name, records in hierarchies.items():
        geometry = corpus[name].vertices
        for record in records:
            coeffs = analyze(record, geometry, lifting)
            back = synthesize(record, coeffs)
            scale = max(1.0, float(np.abs(geometry).max()))
            assert np.abs(back - geometry).max() <= 1e-12 * scale, name
            geometry = coeffs.approx_geometry


def test_lifting_changes_even_geometry_but_not_details():
    fine = shapes.bumpy_sphere(2)
    record = simplify_once(fine)
    plain = analyze(record, fine.vertices, lifting=False)
    lifted = analyze(record, fine.vertices, lifting=True)
    for odd in plain.details:
        assert np.array_equal(plain.details[odd], lifted.details[odd])
    assert not np.allclose(plain.approx_geometry, lifted.approx_geometry)
    assert plain.lifted is False and lifted.lifted is True


def test_locality_of_single_odd_perturbation():
    fine = shapes.icosphere(2)
    record = simplify_once(fine)
    odd = int(record.odd_vertices[0])
    a, b = record.parent_edge[odd]
    base = analyze(record, fine.vertices, lifting=True)
    moved = fine.vertices.copy()
    moved[odd] += [0.01, -0.02, 0.03]
    bumped = analyze(record, moved, lifting=True)
    for v in record.parent_edge:
        same = np.array_equal(base.details[v], bumped.details[v])
        assert same == (v != odd)
    changed = ~np.all(np.isclose(base.approx_geometry,
                                 bumped.approx_geometry), axis=1)
    allowed = {record.fine_to_coarse[a], record.fine_to_coarse[b]}
    assert set(np.flatnonzero(changed)) <= allowed


def test_size_mismatch_rejected(quad_level):
    with pytest.raises(ValueError):
        analyze(quad_level, np.zeros((2, 3)))


def test_synthesize_validates_inputs(quad_level):
    coeffs = analyze(quad_level, quad_level.fine_mesh.vertices)
    coeffs.level_index += 1
    with pytest.raises(ValueError):
        synthesize(quad_level, coeffs)
    coeffs.level_index -= 1
    bad = analyze(quad_level, quad_level.fine_mesh.vertices)
    bad.details.pop(next(iter(bad.details)))
    with pytest.raises(ValueError):
        synthesize(quad_level, bad)
