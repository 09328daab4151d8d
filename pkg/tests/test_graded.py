import random

import numpy as np
import pytest

from persheaf import (
    CellularSheaf,
    CochainComplex,
    Field,
    FilteredComplex,
    HomogeneousMatrix,
    NotFreeError,
    SheafDiagram,
    SheafMorphism,
    Simplex,
    barcodes_equal,
    cohomology_basis,
    constant,
    diagram_graded_barcode,
    diagram_to_graded_sheaf,
    evaluate_at,
    evaluate_sheaf_at,
    graded_cochain_complex,
    matrix,
    persistent_cohomology,
    validate_graded_sheaf,
    validate_sheaf,
    zeros,
)
from persheaf.graded import _graded_kernel, _graded_snf_bars

from builders import edge_diagram
from genrandom import random_complex, random_monomorphic_diagram

F2 = Field(2)
F5 = Field(5)


def test_homogeneous_matrix_rejects_negative_powers():
    HomogeneousMatrix(F2, [[1]], (0,), (2,))
    with pytest.raises(ValueError, match="negative t-power"):
        HomogeneousMatrix(F2, [[1]], (2,), (0,))
    with pytest.raises(ValueError, match="shape"):
        HomogeneousMatrix(F2, [[1, 0]], (0,), (0,))


def test_homogeneous_compose():
    a = HomogeneousMatrix(F5, [[2, 0], [0, 3]], (0, 1), (1, 2))
    b = HomogeneousMatrix(F5, [[1], [4]], (1, 2), (3,))
    c = a.compose(b)
    assert c.scalar.tolist() == [[2], [2]]
    assert c.row_degrees == (0, 1) and c.col_degrees == (3,)
    with pytest.raises(ValueError):
        b.compose(a)


def test_presentation_reduction_drops_redundant_relations():
    # three generators, two killed outright, the third untouched
    rel = matrix([[4, 0, 0, 0, 1], [0, 4, 1, 0, 0], [0, 0, 0, 0, 0]], 5)
    bars = _graded_snf_bars(F5, rel, (0, 0, 3), (0, 1, 0, 2, 4))
    assert bars == [(3, None)]


def test_presentation_reduction_torsion_length():
    bars = _graded_snf_bars(F5, matrix([[2]], 5), (1,), (4,))
    assert bars == [(1, 3)]


def test_presentation_reduction_keeps_minimal_power():
    bars = _graded_snf_bars(F5, matrix([[1, 1]], 5), (0,), (2, 3))
    assert bars == [(0, 1)]


def test_graded_kernel_tracks_degrees():
    basis, degs = _graded_kernel(F2, matrix([[1, 1]], 2), (0, 2))
    assert degs == (2,)
    assert basis.ravel().tolist() == [1, 1]
    empty, edegs = _graded_kernel(F2, matrix([[1, 0], [0, 1]], 2), (0, 1))
    assert edegs == () and empty.shape == (2, 0)


def test_diagram_module_generator_degrees():
    gs = diagram_to_graded_sheaf(edge_diagram())
    assert gs.degrees["0"] == (0, 1)
    assert gs.degrees["0.1"] == (0, 0, 3)
    assert gs.degrees["1"] == (0, 2, 4)
    assert validate_graded_sheaf(gs) == []
    r1 = gs.restriction("0", "0.1")
    assert r1.scalar.tolist() == [[1, 0], [0, 1], [0, 0]]
    assert r1.row_degrees == (0, 0, 3) and r1.col_degrees == (0, 1)
    r2 = gs.restriction("1", "0.1")
    assert r2.scalar.tolist() == [[0, 0, 1], [1, 0, 0], [0, 0, 0]]
    assert r2.col_degrees == (0, 2, 4)


def test_non_injective_diagram_is_not_free():
    x = FilteredComplex(F2, [Simplex("0", (0,), 0), Simplex("1", (1,), 0)])
    a, b = constant(x, 1), constant(x, 1)
    dead = SheafMorphism(a, b, {"0": zeros(1, 1), "1": zeros(1, 1)})
    with pytest.raises(NotFreeError):
        diagram_to_graded_sheaf(SheafDiagram([a, b], [dead]))


def test_diagram_barcode_matches_pointwise():
    d = edge_diagram()
    from persheaf import Barcode
    assert diagram_graded_barcode(d, 0) == Barcode([(1, None), (2, None), (4, None)])
    for k in (0, 1):
        _, want = persistent_cohomology(d, k)
        assert barcodes_equal(diagram_graded_barcode(d, k), want)


def test_graded_coboundary_squares_to_zero():
    gs = diagram_to_graded_sheaf(edge_diagram())
    gc = graded_cochain_complex(gs)
    square = gc.map_out(1).compose(gc.map_out(0))
    assert not square.scalar.any()


def test_slices_recover_snapshots():
    d = edge_diagram()
    gc = graded_cochain_complex(diagram_to_graded_sheaf(d))
    for n, sheaf in enumerate(d.snapshots):
        cc = CochainComplex(sheaf)
        sl = evaluate_at(gc, n)
        for k in (0, 1):
            assert sl.dim(k) == cc.dim(k)
            betti_slice = (
                sl.dim(k)
                - F2.rank(sl.delta(k))
                - F2.rank(sl.delta(k - 1) if k else zeros(sl.dim(0), 0))
            )
            assert betti_slice == cohomology_basis(sheaf, k, cc).dim


def test_slice_step_maps_commute_with_delta():
    gc = graded_cochain_complex(diagram_to_graded_sheaf(edge_diagram()))
    for n in range(4):
        cur, nxt = evaluate_at(gc, n), evaluate_at(gc, n + 1)
        left = F2.matmul(nxt.delta(0), cur.t_action(0))
        right = F2.matmul(cur.t_action(1), cur.delta(0))
        assert np.array_equal(left, right)


def test_evaluated_sheaves_validate():
    d = edge_diagram()
    gs = diagram_to_graded_sheaf(d)
    for n, snap in enumerate(d.snapshots):
        ev = evaluate_sheaf_at(gs, n)
        assert validate_sheaf(ev) == []
        assert ev.stalk_dim == snap.stalk_dim


def test_random_diagrams_compress_without_loss():
    rng = random.Random(301)
    for _ in range(15):
        x = random_complex(rng, Field(rng.choice([2, 5])))
        d = random_monomorphic_diagram(rng, x)
        gs = diagram_to_graded_sheaf(d)
        assert validate_graded_sheaf(gs) == []
        for n, snap in enumerate(d.snapshots):
            assert evaluate_sheaf_at(gs, n).stalk_dim == snap.stalk_dim
        for k in range(x.dim + 1):
            _, want = persistent_cohomology(d, k)
            assert barcodes_equal(diagram_graded_barcode(d, k), want)
