"""Tests for GF(2) matrices and finite instantiation of two-block codes."""

import io
import random

import pytest

from polyqec.codes import CodeError, classical, two_block
from polyqec.instantiate import (
    BinaryMatrix,
    classical_parity_matrix,
    code_dimension,
    instantiate,
    parity_dot,
    tanner_component_count,
    write_coordinate_text,
    write_matrix_market,
)
from polyqec.lattice import GroupPresentation, InfiniteQuotientError
from polyqec.poly import VarContext


def torus(ctx: VarContext, *sizes: int) -> GroupPresentation:
    d = ctx.dim
    rels = tuple(tuple(sizes[i] if j == i else 0 for j in range(d)) for i in range(d))
    return GroupPresentation(ctx, rels)


def _dense_rank_oracle(dense):
    """Naive list-of-lists Gaussian elimination, independent of bit packing."""
    mat = [row[:] for row in dense]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][c]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                mat[r] = [(a + b) % 2 for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


# -- BinaryMatrix ----------------------------------------------------------


def test_dense_roundtrip_and_shape():
    m = BinaryMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    assert m.shape == (2, 3)
    assert m.to_dense() == [[1, 0, 1], [0, 1, 1]]
    assert BinaryMatrix.from_dense(m.to_dense()) == m


def test_row_width_validation():
    with pytest.raises(ValueError):
        BinaryMatrix([0b100], ncols=2)
    with pytest.raises(ValueError):
        BinaryMatrix.from_dense([[1, 0], [1]])


def test_identity_and_zeros():
    eye = BinaryMatrix.identity(4)
    assert eye.rank() == 4
    assert BinaryMatrix.zeros(3, 5).is_zero()
    assert not eye.is_zero()


def test_rank_against_dense_oracle():
    rng = random.Random(8123)
    for _ in range(100):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        dense = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
        m = BinaryMatrix.from_dense(dense)
        assert m.rank() == _dense_rank_oracle(dense)


def test_nullspace_spans_kernel():
    rng = random.Random(55)
    for _ in range(60):
        rows, cols = rng.randint(1, 7), rng.randint(1, 9)
        m = BinaryMatrix([rng.getrandbits(cols) for _ in range(rows)], cols)
        basis = m.nullspace()
        assert len(basis) == cols - m.rank()
        for x in basis:
            assert m.times_vector(x) == 0
        # random combinations stay in the kernel
        for _ in range(5):
            combo = 0
            for x in basis:
                if rng.random() < 0.5:
                    combo ^= x
            assert m.times_vector(combo) == 0


def test_residue_and_rowspace_membership():
    rng = random.Random(99)
    for _ in range(40):
        cols = rng.randint(2, 9)
        m = BinaryMatrix([rng.getrandbits(cols) for _ in range(rng.randint(1, 6))], cols)
        combo = 0
        for r in m.rows:
            if rng.random() < 0.5:
                combo ^= r
        assert m.rowspace_contains(combo)
        assert m.residue(combo) == 0
        outside = next((1 << j for j in range(cols) if not m.rowspace_contains(1 << j)), None)
        if outside is not None:
            assert m.residue(combo ^ outside) != 0


def test_transpose_involution_and_product():
    rng = random.Random(3)
    for _ in range(30):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = BinaryMatrix([rng.getrandbits(c) for _ in range(r)], c)
        assert m.transpose().transpose() == m
    a = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    b = BinaryMatrix.from_dense([[1, 0], [1, 1], [0, 1]])
    assert (a @ b).to_dense() == [[0, 1], [1, 0]]
    assert (a @ BinaryMatrix.identity(3)) == a
    with pytest.raises(ValueError):
        a @ a


def test_times_vector_matches_matmul():
    rng = random.Random(12)
    for _ in range(30):
        r, c = rng.randint(1, 6), rng.randint(1, 8)
        m = BinaryMatrix([rng.getrandbits(c) for _ in range(r)], c)
        v = rng.getrandbits(c)
        col = BinaryMatrix([(v >> j) & 1 for j in range(c)], 1)
        stacked = m @ col
        expect = sum(1 << i for i, row in enumerate(stacked.rows) if row)
        assert m.times_vector(v) == expect


def test_hstack_vstack():
    a = BinaryMatrix.from_dense([[1, 0], [0, 1]])
    b = BinaryMatrix.from_dense([[1, 1], [1, 0]])
    assert a.hstack(b).to_dense() == [[1, 0, 1, 1], [0, 1, 1, 0]]
    assert a.vstack(b).to_dense() == [[1, 0], [0, 1], [1, 1], [1, 0]]
    with pytest.raises(ValueError):
        a.hstack(BinaryMatrix.zeros(3, 2))
    with pytest.raises(ValueError):
        a.vstack(BinaryMatrix.zeros(2, 3))


def test_parity_dot():
    assert parity_dot(0b1011, 0b1110) == 0
    assert parity_dot(0b1011, 0b0110) == 1


# -- instantiation --------------------------------------------------------


def test_surface_code_parameters_small_tori():
    code = two_block("x y", "1 + x", "1 + y")
    for L in (2, 3, 4):
        inst = instantiate(code, torus(code.context, L, L))
        assert inst.n == 2 * L * L
        assert inst.k() == 2
        assert code_dimension(inst) == inst.k()
        assert tanner_component_count(inst) == 1
        assert (inst.hx @ inst.hz.transpose()).is_zero()


def test_bivariate_bicycle_144_12():
    code = two_block("x y", "x^3 + y + y^2", "y^3 + x + x^2")
    inst = instantiate(code, torus(code.context, 12, 6))
    assert inst.n == 144
    assert inst.hx.rank() == 66
    assert inst.hz.rank() == 66
    assert inst.k() == 12
    assert tanner_component_count(inst) == 1


def test_instantiation_matches_direct_modular_construction():
    rng = random.Random(2718)
    for _ in range(10):
        L1, L2 = rng.randint(2, 4), rng.randint(2, 4)
        ctx = VarContext(("x", "y"))
        fterms = {(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))}
        gterms = {(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))}
        from polyqec.codes import TwoBlockCode
        from polyqec.poly import LaurentPoly

        code = TwoBlockCode(ctx, LaurentPoly(ctx, frozenset(fterms)), LaurentPoly(ctx, frozenset(gterms)))
        inst = instantiate(code, torus(ctx, L1, L2))
        N = L1 * L2
        expect_x = [[0] * (2 * N) for _ in range(N)]
        for i in range(L1):
            for j in range(L2):
                h = i * L2 + j
                for (e1, e2) in fterms:
                    col = ((i + e1) % L1) * L2 + (j + e2) % L2
                    expect_x[h][col] ^= 1
                for (e1, e2) in gterms:
                    col = N + ((i + e1) % L1) * L2 + (j + e2) % L2
                    expect_x[h][col] ^= 1
        assert inst.hx.to_dense() == expect_x
        expect_z = [[0] * (2 * N) for _ in range(N)]
        for i in range(L1):
            for j in range(L2):
                h = i * L2 + j
                for (e1, e2) in gterms:
                    col = ((i - e1) % L1) * L2 + (j - e2) % L2
                    expect_z[h][col] ^= 1
                for (e1, e2) in fterms:
                    col = N + ((i - e1) % L1) * L2 + (j - e2) % L2
                    expect_z[h][col] ^= 1
        assert inst.hz.to_dense() == expect_z


def test_random_instances_commute():
    rng = random.Random(424242)
    from polyqec.codes import TwoBlockCode
    from polyqec.poly import LaurentPoly

    for _ in range(15):
        dim = rng.randint(1, 3)
        ctx = VarContext(tuple("xyz"[:dim]))
        f = LaurentPoly(
            ctx,
            frozenset(
                tuple(rng.randint(-2, 2) for _ in range(dim))
                for _ in range(rng.randint(1, 4))
            ),
        )
        g = LaurentPoly(
            ctx,
            frozenset(
                tuple(rng.randint(-2, 2) for _ in range(dim))
                for _ in range(rng.randint(1, 4))
            ),
        )
        if f.is_zero or g.is_zero:
            continue
        sizes = tuple(rng.randint(2, 4) for _ in range(dim))
        inst = instantiate(TwoBlockCode(ctx, f, g), torus(ctx, *sizes))
        assert (inst.hx @ inst.hz.transpose()).is_zero()


def test_monomial_collisions_cancel_mod_2():
    gen = classical("x", "1 + x + x^3")
    pres = torus(gen.poly.context, 2)
    mat = classical_parity_matrix(gen, pres)
    # x and x^3 coincide on the 2-cycle and cancel, leaving the constant term
    assert mat.to_dense() == [[1, 0], [0, 1]]


def test_decomposable_code_splits_on_even_torus():
    code = two_block("x y z", "1 + x^-1*y + x^-1*z", "1 + z^-1*y")
    even = instantiate(code, torus(code.context, 2, 2, 2))
    assert tanner_component_count(even) == 2
    odd = instantiate(code, torus(code.context, 3, 5, 7))
    assert tanner_component_count(odd) == 1


def test_classical_triangle_generator_kernels():
    gen = classical("x y", "1 + x + y")
    m3 = classical_parity_matrix(gen, torus(gen.poly.context, 3, 3))
    assert m3.rank() == 7
    assert len(m3.nullspace()) == 2
    for L in (2, 4):
        m = classical_parity_matrix(gen, torus(gen.poly.context, L, L))
        assert len(m.nullspace()) == 0


def test_instantiate_rejects_bad_inputs():
    code = two_block("x y", "1 + x", "1 + y")
    with pytest.raises(CodeError, match="context"):
        instantiate(code, torus(VarContext(("x",)), 4))
    with pytest.raises(InfiniteQuotientError):
        instantiate(code, GroupPresentation(code.context, ((2, 0),)))
    bad = two_block("x y", "x + x", "1 + y")
    with pytest.raises(CodeError, match="zero generator"):
        instantiate(bad, torus(code.context, 2, 2))


def test_qubit_labels_name_block_and_coords():
    code = two_block("x y", "1 + x", "1 + y")
    inst = instantiate(code, torus(code.context, 2, 3))
    assert inst.qubit_label(0) == "L(0, 0)"
    assert inst.qubit_label(5) == "L(1, 2)"
    assert inst.qubit_label(6) == "R(0, 0)"
    assert inst.qubit_label(11) == "R(1, 2)"


# -- exports ---------------------------------------------------------------


def test_write_coordinate_text():
    m = BinaryMatrix.from_dense([[1, 0, 1], [0, 0, 0], [0, 1, 0]])
    buf = io.StringIO()
    write_coordinate_text(m, buf)
    assert buf.getvalue().splitlines() == ["3 3", "0 0", "0 2", "2 1"]


def test_write_matrix_market():
    m = BinaryMatrix.from_dense([[1, 0], [1, 1]])
    buf = io.StringIO()
    write_matrix_market(m, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("%%MatrixMarket")
    assert lines[1] == "2 2 3"
    assert lines[2:] == ["1 1 1", "2 1 1", "2 2 1"]


def test_write_to_path(tmp_path):
    m = BinaryMatrix.from_dense([[1, 1]])
    p = tmp_path / "m.txt"
    write_coordinate_text(m, p)
    assert p.read_text().splitlines() == ["1 2", "0 0", "0 1"]
