"""Tests for exact bottleneck energy-barrier search."""

import random

import pytest

from polyqec.barrier import (
    BarrierCapError,
    BarrierError,
    barrier,
    classical_code_barrier,
    code_barrier,
    energy,
    sector_barrier,
)
from polyqec.codes import classical, two_block
from polyqec.distance import exact_distance
from polyqec.instantiate import BinaryMatrix, classical_parity_matrix, instantiate
from polyqec.lattice import GroupPresentation
from polyqec.poly import VarContext


def torus(ctx: VarContext, *sizes: int) -> GroupPresentation:
    d = ctx.dim
    rels = tuple(tuple(sizes[i] if j == i else 0 for j in range(d)) for i in range(d))
    return GroupPresentation(ctx, rels)


def _brute_bottleneck(H: BinaryMatrix, targets: set[int]) -> int:
    """Independent oracle: relax bottleneck distances to a fixpoint."""
    n = H.ncols
    energies = [H.times_vector(v).bit_count() for v in range(1 << n)]
    INF = 1 << 30
    dist = [INF] * (1 << n)
    dist[0] = 0
    changed = True
    while changed:
        changed = False
        for v in range(1 << n):
            if dist[v] == INF:
                continue
            for j in range(n):
                u = v ^ (1 << j)
                cand = max(dist[v], energies[u])
                if cand < dist[u]:
                    dist[u] = cand
                    changed = True
    return min(dist[t] for t in targets)


# -- energy ---------------------------------------------------------------


def test_energy_examples():
    ising = classical("x", "1 + x")
    m8 = classical_parity_matrix(ising, torus(ising.poly.context, 8))
    assert energy(m8, 0) == 0
    assert energy(m8, 1) == 2
    nm = classical("x y", "1 + x + y")
    m3 = classical_parity_matrix(nm, torus(nm.poly.context, 3, 3))
    assert energy(m3, 1) == 3


def test_energy_matches_direct_count():
    rng = random.Random(11)
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 8)
        mat = BinaryMatrix([rng.getrandbits(cols) for _ in range(rows)], cols)
        v = rng.getrandbits(cols)
        expect = sum((r & v).bit_count() % 2 for r in mat.rows)
        assert energy(mat, v) == expect


def test_energy_rejects_out_of_range():
    m = BinaryMatrix.identity(3)
    with pytest.raises(BarrierError):
        energy(m, 1 << 3)


# -- single-target barrier -------------------------------------------------


def test_domain_wall_pair_walks_the_ring():
    ising = classical("x", "1 + x")
    for L in (4, 8, 12, 16):
        m = classical_parity_matrix(ising, torus(ising.poly.context, L))
        res = barrier(m, (1 << L) - 1)
        assert res.barrier == 2
        assert res.target == (1 << L) - 1


def test_barrier_path_is_valid():
    ising = classical("x", "1 + x")
    m = classical_parity_matrix(ising, torus(ising.poly.context, 6))
    res = barrier(m, (1 << 6) - 1, want_path=True)
    state = 0
    peak = 0
    for j in res.path:
        state ^= 1 << j
        peak = max(peak, energy(m, state))
    assert state == res.target
    assert peak == res.barrier
    assert barrier(m, (1 << 6) - 1).path is None


def test_barrier_input_validation():
    ising = classical("x", "1 + x")
    m = classical_parity_matrix(ising, torus(ising.poly.context, 5))
    with pytest.raises(BarrierError, match="nonzero"):
        barrier(m, 0)
    with pytest.raises(BarrierError, match="nonzero"):
        barrier(m, 1 << 5)
    with pytest.raises(BarrierError, match="kernel"):
        barrier(m, 0b00001)
    wide = BinaryMatrix.zeros(1, 21)
    with pytest.raises(BarrierCapError):
        barrier(wide, 1)


def test_barrier_matches_brute_force_oracle():
    rng = random.Random(321)
    count = 0
    while count < 12:
        cols = rng.randint(2, 6)
        mat = BinaryMatrix([rng.getrandbits(cols) for _ in range(rng.randint(1, 4))], cols)
        kernel = [v for v in range(1, 1 << cols) if mat.times_vector(v) == 0]
        if not kernel:
            continue
        count += 1
        target = rng.choice(kernel)
        assert barrier(mat, target).barrier == _brute_bottleneck(mat, {target})


def test_barrier_translation_invariance():
    nm = classical("x y", "1 + x + y")
    pres = torus(nm.poly.context, 3, 3)
    m = classical_parity_matrix(nm, pres)
    from polyqec.lattice import quotient

    group = quotient(pres)
    base = classical_code_barrier(m)
    perm = group.translation((1, 2))
    shifted = 0
    t = base.target
    while t:
        low = t & -t
        shifted |= 1 << perm[low.bit_length() - 1]
        t ^= low
    assert barrier(m, shifted).barrier == base.barrier


# -- classical code barrier ------------------------------------------------


def test_triangle_generator_barrier_and_trivial_cases():
    nm = classical("x y", "1 + x + y")
    m3 = classical_parity_matrix(nm, torus(nm.poly.context, 3, 3))
    res = classical_code_barrier(m3)
    assert res.barrier == 4
    assert m3.times_vector(res.target) == 0 and res.target != 0
    for L in (2, 4):
        mm = classical_parity_matrix(nm, torus(nm.poly.context, L, L))
        with pytest.raises(BarrierError, match="trivial"):
            classical_code_barrier(mm)


def test_classical_code_barrier_matches_brute_force():
    rng = random.Random(987)
    count = 0
    while count < 10:
        cols = rng.randint(2, 6)
        mat = BinaryMatrix([rng.getrandbits(cols) for _ in range(rng.randint(1, 4))], cols)
        kernel = {v for v in range(1, 1 << cols) if mat.times_vector(v) == 0}
        if not kernel:
            continue
        count += 1
        assert classical_code_barrier(mat).barrier == _brute_bottleneck(mat, kernel)


def test_barrier_at_least_one_when_checks_cover_all_bits():
    ising = classical("x", "1 + x")
    for L in (4, 6, 8):
        m = classical_parity_matrix(ising, torus(ising.poly.context, L))
        assert classical_code_barrier(m).barrier >= 1


def test_cap_increase_does_not_change_value():
    ising = classical("x", "1 + x")
    m = classical_parity_matrix(ising, torus(ising.poly.context, 8))
    assert classical_code_barrier(m, cap_n=8).barrier == classical_code_barrier(m, cap_n=20).barrier


# -- CSS code barrier ------------------------------------------------------


def test_surface_code_barrier_is_two():
    code = two_block("x y", "1 + x", "1 + y")
    for L in (2, 3):
        inst = instantiate(code, torus(code.context, L, L))
        res = code_barrier(inst)
        assert res.barrier == 2
        assert res.x_result.barrier == 2
        assert res.z_result.barrier == 2
        assert res.four_way is None


def test_surface_code_four_way_report():
    code = two_block("x y", "1 + x", "1 + y")
    inst = instantiate(code, torus(code.context, 2, 2))
    res = code_barrier(inst, with_four_way=True)
    assert res.four_way.hx == 2 and res.four_way.hz == 2
    assert res.four_way.hx_t == 4 and res.four_way.hz_t == 4
    assert res.four_way.minimum == 2


def test_sector_targets_are_genuine_logicals():
    from polyqec.distance import validate_logical_witness

    code = two_block("x y", "1 + x", "1 + y")
    inst = instantiate(code, torus(code.context, 3, 3))
    for sector in ("X", "Z"):
        res = sector_barrier(inst, sector)
        validate_logical_witness(inst, res.target, sector)


def test_sector_barrier_matches_minimum_over_targets():
    # brute force: minimum single-target barrier over every X logical
    code = two_block("x y", "1 + x", "1 + y")
    inst = instantiate(code, torus(code.context, 2, 2))
    checks = inst.hz
    stab = {0}
    for r in inst.hx.rows:
        stab |= {s ^ r for s in stab}
    logicals = {
        v
        for v in range(1, 1 << inst.n)
        if checks.times_vector(v) == 0 and v not in stab
    }
    expect = _brute_bottleneck(checks, logicals)
    assert sector_barrier(inst, "X").barrier == expect


def test_code_barrier_rejects_bad_inputs():
    code = two_block("x y", "1 + x", "1 + y")
    big = instantiate(code, torus(code.context, 4, 4))
    with pytest.raises(BarrierCapError):
        code_barrier(big)
    trivial = two_block("x", "1", "1")
    inst = instantiate(trivial, torus(trivial.context, 3))
    with pytest.raises(BarrierError, match="no logical"):
        code_barrier(inst)


def test_code_barrier_consistent_with_exact_distance_witness():
    # the barrier target needn't be a minimum-weight logical, but both
    # searches must agree the code is nontrivial at the same sizes
    code = two_block("x y", "1 + x", "1 + y")
    inst = instantiate(code, torus(code.context, 2, 2))
    d = exact_distance(inst)
    b = code_barrier(inst)
    assert d.d_upper >= 1 and b.barrier >= 1
