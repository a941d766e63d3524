"""Minimum-distance search for instantiated CSS codes.

Exact distances come from a full Gray-code sweep of the relevant kernel,
feasible only at small block length.  At practical sizes a seeded
information-set search gives upper bounds: repeatedly re-eliminate the kernel
basis along a random column order and inspect the resulting sparse-ish rows
(and sums of light row pairs) for low-weight logical operators.

Sector conventions: an X-type logical is v with HZ*v = 0 and v outside the
row space of HX; symmetrically for Z.  The reported code distance is the
minimum over the two sectors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .instantiate import BinaryMatrix, CodeInstance, parity_dot

__all__ = [
    "DistanceError",
    "DistanceCapError",
    "DistanceResult",
    "ClassicalDistance",
    "exact_distance",
    "exact_sector_distance",
    "random_upper_bound",
    "exact_classical_distance",
    "validate_logical_witness",
    "logical_space",
]

EXACT_CAP_DEFAULT = 28
_KERNEL_EXP_CAP = 26  # hard cap on 2^dim enumeration states


class DistanceError(ValueError):
    """Distance search cannot run on this input."""


class DistanceCapError(DistanceError):
    """Exact enumeration would exceed the configured size caps."""


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a distance search with reproducibility metadata."""

    d_upper: int
    d_lower: int | None
    witness: int | None
    witness_sector: str | None
    method: str  # "exact-enumeration" | "random-information-set"
    trials: int | None = None
    seed: int | None = None
    workers: int | None = None


@dataclass(frozen=True)
class ClassicalDistance:
    """Minimum-weight nonzero kernel element of a classical check matrix."""

    value: int | None  # None: the kernel is trivial, there are no codewords
    witness: int | None


def logical_space(inst: CodeInstance, sector: str) -> tuple[list[int], list[int]]:
    """(kernel basis, opposite-sector logical representatives) for a sector.

    For sector "X" the kernel is ker(HZ) and the representatives span
    ker(HX) modulo rowspace(HZ).  A kernel element v is logical iff it pairs
    oddly with at least one representative, which turns the logical test into
    a handful of popcounts.
    """
    if sector == "X":
        own_kernel, opp_checks, opp_rows = inst.hz, inst.hx, inst.hz
    elif sector == "Z":
        own_kernel, opp_checks, opp_rows = inst.hx, inst.hz, inst.hx
    else:
        raise DistanceError(f"unknown sector {sector!r}")
    kernel = own_kernel.nullspace()
    # representatives: kernel of the opposite matrix modulo its stabilizer rows
    piv: dict[int, int] = {}

    def reduce_top(v: int) -> int:
        cur = v
        while cur:
            c = cur.bit_length() - 1
            if c not in piv:
                return cur
            cur ^= piv[c]
        return 0

    for row in opp_rows.rows:
        res = reduce_top(row)
        if res:
            piv[res.bit_length() - 1] = res
    reps = []
    for v in opp_checks.nullspace():
        res = reduce_top(v)
        if res:
            reps.append(v)
            piv[res.bit_length() - 1] = res
    return kernel, reps


def validate_logical_witness(inst: CodeInstance, witness: int, sector: str) -> None:
    """Independent check that a witness is a genuine logical operator."""
    if sector == "X":
        kernel_of, stabilizers = inst.hz, inst.hx
    elif sector == "Z":
        kernel_of, stabilizers = inst.hx, inst.hz
    else:
        raise DistanceError(f"unknown sector {sector!r}")
    if witness <= 0 or witness >> inst.n:
        raise DistanceError("witness is not a nonzero vector on the qubit columns")
    if kernel_of.times_vector(witness):
        raise DistanceError(f"witness violates the {sector}-sector kernel condition")
    if stabilizers.rowspace_contains(witness):
        raise DistanceError("witness is a stabilizer, not a logical operator")


def _signatures(kernel: list[int], reps: list[int]) -> list[int]:
    """Pairing signature of each kernel basis vector with the representatives."""
    sigs = []
    for v in kernel:
        s = 0
        for i, rep in enumerate(reps):
            if parity_dot(v, rep):
                s |= 1 << i
        sigs.append(s)
    return sigs


def exact_sector_distance(
    inst: CodeInstance, sector: str, *, cap_n: int = EXACT_CAP_DEFAULT
) -> tuple[int, int]:
    """(distance, witness) for one sector by full kernel enumeration."""
    if inst.n > cap_n:
        raise DistanceCapError(f"n={inst.n} exceeds the exact-search cap {cap_n}")
    kernel, reps = logical_space(inst, sector)
    if not reps:
        raise DistanceError("code has no logical operators (k = 0)")
    m = len(kernel)
    if m > _KERNEL_EXP_CAP:
        raise DistanceCapError(f"kernel dimension {m} exceeds 2^{_KERNEL_EXP_CAP} states")
    sigs = _signatures(kernel, reps)
    best_w = inst.n + 1
    best = None
    state = 0
    sig = 0
    for i in range(1, 1 << m):
        j = (i & -i).bit_length() - 1
        state ^= kernel[j]
        sig ^= sigs[j]
        if sig:
            w = state.bit_count()
            if w < best_w:
                best_w, best = w, state
    assert best is not None  # reps nonempty guarantees a logical element exists
    validate_logical_witness(inst, best, sector)
    return best_w, best


def exact_distance(inst: CodeInstance, *, cap_n: int = EXACT_CAP_DEFAULT) -> DistanceResult:
    """Exact code distance: the minimum over the X and Z sectors."""
    dx, wx = exact_sector_distance(inst, "X", cap_n=cap_n)
    dz, wz = exact_sector_distance(inst, "Z", cap_n=cap_n)
    if dx <= dz:
        d, w, sec = dx, wx, "X"
    else:
        d, w, sec = dz, wz, "Z"
    return DistanceResult(
        d_upper=d, d_lower=d, witness=w, witness_sector=sec, method="exact-enumeration"
    )


def _information_set_round(
    rng: random.Random,
    kernel: list[int],
    sigs: list[int],
    n: int,
    pair_pool: int,
):
    """One re-elimination round; yields (mask, sig) candidates in fixed order."""
    rows = list(kernel)
    row_sigs = list(sigs)
    m = len(rows)
    order = list(range(n))
    rng.shuffle(order)
    r = 0
    for col in order:
        bit = 1 << col
        pivot = next((t for t in range(r, m) if rows[t] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        row_sigs[r], row_sigs[pivot] = row_sigs[pivot], row_sigs[r]
        for t in range(m):
            if t != r and rows[t] & bit:
                rows[t] ^= rows[r]
                row_sigs[t] ^= row_sigs[r]
        r += 1
        if r == m:
            break
    for mask, s in zip(rows, row_sigs):
        yield mask, s
    light = sorted(range(m), key=lambda t: rows[t].bit_count())[:pair_pool]
    for a in range(len(light)):
        for b in range(a + 1, len(light)):
            ta, tb = light[a], light[b]
            yield rows[ta] ^ rows[tb], row_sigs[ta] ^ row_sigs[tb]


def random_upper_bound(
    inst: CodeInstance,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
    pair_pool: int = 16,
) -> DistanceResult:
    """Randomized information-set upper bound on the code distance.

    A trial is one candidate codeword examined.  The search is deterministic
    given (seed, trials, workers): each worker runs an independent stream
    derived from the seed, examining its share of the trial budget in a fixed
    order, so enlarging the budget only extends each stream.  The X and Z
    sectors alternate round by round within a stream.
    """
    if trials < 0:
        raise DistanceError("trials must be nonnegative")
    if workers < 1:
        raise DistanceError("workers must be >= 1")
    spaces = {}
    for sector in ("X", "Z"):
        kernel, reps = logical_space(inst, sector)
        if not reps:
            raise DistanceError("code has no logical operators (k = 0)")
        spaces[sector] = (kernel, _signatures(kernel, reps))
    best_w = inst.n
    best = None
    best_sector = None
    share = trials // workers
    remainder = trials % workers
    for widx in range(workers):
        budget = share + (1 if widx < remainder else 0)
        if budget == 0:
            continue
        rng = random.Random(seed * 0x9E3779B1 + widx)
        examined = 0
        round_idx = 0
        while examined < budget:
            sector = "X" if round_idx % 2 == 0 else "Z"
            kernel, sigs = spaces[sector]
            for mask, sig in _information_set_round(rng, kernel, sigs, inst.n, pair_pool):
                examined += 1
                if sig and mask:
                    w = mask.bit_count()
                    if w < best_w:
                        best_w, best, best_sector = w, mask, sector
                if examined >= budget:
                    break
            round_idx += 1
    if best is not None:
        validate_logical_witness(inst, best, best_sector)
    return DistanceResult(
        d_upper=best_w,
        d_lower=None,
        witness=best,
        witness_sector=best_sector,
        method="random-information-set",
        trials=trials,
        seed=seed,
        workers=workers,
    )


def exact_classical_distance(
    mat: BinaryMatrix, *, cap_dim: int = _KERNEL_EXP_CAP
) -> ClassicalDistance:
    """Minimum weight over the nonzero kernel of a classical check matrix."""
    kernel = mat.nullspace()
    m = len(kernel)
    if m == 0:
        return ClassicalDistance(value=None, witness=None)
    if m > cap_dim:
        raise DistanceCapError(f"kernel dimension {m} exceeds 2^{cap_dim} states")
    best_w = mat.ncols + 1
    best = None
    state = 0
    for i in range(1, 1 << m):
        j = (i & -i).bit_length() - 1
        state ^= kernel[j]
        w = state.bit_count()
        if 0 < w < best_w:
            best_w, best = w, state
    return ClassicalDistance(value=best_w, witness=best)
