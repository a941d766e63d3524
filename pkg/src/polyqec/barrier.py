"""Exact energy barriers for small instantiated codes.

The energy of an error pattern v against a check matrix H is the number of
violated checks, wt(H*v).  A path is a sequence of states each differing from
the previous by one bit flip; its cost is the maximum energy along it.  The
barrier of a target is the minimum cost over paths from 0 to the target, and
the code barrier is the minimum over all logical targets of a sector.

Search is bottleneck Dijkstra over the implicit 2^n flip graph with
bit-packed states and incremental syndromes.  States pop in nondecreasing
bottleneck order, so the first logical state popped settles the sector
barrier without enumerating targets.  CSS sectors decouple (X flips only
trigger Z checks and vice versa), so each sector is a classical search.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .distance import logical_space
from .instantiate import BinaryMatrix, CodeInstance

__all__ = [
    "BarrierError",
    "BarrierCapError",
    "BarrierResult",
    "CodeBarrierResult",
    "FourWayBarrier",
    "energy",
    "barrier",
    "sector_barrier",
    "classical_code_barrier",
    "code_barrier",
]

BARRIER_CAP_DEFAULT = 20


class BarrierError(ValueError):
    """Barrier search cannot run on this input."""


class BarrierCapError(BarrierError):
    """State space would exceed the configured cap."""


@dataclass(frozen=True)
class BarrierResult:
    """An exact bottleneck value, with the reached target and optional path."""

    barrier: int
    sector: str  # "X" | "Z" | "classical"
    target: int
    path: tuple[int, ...] | None  # bit indices flipped in order, when requested
    explored: int  # states popped before settling (diagnostic)


@dataclass(frozen=True)
class FourWayBarrier:
    """Classical barriers of HX, HZ and their transposes, reported side by side.

    Entries are None when that matrix has no nonzero kernel element or its
    bit count exceeds the cap.  The minimum ignores None entries.  This is a
    cross-check quantity; it is reported next to the code barrier and never
    asserted equal to it.
    """

    hx: int | None
    hz: int | None
    hx_t: int | None
    hz_t: int | None

    @property
    def minimum(self) -> int | None:
        vals = [v for v in (self.hx, self.hz, self.hx_t, self.hz_t) if v is not None]
        return min(vals) if vals else None


@dataclass(frozen=True)
class CodeBarrierResult:
    """Code barrier = min over sectors, plus per-sector results."""

    barrier: int
    x_result: BarrierResult
    z_result: BarrierResult
    four_way: FourWayBarrier | None = None


def energy(H: BinaryMatrix, v: int) -> int:
    """Number of violated checks: wt(H*v)."""
    if v < 0 or v >> H.ncols:
        raise BarrierError("state has bits outside the matrix width")
    return H.times_vector(v).bit_count()


def _dijkstra(
    syn_cols: list[int],
    n: int,
    goal,
    sig_cols: list[int] | None = None,
    want_path: bool = False,
):
    """Bottleneck-shortest-path from 0; returns at the first goal pop."""
    dist: dict[int, int] = {0: 0}
    heap: list[tuple[int, int, int, int]] = [(0, 0, 0, 0)]
    prev: dict[int, tuple[int, int] | None] | None = {0: None} if want_path else None
    explored = 0
    while heap:
        bott, state, syn, sig = heapq.heappop(heap)
        if bott > dist.get(state, bott):
            continue  # stale entry
        explored += 1
        if goal(state, syn, sig):
            path = None
            if want_path:
                flips = []
                cur = state
                while prev[cur] is not None:
                    cur, j = prev[cur]
                    flips.append(j)
                path = tuple(reversed(flips))
            return bott, state, explored, path
        for j in range(n):
            nstate = state ^ (1 << j)
            nsyn = syn ^ syn_cols[j]
            nbott = max(bott, nsyn.bit_count())
            if nbott < dist.get(nstate, 1 << 60):
                dist[nstate] = nbott
                if want_path:
                    prev[nstate] = (state, j)
                nsig = sig ^ sig_cols[j] if sig_cols is not None else 0
                heapq.heappush(heap, (nbott, nstate, nsyn, nsig))
    raise BarrierError("search exhausted without reaching a goal state")


def barrier(
    H: BinaryMatrix,
    target: int,
    *,
    cap_n: int = BARRIER_CAP_DEFAULT,
    want_path: bool = False,
    sector: str = "classical",
) -> BarrierResult:
    """Exact barrier of one target state against a check matrix."""
    n = H.ncols
    if n > cap_n:
        raise BarrierCapError(f"{n} bits exceed the barrier cap {cap_n}")
    if target <= 0 or target >> n:
        raise BarrierError("target must be a nonzero state on the matrix columns")
    if H.times_vector(target):
        raise BarrierError("target violates checks; it is not in the kernel")
    syn_cols = H.transpose().rows
    bott, state, explored, path = _dijkstra(
        syn_cols, n, lambda s, _syn, _sig: s == target, want_path=want_path
    )
    return BarrierResult(barrier=bott, sector=sector, target=state, path=path, explored=explored)


def classical_code_barrier(
    H: BinaryMatrix, *, cap_n: int = BARRIER_CAP_DEFAULT, want_path: bool = False
) -> BarrierResult:
    """Minimum barrier over all nonzero kernel elements of a classical matrix."""
    n = H.ncols
    if n > cap_n:
        raise BarrierCapError(f"{n} bits exceed the barrier cap {cap_n}")
    if not H.nullspace():
        raise BarrierError("kernel is trivial; there are no codewords to reach")
    syn_cols = H.transpose().rows
    bott, state, explored, path = _dijkstra(
        syn_cols, n, lambda s, syn, _sig: s != 0 and syn == 0, want_path=want_path
    )
    return BarrierResult(
        barrier=bott, sector="classical", target=state, path=path, explored=explored
    )


def sector_barrier(
    inst: CodeInstance,
    sector: str,
    *,
    cap_n: int = BARRIER_CAP_DEFAULT,
    want_path: bool = False,
) -> BarrierResult:
    """Minimum barrier over all logical operators of one CSS sector."""
    n = inst.n
    if n > cap_n:
        raise BarrierCapError(f"n={n} exceeds the barrier cap {cap_n}")
    _, reps = logical_space(inst, sector)
    if not reps:
        raise BarrierError("code has no logical operators (k = 0)")
    checks = inst.hz if sector == "X" else inst.hx
    syn_cols = checks.transpose().rows
    sig_cols = [0] * n
    for i, rep in enumerate(reps):
        r = rep
        while r:
            low = r & -r
            sig_cols[low.bit_length() - 1] |= 1 << i
            r ^= low
    bott, state, explored, path = _dijkstra(
        syn_cols,
        n,
        lambda s, syn, sig: syn == 0 and sig != 0,
        sig_cols=sig_cols,
        want_path=want_path,
    )
    return BarrierResult(barrier=bott, sector=sector, target=state, path=path, explored=explored)


def code_barrier(
    inst: CodeInstance,
    *,
    cap_n: int = BARRIER_CAP_DEFAULT,
    want_path: bool = False,
    with_four_way: bool = False,
) -> CodeBarrierResult:
    """Code barrier: minimum over the X and Z sector barriers.

    With ``with_four_way`` the classical barriers of HX, HZ, HXᵀ, HZᵀ are
    computed as a side-by-side cross-check (entries that are infeasible or
    trivial are left as None); the two quantities are reported together and
    never asserted equal.
    """
    x_res = sector_barrier(inst, "X", cap_n=cap_n, want_path=want_path)
    z_res = sector_barrier(inst, "Z", cap_n=cap_n, want_path=want_path)
    four = None
    if with_four_way:
        values = []
        for mat in (inst.hx, inst.hz, inst.hx.transpose(), inst.hz.transpose()):
            try:
                values.append(classical_code_barrier(mat, cap_n=cap_n).barrier)
            except BarrierError:
                values.append(None)
        four = FourWayBarrier(*values)
    return CodeBarrierResult(
        barrier=min(x_res.barrier, z_res.barrier),
        x_result=x_res,
        z_result=z_res,
        four_way=four,
    )
