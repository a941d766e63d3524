"""Finite instantiation: parity-check matrices over GF(2) on a finite group.

A two-block code instantiated on a finite translation group G yields one X
check and one Z check per group element acting on two qubit blocks of size
|G| (left block = columns 0..|G|-1, right block = columns |G|..2|G|-1):

* X check at h: left qubits h*m for monomials m of f, right qubits h*n for
  monomials n of g;
* Z check at h: left qubits from the antipode of g, right qubits from the
  antipode of f.

Coefficients add mod 2, so monomials that collide on the finite group cancel.

Matrices are stored bit-packed: each row is a Python int whose bit j is the
entry in column j.  This keeps rank / kernel / row-space reduction allocation
free and fast enough for exhaustive distance and barrier searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .codes import ClassicalGenerator, CodeError, TwoBlockCode
from .lattice import GroupPresentation, QuotientGroup, quotient
from .poly import LaurentPoly

__all__ = [
    "BinaryMatrix",
    "parity_dot",
    "CodeInstance",
    "instantiate",
    "classical_parity_matrix",
    "code_dimension",
    "tanner_component_count",
    "write_coordinate_text",
    "write_matrix_market",
]


def parity_dot(a: int, b: int) -> int:
    """GF(2) inner product of two bit-packed vectors."""
    return (a & b).bit_count() & 1


class BinaryMatrix:
    """An immutable GF(2) matrix with bit-packed integer rows."""

    __slots__ = ("rows", "ncols", "_piv")

    def __init__(self, rows: Iterable[int], ncols: int):
        rows = tuple(int(r) for r in rows)
        if ncols < 0:
            raise ValueError("ncols must be nonnegative")
        for r in rows:
            if r < 0 or r >> ncols:
                raise ValueError("row has bits outside the declared width")
        self.rows = rows
        self.ncols = ncols
        self._piv: dict[int, int] | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> BinaryMatrix:
        ncols = len(dense[0]) if dense else 0
        rows = []
        for dr in dense:
            if len(dr) != ncols:
                raise ValueError("ragged dense matrix")
            rows.append(sum((1 << j) for j, e in enumerate(dr) if e % 2))
        return cls(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BinaryMatrix:
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls([1 << i for i in range(n)], n)

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    # -- basic structure ---------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"BinaryMatrix({len(self.rows)}x{self.ncols})"

    def is_zero(self) -> bool:
        return not any(self.rows)

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def transpose(self) -> BinaryMatrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BinaryMatrix(cols, len(self.rows))

    def hstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if other.nrows != self.nrows:
            raise ValueError("hstack needs equal row counts")
        rows = [a | (b << self.ncols) for a, b in zip(self.rows, other.rows)]
        return BinaryMatrix(rows, self.ncols + other.ncols)

    def vstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if other.ncols != self.ncols:
            raise ValueError("vstack needs equal column counts")
        return BinaryMatrix(self.rows + other.rows, self.ncols)

    # -- linear algebra ----------------------------------------------------

    def _pivots(self) -> dict[int, int]:
        """Fully reduced pivot rows keyed by pivot column (cached).

        Invariant: each row's top bit is its pivot column and no row contains
        any other row's pivot column.
        """
        if self._piv is None:
            piv: dict[int, int] = {}
            for r in self.rows:
                cur = r
                kept = 0  # non-pivot bits already scanned (always above the cursor)
                while True:
                    rest = cur & ~kept
                    if not rest:
                        break
                    top = rest.bit_length() - 1
                    if top in piv:
                        cur ^= piv[top]  # clears top; only perturbs lower bits
                    else:
                        kept |= 1 << top
                if cur:
                    c = cur.bit_length() - 1
                    for c2, r2 in piv.items():
                        if (r2 >> c) & 1:
                            piv[c2] = r2 ^ cur
                    piv[c] = cur
            self._piv = piv
        return self._piv

    def rank(self) -> int:
        return len(self._pivots())

    def residue(self, vec: int) -> int:
        """Reduce a bit-packed vector against this matrix's row space."""
        piv = self._pivots()
        cur = int(vec)
        while cur:
            c = cur.bit_length() - 1
            if c not in piv:
                return cur
            cur ^= piv[c]
        return 0

    def rowspace_contains(self, vec: int) -> bool:
        return self.residue(vec) == 0

    def nullspace(self) -> list[int]:
        """Basis of {x : every row r has parity(r & x) = 0}, bit-packed."""
        piv = self._pivots()
        basis = []
        for j in range(self.ncols):
            if j in piv:
                continue
            x = 1 << j
            for c, r in piv.items():
                if (r >> j) & 1:
                    x |= 1 << c
            basis.append(x)
        return basis

    def times_vector(self, vec: int) -> int:
        """Matrix-vector product; bit i of the result is parity(row_i & vec)."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & vec).bit_count() & 1:
                out |= 1 << i
        return out

    def matmul(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.rows[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return BinaryMatrix(out, other.ncols)

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        return self.matmul(other)


# -- instantiation ---------------------------------------------------------


def _poly_row_masks(poly: LaurentPoly, group: QuotientGroup, shift: int) -> list[int]:
    """Bit mask per group element h for the support of h * poly (XOR on collisions)."""
    order = group.order
    perms = [group.translation(m) for m in poly.sorted_terms()]
    masks = [0] * order
    for perm in perms:
        for h in range(order):
            masks[h] ^= 1 << (perm[h] + shift)
    return masks


@dataclass(frozen=True)
class CodeInstance:
    """A two-block code pinned to a finite translation group."""

    code: TwoBlockCode
    presentation: GroupPresentation
    group: QuotientGroup
    hx: BinaryMatrix
    hz: BinaryMatrix

    @property
    def n(self) -> int:
        """Number of qubits (two blocks of |G|)."""
        return self.hx.ncols

    @property
    def group_order(self) -> int:
        return self.group.order

    def k(self) -> int:
        return code_dimension(self)

    def qubit_label(self, col: int) -> str:
        block, idx = divmod(col, self.group_order)
        coords = self.group.index_coords(idx)
        side = "L" if block == 0 else "R"
        return f"{side}{coords}"


def instantiate(
    code: TwoBlockCode, pres: GroupPresentation, *, check: bool = True
) -> CodeInstance:
    """Build the X/Z parity-check matrices of a code on a finite group.

    Raises if the presentation's quotient group is infinite or if it belongs
    to a different variable context.  With ``check`` the X/Z commutation is
    verified pairwise on overlapping checks, costing O(|G| * w^2).
    """
    if pres.context != code.context:
        raise CodeError("presentation context differs from the code context")
    group = quotient(pres)
    order = group.order
    f, g = code.f, code.g
    if f.is_zero or g.is_zero:
        raise CodeError("cannot instantiate a code with a zero generator")
    fbar, gbar = f.antipode(), g.antipode()
    hx = BinaryMatrix(
        [a ^ b for a, b in zip(_poly_row_masks(f, group, 0), _poly_row_masks(g, group, order))],
        2 * order,
    )
    hz = BinaryMatrix(
        [
            a ^ b
            for a, b in zip(
                _poly_row_masks(gbar, group, 0), _poly_row_masks(fbar, group, order)
            )
        ],
        2 * order,
    )
    inst = CodeInstance(code=code, presentation=pres, group=group, hx=hx, hz=hz)
    if check:
        _verify_commutation(inst)
    return inst


def _verify_commutation(inst: CodeInstance) -> None:
    """Every X check must overlap every Z check evenly.

    Only pairs that can overlap are tested: the Z check at h' meets the X
    check at h only if h' = h * m * n for monomials m of f and n of g.
    """
    group = inst.group
    code = inst.code
    candidates = set()
    for m in code.f.terms:
        for n in code.g.terms:
            prod = tuple(a + b for a, b in zip(m, n))
            candidates.add(group.reduce(prod))
    for h in range(group.order):
        xrow = inst.hx.rows[h]
        for delta in candidates:
            h2 = group.add(h, delta)
            if parity_dot(xrow, inst.hz.rows[h2]):
                raise CodeError(
                    f"X check {h} and Z check {h2} overlap oddly; "
                    "instantiation is inconsistent"
                )


def classical_parity_matrix(
    gen: ClassicalGenerator | LaurentPoly, pres: GroupPresentation
) -> BinaryMatrix:
    """One check per group element for a single classical generator."""
    poly = gen.poly if isinstance(gen, ClassicalGenerator) else gen
    if pres.context != poly.context:
        raise CodeError("presentation context differs from the generator context")
    if poly.is_zero:
        raise CodeError("cannot instantiate a zero generator")
    group = quotient(pres)
    return BinaryMatrix(_poly_row_masks(poly, group, 0), group.order)


def code_dimension(inst: CodeInstance) -> int:
    """Number of logical qubits: n - rank(HX) - rank(HZ)."""
    return inst.n - inst.hx.rank() - inst.hz.rank()


def tanner_component_count(inst: CodeInstance) -> int:
    """Connected components of the Tanner graph on all checks and qubits."""
    order = inst.group.order
    n = inst.n
    total = n + 2 * order  # qubits, then X checks, then Z checks
    parent = list(range(total))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i, row in enumerate(inst.hx.rows):
        while row:
            low = row & -row
            union(n + i, low.bit_length() - 1)
            row ^= low
    for i, row in enumerate(inst.hz.rows):
        while row:
            low = row & -row
            union(n + order + i, low.bit_length() - 1)
            row ^= low
    return len({find(v) for v in range(total)})


# -- exports ---------------------------------------------------------------


def _open_for_write(dest: str | Path | IO[str]):
    if isinstance(dest, (str, Path)):
        return open(dest, "w", encoding="utf-8"), True
    return dest, False


def write_coordinate_text(matrix: BinaryMatrix, dest: str | Path | IO[str]) -> None:
    """Plain sparse listing: 'nrows ncols' then one 0-based 'row col' per entry."""
    fh, owned = _open_for_write(dest)
    try:
        fh.write(f"{matrix.nrows} {matrix.ncols}\n")
        for i, r in enumerate(matrix.rows):
            while r:
                low = r & -r
                fh.write(f"{i} {low.bit_length() - 1}\n")
                r ^= low
    finally:
        if owned:
            fh.close()


def write_matrix_market(matrix: BinaryMatrix, dest: str | Path | IO[str]) -> None:
    """MatrixMarket coordinate format with 1-based indices."""
    nnz = sum(r.bit_count() for r in matrix.rows)
    fh, owned = _open_for_write(dest)
    try:
        fh.write("%%MatrixMarket matrix coordinate integer general\n")
        fh.write(f"{matrix.nrows} {matrix.ncols} {nnz}\n")
        for i, r in enumerate(matrix.rows):
            while r:
                low = r & -r
                fh.write(f"{i + 1} {low.bit_length()} 1\n")
                r ^= low
    finally:
        if owned:
            fh.close()
