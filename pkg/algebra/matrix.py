"""Integer matrices with fraction-free determinants."""
import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from loguru import logger

from utils.errors import DomainError, FixtureError, InconsistencyError


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if self.rows * self.cols != len(entries):
            raise DomainError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DomainError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def asymmetric_entries(self) -> List[Tuple[int, int]]:
        """1-based (i, j) with i < j where m[i,j] != m[j,i]"""
        return [
            (i + 1, j + 1)
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
            if self[i, j] != self[j, i]
        ]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DomainError("shape mismatch in matrix product")
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(
                sum(self[i, k] * other[k, j] for k in range(self.cols))
                for i in range(self.rows)
                for j in range(other.cols)
            ),
        )

    def submatrix(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(idx), len(idx), tuple(self[i, j] for i in idx for j in idx))


def det_exact(m: IntMatrix) -> int:
    """Bareiss fraction-free elimination; every division is exact"""
    if not m.is_square:
        raise DomainError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                num = pivot * row_i[j] - row_i[k] * row_k[j]
                q, r = divmod(num, prev)
                if r:
                    raise InconsistencyError("Bareiss step left a remainder")
                row_i[j] = q
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_cofactor(m: IntMatrix) -> int:
    """Laplace expansion along the first row; for small oracle checks only"""
    if not m.is_square:
        raise DomainError("determinant of a non-square matrix")
    rows = m.to_rows()

    def expand(r: List[List[int]]) -> int:
        if len(r) == 1:
            return r[0][0]
        total = 0
        for j, v in enumerate(r[0]):
            if v:
                minor = [row[:j] + row[j + 1:] for row in r[1:]]
                total += (-1) ** j * v * expand(minor)
        return total

    return expand(rows) if rows else 1


def symmetrize(m: IntMatrix, mode: str) -> IntMatrix:
    """mode 'upper' copies the upper triangle onto the lower one, 'lower' the reverse"""
    if not m.is_square:
        raise DomainError("only square matrices can be symmetrized")
    if mode not in ("upper", "lower"):
        raise DomainError(f"unknown symmetrization mode {mode!r}")
    n = m.rows
    pick = (lambda i, j: m[min(i, j), max(i, j)]) if mode == "upper" else (lambda i, j: m[max(i, j), min(i, j)])
    return IntMatrix(n, n, tuple(pick(i, j) for i in range(n) for j in range(n)))


def diagonal_blocks(m: IntMatrix) -> List[List[int]]:
    """Index sets of the connected components of the nonzero pattern"""
    n = m.rows
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and (m[i, j] or m[j, i]):
                    seen[j] = True
                    stack.append(j)
        blocks.append(sorted(comp))
    return blocks


def block_determinants(m: IntMatrix) -> List[Tuple[List[int], int]]:
    """Determinant of every diagonal block; their product is det(m)"""
    return [(idx, det_exact(m.submatrix(idx))) for idx in diagonal_blocks(m)]


def gram_report(m: IntMatrix, target: int = -2592) -> Dict[str, object]:
    """Determinants of the matrix as given and of both symmetrizations"""
    dets = {
        "verbatim": det_exact(m),
        "upper": det_exact(symmetrize(m, "upper")),
        "lower": det_exact(symmetrize(m, "lower")),
    }
    matching = [name for name, value in dets.items() if value == target]
    logger.debug(f"Gram determinants {dets}, target {target} reached by {matching}")
    return {
        "is_symmetric": m.is_symmetric(),
        "asymmetric_entries": m.asymmetric_entries(),
        "determinants": dets,
        "target": target,
        "matching": matching,
    }


def congruence_transform(gram: IntMatrix, basis: IntMatrix) -> IntMatrix:
    """B^T G B: the Gram matrix in the basis given by the columns of B"""
    return basis.transpose() @ gram @ basis


def picard_index_check(overlattice_det: int, index: int) -> Fraction:
    """det of the sublattice divided by index^2, asserted integral"""
    value = Fraction(overlattice_det, index * index)
    if value.denominator != 1:
        raise InconsistencyError(f"{overlattice_det} is not divisible by {index}^2")
    return value


def load_matrix_csv(path: str) -> IntMatrix:
    try:
        with open(path, newline="") as fh:
            rows = [[int(cell) for cell in row if cell.strip()] for row in csv.reader(fh) if row]
    except (OSError, ValueError) as e:
        raise FixtureError(f"Failed to read matrix {path}: {e}") from e
    return IntMatrix.from_rows(rows)


def transcendental_candidates() -> Dict[str, object]:
    """Change of basis e0' = e0 - 3e2, e1' = e1, e2' = e0 + 3e2 on the rank-3 lattice [[0,0,1],[0,12,0],[1,0,0]]"""
    gram = IntMatrix.from_rows([[0, 0, 1], [0, 12, 0], [1, 0, 0]])
    basis = IntMatrix.from_rows([[1, 0, 1], [0, 1, 0], [-3, 0, 3]])
    new_gram = congruence_transform(gram, basis)
    t2 = new_gram.submatrix([1, 2])
    return {"gram": new_gram, "t2": t2, "det_t2": det_exact(t2)}
