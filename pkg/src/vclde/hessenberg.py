"""Lower Hessenberg matrices (dense and banded) and the two reference
determinant evaluators: the principal-chain recurrence and the brute-force
permutation-sum oracle.

Indexing is 1-based in the public API; storage is 0-based internally.
Matrices are immutable after construction and every evaluator here is a pure
function of its matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from . import scalar
from .scalar import Scalar, backend_of

ORACLE_LIMIT_DEFAULT = 9


class StructureError(ValueError):
    """Raised for entries that violate the Hessenberg zero pattern."""


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..k} with its signature.

    The sign is computed by inversion-count parity: -1 for an odd number of
    pairs i < j with mapping[i] > mapping[j], +1 otherwise.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        k = len(self.mapping)
        if sorted(self.mapping) != list(range(1, k + 1)):
            raise ValueError(f"not a bijection of 1..{k}: {self.mapping}")

    @property
    def k(self) -> int:
        return len(self.mapping)

    @property
    def sign(self) -> int:
        inversions = 0
        m = self.mapping
        for i in range(len(m)):
            for j in range(i + 1, len(m)):
                if m[i] > m[j]:
                    inversions += 1
        return -1 if inversions % 2 else 1


def _infer_backend(values: Iterable[Scalar], fallback: str | None) -> str:
    found: str | None = None
    for v in values:
        b = backend_of(v)
        if found is None:
            found = b
        elif found != b:
            raise scalar.BackendMismatchError(
                f"matrix entries mix backends: {found} vs {b}"
            )
    if found is not None:
        return found
    if fallback is not None:
        return fallback
    return scalar.RATIONAL


class _HessenbergBase:
    """Shared read-only surface: h/c accessors and backend constants."""

    k: int
    backend: str

    @property
    def zero(self) -> Scalar:
        return scalar.zero(self.backend)

    @property
    def one(self) -> Scalar:
        return scalar.one(self.backend)

    def h(self, i: int, j: int) -> Scalar:  # pragma: no cover - overridden
        raise NotImplementedError

    def c(self, i: int, j: int) -> Scalar:
        """Sign-flipped view: c(i, i+1) = -h(i, i+1), c(i, j) = h(i, j) else."""
        value = self.h(i, j)
        if j == i + 1:
            return -value
        return value

    def row_start(self, i: int) -> int:
        """First column that can hold a nonzero entry in row i."""
        return 1

    def to_rows(self) -> list[list[Scalar]]:
        z = self.zero
        k = self.k
        return [
            [self.h(i, j) if j <= i + 1 else z for j in range(1, k + 1)]
            for i in range(1, k + 1)
        ]


class HessenbergMatrix(_HessenbergBase):
    """Dense lower Hessenberg matrix: h(i, j) = 0 whenever j - i > 1.

    Only the entries with j <= i + 1 are stored; queries above the
    superdiagonal return an exact zero without storage.  Order k = 0 is the
    valid empty matrix with determinant one.
    """

    __slots__ = ("k", "backend", "_rows")

    def __init__(self, k: int, rows: list[list[Scalar]], backend: str):
        if k < 0:
            raise ValueError("order must be >= 0")
        self.k = k
        self.backend = backend
        self._rows = rows

    @classmethod
    def from_function(
        cls, k: int, fn: Callable[[int, int], Scalar], backend: str
    ) -> "HessenbergMatrix":
        rows = [
            [fn(i, j) for j in range(1, min(i + 1, k) + 1)] for i in range(1, k + 1)
        ]
        _infer_backend((v for row in rows for v in row), backend)
        return cls(k, rows, backend)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Scalar]], backend: str | None = None
    ) -> "HessenbergMatrix":
        k = len(rows)
        stored: list[list[Scalar]] = []
        for i, row in enumerate(rows, start=1):
            if len(row) != k:
                raise StructureError(f"row {i} has {len(row)} entries, expected {k}")
            for j, value in enumerate(row, start=1):
                if j - i > 1 and not scalar.is_zero(value, abs_tol=0.0):
                    raise StructureError(
                        f"nonzero entry ({i},{j}) above the superdiagonal"
                    )
            stored.append(list(row[: min(i + 1, k)]))
        resolved = _infer_backend((v for row in stored for v in row), backend)
        return cls(k, stored, resolved)

    @classmethod
    def from_entries(
        cls,
        k: int,
        entries: Mapping[tuple[int, int], Scalar],
        backend: str | None = None,
    ) -> "HessenbergMatrix":
        resolved = _infer_backend(entries.values(), backend)
        z = scalar.zero(resolved)
        rows = [[z] * min(i + 1, k) for i in range(1, k + 1)]
        for (i, j), value in entries.items():
            if not (1 <= i <= k and 1 <= j <= k):
                raise StructureError(f"entry ({i},{j}) outside a {k}x{k} matrix")
            if j - i > 1:
                if scalar.is_zero(value, abs_tol=0.0):
                    continue
                raise StructureError(
                    f"nonzero entry ({i},{j}) above the superdiagonal"
                )
            rows[i - 1][j - 1] = value
        return cls(k, rows, resolved)

    def h(self, i: int, j: int) -> Scalar:
        if not (1 <= i <= self.k and 1 <= j <= self.k):
            raise IndexError(f"entry ({i},{j}) outside a {self.k}x{self.k} matrix")
        if j - i > 1:
            return self.zero
        return self._rows[i - 1][j - 1]


class BandedHessenbergMatrix(_HessenbergBase):
    """Lower Hessenberg matrix of total bandwidth p + 1.

    Entries vanish outside -1 <= i - j <= p - 1; the p + 1 nonzero diagonals
    are stored as stripes.
    """

    __slots__ = ("k", "p", "backend", "_stripes")

    def __init__(self, k: int, p: int, stripes: dict[int, list[Scalar]], backend: str):
        if k < 0:
            raise ValueError("order must be >= 0")
        if p < 1:
            raise ValueError("band parameter must be >= 1")
        self.k = k
        self.p = p
        self.backend = backend
        self._stripes = stripes

    @classmethod
    def from_function(
        cls, k: int, p: int, fn: Callable[[int, int], Scalar], backend: str
    ) -> "BandedHessenbergMatrix":
        stripes: dict[int, list[Scalar]] = {}
        for offset in range(-1, p):
            lo = max(1, 1 + offset)
            hi = min(k, k + offset)
            stripes[offset] = [fn(i, i - offset) for i in range(lo, hi + 1)]
        _infer_backend((v for s in stripes.values() for v in s), backend)
        return cls(k, p, stripes, backend)

    def h(self, i: int, j: int) -> Scalar:
        if not (1 <= i <= self.k and 1 <= j <= self.k):
            raise IndexError(f"entry ({i},{j}) outside a {self.k}x{self.k} matrix")
        offset = i - j
        if offset < -1 or offset > self.p - 1:
            return self.zero
        lo = max(1, 1 + offset)
        return self._stripes[offset][i - lo]

    def row_start(self, i: int) -> int:
        return max(1, i - self.p + 1)

    def to_dense(self) -> HessenbergMatrix:
        return HessenbergMatrix.from_function(self.k, self.h, self.backend)


def leading_principal_chain(matrix: _HessenbergBase, view: str = "h") -> list[Scalar]:
    """Determinants of the leading principal submatrices, orders 0..k.

    One pass of the Hessenbergian recurrence; for banded matrices the inner
    sum truncates to the band, giving O(k*p) scalar operations.  ``view``
    selects the raw-entry recurrence ("h", with explicit alternating signs)
    or its rewriting over the sign-flipped c-entries ("c"); both produce the
    same chain.
    """
    if view not in ("h", "c"):
        raise ValueError(f"view must be 'h' or 'c', got {view!r}")
    dets: list[Scalar] = [matrix.one]
    for n in range(1, matrix.k + 1):
        acc = matrix.h(n, n) * dets[n - 1]
        prod = matrix.one
        negative = False
        for j in range(n - 1, matrix.row_start(n) - 1, -1):
            if view == "h":
                prod = prod * matrix.h(j, j + 1)
                negative = not negative
                a = matrix.h(n, j)
                if a:
                    term = a * prod * dets[j - 1]
                    acc = acc - term if negative else acc + term
            else:
                prod = prod * matrix.c(j, j + 1)
                a = matrix.c(n, j)
                if a:
                    acc = acc + a * prod * dets[j - 1]
        dets.append(acc)
    return dets


def det_recurrence(matrix: _HessenbergBase) -> Scalar:
    """Hessenbergian via the principal-chain recurrence (the default path)."""
    return leading_principal_chain(matrix)[-1]


def det_leibniz_oracle(
    matrix, oracle_limit: int = ORACLE_LIMIT_DEFAULT
) -> Scalar:
    """Brute-force determinant: the full signed permutation sum.

    Accepts any square matrix (a Hessenberg matrix object or a sequence of
    rows).  Enumerates permutations depth-first with incremental
    inversion-count signs, skipping exactly-zero factors; exact in the
    rational and symbolic backends.  Guarded by ``oracle_limit`` because the
    enumeration is factorial in k.
    """
    if isinstance(matrix, _HessenbergBase):
        rows = matrix.to_rows()
        empty = matrix.one
    else:
        rows = [list(r) for r in matrix]
        for i, row in enumerate(rows, start=1):
            if len(row) != len(rows):
                raise ValueError(f"row {i} has {len(row)} entries, not square")
        empty = 1
    k = len(rows)
    if k > oracle_limit:
        raise ValueError(
            f"order {k} exceeds the permutation-oracle limit {oracle_limit}"
        )
    if k == 0:
        return empty

    total: Scalar | None = None

    def descend(i: int, used: int, negative: bool, partial: Scalar | None):
        nonlocal total
        if i == k:
            if partial is not None:
                term = -partial if negative else partial
                total = term if total is None else total + term
            return
        row = rows[i]
        for col in range(k):
            bit = 1 << col
            if used & bit:
                continue
            a = row[col]
            if not a:
                continue
            inversions = (used >> (col + 1)).bit_count()
            descend(
                i + 1,
                used | bit,
                negative ^ bool(inversions & 1),
                a if partial is None else partial * a,
            )

    descend(0, 0, False, None)
    if total is None:
        return scalar.zero(backend_of(rows[0][0]))
    return total


def hessenberg_to_json(matrix: _HessenbergBase) -> dict:
    """{"k": order, "entries": [[i, j, value], ...]} with zero entries omitted."""
    entries = []
    for i in range(1, matrix.k + 1):
        for j in range(1, min(i + 1, matrix.k) + 1):
            value = matrix.h(i, j)
            if value:
                entries.append([i, j, scalar.scalar_to_json(value)])
    return {"k": matrix.k, "entries": entries}


def hessenberg_from_json(obj: Mapping, arith: str = scalar.RATIONAL) -> HessenbergMatrix:
    """Parse the JSON matrix format; omitted entries are zero.

    Rejects any (i, j) with j - i > 1 carrying a nonzero value, duplicate
    coordinates, and out-of-range indices.
    """
    try:
        k = obj["k"]
        raw_entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise StructureError(f"matrix document needs 'k' and 'entries': {exc}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise StructureError(f"'k' must be a non-negative integer, got {k!r}")
    entries: dict[tuple[int, int], Scalar] = {}
    for item in raw_entries:
        if len(item) != 3:
            raise StructureError(f"matrix entry must be [i, j, value]: {item!r}")
        i, j, raw = item
        if not (isinstance(i, int) and isinstance(j, int)):
            raise StructureError(f"entry indices must be integers: {item!r}")
        value = scalar.scalar_from_json(raw, arith)
        if not (1 <= i <= k and 1 <= j <= k):
            raise StructureError(f"entry ({i},{j}) outside a {k}x{k} matrix")
        if j - i > 1 and not scalar.is_zero(value, abs_tol=0.0):
            raise StructureError(f"nonzero entry ({i},{j}) above the superdiagonal")
        if (i, j) in entries:
            raise StructureError(f"duplicate entry ({i},{j})")
        entries[(i, j)] = value
    backend = scalar.RATIONAL if arith == scalar.RATIONAL else scalar.FLOAT64
    return HessenbergMatrix.from_entries(k, entries, backend)
