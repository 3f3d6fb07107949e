"""Compact Hessenbergian expansion over non-trivial signed elementary
products (SEPs).

A k-th order Hessenbergian has exactly 2^(k-1) SEPs that avoid the
structural zeros above the superdiagonal.  Each one is indexed by a 0/1 mask
of length k whose entries flag standard factors (on or below the diagonal)
with 1 and non-standard factors (superdiagonal) with 0; the last factor is
always standard, so the last mask bit is 1.  The functions below build the
mask for an integer index, recover column positions from a mask, and sum the
resulting products, which equals the determinant.

Everything here is a pure function; enumeration order is ascending index m,
and exact-backend sums are independent of that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from . import scalar
from .scalar import Scalar, TermSum

DEFAULT_ENUM_LIMIT = 24

Mask = tuple  # 0/1 entries, last entry 1


class EnumLimitError(ValueError):
    """Raised when an enumeration would exceed the configured term budget."""


def _resolve_limit(enum_limit: int | None) -> int:
    return DEFAULT_ENUM_LIMIT if enum_limit is None else enum_limit


def check_mask(k: int, mask: Mask) -> None:
    """Validate a standard/non-standard mask of length k."""
    if k < 1:
        raise ValueError("mask order must be >= 1")
    if len(mask) != k:
        raise ValueError(f"mask has length {len(mask)}, expected {k}")
    if any(bit not in (0, 1) for bit in mask):
        raise ValueError(f"mask entries must be 0 or 1: {mask}")
    if mask[-1] != 1:
        raise ValueError(f"mask must end in 1: {mask}")


def mask_from_index(k: int, m: int) -> Mask:
    """Binary expansion of m over k-1 bits (most significant first), then 1.

    Bijective from [0, 2^(k-1) - 1] onto the masks of length k.
    """
    if k < 1:
        raise ValueError("order must be >= 1")
    if not 0 <= m < (1 << (k - 1)):
        raise ValueError(f"index {m} out of range [0, {(1 << (k - 1)) - 1}]")
    bits = tuple((m >> (k - 1 - i)) & 1 for i in range(1, k))
    return bits + (1,)


def zero_run(k: int, i: int, mask: Mask) -> int:
    """Number of consecutive 0s immediately preceding position i, or -1.

    Computed in the closed form r_i * (i - max_{j<i} j*r_j) - 1, with the
    maximum over an empty set taken as 0: -1 whenever the i-th bit is 0,
    otherwise the length of the zero run separating it from the previous 1
    (i - 1 when no previous 1 exists).
    """
    check_mask(k, mask)
    if not 1 <= i <= k:
        raise ValueError(f"position {i} out of range 1..{k}")
    best = 0
    for j in range(1, i):
        if mask[j - 1]:
            best = j
    return mask[i - 1] * (i - best) - 1


def zero_run_piecewise(k: int, i: int, mask: Mask) -> int:
    """Branch-by-branch variant of :func:`zero_run`, kept as its cross-check."""
    check_mask(k, mask)
    if not 1 <= i <= k:
        raise ValueError(f"position {i} out of range 1..{k}")
    if mask[i - 1] == 0:
        return -1
    run = 0
    while i - 1 - run >= 1 and mask[i - 2 - run] == 0:
        run += 1
    return run


def factor_column(k: int, i: int, mask: Mask) -> int:
    """Column of the i-th factor of the product selected by ``mask``.

    i + 1 for a non-standard factor; for a standard factor, i minus the
    number of consecutive non-standard rows immediately above it.
    """
    return i - zero_run(k, i, mask)


def column_for_index(k: int, i: int, m: int) -> int:
    """Column of the i-th factor of the m-th product: factor_column after
    mask_from_index.  For fixed m the map i -> column is a permutation of
    {1..k}."""
    return factor_column(k, i, mask_from_index(k, m))


def _columns_from_bits(bits) -> tuple[int, ...]:
    # A standard factor lands one column to the right of the previous
    # standard row (row 0 acts as a standard anchor); a non-standard factor
    # always sits at column i + 1.
    cols = []
    last = 0
    for i, bit in enumerate(bits, start=1):
        if bit:
            cols.append(last + 1)
            last = i
        else:
            cols.append(i + 1)
    return tuple(cols)


def sep_columns(k: int, m: int) -> tuple[int, ...]:
    """All k factor columns of the m-th product in one pass.

    Agrees with :func:`column_for_index` at every position; used by the
    evaluators to avoid the per-position rescan.
    """
    if k < 1:
        raise ValueError("order must be >= 1")
    if not 0 <= m < (1 << (k - 1)):
        raise ValueError(f"index {m} out of range [0, {(1 << (k - 1)) - 1}]")
    cols = []
    last = 0
    for i in range(1, k + 1):
        bit = 1 if i == k else (m >> (k - 1 - i)) & 1
        if bit:
            cols.append(last + 1)
            last = i
        else:
            cols.append(i + 1)
    return tuple(cols)


@dataclass(frozen=True)
class SepTerm:
    """One non-trivial signed elementary product.

    ``columns`` is the permutation of {1..k} giving each row's factor column;
    ``sign`` equals the parity of the non-standard factor count (columns
    equal to row + 1), which coincides with the permutation signature.
    """

    k: int
    columns: tuple[int, ...]
    sign: int

    def __post_init__(self):
        k, cols = self.k, self.columns
        if len(cols) != k or sorted(cols) != list(range(1, k + 1)):
            raise ValueError(f"columns are not a permutation of 1..{k}: {cols}")
        non_standard = 0
        for i, col in enumerate(cols, start=1):
            if col == i + 1:
                non_standard += 1
            elif col > i + 1:
                raise ValueError(f"factor ({i},{col}) above the superdiagonal")
        expected = -1 if non_standard % 2 else 1
        if self.sign != expected:
            raise ValueError(
                f"sign {self.sign} does not match non-standard parity {expected}"
            )

    @property
    def atoms(self) -> tuple[scalar.Atom, ...]:
        return tuple(("h", i, col) for i, col in enumerate(self.columns, start=1))

    def mask(self) -> Mask:
        return tuple(
            0 if col == i + 1 else 1 for i, col in enumerate(self.columns, start=1)
        )

    def term_sum(self) -> TermSum:
        return TermSum({self.atoms: self.sign})

    def pretty(self) -> str:
        body = " ".join(f"h[{i},{col}]" for i, col in enumerate(self.columns, start=1))
        return f"-{body}" if self.sign < 0 else body


def sep_from_mask(k: int, mask: Mask) -> SepTerm:
    """The unique non-trivial product classified by ``mask``.

    The i-th factor is the superdiagonal entry when the bit is 0, and the
    entry ``run`` columns left of the diagonal when the bit is 1 with
    ``run`` preceding zeros; the sign is (-1)^(number of zeros).
    """
    check_mask(k, mask)
    zeros = mask.count(0)
    return SepTerm(k, _columns_from_bits(mask), -1 if zeros % 2 else 1)


def mask_from_sep(term: SepTerm) -> Mask:
    """Standard/non-standard classification of a product; inverse of
    :func:`sep_from_mask`."""
    return term.mask()


def _index_sign(k: int, m: int) -> int:
    zeros = (k - 1) - m.bit_count()
    return -1 if zeros % 2 else 1


def enumerate_seps(k: int, enum_limit: int | None = None) -> Iterator[SepTerm]:
    """Yield all 2^(k-1) products in ascending index order."""
    limit = _resolve_limit(enum_limit)
    if k > limit:
        raise EnumLimitError(f"order {k} exceeds the enumeration limit {limit}")
    if k < 1:
        raise ValueError("order must be >= 1")
    for m in range(1 << (k - 1)):
        yield SepTerm(k, sep_columns(k, m), _index_sign(k, m))


def det_leibnizian(matrix, enum_limit: int | None = None) -> Scalar:
    """Hessenbergian as the sum of its 2^(k-1) non-trivial products.

    Sums sign-flipped c-entries (so no explicit signature appears) in
    ascending index order; equals the recurrence evaluator exactly in the
    rational and symbolic backends.  Guarded by ``enum_limit``: the
    enumeration is exponential by nature, so an oversized order is an error
    rather than a hang.
    """
    limit = _resolve_limit(enum_limit)
    k = matrix.k
    if k > limit:
        raise EnumLimitError(f"order {k} exceeds the enumeration limit {limit}")
    if k == 0:
        return matrix.one
    c = matrix.c
    total: Scalar | None = None
    for m in range(1 << (k - 1)):
        last = 0
        prod: Scalar | None = None
        for i in range(1, k + 1):
            bit = 1 if i == k else (m >> (k - 1 - i)) & 1
            if bit:
                col = last + 1
                last = i
            else:
                col = i + 1
            a = c(i, col)
            if not a:
                prod = None
                break
            prod = a if prod is None else prod * a
        if prod is not None:
            total = prod if total is None else total + prod
    return total if total is not None else matrix.zero


def initial_strings(length: int) -> set[tuple[tuple[int, int], ...]]:
    """All factor strings of the given length that start at row 1 and extend
    to a non-trivial product, as ((row, column), ...) tuples.

    Unlike full products, a prefix may end in a non-standard factor, so
    there are 2^length of them.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    if length == 0:
        return {()}
    out = set()
    for bits in itertools.product((0, 1), repeat=length):
        cols = _columns_from_bits(bits)
        out.add(tuple((i, col) for i, col in enumerate(cols, start=1)))
    return out


@dataclass(frozen=True)
class PropertyCheck:
    passed: bool
    counterexample: dict | None = None


@dataclass(frozen=True)
class StringPropertyReport:
    """Outcome of the exhaustive string-structure scan for one order."""

    k: int
    successor_cover: PropertyCheck
    standard_successor: PropertyCheck
    run_column: PropertyCheck

    @property
    def all_passed(self) -> bool:
        return (
            self.successor_cover.passed
            and self.standard_successor.passed
            and self.run_column.passed
        )


def validate_string_properties(k: int) -> StringPropertyReport:
    """Exhaustively check the string structure of all products of order k.

    P1 (successor_cover): every non-trivial entry in rows 2..k occurs as some
    product's i-th factor.  P2 (standard_successor): a factor following a
    standard factor sits at column i or i + 1.  P3 (run_column): a standard
    factor preceded by a run of j non-standard factors sits at column i - j.
    """
    if k < 1:
        raise ValueError("order must be >= 1")
    if k > 12:
        raise ValueError("string-property scan is capped at order 12")
    needed = {
        (i, j) for i in range(2, k + 1) for j in range(1, min(i + 1, k) + 1)
    }
    seen: set[tuple[int, int]] = set()
    p2_bad: dict | None = None
    p3_bad: dict | None = None
    for m, term in enumerate(enumerate_seps(k)):
        cols = term.columns
        for i in range(2, k + 1):
            seen.add((i, cols[i - 1]))
        if p2_bad is None:
            for i in range(2, k + 1):
                if cols[i - 2] <= i - 1 and cols[i - 1] not in (i, i + 1):
                    p2_bad = {"m": m, "i": i, "columns": cols}
                    break
        if p3_bad is None:
            last_standard = 0
            for i in range(1, k + 1):
                if cols[i - 1] <= i:
                    run = i - last_standard - 1
                    if cols[i - 1] != i - run:
                        p3_bad = {"m": m, "i": i, "columns": cols}
                        break
                    last_standard = i
    missing = needed - seen
    p1 = PropertyCheck(not missing, {"missing": sorted(missing)} if missing else None)
    p2 = PropertyCheck(p2_bad is None, p2_bad)
    p3 = PropertyCheck(p3_bad is None, p3_bad)
    return StringPropertyReport(k, p1, p2, p3)
