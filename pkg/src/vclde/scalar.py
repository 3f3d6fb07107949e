"""Scalar arithmetic shared by every evaluator in the package.

Three backends behind one small ring interface: exact rationals
(:class:`fractions.Fraction`, with plain ``int`` accepted as an integer
rational), IEEE-754 binary64 (Python ``float``), and symbolic term sums
(:class:`TermSum`).  Backends never coerce into each other; combining values
from different backends through :func:`add`/:func:`mul` raises
:class:`BackendMismatchError`.

All values are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

RATIONAL = "rational"
FLOAT64 = "float64"
SYMBOLIC = "symbolic"
BACKENDS = (RATIONAL, FLOAT64, SYMBOLIC)

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-9


class BackendMismatchError(TypeError):
    """Raised when an operation would mix scalar backends."""


# An atom is one of ("h", i, j), ("phi", m, t), ("y", t), ("v", t).
Atom = tuple

_KIND_RANK = {"h": 0, "phi": 1, "y": 2, "v": 3}


def _atom_key(atom: Atom) -> tuple[int, int, int]:
    kind = atom[0]
    if kind == "h":
        return (0, atom[1], atom[2])
    if kind == "phi":
        # sorted by argument t, then by lag m
        return (1, atom[2], atom[1])
    if kind == "y":
        return (2, atom[1], 0)
    if kind == "v":
        return (3, atom[1], 0)
    raise ValueError(f"unknown atom kind: {atom!r}")


def _atom_str(atom: Atom) -> str:
    kind = atom[0]
    if kind == "h":
        return f"h[{atom[1]},{atom[2]}]"
    if kind == "phi":
        return f"phi{atom[1]}({atom[2]})"
    return f"{kind}({atom[1]})"


class TermSum:
    """Canonical multiset of signed symbol products.

    Stored as a mapping from a sorted factor tuple to a nonzero integer
    coefficient.  Building the same sum from terms in any order, or the same
    product from factors in any order, yields the identical object, and
    opposite-sign copies of a term cancel.  The empty sum is the zero
    element; ``TermSum.constant(1)`` (the empty product) is the one element.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Atom, ...], int] | None = None):
        if terms:
            self._terms = {f: c for f, c in terms.items() if c}
        else:
            self._terms = {}

    @classmethod
    def constant(cls, value: int) -> "TermSum":
        if value == 0:
            return cls()
        return cls({(): int(value)})

    @classmethod
    def single(cls, atom: Atom, sign: int = 1) -> "TermSum":
        _atom_key(atom)  # validates the shape
        return cls({(atom,): sign})

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def sorted_items(self) -> list[tuple[tuple[Atom, ...], int]]:
        """Terms as (factors, coefficient) pairs in canonical order."""
        return sorted(
            self._terms.items(),
            key=lambda kv: tuple(_atom_key(a) for a in kv[0]),
        )

    @property
    def term_count(self) -> int:
        """Number of terms counted with multiplicity."""
        return sum(abs(c) for c in self._terms.values())

    def __add__(self, other: "TermSum") -> "TermSum":
        if not isinstance(other, TermSum):
            return NotImplemented
        merged = dict(self._terms)
        for factors, coeff in other._terms.items():
            total = merged.get(factors, 0) + coeff
            if total:
                merged[factors] = total
            else:
                merged.pop(factors, None)
        out = TermSum.__new__(TermSum)
        out._terms = merged
        return out

    def __neg__(self) -> "TermSum":
        out = TermSum.__new__(TermSum)
        out._terms = {f: -c for f, c in self._terms.items()}
        return out

    def __sub__(self, other: "TermSum") -> "TermSum":
        if not isinstance(other, TermSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "TermSum") -> "TermSum":
        if not isinstance(other, TermSum):
            return NotImplemented
        merged: dict[tuple[Atom, ...], int] = {}
        for f1, c1 in self._terms.items():
            for f2, c2 in other._terms.items():
                key = tuple(sorted(f1 + f2, key=_atom_key))
                total = merged.get(key, 0) + c1 * c2
                if total:
                    merged[key] = total
                else:
                    merged.pop(key, None)
        out = TermSum.__new__(TermSum)
        out._terms = merged
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for factors, coeff in self.sorted_items():
            body = " ".join(_atom_str(a) for a in factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag} {body}"
            if not parts:
                parts.append(text if coeff > 0 else f"-{text}")
            else:
                parts.append(f"{'+' if coeff > 0 else '-'} {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"TermSum({self})"


Scalar = Union[Fraction, int, float, TermSum]


def h_sym(i: int, j: int) -> TermSum:
    """Matrix-entry symbol h(i, j) as a one-term sum."""
    return TermSum.single(("h", i, j))


def phi_sym(m: int, t: int) -> TermSum:
    """Coefficient symbol phi_m(t) as a one-term sum."""
    return TermSum.single(("phi", m, t))


def y_sym(t: int) -> TermSum:
    """Prescribed-value symbol y(t) as a one-term sum."""
    return TermSum.single(("y", t))


def v_sym(t: int) -> TermSum:
    """Forcing symbol v(t) as a one-term sum."""
    return TermSum.single(("v", t))


def backend_of(value: Scalar) -> str:
    """Backend tag of a scalar value; rejects non-scalar inputs."""
    if isinstance(value, TermSum):
        return SYMBOLIC
    if isinstance(value, bool):
        raise BackendMismatchError("bool is not a scalar")
    if isinstance(value, (int, Fraction)):
        return RATIONAL
    if isinstance(value, float):
        return FLOAT64
    raise BackendMismatchError(f"not a scalar: {value!r}")


def _common_backend(a: Scalar, b: Scalar) -> str:
    left, right = backend_of(a), backend_of(b)
    if left != right:
        raise BackendMismatchError(f"backend mismatch: {left} vs {right}")
    return left


def add(a: Scalar, b: Scalar) -> Scalar:
    """Ring addition within one backend; mixing backends is an error."""
    _common_backend(a, b)
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    """Ring multiplication within one backend; mixing backends is an error."""
    _common_backend(a, b)
    return a * b


def is_zero(value: Scalar, abs_tol: float = DEFAULT_ABS_TOL) -> bool:
    """Exact zero test for rational/symbolic values, |x| <= abs_tol for floats."""
    kind = backend_of(value)
    if kind == FLOAT64:
        return abs(value) <= abs_tol
    if kind == SYMBOLIC:
        return value.is_zero()
    return value == 0


def zero(backend: str) -> Scalar:
    if backend == RATIONAL:
        return Fraction(0)
    if backend == FLOAT64:
        return 0.0
    if backend == SYMBOLIC:
        return TermSum()
    raise ValueError(f"unknown backend: {backend!r}")


def one(backend: str) -> Scalar:
    if backend == RATIONAL:
        return Fraction(1)
    if backend == FLOAT64:
        return 1.0
    if backend == SYMBOLIC:
        return TermSum.constant(1)
    raise ValueError(f"unknown backend: {backend!r}")


def scalars_close(
    a: Scalar,
    b: Scalar,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> bool:
    """Equality check: exact for rational/symbolic, tolerant for binary64."""
    kind = _common_backend(a, b)
    if kind == FLOAT64:
        return math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)
    return a == b


def format_rational(value: Union[Fraction, int]) -> str:
    """Render a rational as "num/den", or plain "num" when integral."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse "num/den" (or a bare integer/decimal string) exactly."""
    if isinstance(text, bool):
        raise ValueError("bool is not a rational")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"rational values must be strings or integers, got {text!r}")


def _atom_to_json(atom: Atom) -> dict:
    kind = atom[0]
    if kind == "h":
        return {"kind": "h", "i": atom[1], "j": atom[2]}
    if kind == "phi":
        return {"kind": "phi", "m": atom[1], "t": atom[2]}
    return {"kind": kind, "t": atom[1]}


def _atom_from_json(obj: Mapping) -> Atom:
    kind = obj["kind"]
    if kind == "h":
        return ("h", int(obj["i"]), int(obj["j"]))
    if kind == "phi":
        return ("phi", int(obj["m"]), int(obj["t"]))
    if kind in ("y", "v"):
        return (kind, int(obj["t"]))
    raise ValueError(f"unknown atom kind: {kind!r}")


def term_sum_to_json(value: TermSum) -> list[dict]:
    """Sorted JSON array of {sign, factors}; multiplicities are repeated."""
    out: list[dict] = []
    for factors, coeff in value.sorted_items():
        entry_factors = [_atom_to_json(a) for a in factors]
        sign = 1 if coeff > 0 else -1
        for _ in range(abs(coeff)):
            out.append({"sign": sign, "factors": entry_factors})
    return out


def term_sum_from_json(items: Iterable[Mapping]) -> TermSum:
    total = TermSum()
    for entry in items:
        sign = int(entry["sign"])
        if sign not in (1, -1):
            raise ValueError(f"term sign must be +-1, got {sign}")
        factors = tuple(_atom_from_json(f) for f in entry["factors"])
        total = total + TermSum({tuple(sorted(factors, key=_atom_key)): sign})
    return total


def scalar_to_json(value: Scalar):
    kind = backend_of(value)
    if kind == RATIONAL:
        return format_rational(value)
    if kind == FLOAT64:
        return value
    return term_sum_to_json(value)


def scalar_from_json(obj, arith: str) -> Scalar:
    """Parse one scalar from a JSON payload under the given arithmetic mode."""
    if arith == RATIONAL:
        if isinstance(obj, float):
            raise ValueError(
                f"rational mode requires 'num/den' strings or integers, got {obj!r}"
            )
        return parse_rational(obj)
    if arith == FLOAT64:
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            raise ValueError(f"float64 mode requires JSON numbers, got {obj!r}")
        return float(obj)
    raise ValueError(f"no file scalars in arithmetic mode {arith!r}")


def render_scalar(value: Scalar) -> str:
    """Human-readable rendering used by the CLI's --pretty output."""
    kind = backend_of(value)
    if kind == RATIONAL:
        return format_rational(value)
    if kind == FLOAT64:
        return repr(value)
    return str(value)
