"""Variable-coefficient models and the banded matrices built from them.

A :class:`CoefficientModel` evaluates the order-p coefficient family
phi_m(t) over a declared integer domain, plus the extended accessor with
phi_0(t) = -1 and phi_m(t) = 0 for m > p.  Evaluation must be pure: models
are table-backed or closed-form, never stateful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import scalar
from .hessenberg import BandedHessenbergMatrix
from .scalar import Scalar


class DomainError(ValueError):
    """Raised for arguments outside a declared integer domain."""


class CoefficientModel:
    """Coefficients phi_m(t) for 1 <= m <= p over a declared t-domain.

    ``phi`` rejects positions outside 1..p and arguments outside the domain;
    the error is never silently turned into a zero.  ``phi_ext`` adds the
    extension conventions used by the full-matrix formulas.
    """

    __slots__ = ("p", "backend", "t_min", "t_max", "_row_fn")

    def __init__(
        self,
        p: int,
        row_fn: Callable[[int], tuple[Scalar, ...]],
        backend: str,
        t_min: int | None = None,
        t_max: int | None = None,
    ):
        if p < 1:
            raise ValueError("order p must be >= 1")
        if backend not in scalar.BACKENDS:
            raise ValueError(f"unknown backend: {backend!r}")
        self.p = p
        self.backend = backend
        self.t_min = t_min
        self.t_max = t_max
        self._row_fn = row_fn

    @property
    def zero(self) -> Scalar:
        return scalar.zero(self.backend)

    @property
    def one(self) -> Scalar:
        return scalar.one(self.backend)

    def check_domain(self, t: int) -> None:
        if (self.t_min is not None and t < self.t_min) or (
            self.t_max is not None and t > self.t_max
        ):
            raise DomainError(
                f"t={t} outside the declared domain "
                f"[{self.t_min if self.t_min is not None else '-inf'}, "
                f"{self.t_max if self.t_max is not None else '+inf'}]"
            )

    def phi_row(self, t: int) -> tuple[Scalar, ...]:
        """(phi_1(t), ..., phi_p(t)) with the domain check done once."""
        self.check_domain(t)
        return self._row_fn(t)

    def phi(self, m: int, t: int) -> Scalar:
        if not 1 <= m <= self.p:
            raise DomainError(f"coefficient position {m} outside 1..{self.p}")
        self.check_domain(t)
        return self._row_fn(t)[m - 1]

    def phi_ext(self, m: int, t: int) -> Scalar:
        """Extended accessor: phi_0 = -1 and phi_m = 0 for m > p, for all t."""
        if m == 0:
            return -self.one
        if m > self.p:
            return self.zero
        return self.phi(m, t)

    @classmethod
    def constant(cls, values: Sequence[Scalar]) -> "CoefficientModel":
        row = tuple(values)
        if not row:
            raise ValueError("need at least one coefficient")
        backend = _uniform_backend(row)
        return cls(len(row), lambda t: row, backend)

    @classmethod
    def from_table(cls, rows: Mapping[int, Sequence[Scalar]]) -> "CoefficientModel":
        """Table-backed model over the contiguous key range of ``rows``."""
        if not rows:
            raise ValueError("coefficient table is empty")
        keys = sorted(rows)
        t_min, t_max = keys[0], keys[-1]
        if keys != list(range(t_min, t_max + 1)):
            raise ValueError("coefficient table keys must be contiguous integers")
        p = len(rows[t_min])
        table: dict[int, tuple[Scalar, ...]] = {}
        for t in keys:
            row = tuple(rows[t])
            if len(row) != p:
                raise ValueError(f"row t={t} has {len(row)} values, expected {p}")
            table[t] = row
        backend = _uniform_backend(v for row in table.values() for v in row)
        return cls(p, lambda t: table[t], backend, t_min=t_min, t_max=t_max)

    @classmethod
    def periodic(cls, rows: Sequence[Sequence[Scalar]]) -> "CoefficientModel":
        """phi values repeating with period len(rows): row index t mod period."""
        period = len(rows)
        if period < 1:
            raise ValueError("need at least one periodic row")
        p = len(rows[0])
        cycle = []
        for idx, row in enumerate(rows):
            if len(row) != p:
                raise ValueError(f"periodic row {idx} has {len(row)} values, expected {p}")
            cycle.append(tuple(row))
        backend = _uniform_backend(v for row in cycle for v in row)
        cycle_t = tuple(cycle)
        return cls(p, lambda t: cycle_t[t % period], backend)

    @classmethod
    def from_function(
        cls,
        p: int,
        fn: Callable[[int, int], Scalar],
        backend: str,
        t_min: int | None = None,
        t_max: int | None = None,
    ) -> "CoefficientModel":
        return cls(
            p,
            lambda t: tuple(fn(m, t) for m in range(1, p + 1)),
            backend,
            t_min=t_min,
            t_max=t_max,
        )

    @classmethod
    def symbolic(cls, p: int) -> "CoefficientModel":
        """Model whose coefficients are the symbols phi_m(t)."""
        return cls(
            p,
            lambda t: tuple(scalar.phi_sym(m, t) for m in range(1, p + 1)),
            scalar.SYMBOLIC,
        )


def _uniform_backend(values) -> str:
    backend: str | None = None
    for v in values:
        b = scalar.backend_of(v)
        if backend is None:
            backend = b
        elif backend != b:
            raise scalar.BackendMismatchError(
                f"coefficient values mix backends: {backend} vs {b}"
            )
    if backend is None:
        raise ValueError("need at least one coefficient value")
    return backend


@dataclass(frozen=True)
class PrincipalMatrixSpec:
    """Selector for the order-(t-s) banded matrix of branch m.

    Row i carries phi_{i-j+1}(s+i) in interior columns, the truncated column
    phi_{i-1+m}(s+i) at j = 1 (rows 1..p-m+1 only), and -1 on the
    superdiagonal.
    """

    model: CoefficientModel
    m: int
    t: int
    s: int

    def __post_init__(self):
        if not 1 <= self.m <= self.model.p:
            raise DomainError(f"branch {self.m} outside 1..{self.model.p}")
        if self.t <= self.s:
            raise DomainError(f"requires t > s, got t={self.t}, s={self.s}")

    @property
    def k(self) -> int:
        return self.t - self.s


def build_phi_matrix(spec: PrincipalMatrixSpec) -> BandedHessenbergMatrix:
    """Materialize the banded matrix selected by ``spec``."""
    model, m, s = spec.model, spec.m, spec.s
    p = model.p
    zero = model.zero
    minus_one = -model.one

    def entry(i: int, j: int) -> Scalar:
        if j == i + 1:
            return minus_one
        if j == 1:
            q = i - 1 + m
            return model.phi(q, s + i) if q <= p else zero
        q = i - j + 1
        if 1 <= q <= p:
            return model.phi(q, s + i)
        return zero

    return BandedHessenbergMatrix.from_function(spec.k, p, entry, model.backend)
