"""Fundamental solutions, Green's function, and general solutions of
variable-coefficient linear difference equations of order p:

    y_t = phi_1(t) y_{t-1} + ... + phi_p(t) y_{t-p} + v_t.

The default evaluation path is the banded principal-chain recurrence, which
is O((t-s)*p); the dense-determinant, Leibnizian, nested-sum, and
companion-product routes exist as independently computed equivalents for
cross-verification.  All operations are pure; independent queries may run
concurrently because the chain memo is per call, never shared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

from . import scalar
from .coefficients import (
    CoefficientModel,
    DomainError,
    PrincipalMatrixSpec,
    build_phi_matrix,
)
from .hessenberg import HessenbergMatrix, det_leibniz_oracle, det_recurrence
from .leibnizian import det_leibnizian
from .nested_sum import green_nested_sum
from .scalar import Scalar

GREEN_METHODS = ("recurrence", "leibnizian", "nested", "companion")
SOLVE_METHODS = ("green", "kittappa", "leibnizian", "nested", "recursion")


class MissingForcingError(LookupError):
    """A forcing value was required but not provided."""

    def __init__(self, t: int):
        super().__init__(f"no forcing value for t={t}")
        self.t = t


Forcing = Union[Mapping[int, Scalar], Callable[[int], Scalar], None]


@dataclass(frozen=True)
class SolutionProblem:
    """One initial-value problem: model, anchor s, the p initial values
    y_{s-p+1}..y_s in that order, and the forcing sequence.

    ``forcing`` may be a mapping t -> v_t, a callable, or None.  None (or an
    empty mapping) declares the equation homogeneous, with v_t structurally
    zero; a nonempty mapping that lacks a queried t is a hard error, never an
    implicit zero.
    """

    model: CoefficientModel
    s: int
    init: tuple[Scalar, ...]
    forcing: Forcing = None

    def __post_init__(self):
        p = self.model.p
        object.__setattr__(self, "init", tuple(self.init))
        if len(self.init) != p:
            raise DomainError(
                f"need exactly {p} initial values, got {len(self.init)}"
            )
        if self.model.t_min is not None and self.s - p + 1 < self.model.t_min:
            raise DomainError(
                f"anchor s={self.s} puts the initial window below the "
                f"coefficient domain start {self.model.t_min}"
            )
        if isinstance(self.forcing, Mapping):
            bad = [t for t in self.forcing if t <= self.s]
            if bad:
                raise DomainError(
                    f"forcing keys must exceed the anchor s={self.s}: {sorted(bad)}"
                )

    @classmethod
    def symbolic(
        cls, model: CoefficientModel, s: int, homogeneous: bool = False
    ) -> "SolutionProblem":
        """Problem whose initial values and forcing are the symbols y(t), v(t)."""
        init = tuple(scalar.y_sym(u) for u in range(s - model.p + 1, s + 1))
        forcing = None if homogeneous else scalar.v_sym
        return cls(model, s, init, forcing)

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def is_homogeneous(self) -> bool:
        if self.forcing is None:
            return True
        return isinstance(self.forcing, Mapping) and len(self.forcing) == 0

    def initial_value(self, m: int) -> Scalar:
        """y_{s-m+1} for 1 <= m <= p."""
        if not 1 <= m <= self.p:
            raise DomainError(f"initial index {m} outside 1..{self.p}")
        return self.init[self.p - m]

    def prescribed(self, t: int) -> Scalar:
        """The given value at a window position s-p+1 <= t <= s."""
        if not self.s - self.p + 1 <= t <= self.s:
            raise DomainError(f"t={t} outside the initial window")
        return self.init[t - (self.s - self.p + 1)]

    def forcing_value(self, t: int) -> Scalar:
        if t <= self.s:
            raise DomainError(f"forcing is defined only for t > s, got t={t}")
        if self.is_homogeneous:
            return self.model.zero
        if callable(self.forcing):
            return self.forcing(t)
        try:
            return self.forcing[t]
        except KeyError:
            raise MissingForcingError(t) from None


def principal_chain(model: CoefficientModel, m: int, t: int, s: int) -> list[Scalar]:
    """Determinants of the leading blocks of the branch-m banded matrix.

    Returns [d_0, ..., d_{t-s}] where d_n is the order-n leading principal
    minor (d_0 = 1), computed by the banded recurrence in O((t-s)*p) scalar
    operations.  This is the default route for every fundamental-solution
    value.
    """
    p = model.p
    if not 1 <= m <= p:
        raise DomainError(f"branch {m} outside 1..{p}")
    if t <= s:
        raise DomainError(f"chain requires t > s, got t={t}, s={s}")
    dets: list[Scalar] = [model.one]
    row_of = model.phi_row
    for n in range(1, t - s + 1):
        row = row_of(s + n)
        hi = n - 1 if n - 1 < p else p
        acc: Scalar | None = None
        for r in range(1, hi + 1):
            term = row[r - 1] * dets[n - r]
            acc = term if acc is None else acc + term
        q = n - 1 + m
        if q <= p:
            first = row[q - 1]  # multiplies d_0 = 1
            acc = first if acc is None else acc + first
        dets.append(acc if acc is not None else model.zero)
    return dets


def xi(model: CoefficientModel, m: int, t: int, s: int) -> Scalar:
    """The m-th fundamental solution at (t, s).

    1 at t = s-m+1, 0 elsewhere on the initial window, and the branch-m
    banded determinant for t > s.
    """
    if not 1 <= m <= model.p:
        raise DomainError(f"branch {m} outside 1..{model.p}")
    if t < s - model.p + 1:
        raise DomainError(f"t={t} below the window start {s - model.p + 1}")
    if t <= s:
        return model.one if t == s - m + 1 else model.zero
    return principal_chain(model, m, t, s)[-1]


def green(model: CoefficientModel, t: int, s: int) -> Scalar:
    """Green's function H(t, s): the first fundamental solution.

    H(s, s) = 1, H(t, s) = 0 for s-p+1 <= t < s, and the principal
    determinant for t > s.
    """
    if t < s - model.p + 1:
        raise DomainError(f"t={t} below the window start {s - model.p + 1}")
    if t > s:
        return principal_chain(model, 1, t, s)[-1]
    return model.one if t == s else model.zero


def green_leibnizian(
    model: CoefficientModel, t: int, s: int, enum_limit: int | None = None
) -> Scalar:
    """H(t, s) summed over the 2^(t-s-1) non-trivial signed products of the
    principal matrix (verification route, exponential in t - s)."""
    if t <= s:
        raise DomainError(f"requires t > s, got t={t}, s={s}")
    matrix = build_phi_matrix(PrincipalMatrixSpec(model, 1, t, s))
    return det_leibnizian(matrix, enum_limit=enum_limit)


def xi_via_green(model: CoefficientModel, m: int, t: int, s: int) -> Scalar:
    """Branch-m fundamental solution from the first-column cofactor identity:
    the weighted sum of H(t, s+j) over j = 1..p-m+1."""
    if not 1 <= m <= model.p:
        raise DomainError(f"branch {m} outside 1..{model.p}")
    if t <= s:
        raise DomainError(f"requires t > s, got t={t}, s={s}")
    total: Scalar | None = None
    for j in range(1, model.p - m + 2):
        coeff = model.phi(m + j - 1, s + j)
        if not coeff:
            continue
        g = green(model, t, s + j) if t >= s + j else model.zero
        if not g:
            continue
        term = coeff * g
        total = term if total is None else total + term
    return total if total is not None else model.zero


@dataclass(frozen=True)
class CasoratiMatrix:
    """p x p matrix with entry (i, j) equal to the branch-j fundamental
    solution at time t - i + 1; the identity matrix at t = s."""

    p: int
    t: int
    s: int
    entries: tuple[tuple[Scalar, ...], ...]

    def casoratian(self) -> Scalar:
        return det_leibniz_oracle(self.entries, oracle_limit=max(self.p, 9))


def casorati(model: CoefficientModel, t: int, s: int) -> CasoratiMatrix:
    """Casorati matrix of the fundamental set at (t, s); needs t >= s."""
    if t < s:
        raise DomainError(f"requires t >= s, got t={t}, s={s}")
    p = model.p
    columns = []
    for branch in range(1, p + 1):
        chain = principal_chain(model, branch, t, s) if t > s else None
        col = []
        for i in range(1, p + 1):
            u = t - i + 1
            n = u - s
            if n >= 1:
                col.append(chain[n])
            else:
                col.append(model.one if u == s - branch + 1 else model.zero)
        columns.append(col)
    entries = tuple(
        tuple(columns[j][i] for j in range(p)) for i in range(p)
    )
    return CasoratiMatrix(p=p, t=t, s=s, entries=entries)


@dataclass(frozen=True)
class CompanionMatrix:
    """p x p one-step transition matrix: first row (phi_1(t)..phi_p(t)),
    ones on the subdiagonal, zeros elsewhere."""

    p: int
    t: int
    entries: tuple[tuple[Scalar, ...], ...]


def companion_matrix(model: CoefficientModel, t: int) -> CompanionMatrix:
    p = model.p
    zero, one = model.zero, model.one
    rows = [tuple(model.phi_row(t))]
    for i in range(1, p):
        rows.append(tuple(one if j == i - 1 else zero for j in range(p)))
    return CompanionMatrix(p=p, t=t, entries=tuple(rows))


def _mat_mul(a, b, zero: Scalar):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: Scalar | None = None
            for l in range(n):
                x = a[i][l]
                y = b[l][j]
                if not x or not y:
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else zero)
        out.append(tuple(row))
    return tuple(out)


def companion_product(
    model: CoefficientModel, t: int, s: int
) -> tuple[tuple[Scalar, ...], ...]:
    """Product of the one-step matrices from time s+1 up to t, newest on the
    left; equals the Casorati matrix entrywise, so its top-left entry is
    H(t, s)."""
    if t <= s:
        raise DomainError(f"requires t > s, got t={t}, s={s}")
    product = companion_matrix(model, s + 1).entries
    for u in range(s + 2, t + 1):
        product = _mat_mul(companion_matrix(model, u).entries, product, model.zero)
    return product


def _acc(total: Scalar | None, term: Scalar) -> Scalar:
    return term if total is None else total + term


def _green_memo(
    model: CoefficientModel, t: int, method: str, enum_limit: int | None
) -> Callable[[int], Scalar]:
    cache: dict[int, Scalar] = {}

    def at(anchor: int) -> Scalar:
        if anchor not in cache:
            if t == anchor:
                cache[anchor] = model.one
            elif t < anchor:
                cache[anchor] = model.zero
            elif method == "recurrence":
                cache[anchor] = green(model, t, anchor)
            elif method == "leibnizian":
                cache[anchor] = green_leibnizian(model, t, anchor, enum_limit)
            else:
                cache[anchor] = green_nested_sum(model, t, anchor)
        return cache[anchor]

    return at


def _initial_part(
    problem: SolutionProblem, green_at: Callable[[int], Scalar]
) -> Scalar | None:
    model, s, p = problem.model, problem.s, problem.p
    total: Scalar | None = None
    for m in range(1, p + 1):
        y0 = problem.initial_value(m)
        if not y0:
            continue
        for j in range(1, p - m + 2):
            coeff = model.phi(m + j - 1, s + j)
            if not coeff:
                continue
            g = green_at(s + j)
            if not g:
                continue
            total = _acc(total, coeff * g * y0)
    return total


def _forcing_part(
    problem: SolutionProblem, t: int, green_at: Callable[[int], Scalar]
) -> Scalar | None:
    total: Scalar | None = None
    for j in range(1, t - problem.s + 1):
        v = problem.forcing_value(problem.s + j)
        if not v:
            continue
        g = green_at(problem.s + j)
        if not g:
            continue
        total = _acc(total, g * v)
    return total


def _require_homogeneous(problem: SolutionProblem) -> None:
    if not problem.is_homogeneous:
        raise DomainError("operation requires an empty forcing sequence")


def _check_window(problem: SolutionProblem, t: int) -> None:
    if t < problem.s - problem.p + 1:
        raise DomainError(
            f"t={t} below the window start {problem.s - problem.p + 1}"
        )


def homogeneous_solution(problem: SolutionProblem, t: int) -> Scalar:
    """Solution of the homogeneous equation through the fundamental set:
    the initial values weighted by the branch solutions."""
    _require_homogeneous(problem)
    _check_window(problem, t)
    if t <= problem.s:
        return problem.prescribed(t)
    model, s = problem.model, problem.s
    total: Scalar | None = None
    for m in range(1, problem.p + 1):
        y0 = problem.initial_value(m)
        if not y0:
            continue
        value = xi(model, m, t, s)
        if not value:
            continue
        total = _acc(total, value * y0)
    return total if total is not None else model.zero


def homogeneous_solution_green(problem: SolutionProblem, t: int) -> Scalar:
    """Same solution written against the Green's function only: the double
    sum of phi_{m+j-1}(s+j) H(t, s+j) y_{s-m+1}."""
    _require_homogeneous(problem)
    _check_window(problem, t)
    if t <= problem.s:
        return problem.prescribed(t)
    green_at = _green_memo(problem.model, t, "recurrence", None)
    total = _initial_part(problem, green_at)
    return total if total is not None else problem.model.zero


def particular_solution(problem: SolutionProblem, t: int) -> Scalar:
    """Solution with zero initial values: sum of H(t, s+j) v_{s+j}."""
    if t < problem.s:
        raise DomainError(f"requires t >= s, got t={t}, s={problem.s}")
    if t == problem.s:
        return problem.model.zero
    green_at = _green_memo(problem.model, t, "recurrence", None)
    total = _forcing_part(problem, t, green_at)
    return total if total is not None else problem.model.zero


def _bordered_matrix(
    problem: SolutionProblem, t: int, with_init: bool
) -> HessenbergMatrix:
    model, s, p = problem.model, problem.s, problem.p
    k = t - s
    minus_one = -model.one

    def first_column(i: int) -> Scalar:
        acc = problem.forcing_value(s + i)
        if with_init:
            for m in range(1, p + 1):
                q = m + i - 1
                if q > p:
                    break
                coeff = model.phi(q, s + i)
                if not coeff:
                    continue
                y0 = problem.initial_value(m)
                if not y0:
                    continue
                acc = acc + coeff * y0
        return acc

    def entry(i: int, j: int) -> Scalar:
        if j == i + 1:
            return minus_one
        if j == 1:
            return first_column(i)
        q = i - j + 1
        if 1 <= q <= p:
            return model.phi(q, s + i)
        return model.zero

    return HessenbergMatrix.from_function(k, entry, model.backend)


def particular_solution_det(problem: SolutionProblem, t: int) -> Scalar:
    """Particular solution as one bordered Hessenbergian whose first column
    is the forcing sequence."""
    if t <= problem.s:
        raise DomainError(f"requires t > s, got t={t}, s={problem.s}")
    return det_recurrence(_bordered_matrix(problem, t, with_init=False))


def general_solution(problem: SolutionProblem, t: int) -> Scalar:
    """Green's-function representation of the full solution: the
    initial-value part plus the forcing part."""
    _check_window(problem, t)
    if t <= problem.s:
        return problem.prescribed(t)
    green_at = _green_memo(problem.model, t, "recurrence", None)
    total = _initial_part(problem, green_at)
    forced = _forcing_part(problem, t, green_at)
    if forced is not None:
        total = _acc(total, forced)
    return total if total is not None else problem.model.zero


def general_solution_kittappa(problem: SolutionProblem, t: int) -> Scalar:
    """Full solution as a single bordered Hessenbergian; the first column
    merges the initial-value and forcing contributions by multilinearity."""
    if t <= problem.s:
        raise DomainError(f"requires t > s, got t={t}, s={problem.s}")
    return det_recurrence(_bordered_matrix(problem, t, with_init=True))


def _general_solution_by(
    problem: SolutionProblem, t: int, method: str, enum_limit: int | None
) -> Scalar:
    if t <= problem.s:
        raise DomainError(f"requires t > s, got t={t}, s={problem.s}")
    green_at = _green_memo(problem.model, t, method, enum_limit)
    total = _initial_part(problem, green_at)
    forced = _forcing_part(problem, t, green_at)
    if forced is not None:
        total = _acc(total, forced)
    return total if total is not None else problem.model.zero


def general_solution_leibnizian(
    problem: SolutionProblem, t: int, enum_limit: int | None = None
) -> Scalar:
    """General solution with every Green's value expanded by the
    signed-product enumeration."""
    return _general_solution_by(problem, t, "leibnizian", enum_limit)


def general_solution_nested(problem: SolutionProblem, t: int) -> Scalar:
    """General solution with every Green's value expanded by the nested-sum
    route."""
    return _general_solution_by(problem, t, "nested", None)


def recursion_oracle(problem: SolutionProblem, t: int) -> Scalar:
    """Ground truth: iterate the recurrence forward from the initial window.

    Independent of every determinant representation; all solution paths must
    agree with it.
    """
    _check_window(problem, t)
    if t <= problem.s:
        return problem.prescribed(t)
    model, s, p = problem.model, problem.s, problem.p
    homogeneous = problem.is_homogeneous
    window = list(problem.init)
    for n in range(s + 1, t + 1):
        row = model.phi_row(n)
        acc: Scalar | None = None
        for m in range(1, p + 1):
            coeff = row[m - 1]
            prev = window[-m]
            if not coeff or not prev:
                continue
            acc = _acc(acc, coeff * prev)
        if not homogeneous:
            v = problem.forcing_value(n)
            if v:
                acc = _acc(acc, v)
        window.append(acc if acc is not None else model.zero)
        window.pop(0)
    return window[-1]


def evaluate_green(
    model: CoefficientModel,
    t: int,
    s: int,
    method: str = "recurrence",
    enum_limit: int | None = None,
) -> Scalar:
    """H(t, s) by the chosen route; window values are method-independent."""
    if method not in GREEN_METHODS:
        raise ValueError(f"unknown Green method {method!r}")
    if t < s - model.p + 1:
        raise DomainError(f"t={t} below the window start {s - model.p + 1}")
    if t == s:
        return model.one
    if t < s:
        return model.zero
    if method == "recurrence":
        return green(model, t, s)
    if method == "leibnizian":
        return green_leibnizian(model, t, s, enum_limit)
    if method == "nested":
        return green_nested_sum(model, t, s)
    return companion_product(model, t, s)[0][0]


def evaluate_solution(
    problem: SolutionProblem,
    t: int,
    method: str = "green",
    enum_limit: int | None = None,
) -> Scalar:
    """y_t by the chosen route; window values are the prescribed ones."""
    if method not in SOLVE_METHODS:
        raise ValueError(f"unknown solve method {method!r}")
    _check_window(problem, t)
    if t <= problem.s:
        return problem.prescribed(t)
    if method == "green":
        return general_solution(problem, t)
    if method == "kittappa":
        return general_solution_kittappa(problem, t)
    if method == "leibnizian":
        return general_solution_leibnizian(problem, t, enum_limit)
    if method == "nested":
        return general_solution_nested(problem, t)
    return recursion_oracle(problem, t)
