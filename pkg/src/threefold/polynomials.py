"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent vectors to nonzero Fraction
coefficients, over an ordered tuple of named variables.  Variables are
identified by name, not position, so germs written over four and five
coordinates share the same operations: binary operations align the two
variable universes first.

On top of the arithmetic this module provides the weighted-order toolkit
used everywhere else: weighted order of a polynomial under a positive
weight assignment (the vanishing order along the exceptional divisor of a
weighted blow-up), weighted-homogeneous parts and truncations, cyclic
semi-invariance, exact polynomial square roots, and the detector for
squares of the special shape (x3*s(x3^2, x4))^2.

No floating point appears anywhere; every coefficient is a Fraction and
orders are Fraction or the distinguished INFINITE_ORDER value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class _InfiniteOrder:
    """Weighted order of the zero polynomial; compares above every rational."""

    __slots__ = ()

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _InfiniteOrder)

    def __gt__(self, other):
        return not isinstance(other, _InfiniteOrder)

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, _InfiniteOrder)

    def __hash__(self):
        return hash("threefold.INFINITE_ORDER")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INFINITE_ORDER"


INFINITE_ORDER = _InfiniteOrder()

_TOKEN = re.compile(r"^(?P<num>-?\d+(?:/\d+)?)$")
_POWER = re.compile(r"^(?P<name>[A-Za-z_]\w*)(?:\^(?P<exp>\d+))?$")


class SparsePoly:
    """Sparse polynomial with Fraction coefficients and named variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError("exponent vector arity mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = Fraction(coeff)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables: Iterable[str]) -> "SparsePoly":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Iterable[str], value) -> "SparsePoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): Fraction(value)})

    @classmethod
    def monomial(cls, variables: Iterable[str], exponents: Iterable[int], coefficient=1) -> "SparsePoly":
        return cls(variables, {tuple(exponents): Fraction(coefficient)})

    @classmethod
    def variable(cls, name: str, variables: Iterable[str]) -> "SparsePoly":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if sum(exps) != 1:
            raise ValueError(f"{name!r} is not among {variables}")
        return cls(variables, {exps: Fraction(1)})

    @classmethod
    def from_string(cls, text: str, variables: Iterable[str]) -> "SparsePoly":
        """Parse a flat polynomial expression such as "x1^2 + x4*x5 - 1/2*x3^4".

        No parentheses; terms are separated by + and -, factors inside a
        term by *.  A factor is either a rational literal or name[^exp].
        """
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        chunks: list[str] = []
        current = ""
        for ch in s:
            if ch in "+-" and current:
                chunks.append(current)
                current = ch if ch == "-" else ""
            else:
                current += ch
        chunks.append(current)
        terms: dict[tuple[int, ...], Fraction] = {}
        for chunk in chunks:
            if chunk in ("", "-"):
                raise ValueError(f"malformed term in {text!r}")
            sign = Fraction(1)
            if chunk.startswith("-"):
                sign = Fraction(-1)
                chunk = chunk[1:]
            coeff = sign
            exps = [0] * len(variables)
            for factor in chunk.split("*"):
                m = _TOKEN.match(factor)
                if m:
                    coeff *= Fraction(m.group("num"))
                    continue
                m = _POWER.match(factor)
                if not m or m.group("name") not in index:
                    raise ValueError(f"unknown factor {factor!r} in {text!r}")
                exps[index[m.group("name")]] += int(m.group("exp") or 1)
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return cls(variables, terms)

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def arity(self) -> int:
        return len(self.variables)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Fraction(0))

    def coefficient(self, exponents: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    def used_variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            for v, e in zip(self.variables, exps):
                if e:
                    used.add(v)
        return used

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def with_variables(self, variables: Iterable[str]) -> "SparsePoly":
        """Re-express over another variable tuple; every used variable must survive."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                if e:
                    if v not in index:
                        raise ValueError(f"variable {v!r} is used but not retained")
                    new[index[v]] = e
            terms[tuple(new)] = c
        return SparsePoly(variables, terms)

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(merged), other.with_variables(merged)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.variables, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return SparsePoly(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "SparsePoly":
        return self + (-other if isinstance(other, SparsePoly) else SparsePoly.constant(self.variables, -Fraction(other)))

    def __rsub__(self, other) -> "SparsePoly":
        return -(self - other)

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return SparsePoly(self.variables, {e: c * x for e, x in self.terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = self._aligned(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return SparsePoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "SparsePoly":
        if not isinstance(power, int) or power < 0:
            raise ValueError("power must be a non-negative integer")
        result = SparsePoly.constant(self.variables, 1)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- display -----------------------------------------------------------

    def _term_str(self, exps, coeff) -> str:
        factors = []
        for v, e in zip(self.variables, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        if not factors:
            return str(coeff)
        body = "*".join(factors)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        return f"{coeff}*{body}"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [self._term_str(e, c) for e, c in sorted(self.terms.items(), reverse=True)]
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    def __repr__(self) -> str:
        return f"SparsePoly({self.variables!r}, {self.terms!r})"


@dataclass(frozen=True)
class GroupAction:
    """Diagonal action of a cyclic group of given order, one character per variable."""

    order: int
    characters: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("group order must be positive")
        object.__setattr__(self, "characters",
                           {v: int(c) % self.order for v, c in dict(self.characters).items()})

    def character(self, variable: str) -> int:
        if variable not in self.characters:
            raise KeyError(f"no character for variable {variable!r}")
        return self.characters[variable]

    def restricted(self, variables: Iterable[str]) -> "GroupAction":
        return GroupAction(self.order, {v: self.character(v) for v in variables})


# -- weighted orders -------------------------------------------------------


def term_weight(variables, exponents, weights: Mapping) -> Fraction:
    total = Fraction(0)
    for v, e in zip(variables, exponents):
        if e:
            if v not in weights:
                raise KeyError(f"no weight for variable {v!r}")
            total += Fraction(weights[v]) * e
    return total


def weighted_order(p: SparsePoly, weights: Mapping):
    """Minimum weight over the monomials of p; INFINITE_ORDER for the zero polynomial."""
    if p.is_zero:
        return INFINITE_ORDER
    return min(term_weight(p.variables, e, weights) for e in p.terms)


def homogeneous_part(p: SparsePoly, weights: Mapping, degree) -> SparsePoly:
    d = Fraction(degree)
    return SparsePoly(p.variables,
                      {e: c for e, c in p.terms.items()
                       if term_weight(p.variables, e, weights) == d})


def truncate_le(p: SparsePoly, weights: Mapping, degree) -> SparsePoly:
    d = Fraction(degree)
    return SparsePoly(p.variables,
                      {e: c for e, c in p.terms.items()
                       if term_weight(p.variables, e, weights) <= d})


def truncate_gt(p: SparsePoly, weights: Mapping, degree) -> SparsePoly:
    d = Fraction(degree)
    return SparsePoly(p.variables,
                      {e: c for e, c in p.terms.items()
                       if term_weight(p.variables, e, weights) > d})


def is_semi_invariant(p: SparsePoly, action: GroupAction) -> int | None:
    """The common character of all terms of p under the action, or None.

    The zero polynomial is reported with character 0.
    """
    found: int | None = None
    for exps in p.terms:
        chi = sum(action.character(v) * e for v, e in zip(p.variables, exps) if e) % action.order
        if found is None:
            found = chi
        elif chi != found:
            return None
    return 0 if found is None else found


# -- substitution ----------------------------------------------------------


def substitute(p: SparsePoly, variable: str, replacement: SparsePoly) -> SparsePoly:
    """Exact polynomial substitution of `replacement` for `variable` in p."""
    if variable not in p.variables:
        return p
    merged = p.variables + tuple(v for v in replacement.variables if v not in p.variables)
    idx = merged.index(variable)
    repl = replacement.with_variables(merged)
    result = SparsePoly.zero(merged)
    powers: dict[int, SparsePoly] = {0: SparsePoly.constant(merged, 1)}
    for exps, c in p.with_variables(merged).terms.items():
        k = exps[idx]
        if k not in powers:
            powers[k] = repl ** k
        rest = list(exps)
        rest[idx] = 0
        result = result + SparsePoly.monomial(merged, rest, c) * powers[k]
    return result


# -- exact square roots and the special square form -------------------------


def _fraction_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    sn = math.isqrt(c.numerator)
    sd = math.isqrt(c.denominator)
    if sn * sn != c.numerator or sd * sd != c.denominator:
        return None
    return Fraction(sn, sd)


def polynomial_sqrt(p: SparsePoly) -> SparsePoly | None:
    """Exact square root of p, or None if p is not a perfect square.

    Peels the root term by term from the lexicographically leading monomial
    (variables compared in declared order) and verifies by re-expansion.
    """
    if p.is_zero:
        return SparsePoly.zero(p.variables)
    lead = max(p.terms)
    if any(e % 2 for e in lead):
        return None
    lead_coeff = _fraction_sqrt(p.terms[lead])
    if lead_coeff is None:
        return None
    half = tuple(e // 2 for e in lead)
    root_terms: dict[tuple[int, ...], Fraction] = {half: lead_coeff}
    previous = None
    while True:
        root = SparsePoly(p.variables, root_terms)
        remainder = p - root * root
        if remainder.is_zero:
            return root
        top = max(remainder.terms)
        exps = tuple(a - b for a, b in zip(top, half))
        if any(e < 0 for e in exps):
            return None
        if previous is not None and exps >= previous:
            return None
        previous = exps
        root_terms[exps] = remainder.terms[top] / (2 * lead_coeff)


def detect_square_form(q: SparsePoly, odd_variable: str = "x3",
                       free_variable: str = "x4") -> SparsePoly | None:
    """Recognize q == (x3 * s(x3^2, x4))^2 and return s, otherwise None.

    s comes back as a polynomial in (odd_variable, free_variable) whose
    odd_variable exponents are all even.  The factorization is verified by
    re-expansion before returning.
    """
    if q.is_zero:
        return None
    if not q.used_variables() <= {odd_variable, free_variable}:
        return None
    flat = q.with_variables((odd_variable, free_variable))
    root = polynomial_sqrt(flat)
    if root is None:
        return None
    if any(e[0] % 2 == 0 for e in root.terms):
        return None
    s = SparsePoly((odd_variable, free_variable),
                   {(e[0] - 1, e[1]): c for e, c in root.terms.items()})
    x3 = SparsePoly.variable(odd_variable, (odd_variable, free_variable))
    if (x3 * s) ** 2 != flat:
        return None
    return s


def low_part_ratio(p: SparsePoly, reference: SparsePoly, weights: Mapping, cutoff) -> Fraction | None:
    """The constant c with truncate_le(p, weights, cutoff) == c * reference, if any.

    Returns 0 when the truncation vanishes, None when no such constant exists.
    """
    low = truncate_le(p, weights, cutoff)
    if low.is_zero:
        return Fraction(0)
    if reference.is_zero:
        return None
    low, ref = low._aligned(reference)
    exps, coeff = next(iter(ref.terms.items()))
    c = low.terms.get(exps, Fraction(0)) / coeff
    if c != 0 and low == ref * c:
        return c
    return None


# -- JSON form ---------------------------------------------------------------


def poly_to_dict(p: SparsePoly) -> dict:
    """JSON-ready form: {"vars": [...], "terms": [{"c": "p/q", "e": [...]}, ...]}."""
    return {
        "vars": list(p.variables),
        "terms": [{"c": str(c), "e": list(e)} for e, c in sorted(p.terms.items())],
    }


def poly_from_dict(data: Mapping) -> SparsePoly:
    variables = tuple(data["vars"])
    terms = {tuple(t["e"]): Fraction(str(t["c"])) for t in data["terms"]}
    return SparsePoly(variables, terms)
