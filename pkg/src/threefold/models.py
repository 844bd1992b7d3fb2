"""The cD/2 germ family

    x1^2 + x4*x5 + p(x2,x3,x4) = 0,  x2^2 + q(x1,x3,x4) + x5 = 0
    inside C^5 / (1/2)(1,1,1,0,0),   wt(x1..x5) = ((r+1)/2,(r-1)/2,2,1,r),

with r >= 7, r = +-1 mod 8, p of weighted order > r, q weighted
homogeneous of weight r-1, both invariant under the half-twist, and q not
a square of the shape (x3*s(x3^2,x4))^2.  This module validates such
models, generates deterministic random ones, eliminates x5 to produce the
four-variable hypersurface germ, and recognizes the two cD/2 normal forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .polynomials import (SparsePoly, detect_square_form, is_semi_invariant,
                          poly_from_dict, poly_to_dict, substitute,
                          term_weight, weighted_order)
from .quotients import QuotientType

GERM_VARIABLES = ("x1", "x2", "x3", "x4", "x5")
P_VARIABLES = ("x2", "x3", "x4")
Q_VARIABLES = ("x1", "x3", "x4")
AMBIENT = QuotientType(2, (1, 1, 1, 0, 0))


def model_weights(r: int) -> dict[str, int]:
    """Blow-up weights on (x1,...,x5) for the given r."""
    return {"x1": (r + 1) // 2, "x2": (r - 1) // 2, "x3": 2, "x4": 1, "x5": r}


def blowup_vector(r: int) -> tuple[Fraction, ...]:
    w = model_weights(r)
    return tuple(Fraction(w[v]) for v in GERM_VARIABLES)


def valid_r(r: int) -> bool:
    return r >= 7 and r % 8 in (1, 7)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                       for c in self.checks],
        }


@dataclass(frozen=True)
class CD2Model:
    """A candidate germ datum (r, p, q); run validate_model to check it."""

    r: int
    p: SparsePoly
    q: SparsePoly

    def __post_init__(self):
        if not isinstance(self.r, int):
            raise ValueError("r must be an integer")
        if not self.p.used_variables() <= set(P_VARIABLES):
            raise ValueError("p may involve only x2, x3, x4")
        if not self.q.used_variables() <= set(Q_VARIABLES):
            raise ValueError("q may involve only x1, x3, x4")
        object.__setattr__(self, "p", self.p.with_variables(P_VARIABLES))
        object.__setattr__(self, "q", self.q.with_variables(Q_VARIABLES))

    def to_json_dict(self) -> dict:
        return {"r": self.r, "p": poly_to_dict(self.p), "q": poly_to_dict(self.q)}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "CD2Model":
        return cls(int(data["r"]), poly_from_dict(data["p"]), poly_from_dict(data["q"]))


def required_monomials(r: int) -> dict[str, tuple[int, ...]]:
    """The p- and q-monomials forced by the congruence class of r mod 8.

    Exponent tuples are over P_VARIABLES and Q_VARIABLES respectively.
    """
    if not valid_r(r):
        raise ValueError(f"r must be >= 7 and = +-1 mod 8, got {r}")
    if r % 8 == 1:
        return {"p": (1, (r + 3) // 4, 0), "q": (0, (r - 1) // 2, 0)}
    return {"p": (0, (r + 1) // 2, 0), "q": (1, (r - 3) // 4, 0)}


def check_required_monomials(model: CD2Model) -> tuple[CheckResult, CheckResult]:
    need = required_monomials(model.r)
    p_ok = model.p.coefficient(need["p"]) != 0
    q_ok = model.q.coefficient(need["q"]) != 0
    p_mono = SparsePoly.monomial(P_VARIABLES, need["p"])
    q_mono = SparsePoly.monomial(Q_VARIABLES, need["q"])
    return (
        CheckResult("required_p_monomial", p_ok,
                    f"{p_mono} {'present in' if p_ok else 'missing from'} p"),
        CheckResult("required_q_monomial", q_ok,
                    f"{q_mono} {'present in' if q_ok else 'missing from'} q"),
    )


def validate_model(model: CD2Model, strict: bool = False) -> ValidationReport:
    """Run every model invariant as a named check; failures are report
    entries, never exceptions.  With strict=True the congruence-forced
    monomials must be present as well."""
    r = model.r
    weights = model_weights(r)
    checks: list[CheckResult] = []

    congruence = valid_r(r)
    checks.append(CheckResult("congruence", congruence,
                              f"r={r}, r mod 8 = {r % 8}"))

    p_order = weighted_order(model.p, weights)
    checks.append(CheckResult("p_order", p_order > r,
                              f"weighted order of p is {p_order}, needs > {r}"))

    q_weights = [term_weight(model.q.variables, e, weights) for e in model.q.terms]
    q_homogeneous = bool(q_weights) and all(w == r - 1 for w in q_weights)
    checks.append(CheckResult("q_weight", q_homogeneous,
                              f"q term weights {sorted(set(q_weights))}, needs exactly {{{r - 1}}}"))

    p_action = AMBIENT.group_action(GERM_VARIABLES).restricted(P_VARIABLES)
    q_action = AMBIENT.group_action(GERM_VARIABLES).restricted(Q_VARIABLES)
    checks.append(CheckResult("p_parity", is_semi_invariant(model.p, p_action) == 0,
                              "p must have even total degree in x2, x3 in every term"))
    checks.append(CheckResult("q_parity", is_semi_invariant(model.q, q_action) == 0,
                              "q must have even total degree in x1, x3 in every term"))

    square = detect_square_form(model.q)
    checks.append(CheckResult("q_square_free", square is None,
                              "" if square is None else f"q = (x3*({square}))^2"))

    if strict:
        if congruence:
            checks.extend(check_required_monomials(model))
        else:
            checks.append(CheckResult("required_monomials", False,
                                      "congruence fails, forced monomials undefined"))
    return ValidationReport(tuple(checks))


# -- deterministic model generation ------------------------------------------


def _even_q_monomials(r: int) -> list[tuple[int, ...]]:
    # exponents (a, b, c) over (x1, x3, x4): a*(r+1)/2 + 2b + c = r-1, a+b even
    out = []
    for a in (0, 1):
        rest = (r - 1) - a * (r + 1) // 2
        if rest < 0:
            continue
        for b in range(rest // 2 + 1):
            if (a + b) % 2 == 0:
                out.append((a, b, rest - 2 * b))
    return out


def _even_p_monomials(r: int, extra_degree: int) -> list[tuple[int, ...]]:
    # exponents (a, b, c) over (x2, x3, x4): weight in (r, r+extra], a+b even
    w2 = (r - 1) // 2
    top = r + extra_degree
    out = []
    for a in range(top // w2 + 1):
        for b in range((top - a * w2) // 2 + 1):
            if (a + b) % 2:
                continue
            low = max(0, r + 1 - a * w2 - 2 * b)
            for c in range(low, top - a * w2 - 2 * b + 1):
                weight = a * w2 + 2 * b + c
                if r < weight <= top:
                    out.append((a, b, c))
    return out


def generate_model(r: int, seed: int, extra_degree: int = 4,
                   include_required: bool = True,
                   include_axis_term: bool = True) -> CD2Model:
    """Deterministically sample a valid model for the given r.

    Fixed algorithm (Mersenne Twister seeded from (r, seed, extra_degree)):
    enumerate the even-parity q-monomials of weight r-1 and the even-parity
    p-monomials of weight in (r, r+extra_degree], keep each optional one
    with probability 1/5, and draw coefficients +-num/den with num, den in
    [1, 9].  The congruence-forced monomials are always included (they are
    necessary for the germ family), as is x4^(r-1) in q, which keeps the
    germ disjoint from the x4-axis away from the origin and hence the
    blow-up chart of x4 smooth at its origin.  Both inclusions can be
    switched off to build negative fixtures.
    """
    if not valid_r(r):
        raise ValueError(f"r must be >= 7 and = +-1 mod 8, got {r}")
    if extra_degree < 0:
        raise ValueError("extra_degree must be non-negative")
    rng = random.Random((seed * 1_000_003 + r) * 1_009 + extra_degree)

    def coefficient() -> Fraction:
        return Fraction(rng.choice((1, -1)) * rng.randint(1, 9), rng.randint(1, 9))

    need = required_monomials(r)
    for _ in range(100):
        q_terms: dict[tuple[int, ...], Fraction] = {}
        if include_required:
            q_terms[need["q"]] = coefficient()
        if include_axis_term:
            q_terms[(0, 0, r - 1)] = coefficient()
        for mono in _even_q_monomials(r):
            if mono not in q_terms and rng.random() < 0.2:
                q_terms[mono] = coefficient()
        q = SparsePoly(Q_VARIABLES, q_terms)
        if not q.is_zero and detect_square_form(q) is None:
            break
    else:
        raise RuntimeError("square-form rejection sampling did not converge")

    p_terms: dict[tuple[int, ...], Fraction] = {}
    if include_required:
        p_terms[need["p"]] = coefficient()
    for mono in _even_p_monomials(r, extra_degree):
        if mono not in p_terms and rng.random() < 0.2:
            p_terms[mono] = coefficient()
    p = SparsePoly(P_VARIABLES, p_terms)

    return CD2Model(r, p, q)


# -- the five-variable germ and the x5 elimination ----------------------------


def model_equations(model: CD2Model) -> tuple[SparsePoly, SparsePoly]:
    """The two defining equations over (x1,...,x5)."""
    x = {v: SparsePoly.variable(v, GERM_VARIABLES) for v in GERM_VARIABLES}
    first = x["x1"] ** 2 + x["x4"] * x["x5"] + model.p.with_variables(GERM_VARIABLES)
    second = x["x2"] ** 2 + model.q.with_variables(GERM_VARIABLES) + x["x5"]
    return first, second


def eliminate_x5(model: CD2Model) -> SparsePoly:
    """Substitute x5 = -(x2^2 + q) into the first equation.

    Returns the four-variable hypersurface germ
    x1^2 - x4*(x2^2 + q) + p over C^4/(1/2)(1,1,1,0); its weighted order is
    exactly r and its weight <= r part is -x4*(x2^2 + q).
    """
    first, _ = model_equations(model)
    x2 = SparsePoly.variable("x2", GERM_VARIABLES)
    replacement = -(x2 ** 2 + model.q.with_variables(GERM_VARIABLES))
    return substitute(first, "x5", replacement).with_variables(GERM_VARIABLES[:4])


# -- normal-form recognition ---------------------------------------------------


@dataclass(frozen=True)
class NormalFormResult:
    form: str                      # "A", "B" or "unrecognized"
    elephant_ok: bool | None       # general-elephant bound, None if unrecognized
    flipped_x4: bool
    data: dict

    def to_json_dict(self) -> dict:
        return {"form": self.form, "elephant_ok": self.elephant_ok,
                "flipped_x4": self.flipped_x4,
                "data": {k: str(v) for k, v in self.data.items()}}


_FOUR = GERM_VARIABLES[:4]


def _match_form_a(phi: SparsePoly, r: int) -> NormalFormResult | None:
    # x1^2 + x2*x3*x4 + x2^(2a) + x3^(2b) + x4^g, a,b >= 2, g >= 3;
    # the displayed coefficients are units, so after scaling they must be 1
    terms = dict(phi.with_variables(_FOUR).terms)
    if len(terms) != 5 or terms.get((0, 1, 1, 1)) != 1:
        return None
    terms.pop((0, 1, 1, 1))
    alpha = beta = gamma = None
    for (e1, e2, e3, e4), c in terms.items():
        if (e1, e2, e3, e4) == (2, 0, 0, 0):
            continue
        if c != 1:
            return None
        if e1 == 0 and e3 == e4 == 0 and e2 % 2 == 0 and e2 >= 4 and alpha is None:
            alpha = e2 // 2
        elif e1 == 0 and e2 == e4 == 0 and e3 % 2 == 0 and e3 >= 4 and beta is None:
            beta = e3 // 2
        elif e1 == e2 == e3 == 0 and e4 >= 3 and gamma is None:
            gamma = e4
        else:
            return None
    if alpha is None or beta is None or gamma is None:
        return None
    return NormalFormResult("A", gamma >= r, False,
                            {"alpha": alpha, "beta": beta, "gamma": gamma})


def _match_form_b(phi: SparsePoly, r: int) -> NormalFormResult | None:
    # x1^2 + x2^2*x4 + lambda*x2*x3^(2a-1) + g(x3^2, x4), a >= 2, lambda and
    # g free, g in the ideal (x3^4, x3^2*x4^2, x4^3); x2^2*x4 scaled to 1
    flat = phi.with_variables(_FOUR)
    if flat.coefficient((0, 2, 0, 1)) != 1:
        return None
    lam = Fraction(0)
    alpha = None
    g_terms: dict[tuple[int, int], Fraction] = {}
    for (e1, e2, e3, e4), c in flat.terms.items():
        if (e1, e2, e3, e4) in ((2, 0, 0, 0), (0, 2, 0, 1)):
            continue
        if e1 == 0 and e2 == 1 and e4 == 0 and e3 % 2 == 1 and e3 >= 3:
            if alpha is not None:
                return None
            lam, alpha = c, (e3 + 1) // 2
        elif e1 == 0 and e2 == 0 and e3 % 2 == 0:
            if not (e3 >= 4 or (e3 >= 2 and e4 >= 2) or (e3 == 0 and e4 >= 3)):
                return None
            g_terms[(e3, e4)] = c
        else:
            return None
    pure_x4 = [e4 for (e3, e4) in g_terms if e3 == 0]
    elephant = min(pure_x4, default=None)
    ok = elephant is None or elephant >= r
    g = SparsePoly(("x3", "x4"), {e: c for e, c in g_terms.items()})
    return NormalFormResult("B", ok, False,
                            {"lambda": lam, "alpha": alpha if alpha is not None else 0,
                             "g": g, "ord_g_x4": elephant if elephant is not None else "oo"})


def classify_normal_form(phi: SparsePoly, r: int) -> NormalFormResult:
    """Recognize a four-variable germ already written in one of the two cD/2
    normal shapes, scaling the x1^2 coefficient to one first.

    After scaling, the displayed unit coefficients must be exactly one;
    lambda and the coefficients of g stay free.  The x4 sign flip that
    aligns the eliminated germ with shape B is tried automatically and
    reported.  Germs matching neither shape, or not semi-invariant under
    1/2(1,1,1,0), come back "unrecognized".
    """
    action = QuotientType(2, (1, 1, 1, 0)).group_action(_FOUR)
    unrecognized = NormalFormResult("unrecognized", None, False, {})
    if phi.is_zero or not phi.used_variables() <= set(_FOUR):
        return unrecognized
    flat = phi.with_variables(_FOUR)
    if is_semi_invariant(flat, action) is None:
        return unrecognized
    lead = flat.coefficient((2, 0, 0, 0))
    if lead == 0:
        return unrecognized
    scaled = flat * (1 / lead)
    minus_x4 = -SparsePoly.variable("x4", _FOUR)
    for flipped in (False, True):
        candidate = substitute(scaled, "x4", minus_x4) if flipped else scaled
        for matcher in (_match_form_a, _match_form_b):
            result = matcher(candidate, r)
            if result is not None:
                if flipped:
                    result = NormalFormResult(result.form, result.elephant_ok, True, result.data)
                return result
    return unrecognized
