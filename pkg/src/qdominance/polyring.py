"""Sparse multivariate polynomials and dense truncated trivariate series.

MultiPoly stores terms as a map from exponent tuples to exact rational
coefficients; the variable list is part of the value and two polynomials
combine only when their variable lists agree.  Rational functions appear
in two roles with different safety requirements:

* expand_rational turns numerator / product-of-unit-binomials into a
  dense truncated series over (t, x, y); it refuses denominator factors
  that are not of the form 1 - c*monomial, because only those have
  well-defined power-series reciprocals here.
* identity_check compares two sums of rational terms by clearing all
  denominators (exact mode) or by evaluation at random points of a large
  prime field (randomized mode); denominators there may be any nonzero
  polynomial, including differences of monomials with removable
  singularities.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction

from qdominance.series import Coefficient, QSeries, _norm

# axis order for TriSeries lattices
TRI_VARIABLES = ("t", "x", "y")

# Mersenne prime used by the randomized identity checker.
FIELD_PRIME = 2**61 - 1


class VariableMismatchError(ValueError):
    """Raised when polynomials over different variable lists are combined."""


class SingularDenominatorError(ValueError):
    """Raised when a series expansion needs a non-unit denominator factor."""


class CoverageError(ValueError):
    """Raised when a lattice is too small to cover every requested exponent."""


class MultiPoly:
    """Sparse polynomial: terms maps exponent tuples to nonzero coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms):
        self.variables = tuple(variables)
        width = len(self.variables)
        clean: dict[tuple[int, ...], Coefficient] = {}
        for exps, c in terms.items():
            if len(exps) != width:
                raise ValueError(
                    f"exponent tuple {exps} does not match variables {self.variables}"
                )
            c = _norm(c)
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MultiPoly({self.variables}, {to_text(self)!r})"

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Coefficient:
        return self.terms.get((0,) * len(self.variables), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)


def mp_zero(variables) -> MultiPoly:
    return MultiPoly(variables, {})


def mp_const(variables, c: Coefficient) -> MultiPoly:
    return MultiPoly(variables, {(0,) * len(tuple(variables)): c})


def mono(variables, coeff: Coefficient = 1, **exps) -> MultiPoly:
    """Single term with exponents given by variable name."""
    variables = tuple(variables)
    unknown = set(exps) - set(variables)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}; have {variables}")
    key = tuple(exps.get(v, 0) for v in variables)
    return MultiPoly(variables, {key: coeff})


def poly_arith(kind: str, a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.variables != b.variables:
        raise VariableMismatchError(f"{a.variables} != {b.variables}")
    if kind in ("add", "sub"):
        sign = 1 if kind == "add" else -1
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            terms[exps] = terms.get(exps, 0) + sign * c
        return MultiPoly(a.variables, terms)
    if kind == "mul":
        terms: dict[tuple[int, ...], Coefficient] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                terms[key] = terms.get(key, 0) + ca * cb
        return MultiPoly(a.variables, terms)
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def mp_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return poly_arith("add", a, b)


def mp_sub(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return poly_arith("sub", a, b)


def mp_mul(*polys: MultiPoly) -> MultiPoly:
    if not polys:
        raise ValueError("need at least one factor")
    out = polys[0]
    for p in polys[1:]:
        out = poly_arith("mul", out, p)
    return out


def mp_neg(a: MultiPoly) -> MultiPoly:
    return MultiPoly(a.variables, {e: -c for e, c in a.terms.items()})


def to_text(p: MultiPoly) -> str:
    """Canonical form 'c * x^a y^b ...' with terms in sorted exponent order."""
    if not p.terms:
        return "0"
    pieces = []
    for exps in sorted(p.terms, reverse=True):
        c = Fraction(p.terms[exps])
        mag = abs(c)
        mag_txt = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        vars_txt = " ".join(
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(p.variables, exps)
            if e
        )
        if vars_txt and mag == 1:
            body = vars_txt
        elif vars_txt:
            body = f"{mag_txt} * {vars_txt}"
        else:
            body = mag_txt
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = (first_sign if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TERM_SPLIT = re.compile(r"(?=[+-])")
_FACTOR = re.compile(r"^([A-Za-z_]\w*)(?:\^(\d+))?$")


def from_text(text: str, variables) -> MultiPoly:
    """Parse the canonical text form back into a polynomial."""
    variables = tuple(variables)
    index = {v: i for i, v in enumerate(variables)}
    terms: dict[tuple[int, ...], Coefficient] = {}
    body = text.strip()
    if body == "0":
        return mp_zero(variables)
    for chunk in _TERM_SPLIT.split(body):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:].strip()
        coeff: Coefficient = 1
        exps = [0] * len(variables)
        for factor in chunk.replace("*", " ").split():
            if re.fullmatch(r"-?\d+(/\d+)?", factor):
                coeff = coeff * Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if m is None or m.group(1) not in index:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            exps[index[m.group(1)]] += int(m.group(2)) if m.group(2) else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
    return MultiPoly(variables, terms)


@dataclass(frozen=True)
class RationalTerm:
    """numerator / product(denominator_factors), all over one variable list."""

    numerator: MultiPoly
    denominator_factors: tuple[MultiPoly, ...] = ()

    def variables(self):
        return self.numerator.variables


@dataclass
class TriSeries:
    """Dense truncated series over (t, x, y): coeffs[n][j][k]."""

    bounds: tuple[int, int, int]
    coeffs: list

    @staticmethod
    def zero(bounds) -> "TriSeries":
        nt, nx, ny = bounds
        return TriSeries(
            (nt, nx, ny),
            [[[0] * (ny + 1) for _ in range(nx + 1)] for _ in range(nt + 1)],
        )

    def cell(self, n: int, j: int, k: int) -> Coefficient:
        return self.coeffs[n][j][k]

    def slice_at(self, n: int) -> list:
        return self.coeffs[n]

    def min_coefficient(self) -> Coefficient:
        return min(min(min(row) for row in plane) for plane in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, TriSeries)
            and self.bounds == other.bounds
            and self.coeffs == other.coeffs
        )


def _tri_exponents(p: MultiPoly) -> dict[tuple[int, int, int], Coefficient]:
    """Map a polynomial in a subset of (t, x, y) onto lattice exponents."""
    axis = []
    for v in p.variables:
        if v not in TRI_VARIABLES:
            raise ValueError(f"variable {v!r} not one of {TRI_VARIABLES}")
        axis.append(TRI_VARIABLES.index(v))
    out: dict[tuple[int, int, int], Coefficient] = {}
    for exps, c in p.terms.items():
        key = [0, 0, 0]
        for pos, e in zip(axis, exps):
            key[pos] += e
        out[tuple(key)] = out.get(tuple(key), 0) + c
    return out


def _unit_binomial_delta(factor: MultiPoly):
    """For a factor 1 - c*monomial, return (delta exponents, c); else None."""
    cells = _tri_exponents(factor)
    if cells.get((0, 0, 0)) != 1:
        return None
    rest = {e: c for e, c in cells.items() if e != (0, 0, 0)}
    if len(rest) != 1:
        return None
    (delta, neg_c), = rest.items()
    if delta == (0, 0, 0):
        return None
    return delta, -neg_c


def expand_rational(term: RationalTerm, bounds) -> TriSeries:
    """Truncated expansion of the term over the (t, x, y) lattice."""
    nt, nx, ny = bounds
    out = TriSeries.zero((nt, nx, ny))
    cs = out.coeffs
    for (n, j, k), c in _tri_exponents(term.numerator).items():
        if n <= nt and j <= nx and k <= ny:
            cs[n][j][k] += c
    deltas = []
    for factor in term.denominator_factors:
        hit = _unit_binomial_delta(factor)
        if hit is None:
            raise SingularDenominatorError(
                f"denominator factor is not 1 - c*monomial: {to_text(factor)}"
            )
        deltas.append(hit)
    # dividing by (1 - c*q^delta) is the recurrence s[i] += c * s[i - delta],
    # valid in any order that visits smaller lattice points first
    for (dn, dj, dk), c in deltas:
        for n in range(dn, nt + 1) if dn else range(nt + 1):
            pn = cs[n - dn]
            qn = cs[n]
            for j in range(dj, nx + 1) if dj else range(nx + 1):
                pj = pn[j - dj]
                qj = qn[j]
                for k in range(dk, ny + 1) if dk else range(ny + 1):
                    prev = pj[k - dk]
                    if prev:
                        qj[k] = _norm(qj[k] + c * prev)
    return out


def tri_multiply(tri: TriSeries, poly: MultiPoly) -> TriSeries:
    """Product with a polynomial, truncated to the same bounds."""
    nt, nx, ny = tri.bounds
    out = TriSeries.zero(tri.bounds)
    for (dn, dj, dk), c in _tri_exponents(poly).items():
        for n in range(dn, nt + 1):
            src_n = tri.coeffs[n - dn]
            dst_n = out.coeffs[n]
            for j in range(dj, nx + 1):
                src_j = src_n[j - dj]
                dst_j = dst_n[j]
                for k in range(dk, ny + 1):
                    v = src_j[k - dk]
                    if v:
                        dst_j[k] = _norm(dst_j[k] + c * v)
    return out


def tri_truncate_poly(p: MultiPoly, bounds) -> TriSeries:
    return expand_rational(RationalTerm(p), bounds)


def specialize(tri: TriSeries, et: int, ex: int, ey: int, order: int) -> QSeries:
    """Substitute t -> q^et, x -> q^ex, y -> q^ey and collect up to q^order."""
    if min(et, ex, ey) < 1:
        raise ValueError("substitution exponents must be >= 1")
    nt, nx, ny = tri.bounds
    if nt < order // et or nx < order // ex or ny < order // ey:
        raise CoverageError(
            f"bounds {tri.bounds} cannot cover order {order} with steps "
            f"({et}, {ex}, {ey})"
        )
    out: list[Coefficient] = [0] * (order + 1)
    for n in range(min(nt, order // et) + 1):
        base_n = n * et
        plane = tri.coeffs[n]
        for j in range(min(nx, (order - base_n) // ex) + 1):
            base_j = base_n + j * ex
            row = plane[j]
            for k in range(min(ny, (order - base_j) // ey) + 1):
                c = row[k]
                if c:
                    out[base_j + k * ey] += c
    return QSeries.from_coeffs(out, order)


# ---------------------------------------------------------------------------
# identity checking


@dataclass
class IdentityVerdict:
    equal: bool
    method: str
    witness: dict | None = None
    points_used: int = 0
    failure_bound: float | None = None
    details: str = ""


def _canonical_factor(factor: MultiPoly) -> tuple[MultiPoly, int]:
    """Normalize sign so the lexicographically largest exponent has coeff > 0."""
    if factor.is_zero():
        raise ZeroDivisionError("zero denominator factor")
    lead = max(factor.terms)
    if factor.terms[lead] < 0:
        return mp_neg(factor), -1
    return factor, 1


def _factor_key(factor: MultiPoly) -> tuple:
    return tuple(sorted(factor.terms.items()))


def _common_variables(terms) -> tuple[str, ...]:
    vars_seen = {t.numerator.variables for t in terms}
    for t in terms:
        vars_seen.update(f.variables for f in t.denominator_factors)
    if len(vars_seen) != 1:
        raise VariableMismatchError(f"mixed variable lists: {sorted(vars_seen)}")
    return next(iter(vars_seen))


def _clear_denominators(terms, lcd_counts, factors_by_key):
    """Sum of numerators scaled by the complement of each term's denominator."""
    if not terms:
        return None
    variables = terms[0].numerator.variables
    total = mp_zero(variables)
    for term in terms:
        scaled = term.numerator
        own_counts: dict[tuple, int] = {}
        sign = 1
        for f in term.denominator_factors:
            canon, s = _canonical_factor(f)
            sign *= s
            own_counts[_factor_key(canon)] = own_counts.get(_factor_key(canon), 0) + 1
        if sign < 0:
            scaled = mp_neg(scaled)
        for key, count in lcd_counts.items():
            missing = count - own_counts.get(key, 0)
            for _ in range(missing):
                scaled = mp_mul(scaled, factors_by_key[key])
        total = mp_add(total, scaled)
    return total


def _lcd(terms):
    lcd_counts: dict[tuple, int] = {}
    factors_by_key: dict[tuple, MultiPoly] = {}
    for term in terms:
        counts: dict[tuple, int] = {}
        for f in term.denominator_factors:
            canon, _ = _canonical_factor(f)
            key = _factor_key(canon)
            factors_by_key[key] = canon
            counts[key] = counts.get(key, 0) + 1
        for key, c in counts.items():
            lcd_counts[key] = max(lcd_counts.get(key, 0), c)
    return lcd_counts, factors_by_key


def _eval_poly_mod(p: MultiPoly, point, prime) -> int:
    acc = 0
    for exps, c in p.terms.items():
        f = Fraction(c)
        v = f.numerator % prime
        if f.denominator != 1:
            v = v * pow(f.denominator, -1, prime) % prime
        for base, e in zip(point, exps):
            if e:
                v = v * pow(base, e, prime) % prime
        acc = (acc + v) % prime
    return acc


def _eval_side_mod(terms, point, prime):
    """Sum of term values at the point, or None if a denominator vanishes."""
    acc = 0
    for term in terms:
        den = 1
        for f in term.denominator_factors:
            v = _eval_poly_mod(f, point, prime)
            if v == 0:
                return None
            den = den * v % prime
        num = _eval_poly_mod(term.numerator, point, prime)
        acc = (acc + num * pow(den, -1, prime)) % prime
    return acc


def identity_check(
    lhs,
    rhs,
    method: str = "exact",
    seed: int = 0,
    points: int = 20,
    max_retries: int = 200,
) -> IdentityVerdict:
    """Decide whether sum(lhs) equals sum(rhs) as rational functions."""
    lhs = list(lhs)
    rhs = list(rhs)
    variables = _common_variables(lhs + rhs)

    if method == "exact":
        all_terms = lhs + [
            RationalTerm(mp_neg(t.numerator), t.denominator_factors) for t in rhs
        ]
        lcd_counts, factors_by_key = _lcd(all_terms)
        diff = _clear_denominators(all_terms, lcd_counts, factors_by_key)
        if diff is None or diff.is_zero():
            return IdentityVerdict(True, "exact", details="cleared difference is 0")
        exps = min(diff.terms)
        witness = {
            "monomial": dict(zip(variables, exps)),
            "coefficient": str(Fraction(diff.terms[exps])),
        }
        return IdentityVerdict(False, "exact", witness=witness)

    if method == "randomized":
        prime = FIELD_PRIME
        rng = random.Random(seed)
        lcd_counts, factors_by_key = _lcd(lhs + rhs)
        lcd_degree = sum(
            factors_by_key[key].total_degree() * c for key, c in lcd_counts.items()
        )
        num_degree = max(
            (t.numerator.total_degree() for t in lhs + rhs), default=0
        )
        degree = num_degree + lcd_degree
        used = 0
        retries = 0
        while used < points:
            point = tuple(rng.randrange(1, prime) for _ in variables)
            lv = _eval_side_mod(lhs, point, prime)
            rv = _eval_side_mod(rhs, point, prime)
            if lv is None or rv is None:
                retries += 1
                if retries > max_retries:
                    raise ZeroDivisionError(
                        "denominators kept vanishing at sampled points"
                    )
                continue
            if lv != rv:
                return IdentityVerdict(
                    False,
                    "randomized",
                    witness={"point_index": used, "seed": seed},
                    points_used=used + 1,
                )
            used += 1
        bound = (degree / prime) ** points if degree else 0.0
        return IdentityVerdict(
            True,
            "randomized",
            points_used=used,
            failure_bound=bound,
            details=f"total degree <= {degree}",
        )

    raise ValueError(f"unknown method {method!r}")


def three_factor_identity_sides() -> tuple[MultiPoly, MultiPoly]:
    """Both sides of the three-factor product-difference split.

    The difference (1-ta)(1-tb)(1-txy) - (1-tx)(1-ty)(1-tab) regroups into
    two addends, each carrying a factor t(x-a) or t(y-b); the regrouped form
    is what makes the two-piece addend split nonnegative.
    """
    v = ("t", "x", "y", "a", "b")

    def m(coeff: Coefficient = 1, **exps: int) -> MultiPoly:
        return mono(v, coeff, **exps)

    def b1(**exps: int) -> MultiPoly:
        return mp_sub(m(), m(**exps))

    lhs = mp_sub(
        mp_mul(b1(t=1, a=1), b1(t=1, b=1), b1(t=1, x=1, y=1)),
        mp_mul(b1(t=1, x=1), b1(t=1, y=1), b1(t=1, a=1, b=1)),
    )
    rhs = mp_add(
        mp_mul(m(t=1), mp_sub(m(x=1), m(a=1)), b1(b=1), b1(t=1, y=1)),
        mp_mul(m(t=1), mp_sub(m(y=1), m(b=1)), b1(t=1, a=1), b1(x=1)),
    )
    return lhs, rhs


def four_factor_identity_sides() -> tuple[MultiPoly, MultiPoly]:
    """Both sides of the four-factor split with half-weight groups.

    The seven-variable analogue of `three_factor_identity_sides`: the
    difference of the two four-factor products regroups into four
    half-weighted groups, one per extracted factor, the last folding the
    doubled t^2 correction into the z-line.
    """
    v = ("t", "x", "y", "z", "a", "b", "c")

    def m(coeff: Coefficient = 1, **exps: int) -> MultiPoly:
        return mono(v, coeff, **exps)

    def b1(**exps: int) -> MultiPoly:
        return mp_sub(m(), m(**exps))

    lhs = mp_sub(
        mp_mul(b1(t=1, a=1), b1(t=1, b=1), b1(t=1, c=1), b1(t=1, x=1, y=1, z=1)),
        mp_mul(b1(t=1, x=1), b1(t=1, y=1), b1(t=1, z=1), b1(t=1, a=1, b=1, c=1)),
    )
    half = Fraction(1, 2)
    g1 = mp_mul(
        m(half, t=1),
        mp_sub(m(x=1), m(a=1)),
        mp_add(
            mp_mul(b1(t=1, b=1), b1(t=1, c=1), b1(y=1, z=1)),
            mp_mul(b1(t=1, y=1), b1(t=1, z=1), b1(b=1, c=1)),
        ),
    )
    g2 = mp_mul(
        m(half, t=1),
        mp_sub(m(y=1), m(b=1)),
        mp_add(
            mp_mul(b1(t=1, c=1), b1(t=1, a=1), b1(z=1, x=1)),
            mp_mul(b1(t=1, z=1), b1(t=1, x=1), b1(c=1, a=1)),
        ),
    )
    g3 = mp_mul(
        m(half, t=1), mp_sub(m(z=1), m(c=1)), b1(t=1, x=1), b1(t=1, y=1), b1(a=1, b=1)
    )
    g4 = mp_mul(
        m(half, t=1),
        mp_sub(m(z=1), m(c=1)),
        mp_add(
            mp_mul(b1(t=1, a=1), b1(t=1, b=1), b1(x=1, y=1)),
            mp_mul(b1(t=2), mp_sub(m(x=1), m(a=1)), mp_sub(m(y=1), m(b=1))),
        ),
    )
    rhs = mp_add(mp_add(g1, g2), mp_add(g3, g4))
    return lhs, rhs
