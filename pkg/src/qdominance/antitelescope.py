"""Telescoping decomposition of 1/P(L) - 1/Q(L) into per-index addends.

The difference of two reciprocal products telescopes as

    1/P(L) - 1/Q(L) = sum over i of
        (Q(i)/Q(i-1) - P(i)/P(i-1)) / (P(i) * Q(L)/Q(i-1))

where P(i) and Q(i) are the products truncated at i factor layers.  When
every addend is coefficientwise nonnegative the dominance is certified
term by term; where a bare addend goes negative, the splittings below
(V/W for the three-base pairs, G1..G4 for the four-base pairs) refine it
into pieces that stay nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .series import (
    Coefficient,
    ProductSpec,
    QSeries,
    first_negative,
    multiply_binomial,
    divide_binomial,
    poly_from_exponents,
    product_spec,
    series_add,
    series_scale,
    series_sub,
)

HALF = Fraction(1, 2)

SPLIT_MODES = ("none", "thm1", "thm2")


@dataclass(frozen=True)
class ProductFamily:
    """Products P(i) built from the same base exponents, one layer per index.

    spec(i) is the product of (1 - q^(b + j*modulus)) over bases b and layers
    j < i; spec(0) is the empty product.  ``params`` optionally records the
    named parameters the bases were derived from, so splits can recover them.
    """

    bases: tuple[int, ...]
    modulus: int
    params: Mapping[str, int] | None = None

    def __post_init__(self) -> None:
        if not self.bases or any(not isinstance(b, int) or b < 1 for b in self.bases):
            raise ValueError(f"bases must be positive integers, got {self.bases}")
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")

    def spec(self, i: int) -> ProductSpec:
        if i < 0:
            raise ValueError(f"index must be >= 0, got {i}")
        if i == 0:
            return ProductSpec(())
        return product_spec(self.bases, self.modulus, i)

    def step_exponents(self, i: int) -> list[int]:
        """Exponents of the factors spec(i) adds on top of spec(i-1)."""
        if i < 1:
            raise ValueError(f"index must be >= 1, got {i}")
        return [b + (i - 1) * self.modulus for b in self.bases]

    def layer_exponents(self, lo: int, hi: int) -> list[int]:
        """Exponents of spec(hi)/spec(lo), i.e. layers lo .. hi-1."""
        return [b + j * self.modulus for j in range(lo, hi) for b in self.bases]


@dataclass(frozen=True)
class AddendDecomposition:
    """One telescoping addend together with a named split that sums to it."""

    index: int
    addend: QSeries
    groups: tuple[tuple[str, QSeries], ...]
    t_exponent: int


def family(bases, modulus: int, **params: int) -> ProductFamily:
    return ProductFamily(tuple(bases), modulus, params or None)


def thm1_families(
    m: int, x: int, y: int, r: int, R: int
) -> tuple[ProductFamily, ProductFamily]:
    """The dominant/subordinate family pair for a sextuple's product shapes."""
    record = {"x": x, "y": y, "r": r, "R": R}
    p = ProductFamily((x, y, r * x + R * y), m, record)
    q = ProductFamily((r * x, R * y, x + y), m, record)
    return p, q


def thm2_families(
    m: int, x: int, y: int, z: int, r: int, R: int, rho: int
) -> tuple[ProductFamily, ProductFamily]:
    """The dominant/subordinate family pair for an octuple's product shapes."""
    record = {"x": x, "y": y, "z": z, "r": r, "R": R, "rho": rho}
    p = ProductFamily((x, y, z, r * x + R * y + rho * z), m, record)
    q = ProductFamily((r * x, R * y, rho * z, x + y + z), m, record)
    return p, q


def _check_index(i: int, L: int) -> None:
    if not isinstance(i, int) or not isinstance(L, int) or not 1 <= i <= L:
        raise ValueError(f"need 1 <= i <= L, got i={i}, L={L}")


def denominator_exponents(
    P: ProductFamily, Q: ProductFamily, i: int, L: int
) -> list[int]:
    """Factor exponents of P(i) * Q(L)/Q(i-1)."""
    return P.layer_exponents(0, i) + Q.layer_exponents(i - 1, L)


def _divide_all(series: QSeries, exponents) -> QSeries:
    for e in exponents:
        series = divide_binomial(series, e)
    return series


def _product_term(order: int, lead: int, binomial_exponents) -> QSeries:
    """q^lead times the product of (1 - q^e) over the given exponents."""
    out = QSeries.monomial(lead, order)
    for e in binomial_exponents:
        out = multiply_binomial(out, e)
    return out


def addend(P: ProductFamily, Q: ProductFamily, i: int, L: int, order: int) -> QSeries:
    """The i-th telescoping addend of 1/P(L) - 1/Q(L), truncated."""
    _check_index(i, L)
    numerator = series_sub(
        poly_from_exponents(Q.step_exponents(i), order),
        poly_from_exponents(P.step_exponents(i), order),
    )
    return _divide_all(numerator, denominator_exponents(P, Q, i, L))


def _validate_params(params, count: int, label: str) -> tuple[int, ...]:
    values = tuple(params)
    if len(values) != count or any(not isinstance(v, int) or v < 1 for v in values):
        raise ValueError(f"{label} needs {count} positive integers, got {params!r}")
    return values


def thm1_split(params, i: int, order: int) -> AddendDecomposition:
    """Split a three-base addend into the two nonnegative pieces V and W."""
    L, m, x, y, r, R = _validate_params(params, 6, "sextuple")
    _check_index(i, L)
    P, Q = thm1_families(m, x, y, r, R)
    denominator = denominator_exponents(P, Q, i, L)
    t = (i - 1) * m
    v = _divide_all(
        _product_term(order, t + y, [(R - 1) * y, x, t + r * x]), denominator
    )
    w = _divide_all(
        _product_term(order, t + x, [(r - 1) * x, R * y, t + y]), denominator
    )
    base = addend(P, Q, i, L, order)
    return AddendDecomposition(i, base, (("V", v), ("W", w)), t)


def thm2_split(params, i: int, order: int) -> AddendDecomposition:
    """Split a four-base addend into nonnegative half-weighted groups.

    The first index gets three groups; later indices get four, the last of
    which is the piece whose positivity rests on the two-variable kernel in
    the lemma module.
    """
    L, m, x, y, z, r, R, rho = _validate_params(params, 8, "octuple")
    _check_index(i, L)
    P, Q = thm2_families(m, x, y, z, r, R, rho)
    denominator = denominator_exponents(P, Q, i, L)
    t = (i - 1) * m
    a, b, c = r * x, R * y, rho * z

    def piece(lead, exps):
        return _product_term(order, lead, exps)

    if i == 1:
        doubled = {
            "G1": series_add(
                piece(x, [(r - 1) * x, b, c, y + z]),
                piece(x, [(r - 1) * x, y, z, b + c]),
            ),
            "G2": series_add(
                piece(y, [(R - 1) * y, c, a, z + x]),
                piece(y, [(R - 1) * y, z, x, c + a]),
            ),
            "G3": series_add(
                piece(z, [(rho - 1) * z, x, y, a + b]),
                piece(z, [(rho - 1) * z, a, b, x + y]),
            ),
        }
    else:
        doubled = {
            "G1": series_add(
                piece(t + x, [(r - 1) * x, t + b, t + c, y + z]),
                piece(t + x, [(r - 1) * x, t + y, t + z, b + c]),
            ),
            "G2": series_add(
                piece(t + y, [(R - 1) * y, t + c, t + a, z + x]),
                piece(t + y, [(R - 1) * y, t + z, t + x, c + a]),
            ),
            "G3": piece(t + z, [(rho - 1) * z, t + x, t + y, a + b]),
            "G4": series_add(
                piece(t + z, [(rho - 1) * z, t + a, t + b, x + y]),
                piece(t + z + x + y, [(rho - 1) * z, 2 * t, (r - 1) * x, (R - 1) * y]),
            ),
        }
    groups = tuple(
        (name, series_scale(_divide_all(numerator, denominator), HALF))
        for name, numerator in doubled.items()
    )
    base = addend(P, Q, i, L, order)
    return AddendDecomposition(i, base, groups, t)


def _split_params(P: ProductFamily, Q: ProductFamily, L: int, split: str):
    names = ("x", "y", "r", "R") if split == "thm1" else ("x", "y", "z", "r", "R", "rho")
    record = P.params or {}
    if any(n not in record for n in names):
        raise ValueError(f"{split} split needs families built with parameters {names}")
    values = tuple(record[n] for n in names)
    maker = thm1_families if split == "thm1" else thm2_families
    expected = maker(P.modulus, *values)
    if (P.bases, Q.bases) != (expected[0].bases, expected[1].bases) or (
        P.modulus != Q.modulus
    ):
        raise ValueError(f"families do not match the {split} product shapes")
    return (L, P.modulus, *values)


def positivity_scan(
    P: ProductFamily, Q: ProductFamily, L: int, order: int, split: str = "none"
) -> dict[str, Any]:
    """Per-index first-negative report for addends and their split groups."""
    if split not in SPLIT_MODES:
        raise ValueError(f"split must be one of {SPLIT_MODES}, got {split!r}")
    if not isinstance(L, int) or L < 1:
        raise ValueError(f"L must be a positive integer, got {L!r}")
    params = None if split == "none" else _split_params(P, Q, L, split)
    rows = []
    all_nonnegative = True
    for i in range(1, L + 1):
        if split == "none":
            base = addend(P, Q, i, L, order)
            groups: tuple[tuple[str, QSeries], ...] = ()
        else:
            splitter = thm1_split if split == "thm1" else thm2_split
            decomposition = splitter(params, i, order)
            base = decomposition.addend
            groups = decomposition.groups
        row = {
            "i": i,
            "addend": first_negative(base),
            "groups": {name: first_negative(g) for name, g in groups},
        }
        if row["addend"] is not None or any(
            v is not None for v in row["groups"].values()
        ):
            all_nonnegative = False
        rows.append(row)
    return {
        "L": L,
        "order": order,
        "split": split,
        "rows": rows,
        "all_nonnegative": all_nonnegative,
    }
