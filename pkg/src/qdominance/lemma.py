"""Nonnegativity of the two-variable kernel behind the four-base split.

The kernel is

    f(x, y, t) = ((1-xy)(1-t x^r)(1-t y^R) + (1-t^2)(x-x^r)(y-y^R))
                 / ((1-t x^r)(1-t y^R)(1-x)(1-y)(1-tx)(1-ty)).

This module expands f exactly on a bounded (t, x, y) lattice, evaluates the
closed forms for its t-slices, and checks the argument that confines any
negative per-term coefficient to a window that the x/y swap symmetry then
rules out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .polyring import (
    IdentityVerdict,
    MultiPoly,
    RationalTerm,
    TriSeries,
    expand_rational,
    identity_check,
    mono,
    mp_add,
    mp_mul,
    mp_sub,
)
from .series import Coefficient

XY = ("x", "y")
TXY = ("t", "x", "y")

#: Monomials of one closed-form addend: (coefficient, x exponent, y exponent).
Monomials = list[tuple[int, int, int]]


@dataclass(frozen=True)
class LemmaParams:
    r: int
    R: int
    bounds: tuple[int, int, int]

    def __post_init__(self) -> None:
        if self.r < 1 or self.R < 1:
            raise ValueError(f"need r, R >= 1, got r={self.r}, R={self.R}")
        if len(self.bounds) != 3 or any(
            not isinstance(b, int) or b < 0 for b in self.bounds
        ):
            raise ValueError(f"bounds must be three nonnegative integers: {self.bounds}")


@dataclass(frozen=True)
class SliceSeries:
    """One t-slice: coeffs[j][k] is the coefficient of x^j y^k."""

    n: int
    coeffs: tuple[tuple[Coefficient, ...], ...]

    def cell(self, j: int, k: int) -> Coefficient:
        return self.coeffs[j][k]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.coeffs) - 1, len(self.coeffs[0]) - 1)

    def min_coefficient(self) -> Coefficient:
        return min(min(row) for row in self.coeffs)


def delta(n: int) -> int:
    """1 for odd n, 0 for even n."""
    return n % 2


def _xy_mono(coeff: int = 1, **exps: int) -> MultiPoly:
    return mono(XY, coeff, **exps)


def _txy_mono(coeff: int = 1, **exps: int) -> MultiPoly:
    return mono(TXY, coeff, **exps)


def _txy_binomial(**exps: int) -> MultiPoly:
    return mp_sub(_txy_mono(), _txy_mono(**exps))


def kernel_term(r: int, R: int) -> RationalTerm:
    """f as a single rational term over the (t, x, y) variables."""
    numerator = mp_add(
        mp_mul(_txy_binomial(x=1, y=1), _txy_binomial(t=1, x=r), _txy_binomial(t=1, y=R)),
        mp_mul(
            _txy_binomial(t=2),
            mp_sub(_txy_mono(x=1), _txy_mono(x=r)),
            mp_sub(_txy_mono(y=1), _txy_mono(y=R)),
        ),
    )
    factors = (
        _txy_binomial(t=1, x=r),
        _txy_binomial(t=1, y=R),
        _txy_binomial(x=1),
        _txy_binomial(y=1),
        _txy_binomial(t=1, x=1),
        _txy_binomial(t=1, y=1),
    )
    return RationalTerm(numerator, factors)


def f_expand(params: LemmaParams) -> TriSeries:
    """Exact lattice expansion of f within the given bounds."""
    return expand_rational(kernel_term(params.r, params.R), params.bounds)


def eqtwo_symbolic(
    n: int, r: int, R: int
) -> list[tuple[str, Monomials, tuple[int, int]]]:
    """The nine t-slice addends: name, numerator monomials, (1-x)/(1-y) powers.

    The two finite sums are materialized for the concrete n, so each entry is
    a polynomial numerator over a denominator (1-x)^px (1-y)^py.

    The n = 0 slice is a boundary case: the generic formula overshoots the
    true slice by (1+x)(1-y^R)/(1-y), so T4 is dropped and T8 starts at y^R
    instead of y^0 there; with that adjustment the terms sum to the slice for
    every n, each term still expanding with no negative coefficient at n = 0.
    """
    if n < 0:
        raise ValueError(f"slice index must be nonnegative, got {n}")
    if n == 0:
        return [
            ("T1", [(1, 0, 0), (-1, 0, 1)], (1, 1)),
            ("T2", [(1, 0, 1), (-1, r, 1), (-1, 0, R), (1, r, R)], (1, 1)),
            ("T3", [], (1, 1)),
            ("T4", [], (0, 1)),
            ("T5", [], (1, 1)),
            ("T6", [], (0, 1)),
            ("T7", [], (0, 1)),
            ("T8", [(1, 0, R)], (0, 1)),
            ("T9", [], (0, 1)),
        ]
    d = delta(n)
    terms: list[tuple[str, Monomials, tuple[int, int]]] = []
    terms.append(("T1", [(1, n, 0), (-1, n, n + 1)], (1, 1)))
    terms.append(
        (
            "T2",
            [
                (1, n, n + 1),
                (-1, r, n + 1),
                (-1, n, (n + 1) * R),
                (1, r, (n + 1) * R),
            ],
            (1, 1),
        )
    )
    terms.append(
        (
            "T3",
            [(1, 2, n), (-1, 2 * r, n), (-1, 2, n * R), (1, 2 * r, n * R)],
            (1, 1),
        )
    )
    terms.append(("T4", [(1, 1, n), (-1, 1, (n + 1) * R)], (0, 1)))
    t5: Monomials = []
    for j in range(1, n):
        a = (n - j) * r
        t5 += [(1, a, j), (-1, a, j * R), (-1, a + 2 * r, j), (1, a + 2 * r, j * R)]
    terms.append(("T5", t5, (1, 1)))
    t6: Monomials = []
    for j in range(0, (n - 2 - d) // 2 + 1):
        t6 += [(1, n - 2 * j - 1, R * (2 * j + 1)), (1, n - 2 * j, R * (2 * j + 1))]
    terms.append(("T6", t6, (0, 1)))
    t7: Monomials = []
    for j in range(1, (n - 2 + d) // 2 + 1):
        for dx in (0, 1):
            t7 += [(1, n - 2 * j + dx, 2 * j * R), (-1, n - 2 * j + dx, (n + 1) * R)]
    terms.append(("T7", t7, (0, 1)))
    terms.append(("T8", [(1, 0, n)], (0, 1)))
    terms.append(("T9", [(d, 1, (n + 1) * R)], (0, 1)))
    return terms


def _grid(nx: int, ny: int) -> list[list[int]]:
    return [[0] * (ny + 1) for _ in range(nx + 1)]


def _evaluate(monomials: Monomials, powers: tuple[int, int], nx: int, ny: int):
    """Expand a monomial list over (1-x)^px (1-y)^py as a dense grid."""
    grid = _grid(nx, ny)
    for c, a, b in monomials:
        if c and a <= nx and b <= ny:
            grid[a][b] += c
    px, py = powers
    for _ in range(px):
        for j in range(1, nx + 1):
            row, prev = grid[j], grid[j - 1]
            for k in range(ny + 1):
                row[k] += prev[k]
    for _ in range(py):
        for row in grid:
            for k in range(1, ny + 1):
                row[k] += row[k - 1]
    return grid


def eqtwo_term_grids(n: int, params: LemmaParams):
    """Each closed-form addend of the n-th slice as a dense (j,k) grid."""
    _, nx, ny = params.bounds
    return [
        (name, _evaluate(monomials, powers, nx, ny))
        for name, monomials, powers in eqtwo_symbolic(n, params.r, params.R)
    ]


def slice_eqtwo(n: int, params: LemmaParams) -> SliceSeries:
    """The n-th t-slice of f via the displayed closed form."""
    _, nx, ny = params.bounds
    total = _grid(nx, ny)
    for _, grid in eqtwo_term_grids(n, params):
        for j in range(nx + 1):
            row, add = total[j], grid[j]
            for k in range(ny + 1):
                row[k] += add[k]
    return SliceSeries(n, tuple(tuple(row) for row in total))


def eqone_terms(n: int, r: int, R: int) -> list[RationalTerm]:
    """The five-addend closed form of the n-th slice, as rational terms."""
    one = _xy_mono()

    def m(coeff=1, **exps):
        return _xy_mono(coeff, **exps)

    x_minus_y = mp_sub(m(x=1), m(y=1))
    xr_minus_yR = mp_sub(m(x=r), m(y=R))
    xr_minus_y = mp_sub(m(x=r), m(y=1))
    yR_minus_x = mp_sub(m(y=R), m(x=1))
    one_minus_x = mp_sub(one, m(x=1))
    one_minus_y = mp_sub(one, m(y=1))
    x_minus_xr = mp_sub(m(x=1), m(x=r))
    y_minus_yR = mp_sub(m(y=1), m(y=R))
    base = (one_minus_x, one_minus_y, x_minus_y)

    a1 = RationalTerm(
        mp_mul(mp_sub(one, m(x=1, y=1)), mp_sub(m(x=n + 1), m(y=n + 1))), base
    )
    a2 = RationalTerm(
        mp_mul(
            mp_add(
                mp_mul(m(-1, x=n + r), mp_sub(one, m(x=2))),
                mp_mul(m(x=n * r + 1), mp_sub(one, m(x=2 * r))),
            ),
            y_minus_yR,
        ),
        (*base, xr_minus_yR),
    )
    a3 = RationalTerm(
        mp_mul(
            mp_add(
                mp_mul(m(-1, y=n + R), mp_sub(one, m(y=2))),
                mp_mul(m(y=n * R + 1), mp_sub(one, m(y=2 * R))),
            ),
            x_minus_xr,
        ),
        (*base, xr_minus_yR),
    )
    # the leading monomials y x^r and x y^R are folded into the brackets so
    # every exponent stays nonnegative down to n = 0
    a4 = RationalTerm(
        mp_mul(
            mp_sub(
                mp_mul(m(y=1), mp_sub(m(x=n * r), m(x=(n + 2) * r))),
                mp_mul(m(x=r), mp_sub(m(y=n), m(y=n + 2))),
            ),
            x_minus_xr,
            y_minus_yR,
        ),
        (*base, xr_minus_yR, xr_minus_y),
    )
    a5 = RationalTerm(
        mp_mul(
            mp_sub(
                mp_mul(m(x=1), mp_sub(m(y=n * R), m(y=(n + 2) * R))),
                mp_mul(m(y=R), mp_sub(m(x=n), m(x=n + 2))),
            ),
            x_minus_xr,
            y_minus_yR,
        ),
        (*base, xr_minus_yR, yR_minus_x),
    )
    return [a1, a2, a3, a4, a5]


def eqthree_terms(n: int, r: int, R: int) -> list[RationalTerm]:
    """The sum-free nine-addend closed form, as rational terms."""
    one = _xy_mono()

    def m(coeff=1, **exps):
        return _xy_mono(coeff, **exps)

    one_minus_x = mp_sub(one, m(x=1))
    one_minus_y = mp_sub(one, m(y=1))
    one_plus_x = mp_add(one, m(x=1))
    xr_minus_y = mp_sub(m(x=r), m(y=1))
    xr_minus_yR = mp_sub(m(x=r), m(y=R))
    x_minus_yR = mp_sub(m(x=1), m(y=R))

    h1 = RationalTerm(
        mp_mul(m(x=n), mp_sub(one, m(y=n + 1))), (one_minus_y, one_minus_x)
    )
    h2 = RationalTerm(
        mp_mul(mp_sub(m(y=n + 1), m(y=(n + 1) * R)), mp_sub(m(x=n), m(x=r))),
        (one_minus_y, one_minus_x),
    )
    h3 = RationalTerm(
        mp_mul(mp_sub(m(y=n), m(y=n * R)), mp_sub(m(x=2), m(x=2 * r))),
        (one_minus_y, one_minus_x),
    )
    h4 = RationalTerm(
        mp_mul(m(x=1), mp_sub(m(y=n), m(y=(n + 1) * R))), (one_minus_y,)
    )
    h5 = RationalTerm(m(y=n), (one_minus_y,))
    h6 = RationalTerm(
        mp_mul(one_plus_x, mp_sub(m(x=n, y=R), m(x=1, y=n * R))),
        (one_minus_y, x_minus_yR),
    )
    h7 = RationalTerm(
        mp_mul(
            mp_sub(m(x=n * r, y=1), m(x=r, y=n)), mp_sub(one, m(x=2 * r))
        ),
        (one_minus_y, one_minus_x, xr_minus_y),
    )
    h8 = RationalTerm(
        mp_mul(m(-1, y=R * (n + 1)), one_plus_x, mp_sub(m(x=2), m(x=n))),
        (one_minus_y, mp_sub(one, m(x=2))),
    )
    h9 = RationalTerm(
        mp_mul(
            mp_sub(m(x=r, y=n * R), m(x=n * r, y=R)), mp_sub(one, m(x=2 * r))
        ),
        (one_minus_y, one_minus_x, xr_minus_yR),
    )
    return [h1, h2, h3, h4, h5, h6, h7, h8, h9]


def eqtwo_terms_rational(n: int, r: int, R: int) -> list[RationalTerm]:
    """The slice closed form with its finite sums materialized, term by term."""
    out = []
    for _, monomials, (px, py) in eqtwo_symbolic(n, r, R):
        accumulated: dict[tuple[int, int], int] = {}
        for c, a, b in monomials:
            accumulated[(a, b)] = accumulated.get((a, b), 0) + c
        numerator = MultiPoly(XY, accumulated)
        factors = (mp_sub(_xy_mono(), _xy_mono(x=1)),) * px
        factors += (mp_sub(_xy_mono(), _xy_mono(y=1)),) * py
        out.append(RationalTerm(numerator, factors))
    return out


@dataclass(frozen=True)
class LemmaVerdict:
    """Joint result of the two closed-form equivalences at one (n, r, R)."""

    one_vs_three: IdentityVerdict
    three_vs_two: IdentityVerdict

    @property
    def equal(self) -> bool:
        return self.one_vs_three.equal and self.three_vs_two.equal


def check_eqone_eqthree(
    n: int, r: int, R: int, method: str = "exact", seed: int = 0
) -> LemmaVerdict:
    """Verify the three closed forms agree as rational functions."""
    if n < 0 or r < 1 or R < 1:
        raise ValueError(f"need n >= 0 and positive r, R, got {(n, r, R)}")
    one = eqone_terms(n, r, R)
    three = eqthree_terms(n, r, R)
    two = eqtwo_terms_rational(n, r, R)
    return LemmaVerdict(
        identity_check(one, three, method=method, seed=seed),
        identity_check(three, two, method=method, seed=seed),
    )


def t2_closed_form(n: int, r: int, R: int, nx: int, ny: int):
    """-(y^(n+1)+...+y^((n+1)R-1)) (x^r+...+x^(n-1)) as a grid; needs r < n."""
    if r >= n:
        raise ValueError(f"closed form applies only for r < n, got r={r}, n={n}")
    grid = _grid(nx, ny)
    for j in range(r, n):
        if j > nx:
            break
        for k in range(n + 1, (n + 1) * R):
            if k > ny:
                break
            grid[j][k] = -1
    return grid


def _in_window(n: int, j: int, k: int, r: int, R: int) -> bool:
    return r <= j < n < k < (n + 1) * R


def negativity_window(params: LemmaParams) -> dict[str, Any]:
    """Confine negative per-term coefficients to the displayed window.

    Checks, for every slice n within bounds: (a) the slice sum without T2 is
    nonnegative; (b) T2 matches its product closed form when r < n; (c) any
    negative per-term cell lies in the window r <= j < n < k < (n+1)R; (d)
    the total slice is nonnegative.
    """
    nt, nx, ny = params.bounds
    r, R = params.r, params.R
    sum_without_t2_ok = True
    t2_ok = True
    window_ok = True
    total_ok = True
    negative_cells = 0
    min_total: Coefficient = 0
    for n in range(nt + 1):
        grids = dict(eqtwo_term_grids(n, params))
        total = _grid(nx, ny)
        without_t2 = _grid(nx, ny)
        for name, grid in grids.items():
            for j in range(nx + 1):
                for k in range(ny + 1):
                    c = grid[j][k]
                    if not c:
                        continue
                    total[j][k] += c
                    if name != "T2":
                        without_t2[j][k] += c
                    if c < 0 and not _in_window(n, j, k, r, R):
                        window_ok = False
                    if c < 0:
                        negative_cells += 1
        if r < n:
            if grids["T2"] != t2_closed_form(n, r, R, nx, ny):
                t2_ok = False
        if any(c < 0 for row in without_t2 for c in row):
            sum_without_t2_ok = False
        slice_min = min(min(row) for row in total)
        min_total = min(min_total, slice_min)
        if slice_min < 0:
            total_ok = False
    return {
        "r": r,
        "R": R,
        "bounds": list(params.bounds),
        "checks": {
            "sum_without_t2_nonnegative": sum_without_t2_ok,
            "t2_matches_closed_form": t2_ok,
            "window_contained": window_ok,
            "total_nonnegative": total_ok,
        },
        "min_total_coefficient": min_total,
        "negative_term_cells": negative_cells,
        "ok": sum_without_t2_ok and t2_ok and window_ok and total_ok,
    }


def symmetry_check(r: int, R: int, bounds: tuple[int, int, int]) -> dict[str, Any]:
    """c_(r,R)(n,j,k) == c_(R,r)(n,k,j) over square (j,k) bounds."""
    nt, nx, ny = bounds
    if nx != ny:
        raise ValueError(f"symmetry needs square x/y bounds, got {bounds}")
    lhs = f_expand(LemmaParams(r, R, bounds))
    rhs = f_expand(LemmaParams(R, r, bounds))
    for n in range(nt + 1):
        for j in range(nx + 1):
            for k in range(ny + 1):
                a = lhs.cell(n, j, k)
                b = rhs.cell(n, k, j)
                if a != b:
                    return {
                        "equal": False,
                        "first_mismatch": {"n": n, "j": j, "k": k, "lhs": a, "rhs": b},
                    }
    return {"equal": True, "first_mismatch": None}
