"""Sign-exact orientation and circumsphere predicates in 2 to 4 dimensions.

Each predicate is evaluated first in floating point together with a running
magnitude (a permanent-style bound on accumulated rounding error); when the
result is within the error bound of zero, it is re-evaluated in exact rational
arithmetic on the original coordinates.  Incremental Delaunay construction is
not robust under plain floating-point predicates, hence the two-stage strategy.

The determinant kernels are unrolled by hand: they sit on the hot path of
every insertion and tuple churn would dominate otherwise.
"""

from __future__ import annotations

from fractions import Fraction

# |float det| below _REL_ERR * magnitude cannot be trusted; the expansions
# here perform well under 200 roundings (~5e-14 worst case).
_REL_ERR = 1e-13


def _det2(m):
    (a, b), (c, d) = m
    p, q = a * d, b * c
    return p - q, abs(p) + abs(q)


def _det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    p0, q0 = e * i, f * h
    p1, q1 = d * i, f * g
    p2, q2 = d * h, e * g
    det = a * (p0 - q0) - b * (p1 - q1) + c * (p2 - q2)
    mag = abs(a) * (abs(p0) + abs(q0)) + abs(b) * (abs(p1) + abs(q1)) \
        + abs(c) * (abs(p2) + abs(q2))
    return det, mag


def _det4_cols(r0, r1, r2, r3, ca, cb, cc, cd):
    """det/mag of the 4x4 submatrix of rows r0..r3 restricted to 4 columns."""
    a, b, c, d = r0[ca], r0[cb], r0[cc], r0[cd]
    e, f, g, h = r1[ca], r1[cb], r1[cc], r1[cd]
    i, j, k, l = r2[ca], r2[cb], r2[cc], r2[cd]
    m, n, o, p = r3[ca], r3[cb], r3[cc], r3[cd]
    # 2x2 minors of the top and bottom row pairs (Laplace along rows 0-1)
    s0, s0m = a * f - b * e, abs(a * f) + abs(b * e)
    s1, s1m = a * g - c * e, abs(a * g) + abs(c * e)
    s2, s2m = a * h - d * e, abs(a * h) + abs(d * e)
    s3, s3m = b * g - c * f, abs(b * g) + abs(c * f)
    s4, s4m = b * h - d * f, abs(b * h) + abs(d * f)
    s5, s5m = c * h - d * g, abs(c * h) + abs(d * g)
    c5, c5m = k * p - l * o, abs(k * p) + abs(l * o)
    c4, c4m = j * p - l * n, abs(j * p) + abs(l * n)
    c3, c3m = j * o - k * n, abs(j * o) + abs(k * n)
    c2, c2m = i * p - l * m, abs(i * p) + abs(l * m)
    c1, c1m = i * o - k * m, abs(i * o) + abs(k * m)
    c0, c0m = i * n - j * m, abs(i * n) + abs(j * m)
    det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    mag = s0m * c5m + s1m * c4m + s2m * c3m + s3m * c2m + s4m * c1m + s5m * c0m
    return det, mag


def _det4(m):
    r0, r1, r2, r3 = m
    return _det4_cols(r0, r1, r2, r3, 0, 1, 2, 3)


def _det5(m):
    r0, r1, r2, r3, r4 = m
    d0, g0 = _det4_cols(r1, r2, r3, r4, 1, 2, 3, 4)
    d1, g1 = _det4_cols(r1, r2, r3, r4, 0, 2, 3, 4)
    d2, g2 = _det4_cols(r1, r2, r3, r4, 0, 1, 3, 4)
    d3, g3 = _det4_cols(r1, r2, r3, r4, 0, 1, 2, 4)
    d4, g4 = _det4_cols(r1, r2, r3, r4, 0, 1, 2, 3)
    det = r0[0] * d0 - r0[1] * d1 + r0[2] * d2 - r0[3] * d3 + r0[4] * d4
    mag = abs(r0[0]) * g0 + abs(r0[1]) * g1 + abs(r0[2]) * g2 \
        + abs(r0[3]) * g3 + abs(r0[4]) * g4
    return det, mag


_DETS = {2: _det2, 3: _det3, 4: _det4, 5: _det5}


def _float_sign(m):
    """Sign of det(m) when decidable in floating point, else None."""
    det, mag = _DETS[len(m)](m)
    if abs(det) > _REL_ERR * mag:
        return 1 if det > 0.0 else -1
    if mag == 0.0:  # exactly-zero matrix
        return 0
    return None


def _exact_sign(rows) -> int:
    """Exact det sign for a matrix of Fractions via integer Bareiss."""
    dens = [f.denominator for row in rows for f in row]
    scale = max(dens)  # float denominators are powers of two, so max == lcm
    m = [[int(f.numerator * (scale // f.denominator)) for f in row] for row in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    v = m[n - 1][n - 1]
    return sign * (1 if v > 0 else (-1 if v < 0 else 0))


def orientation_sign(points) -> int:
    """Sign of det[[p1-p0], ..., [pd-p0]] for d+1 points in d dimensions."""
    p0 = points[0]
    d = len(p0)
    rows = tuple(
        tuple(float(points[i][j]) - float(p0[j]) for j in range(d))
        for i in range(1, d + 1)
    )
    s = _float_sign(rows)
    if s is not None:
        return s
    f0 = [Fraction(float(x)) for x in p0]
    frows = [
        [Fraction(float(points[i][j])) - f0[j] for j in range(d)]
        for i in range(1, d + 1)
    ]
    return _exact_sign(frows)


# Relates the lifted determinant's sign to "inside" for each dimension; the
# alternation comes from the row-ordering of the lifted matrix.
_INSPHERE_PARITY = {2: 1, 3: -1, 4: 1}


def insphere_sign(simplex, query, orient: int | None = None) -> int:
    """+1 if query is strictly inside the circumsphere of the simplex,
    -1 if strictly outside, 0 if on it.

    ``simplex`` is a sequence of d+1 points in d dimensions with nonzero
    orientation; pass a cached ``orient`` to skip recomputing it.
    """
    d = len(simplex) - 1
    if orient is None:
        orient = orientation_sign(simplex)
    if orient == 0:
        raise ValueError("degenerate simplex passed to insphere test")
    rows = []
    for p in simplex:
        diff = tuple(float(p[j]) - float(query[j]) for j in range(d))
        rows.append(diff + (sum(x * x for x in diff),))
    s = _float_sign(tuple(rows))
    if s is None:
        fq = [Fraction(float(x)) for x in query]
        frows = []
        for p in simplex:
            diff = [Fraction(float(p[j])) - fq[j] for j in range(d)]
            frows.append(diff + [sum(x * x for x in diff)])
        s = _exact_sign(frows)
    return s * orient * _INSPHERE_PARITY[d]
