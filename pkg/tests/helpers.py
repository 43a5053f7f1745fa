"""Shared test utilities: curves with prescribed rational points."""

from fractions import Fraction

from realforms.curve import CubicCurve, RationalPoint


def curve_through(samples):
    """Monic cubic y^2 = x^3 + c2 x^2 + c1 x + c0 through three given (x, y)
    pairs, or None when the linear system is singular or the cubic singular.
    """
    (x1, y1), (x2, y2), (x3, y3) = [(Fraction(x), Fraction(y)) for x, y in samples]
    if len({x1, x2, x3}) != 3:
        return None
    rows = [
        (x1 * x1, x1, Fraction(1), y1 * y1 - x1**3),
        (x2 * x2, x2, Fraction(1), y2 * y2 - x2**3),
        (x3 * x3, x3, Fraction(1), y3 * y3 - x3**3),
    ]

    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    A = [row[:3] for row in rows]
    b = [row[3] for row in rows]
    d = det3(A)
    if d == 0:
        return None
    cols = []
    for k in range(3):
        Ak = [list(row) for row in A]
        for i in range(3):
            Ak[i][k] = b[i]
        cols.append(det3(Ak) / d)
    c2, c1, c0 = cols
    try:
        curve = CubicCurve(c2, c1, c0)
    except Exception:
        return None
    return curve


def rational_points_pool(curve, seeds, size=12):
    """Grow a pool of distinct affine rational points from seed points by
    chord sums, for exact group-law testing."""
    from realforms.group import add

    pool = [RationalPoint(curve, x, y) for x, y in seeds]
    frontier = list(pool)
    while len(pool) < size and frontier:
        new = []
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                q = add(pool[i], pool[j])
                if q.is_infinity or not isinstance(q, RationalPoint):
                    continue
                if any(q == p for p in pool):
                    continue
                if q.x.numerator.bit_length() > 64:
                    continue
                pool.append(q)
                new.append(q)
                if len(pool) >= size:
                    return pool
        frontier = new
    return pool
