"""Graham's scan for planar extreme points."""

from __future__ import annotations

from functools import cmp_to_key
from math import hypot


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _is_zero_cross(c, o, a, b, eps):
    # relative test; exact scalars always have eps == 0
    if not eps:
        return c == 0
    scale = hypot(a[0] - o[0], a[1] - o[1]) * hypot(b[0] - o[0], b[1] - o[1])
    return abs(c) <= eps * scale


def graham_order(points, eps=0.0):
    """Indices of the hull vertices of ``points`` in counter-clockwise order,
    starting from the lexicographically smallest vertex.

    ``points`` must be duplicate-free.  Collinear points on an edge are
    dropped.  ``eps`` is a relative tolerance on cross products (use 0 for
    exact scalars).
    """
    n = len(points)
    if n == 0:
        raise ValueError("empty point set")
    if n == 1:
        return [0]
    pivot = min(range(n), key=lambda i: (points[i][1], points[i][0]))
    o = points[pivot]

    def dist2(i):
        p = points[i]
        return (p[0] - o[0]) ** 2 + (p[1] - o[1]) ** 2

    def compare(i, j):
        a, b = points[i], points[j]
        c = cross(o, a, b)
        if _is_zero_cross(c, o, a, b, eps):
            di, dj = dist2(i), dist2(j)
            return (di > dj) - (di < dj)
        return -1 if c > 0 else 1

    rest = sorted((i for i in range(n) if i != pivot), key=cmp_to_key(compare))
    stack = [pivot]
    for i in rest:
        p = points[i]
        while len(stack) >= 2:
            c = cross(points[stack[-2]], points[stack[-1]], p)
            if c > 0 and not _is_zero_cross(c, points[stack[-2]], points[stack[-1]], p, eps):
                break
            stack.pop()
        stack.append(i)
    if len(stack) == 2 and points[stack[0]] == points[stack[1]]:
        stack.pop()
    start = min(range(len(stack)), key=lambda k: tuple(points[stack[k]]))
    return stack[start:] + stack[:start]


def extreme_points_2d(points, eps=None):
    """Vertices of the convex hull of planar ``points``.

    Duplicates are removed; the result runs counter-clockwise from the
    lexicographically smallest vertex.  Float inputs use a relative
    cross-product tolerance (default 1e-9); exact inputs use none.
    """
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if not pts:
        raise ValueError("empty point set")
    if any(len(p) != 2 for p in pts):
        raise ValueError("extreme_points_2d needs two-dimensional points")
    if eps is None:
        eps = 1e-9 if any(isinstance(v, float) for p in pts for v in p) else 0
    return [pts[i] for i in graham_order(pts, eps)]
