"""Continuous piecewise-linear functions on ``[start, +inf)``.

A function is a list of segments; segment ``q`` covers
``[xs[q], xs[q+1]]`` (the last one is unbounded) and has value
``cs[q] + slopes[q] * (t - xs[q])``. Below ``start`` the function is
``+inf``, which is how infeasible timings are represented.
"""
from __future__ import annotations

import math
from typing import NamedTuple

INF = math.inf


class Segment(NamedTuple):
    b1: int
    b2: float
    c: int
    alpha: int

    def at(self, t):
        return self.c + self.alpha * (t - self.b1)


class PiecewiseFn:
    __slots__ = ("xs", "cs", "slopes", "cursor")

    def __init__(self, xs, cs, slopes):
        self.xs = list(xs)
        self.cs = list(cs)
        self.slopes = list(slopes)
        self.cursor = 0

    @classmethod
    def from_segments(cls, segments) -> "PiecewiseFn":
        segs = list(segments)
        return cls([s[0] for s in segs], [s[2] if len(s) == 4 else s[1] for s in segs],
                   [s[-1] for s in segs])

    @classmethod
    def constant(cls, value=0, start=0) -> "PiecewiseFn":
        return cls([start], [value], [0])

    @classmethod
    def vee(cls, kink, w_left, w_right, start=0) -> "PiecewiseFn":
        """``w_left * (kink - t)`` left of ``kink``, ``w_right * (t - kink)`` right of it."""
        if kink > start:
            return cls([start, kink], [w_left * (kink - start), 0], [-w_left, w_right])
        return cls([start], [w_right * (start - kink)], [w_right])

    # -- inspection -------------------------------------------------------

    @property
    def start(self):
        return self.xs[0]

    def __len__(self):
        return len(self.xs)

    @property
    def segments(self) -> list:
        ends = self.xs[1:] + [INF]
        return [Segment(x, e, c, a) for x, e, c, a in zip(self.xs, ends, self.cs, self.slopes)]

    def __eq__(self, other):
        if not isinstance(other, PiecewiseFn):
            return NotImplemented
        return (self.xs, self.cs, self.slopes) == (other.xs, other.cs, other.slopes)

    def __repr__(self):
        parts = ", ".join(f"[{s.b1},{s.b2}]: {s.c}{s.alpha:+}(t-{s.b1})" for s in self.segments)
        return f"PiecewiseFn({parts})"

    def __call__(self, t):
        """Value at ``t``; ``+inf`` below the domain.

        The search resumes from the last segment read, so a nondecreasing
        sequence of queries walks each segment once.
        """
        xs = self.xs
        if t < xs[0]:
            return INF
        q = self.cursor
        last = len(xs) - 1
        while q < last and xs[q + 1] <= t:
            q += 1
        while xs[q] > t:
            q -= 1
        self.cursor = q
        return self.cs[q] + self.slopes[q] * (t - xs[q])

    def slope_at(self, t) -> int:
        """Right derivative at ``t`` (``t`` within the domain)."""
        q = self._index(t)
        return self.slopes[q]

    def _index(self, t) -> int:
        xs = self.xs
        lo, hi = 0, len(xs) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if xs[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_continuous(self) -> bool:
        for q in range(len(self.xs) - 1):
            end = self.cs[q] + self.slopes[q] * (self.xs[q + 1] - self.xs[q])
            if end != self.cs[q + 1]:
                return False
        return True

    def min_value(self):
        """Minimum over the domain (``-inf`` if the last slope is negative)."""
        if self.slopes[-1] < 0:
            return -INF
        return min(self.cs)

    def first_argmin(self):
        """Earliest minimiser of a convex function."""
        for x, a in zip(self.xs, self.slopes):
            if a >= 0:
                return x
        return INF

    # -- algebra ----------------------------------------------------------

    def shifted(self, delta) -> "PiecewiseFn":
        """``t -> f(t + delta)``; the domain moves to ``start - delta``."""
        return PiecewiseFn([x - delta for x in self.xs], self.cs, self.slopes)

    def restricted(self, lo) -> "PiecewiseFn":
        """Restrict the domain to ``[max(lo, start), +inf)``."""
        if lo <= self.xs[0]:
            return self
        q = self._index(lo)
        xs = [lo] + self.xs[q + 1:]
        cs = [self.cs[q] + self.slopes[q] * (lo - self.xs[q])] + self.cs[q + 1:]
        return PiecewiseFn(xs, cs, self.slopes[q:])

    def __add__(self, other: "PiecewiseFn") -> "PiecewiseFn":
        lo = max(self.xs[0], other.xs[0])
        a = self.restricted(lo)
        b = other.restricted(lo)
        ax, ac, aa = a.xs, a.cs, a.slopes
        bx, bc, ba = b.xs, b.cs, b.slopes
        na, nb = len(ax), len(bx)
        p = q = 0
        xs, cs, sl = [], [], []
        while True:
            x = ax[p] if ax[p] >= bx[q] else bx[q]
            va = ac[p] + aa[p] * (x - ax[p])
            vb = bc[q] + ba[q] * (x - bx[q])
            s = aa[p] + ba[q]
            if sl and sl[-1] == s:
                pass
            else:
                xs.append(x)
                cs.append(va + vb)
                sl.append(s)
            na_next = ax[p + 1] if p + 1 < na else INF
            nb_next = bx[q + 1] if q + 1 < nb else INF
            if na_next == INF and nb_next == INF:
                break
            if na_next <= nb_next:
                p += 1
            if nb_next <= na_next:
                q += 1
        return PiecewiseFn(xs, cs, sl)

    def plus_linear(self, value, slope) -> "PiecewiseFn":
        return PiecewiseFn(self.xs, [c + value + slope * (x - self.xs[0]) for x, c in zip(self.xs, self.cs)],
                           [a + slope for a in self.slopes])

    def prefix_min(self) -> "PiecewiseFn":
        """``t -> min_{start <= u <= t} f(u)`` for convex ``f``."""
        for q, a in enumerate(self.slopes):
            if a >= 0:
                return PiecewiseFn(self.xs[:q + 1], self.cs[:q + 1], self.slopes[:q] + [0])
        return PiecewiseFn(self.xs, self.cs, self.slopes)

    def suffix_min(self, floor=0) -> "PiecewiseFn":
        """``t -> min_{u >= t} f(u)`` on ``[floor, +inf)`` for convex ``f``.

        Below the earliest minimiser the function is flat at the minimum.
        """
        for q, a in enumerate(self.slopes):
            if a >= 0:
                break
        else:
            raise ValueError("function is unbounded below")
        x = self.xs[q]
        if x > floor:
            return PiecewiseFn([floor] + self.xs[q:], [self.cs[q]] + self.cs[q:], [0] + self.slopes[q:])
        tail = PiecewiseFn(self.xs[q:], self.cs[q:], self.slopes[q:])
        return tail.restricted(floor) if floor > x else tail

    def simplified(self) -> "PiecewiseFn":
        xs, cs, sl = [self.xs[0]], [self.cs[0]], [self.slopes[0]]
        for x, c, a in zip(self.xs[1:], self.cs[1:], self.slopes[1:]):
            if a != sl[-1]:
                xs.append(x)
                cs.append(c)
                sl.append(a)
        return PiecewiseFn(xs, cs, sl)
