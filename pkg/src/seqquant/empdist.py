"""Streaming empirical distribution with logarithmic rank/select queries.

The container is a size-augmented AVL tree over distinct values, with
duplicates stored as per-node multiplicities, so rank queries count
multiplicity exactly.  Values may be any totally ordered type; float NaN is
rejected at insertion because it breaks rank semantics.

Quantile conventions: the upper sample quantile at level p is the
floor(t p) + 1 order statistic, the lower one the ceil(t p) order statistic,
and out-of-range order statistics are the NEG_INF / POS_INF sentinels (the
supremum of an empty set is the space's infimum, and vice versa).  Levels are
interpreted exactly as the dyadic rationals the incoming floats denote, so
knife-edge levels p = k/t behave consistently with the count queries.
"""

from __future__ import annotations

import math
from typing import Any, Iterable, Iterator

from .errors import QueryError

__all__ = ["OrderedMultiset", "NEG_INF", "POS_INF", "is_neg_inf", "is_pos_inf", "Extended"]


class _Sentinel:
    """Totally ordered infinity: NEG_INF below everything, POS_INF above."""

    __slots__ = ("_neg",)

    def __init__(self, neg: bool):
        self._neg = neg

    def __repr__(self) -> str:
        return "-inf" if self._neg else "inf"

    def __float__(self) -> float:
        return -math.inf if self._neg else math.inf

    def __lt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, _Sentinel):
            return self._neg
        return self._neg

    def __le__(self, other) -> bool:
        return other is self or self.__lt__(other)

    def __gt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, _Sentinel):
            return not self._neg
        return not self._neg

    def __ge__(self, other) -> bool:
        return other is self or self.__gt__(other)

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return object.__hash__(self)


NEG_INF = _Sentinel(True)
POS_INF = _Sentinel(False)

Extended = Any  # a stored value or one of the sentinels


def is_neg_inf(x) -> bool:
    return x is NEG_INF


def is_pos_inf(x) -> bool:
    return x is POS_INF


def _level_floor(t: int, p) -> int:
    """floor(t * p) computed exactly for the dyadic rational p denotes."""
    if isinstance(p, float):
        if math.isnan(p):
            raise ValueError("quantile level must not be NaN")
        if math.isinf(p):
            return t if p > 0 else -1
    pn, pd = p.as_integer_ratio()
    return (t * pn) // pd


def _level_ceil(t: int, p) -> int:
    if isinstance(p, float):
        if math.isnan(p):
            raise ValueError("quantile level must not be NaN")
        if math.isinf(p):
            return t + 1 if p > 0 else 0
    pn, pd = p.as_integer_ratio()
    return -((t * -pn) // pd)


class OrderedMultiset:
    """Rank-augmented balanced search tree over a stream of observations."""

    __slots__ = ("_val", "_cnt", "_size", "_ht", "_left", "_right", "_root", "_t")

    def __init__(self, values: Iterable | None = None):
        self._val: list = []
        self._cnt: list[int] = []
        self._size: list[int] = []
        self._ht: list[int] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._root = -1
        self._t = 0
        if values is not None:
            for x in values:
                self.insert(x)

    def __len__(self) -> int:
        return self._t

    @property
    def count(self) -> int:
        return self._t

    def copy(self) -> "OrderedMultiset":
        """Structural snapshot (O(n)); safe to query while the original grows."""
        other = OrderedMultiset()
        other._val = self._val.copy()
        other._cnt = self._cnt.copy()
        other._size = self._size.copy()
        other._ht = self._ht.copy()
        other._left = self._left.copy()
        other._right = self._right.copy()
        other._root = self._root
        other._t = self._t
        return other

    # -- structure maintenance ------------------------------------------------

    def _new_node(self, x) -> int:
        self._val.append(x)
        self._cnt.append(1)
        self._size.append(1)
        self._ht.append(1)
        self._left.append(-1)
        self._right.append(-1)
        return len(self._val) - 1

    def _h(self, i: int) -> int:
        return self._ht[i] if i >= 0 else 0

    def _s(self, i: int) -> int:
        return self._size[i] if i >= 0 else 0

    def _refresh(self, i: int) -> None:
        l, r = self._left[i], self._right[i]
        hl = self._ht[l] if l >= 0 else 0
        hr = self._ht[r] if r >= 0 else 0
        self._ht[i] = (hl if hl > hr else hr) + 1
        self._size[i] = self._cnt[i] + (self._size[l] if l >= 0 else 0) + (
            self._size[r] if r >= 0 else 0
        )

    def _rotate_left(self, i: int) -> int:
        r = self._right[i]
        self._right[i] = self._left[r]
        self._left[r] = i
        self._refresh(i)
        self._refresh(r)
        return r

    def _rotate_right(self, i: int) -> int:
        l = self._left[i]
        self._left[i] = self._right[l]
        self._right[l] = i
        self._refresh(i)
        self._refresh(l)
        return l

    def _rebalance(self, i: int) -> int:
        bal = self._h(self._left[i]) - self._h(self._right[i])
        if bal > 1:
            l = self._left[i]
            if self._h(self._left[l]) < self._h(self._right[l]):
                self._left[i] = self._rotate_left(l)
            return self._rotate_right(i)
        if bal < -1:
            r = self._right[i]
            if self._h(self._right[r]) < self._h(self._left[r]):
                self._right[i] = self._rotate_right(r)
            return self._rotate_left(i)
        return i

    def insert(self, x) -> int:
        """Insert one observation (duplicates allowed); returns the new count."""
        if isinstance(x, float) and x != x:
            raise ValueError("NaN is not insertable: it breaks rank semantics")
        self._t += 1
        if self._root < 0:
            self._root = self._new_node(x)
            return self._t
        path = []
        i = self._root
        val = self._val
        while i >= 0:
            path.append(i)
            v = val[i]
            if x == v:
                self._cnt[i] += 1
                for j in path:
                    self._size[j] += 1
                return self._t
            i = self._left[i] if x < v else self._right[i]
        leaf = path[-1]
        node = self._new_node(x)
        if x < val[leaf]:
            self._left[leaf] = node
        else:
            self._right[leaf] = node
        for k in range(len(path) - 1, -1, -1):
            cur = path[k]
            self._refresh(cur)
            new_sub = self._rebalance(cur)
            if new_sub != cur:
                if k == 0:
                    self._root = new_sub
                else:
                    par = path[k - 1]
                    if self._left[par] == cur:
                        self._left[par] = new_sub
                    else:
                        self._right[par] = new_sub
        return self._t

    def height(self) -> int:
        return self._h(self._root)

    # -- rank / select queries -------------------------------------------------

    def order_stat(self, k: int) -> Extended:
        """k-th smallest value; NEG_INF for k < 1, POS_INF for k > count."""
        if k < 1:
            return NEG_INF
        if k > self._t:
            return POS_INF
        i = self._root
        while True:
            left = self._left[i]
            ls = self._size[left] if left >= 0 else 0
            if k <= ls:
                i = left
            elif k <= ls + self._cnt[i]:
                return self._val[i]
            else:
                k -= ls + self._cnt[i]
                i = self._right[i]

    def count_le(self, x) -> int:
        """Number of stored values <= x (sentinels allowed for x)."""
        c = 0
        i = self._root
        while i >= 0:
            if self._val[i] <= x:
                left = self._left[i]
                c += (self._size[left] if left >= 0 else 0) + self._cnt[i]
                i = self._right[i]
            else:
                i = self._left[i]
        return c

    def count_lt(self, x) -> int:
        c = 0
        i = self._root
        while i >= 0:
            if self._val[i] < x:
                left = self._left[i]
                c += (self._size[left] if left >= 0 else 0) + self._cnt[i]
                i = self._right[i]
            else:
                i = self._left[i]
        return c

    def cdf_at(self, x) -> tuple[float, float]:
        """(F^-(x), F(x)) = (#<x, #<=x) / count, in O(log count)."""
        if self._t == 0:
            raise QueryError("empirical CDF is undefined for an empty distribution")
        return self.count_lt(x) / self._t, self.count_le(x) / self._t

    def upper_quantile(self, p) -> Extended:
        """Q_t(p): the floor(t p) + 1 order statistic."""
        if self._t == 0:
            raise QueryError("sample quantile is undefined for an empty distribution")
        return self.order_stat(_level_floor(self._t, p) + 1)

    def lower_quantile(self, p) -> Extended:
        """Q^-_t(p): the ceil(t p) order statistic."""
        if self._t == 0:
            raise QueryError("sample quantile is undefined for an empty distribution")
        return self.order_stat(_level_ceil(self._t, p))

    def min(self) -> Extended:
        return self.order_stat(1)

    def max(self) -> Extended:
        return self.order_stat(self._t) if self._t else NEG_INF

    # -- iteration ---------------------------------------------------------------

    def items(self) -> Iterator[tuple[Any, int]]:
        """(value, multiplicity) pairs in increasing value order."""
        stack = []
        i = self._root
        while stack or i >= 0:
            while i >= 0:
                stack.append(i)
                i = self._left[i]
            i = stack.pop()
            yield self._val[i], self._cnt[i]
            i = self._right[i]

    def __iter__(self) -> Iterator:
        for v, c in self.items():
            for _ in range(c):
                yield v

    def items_between(self, lo, hi) -> Iterator[tuple[Any, int]]:
        """(value, multiplicity) for distinct values in [lo, hi], in order."""
        stack = []
        i = self._root
        while stack or i >= 0:
            while i >= 0:
                if self._val[i] < lo:
                    i = self._right[i]
                else:
                    stack.append(i)
                    i = self._left[i]
            if not stack:
                return
            i = stack.pop()
            v = self._val[i]
            if v > hi:
                return
            yield v, self._cnt[i]
            i = self._right[i]
