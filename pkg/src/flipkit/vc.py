"""Exact VC-dimension and shatter function by exhaustive subset search.

Neighborhood traces use open neighborhoods, so a vertex of the probed set
contributes its own trace too (never containing itself).  Everything is
exact; the caps are refusals, not approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import CapExceeded, DomainError
from .graphs import Graph

DEFAULT_SHATTER_CAP = 5
DEFAULT_VCDIM_CAP = 16


@dataclass(frozen=True)
class ShatterReport:
    """VC-dimension with a shattered witness set and the trace-count table."""

    vcdim: int
    traces_by_size: dict[int, int]
    witness: tuple[int, ...]


def _trace_count(g: Graph, subset: tuple[int, ...]) -> int:
    cols = list(subset)
    if not cols:
        return 1
    codes = g.adj[:, cols] @ (1 << np.arange(len(cols), dtype=np.int64))
    return len(np.unique(codes))


def _shatter_value(g: Graph, n: int) -> tuple[int, tuple[int, ...] | None]:
    """Exact max trace count over size-n subsets, plus a maximizing subset.

    Early exit on the first subset realizing all 2^n traces.
    """
    if n == 0:
        return 1, ()
    best, best_subset = 0, None
    full = 1 << n
    for subset in combinations(range(g.n), n):
        count = _trace_count(g, subset)
        if count > best:
            best, best_subset = count, subset
            if best == full:
                break
    return best, best_subset


def shatter_function(g: Graph, n: int, *, cap: int = DEFAULT_SHATTER_CAP) -> int:
    """Max number of distinct neighborhood traces on any size-n vertex set."""
    if not 0 <= n <= g.n:
        raise DomainError(f"trace size {n} out of range for n={g.n}")
    if n > cap:
        raise CapExceeded(
            f"shatter function at n={n} exceeds the exhaustive cap {cap}"
        )
    return _shatter_value(g, n)[0]


def is_shattered(g: Graph, subset) -> bool:
    """Whether every subset of ``subset`` occurs as a neighborhood trace."""
    subset = tuple(sorted(set(subset)))
    return _trace_count(g, subset) == 1 << len(subset)


def vc_dimension(g: Graph, *, cap: int = DEFAULT_VCDIM_CAP) -> ShatterReport:
    """Exact VC-dimension: the largest n whose shatter value is 2^n.

    Stops at the first n that fails to shatter (the shatter function can
    never recover past it).  Also cross-checks the trace-count table against
    the binomial-sum bound; a violation would falsify the theory this
    package is built on, so it is reported as a hard error.
    """
    if g.n == 0:
        raise DomainError("VC-dimension of the empty graph is undefined")
    if g.n > cap:
        raise CapExceeded(
            f"exhaustive VC-dimension on n={g.n} exceeds the cap {cap}"
        )
    traces_by_size: dict[int, int] = {}
    witness: tuple[int, ...] = ()
    n = 0
    while True:
        value, subset = _shatter_value(g, n)
        traces_by_size[n] = value
        if value == 1 << n:
            witness = subset if subset is not None else ()
            if n == g.n:
                vcdim = n
                break
            n += 1
        else:
            vcdim = n - 1
            break
    if not is_shattered(g, witness) or len(witness) != vcdim:
        raise RuntimeError(f"witness {witness} fails shatter validation")
    for m, value in traces_by_size.items():
        bound = sum(comb(m, i) for i in range(min(vcdim, m) + 1))
        if m >= vcdim and value > bound:
            raise RuntimeError(
                f"trace count {value} at n={m} violates the binomial-sum bound {bound}"
            )
    return ShatterReport(vcdim=vcdim, traces_by_size=traces_by_size, witness=witness)
