"""Group assignment: ratios to exact counts, counts to labels in space.

Largest-remainder apportionment keeps group ratios exact at small n; the
four distribution styles lay the same label multiset over the spatial
order in different adjacency structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor
from typing import Sequence

from .model import GroupingSpec
from .rng import CH_DISPERSE, Stream


@dataclass(frozen=True)
class GroupAssignment:
    labels: tuple[int, ...]
    achieved_counts: tuple[int, ...]


def target_counts(n: int, ratios: Sequence[float]) -> list[int]:
    """Largest-remainder apportionment of n over positive weights.

    Ties on the fractional remainder go to the lower group index.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    total = float(sum(ratios))
    quotas = [n * r / total for r in ratios]
    base = [floor(q) for q in quotas]
    remainder = n - sum(base)
    by_fraction = sorted(range(len(ratios)),
                         key=lambda g: (-(quotas[g] - base[g]), g))
    for g in by_fraction[:remainder]:
        base[g] += 1
    return base


def assign_groups(n: int, grouping: GroupingSpec,
                  order: Sequence[int] | None, seed: int,
                  *, salt: int = 0) -> GroupAssignment:
    """Assign each of n primitives to a group per the distribution style.

    `order` maps rank in the spatial order to primitive index; None means
    the primitives are already in spatial order. `salt` separates the
    seeded streams of independent per-variable groupings.
    """
    targets = target_counts(n, grouping.ratios)
    k = grouping.count
    style = grouping.distribution_style

    if style == "grouped":
        ranked = _grouped(targets)
    elif style == "interspersed":
        ranked = _interspersed(n, k, targets)
    elif style == "clustered":
        ranked = _clustered(n, k, targets, grouping.cluster_size)
    else:
        ranked = _grouped(targets)
        _shuffle(ranked, Stream(seed, CH_DISPERSE, salt))

    if order is not None:
        labels = [0] * n
        for rank, prim in enumerate(order):
            labels[prim] = ranked[rank]
    else:
        labels = ranked

    counts = [0] * k
    for g in labels:
        counts[g] += 1
    return GroupAssignment(labels=tuple(labels), achieved_counts=tuple(counts))


def _grouped(targets: list[int]) -> list[int]:
    out: list[int] = []
    for g, t in enumerate(targets):
        out.extend([g] * t)
    return out


def _interspersed(n: int, k: int, targets: list[int]) -> list[int]:
    # Cycle the groups, then fix counts from the tail: positions whose
    # group is over target are reassigned to the lowest-index group
    # still under target.
    labels = [i % k for i in range(n)]
    counts = [0] * k
    for g in labels:
        counts[g] += 1
    for i in range(n - 1, -1, -1):
        if counts == targets:
            break
        g = labels[i]
        if counts[g] > targets[g]:
            h = next(h for h in range(k) if counts[h] < targets[h])
            labels[i] = h
            counts[g] -= 1
            counts[h] += 1
    return labels


def _clustered(n: int, k: int, targets: list[int], cluster_size: int) -> list[int]:
    # Round-robin over groups in blocks of cluster_size; a group whose
    # target is exhausted is skipped; the final block may be partial.
    labels: list[int] = []
    remaining = list(targets)
    g = 0
    while len(labels) < n:
        if remaining[g] > 0:
            take = min(cluster_size, remaining[g], n - len(labels))
            labels.extend([g] * take)
            remaining[g] -= take
        g = (g + 1) % k
    return labels


def _shuffle(labels: list[int], stream: Stream) -> None:
    for i in range(len(labels) - 1, 0, -1):
        j = stream.randint(i + 1)
        labels[i], labels[j] = labels[j], labels[i]
