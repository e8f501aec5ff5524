"""Bucket histograms over a corpus and distribution-quality statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import EmptyHistogram, LevelOutOfRange, ShapeMismatch, TooManyBuckets
from .model import Placement, Username
from .strategies import MappingConfig, counter_placement

# Dense count arrays only; joint spaces beyond this are rejected outright
# rather than silently switching to a sparse representation.
DENSE_BUCKET_CAP = 1 << 21


@dataclass(slots=True)
class Histogram:
    """Dense per-bucket counts over a fixed bucket space, zeros included.

    `skipped` counts corpus entries whose placement was too shallow for the
    requested level; they are excluded from `total`.
    """

    counts: list[int]
    total: int
    skipped: int = 0

    def __post_init__(self) -> None:
        if sum(self.counts) != self.total:
            raise ValueError("total does not match sum of counts")

    @property
    def bucket_count(self) -> int:
        return len(self.counts)


@dataclass(frozen=True, slots=True)
class DistributionStats:
    """The figure of merit: spread about the ideal (perfectly even) mean."""

    ideal_mean: float
    std_dev: float
    deviation_ratio: float


def joint_bucket_count(level_moduli: tuple[int, ...], level: int) -> int:
    """Size of the Cartesian bucket space for levels 0..=level."""
    if not 0 <= level < len(level_moduli):
        raise LevelOutOfRange(f"level {level} outside 0..{len(level_moduli) - 1}")
    space = math.prod(level_moduli[: level + 1])
    if space > DENSE_BUCKET_CAP:
        raise TooManyBuckets(f"joint space {space} exceeds dense cap {DENSE_BUCKET_CAP}")
    return space


def linear_index(placement: Placement, level: int) -> int:
    """Row-major linearization of the joint bucket for levels 0..=level."""
    index = 0
    for k in range(level + 1):
        bucket, modulus = placement.levels[k]
        index = index * modulus + bucket
    return index


def build_histogram(
    corpus: Iterable[Username],
    placement_fn: Callable[[Username], Placement],
    level_moduli: tuple[int, ...],
    level: int,
) -> Histogram:
    """Count each name's joint bucket at the given level.

    Names whose placement truncates above `level` are tallied as skipped,
    not bucketed; bucketing them anywhere would fabricate data.
    """
    counts = [0] * joint_bucket_count(level_moduli, level)
    total = 0
    skipped = 0
    for name in corpus:
        placement = placement_fn(name)
        if placement.depth <= level:
            skipped += 1
            continue
        counts[linear_index(placement, level)] += 1
        total += 1
    return Histogram(counts, total, skipped)


def build_mapping_histogram(ids: Iterable[int], cfg: MappingConfig) -> Histogram:
    """Per-server load histogram for a range of counter IDs."""
    counts = [0] * cfg.num_servers
    total = 0
    for member_id in ids:
        _, server = counter_placement(member_id, cfg)
        counts[server] += 1
        total += 1
    return Histogram(counts, total)


def compute_stats(h: Histogram) -> DistributionStats:
    """Standard deviation about the ideal mean, over every bucket.

    Population normalization (divide by bucket_count): the bucket space is
    exhaustive, not a sample, and empty buckets count.
    """
    if h.total == 0:
        raise EmptyHistogram("histogram has no placed entries")
    bucket_count = h.bucket_count
    ideal_mean = h.total / bucket_count
    variance = math.fsum((c - ideal_mean) ** 2 for c in h.counts) / bucket_count
    std_dev = math.sqrt(variance)
    return DistributionStats(ideal_mean, std_dev, std_dev / ideal_mean)


def merge_histograms(a: Histogram, b: Histogram) -> Histogram:
    """Element-wise sum; associative and commutative, so corpus scans can split."""
    if a.bucket_count != b.bucket_count:
        raise ShapeMismatch(f"bucket spaces differ: {a.bucket_count} vs {b.bucket_count}")
    return Histogram(
        [x + y for x, y in zip(a.counts, b.counts)],
        a.total + b.total,
        a.skipped + b.skipped,
    )
