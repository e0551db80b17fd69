"""Instances, configurations and the long/short job classification."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import total_ordering
from pathlib import Path

from .exceptions import ConfigurationExplosion, NonIntegralEpsilonInverse
from .rational import Fraction, as_fraction

DEFAULT_CONFIGURATION_CAP = 200_000


def job_sort_key(job_id: str):
    """Natural ordering for job ids, so ``j2`` sorts before ``j10``."""
    return tuple((0, int(tok)) if tok.isdigit() else (1, tok) for tok in re.findall(r"\d+|\D+", job_id))


@dataclass(frozen=True)
class Instance:
    machines: int
    jobs: tuple  # ((job_id, size), ...)

    def __post_init__(self):
        jobs = tuple((str(j), int(p)) for j, p in self.jobs)
        object.__setattr__(self, "jobs", jobs)
        if int(self.machines) < 1:
            raise ValueError("an instance needs at least one machine")
        object.__setattr__(self, "machines", int(self.machines))
        ids = [j for j, _ in jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("job ids must be unique")
        if any(p < 1 for _, p in jobs):
            raise ValueError("job sizes must be positive integers")

    @classmethod
    def from_sizes(cls, machines: int, sizes, prefix: str = "j") -> "Instance":
        return cls(machines, tuple((f"{prefix}{k + 1}", p) for k, p in enumerate(sizes)))

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def job_ids(self) -> list:
        return [j for j, _ in self.jobs]

    @property
    def sizes(self) -> dict:
        return dict(self.jobs)

    def size_of(self, job_id: str) -> int:
        return self.sizes[job_id]

    @property
    def total_size(self) -> int:
        return sum(p for _, p in self.jobs)

    def size_counts(self) -> dict:
        """Map size -> number of jobs with that size (``n_p``)."""
        out: dict = {}
        for _, p in self.jobs:
            out[p] = out.get(p, 0) + 1
        return out

    def restrict(self, job_ids) -> "Instance":
        keep = set(job_ids)
        return Instance(self.machines, tuple((j, p) for j, p in self.jobs if j in keep))

    def to_dict(self) -> dict:
        return {"machines": self.machines, "jobs": [{"id": j, "size": p} for j, p in self.jobs]}

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            return cls(data["machines"], tuple((job["id"], job["size"]) for job in data["jobs"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed instance document: {exc}") from exc


def load_instance(path) -> Instance:
    with open(path) as fh:
        return Instance.from_dict(json.load(fh))


def dump_instance(instance: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict(), indent=2) + "\n")


@total_ordering
@dataclass(frozen=True)
class Configuration:
    """A multiset of job sizes, stored as ``((size, multiplicity), ...)`` by descending size."""

    counts: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for p, k in self.counts:
            if k < 0:
                raise ValueError("multiplicities must be nonnegative")
            if k:
                merged[int(p)] = merged.get(int(p), 0) + int(k)
        object.__setattr__(self, "counts", tuple(sorted(merged.items(), reverse=True)))

    @classmethod
    def from_sizes(cls, sizes) -> "Configuration":
        out: dict = {}
        for p in sizes:
            out[p] = out.get(p, 0) + 1
        return cls(tuple(out.items()))

    def multiplicity(self, size: int) -> int:
        for p, k in self.counts:
            if p == size:
                return k
        return 0

    @property
    def load(self) -> int:
        return sum(p * k for p, k in self.counts)

    @property
    def cardinality(self) -> int:
        return sum(k for _, k in self.counts)

    def elements(self) -> list:
        return [p for p, k in self.counts for _ in range(k)]

    def __lt__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.counts < other.counts

    def __str__(self):
        if not self.counts:
            return "{}"
        return "{" + ",".join(f"{p}:{k}" for p, k in self.counts) + "}"

    __repr__ = __str__


def parse_configuration(text: str) -> Configuration:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad configuration literal {text!r}")
    body = text[1:-1].strip()
    if not body:
        return Configuration()
    pairs = []
    for item in body.split(","):
        p, k = item.split(":")
        pairs.append((int(p), int(k)))
    return Configuration(tuple(pairs))


def enumerate_configurations(sizes, T: int, cap: int = DEFAULT_CONFIGURATION_CAP) -> list:
    """All multisets over ``sizes`` with load at most ``T`` (the empty one included), sorted."""
    sizes = sorted({int(p) for p in sizes}, reverse=True)
    if not sizes:
        raise ValueError("sizes must be nonempty")
    if T < 1:
        raise ValueError("T must be positive")
    out = []

    def walk(idx, budget, acc):
        if idx == len(sizes):
            out.append(Configuration(tuple(acc)))
            if len(out) > cap:
                raise ConfigurationExplosion(f"more than {cap} configurations at T={T}")
            return
        p = sizes[idx]
        for k in range(budget // p + 1):
            acc.append((p, k))
            walk(idx + 1, budget - k * p, acc)
            acc.pop()

    walk(0, int(T), [])
    out.sort()
    return out


@dataclass(frozen=True)
class JobClassification:
    epsilon: Fraction
    T: int
    s: int
    long_classes: tuple  # tuple of tuples of job ids, class q at index q-1
    short: tuple
    _class_of: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def inv_epsilon(self) -> int:
        return int(1 / self.epsilon)

    @property
    def long_jobs(self) -> list:
        return [j for cls in self.long_classes for j in cls]

    def class_of(self, job_id: str):
        """Class index q in 1..s, or None for a short job."""
        return self._class_of.get(job_id)

    def jobs_in(self, q: int) -> tuple:
        return self.long_classes[q - 1]

    def lower_size(self, q: int) -> Fraction:
        """Smallest size admitted to class q, ``(1/eps + q - 1) eps^2 T``."""
        return (self.inv_epsilon + q - 1) * self.epsilon**2 * self.T

    def upper_size(self, q: int) -> Fraction:
        return (self.inv_epsilon + q) * self.epsilon**2 * self.T

    @property
    def max_class_size(self) -> int:
        return max((len(c) for c in self.long_classes), default=0)


def check_epsilon(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise NonIntegralEpsilonInverse(f"epsilon must be positive, got {eps}")
    inv = 1 / eps
    if inv.denominator != 1:
        raise NonIntegralEpsilonInverse(f"1/epsilon must be an integer, got {inv}")
    if inv < 2:
        raise NonIntegralEpsilonInverse("epsilon must lie in (0, 1)")
    return eps


def classify_jobs(instance: Instance, T: int, epsilon) -> JobClassification:
    """Split jobs into short ones (``p < eps T``) and long classes ``J_1..J_s``.

    Jobs with ``p >= T`` fall outside every half-open class range; they are put
    in the last class ``J_s``.
    """
    eps = check_epsilon(epsilon)
    if int(T) != T or T < 1:
        raise ValueError("T must be a positive integer")
    T = int(T)
    inv = int(1 / eps)
    s = inv * (inv - 1)
    width = eps * eps * T
    classes = [[] for _ in range(s)]
    short = []
    class_of = {}
    for j, p in sorted(instance.jobs, key=lambda jp: job_sort_key(jp[0])):
        if p < eps * T:
            short.append(j)
            continue
        # (1/eps + q - 1) * width <= p < (1/eps + q) * width
        q = int(Fraction(p) / width) - inv + 1
        q = max(1, min(q, s))
        classes[q - 1].append(j)
        class_of[j] = q
    return JobClassification(eps, T, s, tuple(tuple(c) for c in classes), tuple(short), class_of)
