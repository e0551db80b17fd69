"""The hard instance family I_k: 15 sizes on the Petersen edges, each with multiplicity k.

Vertex v of the Petersen graph carries weight 2^v and edge uv becomes the size
2^u + 2^v. A perfect matching covers each vertex once, so its configuration has
load 2^10 - 1 = 1023.

Why the matching configurations are the only ones that matter: the total size
is 3k * 1023 = m * T, so a makespan-1023 schedule loads every machine to exactly
1023. Let c_v(i) count the jobs on machine i whose edge touches v. Reading the
load 1023 bit by bit, c_0(i) is odd on every machine, hence at least 1; vertex 0
has degree 3 and each edge has k copies, so the c_0(i) sum to 3k = m and all equal
1. Removing vertex 0 and repeating for v = 1, ..., 9 gives c_v(i) = 1 for all v,
i.e. every machine holds a perfect matching. So the program is feasible iff its
restriction to the six matching configurations is.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exceptions import SearchFailed
from ..model import Configuration, Instance
from .petersen import petersen_edges, petersen_perfect_matchings

HARD_T = 1023


def exact_load_multisets(counts: dict, target: int) -> list:
    """All multisets with sum exactly ``target`` using size p at most ``counts[p]`` times."""
    sizes = sorted(counts, reverse=True)
    if any(p <= 0 for p in sizes):
        raise ValueError("sizes must be positive")
    out = []
    stack = [(0, target, ())]
    while stack:
        idx, rest, acc = stack.pop()
        if rest == 0:
            out.append(Configuration.from_sizes(acc))
            continue
        if idx == len(sizes):
            continue
        p = sizes[idx]
        for c in range(min(counts[p], rest // p), -1, -1):
            stack.append((idx + 1, rest - c * p, acc + (p,) * c))
    return sorted(out)


def edge_sizes() -> dict:
    return {e: 2 ** e[0] + 2 ** e[1] for e in petersen_edges()}


@dataclass
class HardInstance:
    k: int
    instance: Instance
    edge_sizes: dict  # Petersen edge -> job size
    matchings: list  # the six perfect matchings, as edge sets
    matching_configurations: list  # C_1..C_6, in matching order
    T: int = HARD_T

    @property
    def machines(self) -> int:
        return 3 * self.k

    @property
    def incidence(self) -> tuple:
        """15 x 6 0/1 matrix: size of edge e (rows, sorted edges) lies in C_j."""
        edges = sorted(self.edge_sizes)
        return tuple(tuple(int(e in M) for M in self.matchings) for e in edges)

    def summary(self) -> str:
        lines = [f"k {self.k}", f"machines {self.machines}", f"jobs {self.instance.n}", f"T {self.T}"]
        for j, C in enumerate(self.matching_configurations, start=1):
            lines.append(f"C_{j} {C} load {C.load}")
        return "\n".join(lines) + "\n"


def gen_hard_instance(k: int) -> HardInstance:
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be odd and at least 3")
    sizes = edge_sizes()
    matchings = petersen_perfect_matchings()
    configs = [Configuration.from_sizes([sizes[e] for e in M]) for M in matchings]
    job_sizes = [sizes[e] for e in sorted(sizes) for _ in range(k)]
    inst = Instance.from_sizes(3 * k, job_sizes)
    return HardInstance(k, inst, sizes, matchings, configs)


def parity_reduction_holds(hi: HardInstance) -> bool:
    """Check the hypotheses of the bit-by-bit argument in the module docstring."""
    edges = sorted(hi.edge_sizes)
    degree = {v: 0 for v in range(10)}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    return (
        hi.T == 2 ** 10 - 1
        and all(hi.edge_sizes[(u, v)] == 2 ** u + 2 ** v for u, v in edges)
        and len(set(hi.edge_sizes.values())) == len(edges)
        and set(degree.values()) == {3}
        and hi.machines == 3 * hi.k
        and all(n == hi.k for n in hi.instance.size_counts().values())
        and hi.instance.total_size == hi.machines * hi.T
    )


def cover_search(configs, need: dict, machines: int, budget: int = 10_000_000):
    """Pick one configuration per machine so that every size count is met exactly.

    Branches on the size with the fewest fitting configurations. For a given
    pivot size the configurations are taken in non-decreasing index order,
    which enumerates multisets rather than sequences. Returns
    ``(list of configurations or None, nodes)``.
    """
    configs = [C for C in sorted(configs) if all(need.get(p, 0) >= c for p, c in C.counts)]
    need = {p: n for p, n in need.items() if n}
    widest = max((C.cardinality for C in configs), default=0)
    chosen: list = []
    nodes = [0]

    def fits(C):
        return all(need.get(p, 0) >= c for p, c in C.counts)

    def walk(left, floors):
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchFailed(f"search exceeded {budget} nodes")
        open_sizes = [p for p, n in need.items() if n]
        if not open_sizes:
            return left == 0
        if left == 0 or sum(need.values()) > left * widest:
            return False
        options = {}
        for p in open_sizes:
            start = floors.get(p, 0)
            options[p] = [i for i in range(start, len(configs)) if configs[i].multiplicity(p) and fits(configs[i])]
            if not options[p]:
                return False
        pivot = min(open_sizes, key=lambda p: (len(options[p]), p))
        for i in options[pivot]:
            C = configs[i]
            for p, c in C.counts:
                need[p] -= c
            chosen.append(C)
            if walk(left - 1, {**floors, pivot: i}):
                return True
            chosen.pop()
            for p, c in C.counts:
                need[p] += c
        return False

    found = walk(machines, {})
    return (list(chosen) if found else None), nodes[0]


def restricted_schedule_search(hi: HardInstance, budget: int = 10_000_000):
    """Cover search using only the six matching configurations."""
    need = dict(hi.instance.size_counts())
    return cover_search(hi.matching_configurations, need, hi.machines, budget)


def exact_load_schedule_search(hi: HardInstance, budget: int = 10_000_000):
    """Cover search over every configuration of load exactly T (slow second route)."""
    need = dict(hi.instance.size_counts())
    configs = exact_load_multisets(need, hi.T)
    return cover_search(configs, need, hi.machines, budget), configs


@dataclass
class OptLowerBound:
    bound: int
    nodes: int

    def report(self) -> str:
        return (
            f"OPT >= {self.bound}\n"
            f"matching-configuration search: infeasible ({self.nodes} nodes)\n"
            "makespan T forces matching configurations: parity argument hypotheses hold\n"
        )


def certify_opt_lower_bound(hi: HardInstance, budget: int = 10_000_000) -> OptLowerBound:
    """OPT >= T+1: any makespan-T schedule uses only matching configurations
    (parity argument), and the exhaustive search shows none of those schedules exist."""
    if not parity_reduction_holds(hi):
        raise AssertionError("instance does not meet the parity argument hypotheses")
    solution, nodes = restricted_schedule_search(hi, budget)
    if solution is not None:
        raise AssertionError("matching configurations admit a schedule; the lower bound does not hold")
    return OptLowerBound(hi.T + 1, nodes)
