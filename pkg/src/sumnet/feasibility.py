"""Deciding whether the sum of the sources can reach every terminal.

Two independent routes:

* ``analytic_charset`` evaluates a construction expression to the set of
  field characteristics over which linear coding succeeds: ``S(m)`` gives
  the prime factors of ``m - 2``, ``K(m, n)`` gives every prime, and a
  crisscross intersects the sets of its parts.
* ``brute_force_feasible`` enumerates scalar coefficient assignments of a
  concrete network in lexicographic order and solves for the terminal
  decoders of each.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .coding import (
    DecoderSpec,
    LinearCode,
    Undecodable,
    code_to_dict,
    decoders_to_list,
    solve_decoders,
    verify_sum_code,
)
from .field import FieldMatrix, FieldSpec, is_consistent, is_prime
from .network import SOURCE, Crisscross, KLeaf, NetSpec, Network, SLeaf, check_netspec, parse_netspec

FULL, NORMALIZED = "full", "normalized"
MODES = (FULL, NORMALIZED)
DEFAULT_BUDGET = 10**8


# -- characteristic sets -------------------------------------------------------


@dataclass(frozen=True)
class CharacteristicSet:
    """A finite set of primes, or every prime when ``primes`` is None."""

    primes: tuple[int, ...] | None

    def __post_init__(self):
        if self.primes is not None:
            ps = tuple(sorted(set(self.primes)))
            if not all(is_prime(p) for p in ps):
                raise ValueError(f"not all primes: {ps}")
            object.__setattr__(self, "primes", ps)

    @classmethod
    def all(cls) -> CharacteristicSet:
        return cls(None)

    @classmethod
    def of(cls, primes: Iterable[int] = ()) -> CharacteristicSet:
        return cls(tuple(primes))

    @property
    def is_all(self) -> bool:
        return self.primes is None

    def __contains__(self, p: int) -> bool:
        return self.primes is None or p in self.primes

    def __and__(self, other: CharacteristicSet) -> CharacteristicSet:
        if self.primes is None:
            return other
        if other.primes is None:
            return self
        return CharacteristicSet(tuple(set(self.primes) & set(other.primes)))

    def __str__(self):
        if self.primes is None:
            return "all"
        if not self.primes:
            return "∅"
        return "{" + ",".join(map(str, self.primes)) + "}"


def prime_factors(n: int) -> CharacteristicSet:
    """Distinct prime factors of n; every prime divides 0."""
    if n < 0:
        raise ValueError(f"expected a nonnegative integer, got {n}")
    if n == 0:
        return CharacteristicSet.all()
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return CharacteristicSet.of(out)


def s_network_charset(m: int) -> CharacteristicSet:
    if m < 2:
        raise ValueError(f"S_m needs m >= 2, got {m}")
    return prime_factors(m - 2)


def charset_intersect(a: CharacteristicSet, b: CharacteristicSet) -> CharacteristicSet:
    return a & b


def analytic_charset(spec: NetSpec | str) -> CharacteristicSet:
    if isinstance(spec, str):
        spec = parse_netspec(spec)
    check_netspec(spec)
    if isinstance(spec, SLeaf):
        return s_network_charset(spec.m)
    if isinstance(spec, KLeaf):
        return CharacteristicSet.all()
    if isinstance(spec, Crisscross):
        return analytic_charset(spec.left) & analytic_charset(spec.right)
    raise TypeError(f"not a network expression: {spec!r}")


# -- exhaustive search ----------------------------------------------------------


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"search space of {required} assignments exceeds budget {budget}")
        self.required = required
        self.budget = budget


def coefficient_slots(net: Network) -> list[tuple]:
    """Every code coefficient in enumeration order.

    ``("alpha", e)`` for an edge leaving a source, ``("beta", i, e)`` for the
    in-edge ``i`` feeding edge ``e``; ordered by ``e``, then ``i``.
    """
    slots = []
    for e, (tail, _) in enumerate(net.edges):
        if net.role[tail] == SOURCE:
            slots.append(("alpha", e))
        else:
            slots.extend(("beta", i, e) for i in net.in_edges[tail])
    return slots


def free_slots(net: Network, mode: str) -> list[tuple]:
    """Slots enumerated by the search; all others are fixed to 1.

    Normalized mode fixes every source coefficient and every coefficient at a
    relay with a single incoming edge.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    slots = coefficient_slots(net)
    if mode == FULL:
        return slots
    return [s for s in slots if s[0] == "beta" and len(net.in_edges[net.edges[s[2]][0]]) > 1]


def search_space_size(net: Network, field: FieldSpec, mode: str) -> int:
    return field.order ** len(free_slots(net, mode))


class _Search:
    """Depth-first lexicographic scan over the free coefficients.

    A subtree is cut as soon as some terminal's incoming edges are fully
    determined and that terminal cannot decode the sum. Cutting never
    skips a feasible leaf, so the first leaf reached is the
    lexicographically least feasible assignment.
    """

    def __init__(self, net: Network, field: FieldSpec, mode: str):
        self.net, self.field = net, field
        self.free = free_slots(net, mode)
        n = len(self.free)
        depth = {s: d for d, s in enumerate(self.free)}
        self.n = n
        fixed_pos = n  # vals[n] holds the constant 1
        src_index = {s: j for j, s in enumerate(net.sources)}
        self.m = len(net.sources)

        ready = {}
        self.recipe: dict[int, tuple] = {}
        for e in net.edge_topo_order:
            tail = net.edges[e][0]
            if net.role[tail] == SOURCE:
                slot = ("alpha", e)
                d = depth.get(slot, -1)
                self.recipe[e] = ("src", src_index[tail], depth.get(slot, fixed_pos))
                ready[e] = d
            else:
                parts, d = [], -1
                for i in net.in_edges[tail]:
                    slot = ("beta", i, e)
                    parts.append((i, depth.get(slot, fixed_pos)))
                    d = max(d, depth.get(slot, -1), ready[i])
                self.recipe[e] = ("mix", tuple(parts))
                ready[e] = d
        self.edges_at = {d: [] for d in range(-1, n)}
        for e in net.edge_topo_order:
            self.edges_at[ready[e]].append(e)
        self.terms_at = {d: [] for d in range(-1, n)}
        for t in net.terminals:
            d = max((ready[e] for e in net.in_edges[t]), default=-1)
            self.terms_at[d].append(t)
        self._cache: dict[str, dict] = {t: {} for t in net.terminals}

    def _edge(self, e, vals, tv):
        kind = self.recipe[e]
        if kind[0] == "src":
            vec = [0] * self.m
            vec[kind[1]] = vals[kind[2]]
            return tuple(vec)
        add, mul = self.field.add, self.field.mul
        acc = [0] * self.m
        for i, pos in kind[1]:
            c = vals[pos]
            if c:
                for j, x in enumerate(tv[i]):
                    if x:
                        acc[j] = add(acc[j], mul(c, x))
        return tuple(acc)

    def _terminal_ok(self, t, tv) -> bool:
        ins = self.net.in_edges[t]
        key = tuple(tv[e] for e in ins)
        cache = self._cache[t]
        hit = cache.get(key)
        if hit is None:
            if not ins:
                hit = self.m == 0
            else:
                rows = [[tv[e][j] for e in ins] + [1] for j in range(self.m)]
                hit = is_consistent(self.field, rows, len(ins))
            cache[key] = hit
        return hit

    def run(self, prefix: tuple[int, ...] = ()) -> list[int] | None:
        """Least feasible assignment whose leading values equal ``prefix``."""
        n, q = self.n, self.field.order
        vals = [0] * n + [1]
        tv: list = [None] * len(self.net.edges)
        for e in self.edges_at[-1]:
            tv[e] = self._edge(e, vals, tv)
        if not all(self._terminal_ok(t, tv) for t in self.terms_at[-1]):
            return None
        edges_at, terms_at = self.edges_at, self.terms_at

        def dfs(d):
            if d == n:
                return True
            choices = (prefix[d],) if d < len(prefix) else range(q)
            for v in choices:
                vals[d] = v
                for e in edges_at[d]:
                    tv[e] = self._edge(e, vals, tv)
                if all(self._terminal_ok(t, tv) for t in terms_at[d]) and dfs(d + 1):
                    return True
            return False

        return vals[:n] if dfs(0) else None


def _run_prefix(net, field, mode, prefix):
    return _Search(net, field, mode).run(prefix)


def _scan(net: Network, field: FieldSpec, mode: str, jobs: int) -> list[int] | None:
    search = _Search(net, field, mode)
    if jobs <= 1 or search.n == 0:
        return search.run()
    q = field.order
    plen = 1
    while q**plen < 4 * jobs and plen < search.n:
        plen += 1
    prefixes = list(itertools.product(range(q), repeat=plen))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_prefix, net, field, mode, p) for p in prefixes]
        # lower ranges decide first; later ones are only consulted once all
        # earlier prefixes are exhausted
        for fut in futures:
            found = fut.result()
            if found is not None:
                for other in futures:
                    other.cancel()
                return found
    return None


@dataclass(frozen=True)
class FeasibilityVerdict:
    network: str
    field: FieldSpec
    mode: str
    feasible: bool
    search_space: int
    examined: int
    free_coefficients: int
    code: LinearCode | None = None
    decoders: DecoderSpec | None = None

    @property
    def evidence(self) -> str:
        return "witness" if self.feasible else "search-exhausted"

    @property
    def outcome(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def to_dict(self) -> dict:
        doc = {
            "network": self.network,
            "field": self.field.designation,
            "mode": self.mode,
            "outcome": self.outcome,
            "evidence": self.evidence,
            "free_coefficients": self.free_coefficients,
            "search_space": self.search_space,
            "assignments_examined": self.examined,
        }
        if self.feasible:
            doc["witness"] = {"code": code_to_dict(self.code), "decoders": decoders_to_list(self.decoders)}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _code_from_assignment(net: Network, field: FieldSpec, mode: str, values: list[int]) -> LinearCode:
    chosen = dict(zip(free_slots(net, mode), values))
    alpha, beta = {}, {}
    for slot in coefficient_slots(net):
        mat = FieldMatrix.scalar(field, 1, chosen.get(slot, 1))
        if slot[0] == "alpha":
            alpha[slot[1]] = mat
        else:
            beta[(slot[1], slot[2])] = mat
    return LinearCode(field, 1, alpha, beta)


def brute_force_feasible(
    net: Network,
    field: FieldSpec,
    mode: str = FULL,
    budget: int = DEFAULT_BUDGET,
    *,
    jobs: int = 1,
    seed: int = 0,
) -> FeasibilityVerdict:
    """Exhaustively decide scalar sum-feasibility of ``net`` over ``field``.

    Raises BudgetExceeded before searching if the assignment space is
    larger than ``budget``.
    """
    free = free_slots(net, mode)
    size = field.order ** len(free)
    if size > budget:
        raise BudgetExceeded(size, budget)
    found = _scan(net, field, mode, jobs)
    if found is None:
        return FeasibilityVerdict(net.name, field, mode, False, size, size, len(free))
    q = field.order
    rank = 0
    for v in found:
        rank = rank * q + v
    code = _code_from_assignment(net, field, mode, found)
    dec = solve_decoders(net, code)
    if isinstance(dec, Undecodable) or not verify_sum_code(net, code, dec, trials=100, seed=seed):
        raise AssertionError(f"search produced an invalid witness for {net.name} over {field}")
    return FeasibilityVerdict(net.name, field, mode, True, size, rank + 1, len(free), code, dec)


# -- cross-validation -----------------------------------------------------------


@dataclass(frozen=True)
class XvalRow:
    field: FieldSpec
    analytic: bool
    verdict: FeasibilityVerdict

    @property
    def agree(self) -> bool:
        return self.analytic == self.verdict.feasible

    def __str__(self):
        label = self.field.order
        if self.agree:
            return f"{label}: agree({self.verdict.outcome})"
        expected = "feasible" if self.analytic else "infeasible"
        return f"{label}: DISAGREE(oracle={self.verdict.outcome}, analytic={expected})"


@dataclass(frozen=True)
class XvalReport:
    spec: str
    charset: CharacteristicSet
    rows: tuple[XvalRow, ...]

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def __str__(self):
        return ", ".join(map(str, self.rows))


def cross_validate(
    spec: NetSpec | str,
    fields: Iterable[FieldSpec],
    mode: str = NORMALIZED,
    budget: int = DEFAULT_BUDGET,
    *,
    jobs: int = 1,
    seed: int = 0,
) -> XvalReport:
    """Compare the search verdict with analytic membership for each field."""
    from .network import realize

    if isinstance(spec, str):
        spec = parse_netspec(spec)
    charset = analytic_charset(spec)
    net = realize(spec)
    fields = list(fields)
    for f in fields:
        size = search_space_size(net, f, mode)
        if size > budget:
            raise BudgetExceeded(size, budget)
    rows = tuple(
        XvalRow(f, f.p in charset, brute_force_feasible(net, f, mode, budget, jobs=jobs, seed=seed))
        for f in fields
    )
    return XvalReport(str(spec), charset, rows)

