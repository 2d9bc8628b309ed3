"""Long Z_3-avoiding words.

* Eulerian tours of the permutation digraph (property P words, length 2q!+q-1);
* Eulerian tours of the doubled-letter digraph (length 3*2^(q-2)*q!+2q-4);
* the explicit CRT schedule, one letter at a time;
* the random interval model, optionally with a distinguished separator letter.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .words import Alphabet, SizeError, Word, as_word

PLAIN_MAX_Q = 8
IMPROVED_MAX_Q = 7


def _word(symbols, q: int) -> Word:
    return Word(tuple(symbols), Alphabet(q, "chars" if q <= 26 else "ints"))


# ---------------------------------------------------------------- digraphs

@dataclass
class PermDigraph:
    """Vertices with their ordered out-edges ``(target, emitted symbols)``.

    ``variant == "plain"``: vertices are words of length q-1 with distinct
    letters, an edge appends one letter.  ``variant == "improved"``: vertices
    are ``(letters, mask)`` where bit ``b`` of ``mask`` doubles internal letter
    ``b+1``; an edge emits one or two letters.
    """

    q: int
    variant: str
    succ: dict = field(repr=False)

    @property
    def vertices(self) -> list:
        return list(self.succ)

    def num_edges(self) -> int:
        return sum(len(es) for es in self.succ.values())

    def spell(self, v) -> tuple:
        """The word a vertex stands for."""
        if self.variant == "plain":
            return v
        return expand_vertex(v, self.q)

    def indegrees(self) -> dict:
        deg = dict.fromkeys(self.succ, 0)
        for es in self.succ.values():
            for t, _ in es:
                deg[t] += 1
        return deg


def expand_vertex(v, q: int) -> tuple:
    letters, mask = v
    out = [letters[0]]
    for idx in range(1, q - 2):
        out.append(letters[idx])
        if mask >> (idx - 1) & 1:
            out.append(letters[idx])
    out.append(letters[q - 2])
    return tuple(out)


def plain_digraph(q: int, max_q: int = PLAIN_MAX_Q) -> PermDigraph:
    if q < 3:
        raise ValueError(f"plain digraph needs q >= 3, got {q}")
    if q > max_q:
        raise SizeError(f"plain digraph for q={q} has {2 * math.factorial(q)} edges; cap is q <= {max_q}")
    full = set(range(q))
    succ = {}
    for u in itertools.permutations(range(q), q - 1):
        (missing,) = full.difference(u)
        succ[u] = [(u[1:] + (x,), (x,)) for x in sorted((missing, u[0]))]
    return PermDigraph(q, "plain", succ)


def improved_digraph(q: int, max_q: int = IMPROVED_MAX_Q) -> PermDigraph:
    if q < 5:
        raise ValueError(f"improved digraph needs q >= 5, got {q}")
    if q > max_q:
        raise SizeError(f"improved digraph for q={q} has {2 ** (q - 1) * math.factorial(q)} edges; "
                        f"cap is q <= {max_q}")
    full = set(range(q))
    top = q - 4  # mask bit of the last internal position
    succ = {}
    for letters in itertools.permutations(range(q), q - 1):
        (missing,) = full.difference(letters)
        for mask in range(1 << (q - 3)):
            u = (letters, mask)
            last = letters[-1]
            out = []
            for x in (missing, letters[0]):
                nxt = letters[1:] + (x,)
                base = mask >> 1
                # the old last letter becomes the new last internal letter
                out.append(((nxt, base), (x,)))
                out.append(((nxt, base | 1 << top), (last, x)))
            out.sort(key=lambda e: expand_vertex(e[0], q))
            succ[u] = out
    return PermDigraph(q, "improved", succ)


def out_neighbours(g: PermDigraph, v) -> list:
    return [g.spell(t) for t, _ in g.succ[v]]


def check_strong_connectivity(g: PermDigraph) -> bool:
    """True iff a single strongly connected component covers every vertex."""
    if not g.succ:
        return True
    pred: dict = {v: [] for v in g.succ}
    for v, es in g.succ.items():
        for t, _ in es:
            if t not in pred:
                return False
            pred[t].append(v)
    root = next(iter(g.succ))

    def reach(adj) -> int:
        seen = {root}
        todo = deque([root])
        while todo:
            v = todo.popleft()
            for t in adj(v):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return len(seen)

    n = len(g.succ)
    return reach(lambda v: (t for t, _ in g.succ[v])) == n and reach(lambda v: pred[v]) == n


def euler_tour(g: PermDigraph, start) -> list:
    """Hierholzer's algorithm; out-edges are taken in stored (lexicographic) order.

    Returns the circuit as a list of ``(source, edge index)``.
    """
    ptr = dict.fromkeys(g.succ, 0)
    stack = [(start, None)]
    circuit = []
    while stack:
        v, via = stack[-1]
        es = g.succ[v]
        i = ptr[v]
        if i < len(es):
            ptr[v] = i + 1
            stack.append((es[i][0], (v, i)))
        else:
            stack.pop()
            if via is not None:
                circuit.append(via)
    circuit.reverse()
    if len(circuit) != g.num_edges():
        raise ValueError("digraph is not Eulerian from this start vertex")
    return circuit


def tour_word(g: PermDigraph, start, circuit) -> Word:
    out = list(g.spell(start))
    for v, i in circuit:
        out.extend(g.succ[v][i][1])
    return _word(out, g.q)


def euler_construct_p(q: int, max_q: int = PLAIN_MAX_Q) -> Word:
    """A property-P word of length 2q! + q - 1."""
    g = plain_digraph(q, max_q)
    start = tuple(range(q - 1))
    return tour_word(g, start, euler_tour(g, start))


def longest_vertex(q: int):
    return tuple(range(q - 1)), (1 << (q - 3)) - 1


def euler_construct_improved(q: int, max_q: int = IMPROVED_MAX_Q) -> Word:
    """A Z_3-free word of length 3 * 2^(q-2) * q! + 2q - 4."""
    g = improved_digraph(q, max_q)
    start = longest_vertex(q)
    return tour_word(g, start, euler_tour(g, start))


def random_trail_word(q: int, rng: np.random.Generator, max_edges: int | None = None,
                      g: PermDigraph | None = None) -> Word:
    """Random walk in the plain digraph that never reuses an edge (property P by construction)."""
    if g is None:
        g = plain_digraph(q)
    verts = list(g.succ)
    v = verts[rng.integers(len(verts))]
    used = set()
    out = list(v)
    steps = 0
    while max_edges is None or steps < max_edges:
        free = [i for i in range(len(g.succ[v])) if (v, i) not in used]
        if not free:
            break
        i = free[rng.integers(len(free))]
        used.add((v, i))
        t, emit = g.succ[v][i]
        out.extend(emit)
        v = t
        steps += 1
    return _word(out, q)


# ---------------------------------------------------------------- property P

@dataclass
class PropertyPResult:
    ok: bool
    kind: str | None = None  # "distance" or "window"
    positions: tuple | None = None

    def __bool__(self):
        return self.ok


def check_property_p(w, q: int) -> PropertyPResult:
    """Equal letters at distance >= q-1 and all length-q windows distinct."""
    syms = as_word(w).symbols
    last: dict = {}
    for i, s in enumerate(syms):
        j = last.get(s)
        if j is not None and i - j < q - 1:
            return PropertyPResult(False, "distance", (j, i))
        last[s] = i
    seen: dict = {}
    for i in range(len(syms) - q + 1):
        win = syms[i:i + q]
        if win in seen:
            return PropertyPResult(False, "window", (seen[win], i))
        seen[win] = i
    return PropertyPResult(True)


def windows(w, q: int) -> list:
    syms = as_word(w).symbols
    return [syms[i:i + q] for i in range(len(syms) - q + 1)]


# ---------------------------------------------------------------- CRT schedule

class ScheduleError(ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


def first_primes(t: int) -> tuple:
    from sympy import prime

    return tuple(int(prime(i)) for i in range(1, t + 1))


@dataclass(frozen=True)
class CrtSchedule:
    t: int
    S: int
    primes: tuple
    periods: tuple

    @property
    def q(self) -> int:
        return self.t * self.S

    @property
    def num_intervals(self) -> int:
        return self.t * math.prod(self.periods[1:])

    @property
    def length(self) -> int:
        return self.S * self.num_intervals

    def part(self, j: int) -> tuple:
        return tuple(range(j * self.S, (j + 1) * self.S))


def crt_schedule(t: int, S: int) -> CrtSchedule:
    """Validate periods S! - p_j (p_j the j-th prime): each >= 2 and pairwise coprime."""
    if t < 2 or S < 1:
        raise ScheduleError(f"need t >= 2 and S >= 1, got t={t}, S={S}")
    primes = first_primes(t)
    fact = math.factorial(S)
    periods = tuple(fact - p for p in primes)
    for j, r in enumerate(periods):
        if r <= 1:
            raise ScheduleError(f"period r_{j + 1} = {S}! - {primes[j]} = {r} is degenerate", (j, j))
    for a, b in itertools.combinations(range(t), 2):
        if math.gcd(periods[a], periods[b]) != 1:
            raise ScheduleError(f"periods r_{a + 1}={periods[a]} and r_{b + 1}={periods[b]} "
                                f"share factor {math.gcd(periods[a], periods[b])}", (a, b))
    return CrtSchedule(t, S, primes, periods)


def unrank_permutation(rank: int, items) -> tuple:
    """Lexicographic permutation number ``rank`` of sorted ``items`` (factorial base)."""
    pool = sorted(items)
    n = len(pool)
    if not 0 <= rank < math.factorial(n):
        raise ValueError(f"rank {rank} out of range for {n} items")
    out = []
    for k in range(n - 1, -1, -1):
        f = math.factorial(k)
        d, rank = divmod(rank, f)
        out.append(pool.pop(d))
    return tuple(out)


def crt_letter_at(sched: CrtSchedule, pos: int) -> int:
    if not 0 <= pos < sched.length:
        raise IndexError(f"position {pos} outside word of length {sched.length}")
    k, off = divmod(pos, sched.S)
    cycle, j = divmod(k, sched.t)
    return unrank_permutation(cycle % sched.periods[j], sched.part(j))[off]


def crt_construct(sched: CrtSchedule) -> Word:
    perm = lru_cache(maxsize=None)(lambda j, r: unrank_permutation(r, sched.part(j)))
    out = []
    for k in range(sched.num_intervals):
        cycle, j = divmod(k, sched.t)
        out.extend(perm(j, cycle % sched.periods[j]))
    return _word(out, sched.q)


# ---------------------------------------------------------------- interval model

@dataclass(frozen=True)
class IntervalModel:
    """Interval ``k`` (0-based) is a permutation of part ``k mod t``."""

    q: int
    t: int
    S: int
    parts: tuple
    distinguished: int | None = None

    @property
    def min_gap(self) -> int:
        return (self.t - 1) * self.S


def interval_model(q: int, t: int | None = None, S: int | None = None,
                   distinguished: bool = False) -> IntervalModel:
    if q < 4:
        raise ValueError(f"interval model needs q >= 4, got {q}")
    avail = q - 1 if distinguished else q
    if t is None:
        t = max(2, int(math.floor(math.log2(q))))
    if S is None:
        S = avail // t
    if t < 2 or S < 1 or t * S > avail:
        raise ValueError(f"need t >= 2, S >= 1 and t*S <= {avail}; got t={t}, S={S}")
    parts = tuple(tuple(range(j * S, (j + 1) * S)) for j in range(t))
    return IntervalModel(q, t, S, parts, q - 1 if distinguished else None)


def random_interval_word(q: int, num_intervals: int, seed=None, distinguished: bool = False,
                         t: int | None = None, S: int | None = None,
                         rng: np.random.Generator | None = None) -> Word:
    """Fill successive intervals with uniform permutations of the parts in turn.

    With ``distinguished`` the letter ``q-1`` is written after every ``t``-th
    interval that is followed by another interval.
    """
    model = interval_model(q, t, S, distinguished)
    if rng is None:
        rng = np.random.default_rng(seed)
    out = []
    for k in range(num_intervals):
        if model.distinguished is not None and k and k % model.t == 0:
            out.append(model.distinguished)
        part = model.parts[k % model.t]
        out.extend(part[i] for i in rng.permutation(model.S))
    return _word(out, q)
