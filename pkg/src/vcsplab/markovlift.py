"""Markov-chain construction of symmetric fractional polymorphisms.

From a binary fractional polymorphism, a closure graph of 2->2 mappings is
grown from the identity; the lazy chain on that graph is driven to its exact
limit distribution, giving a 2->2 polymorphism supported on the recurrent
states.  Sorting and splitting its coordinates yields a binary symmetric
polymorphism, and the same machinery at width m lifts a symmetric
(m-1)-ary polymorphism to arity m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .caps import Caps, DESK
from .errors import CapExceeded, VcspError, VerificationError
from .foundation import (
    FractionalOperation,
    Operation,
    ValuedLanguage,
    all_tuples,
    apply_componentwise,
    op_predicates,
)
from .langops import check_fractional_polymorphism, f_power_mean
from .linalg import gauss_solve


def _step(g: Operation, h: Operation) -> Operation:
    """One chain step: coordinate i of the successor applies h to all
    coordinates of g except i (for width 2 this is (h(g1,g2), h(g2,g1)))."""
    m = g.out_arity
    if h.in_arity != (2 if m == 2 else m - 1):
        raise VcspError("step operation has incompatible arity")
    table = []
    for out in g.table:
        if m == 2:
            row = (h.apply1((out[0], out[1])), h.apply1((out[1], out[0])))
        else:
            row = tuple(h.apply1(out[:i] + out[i + 1:]) for i in range(m))
        table.append(row)
    return Operation(g.in_arity, m, g.domain, tuple(table))


@dataclass(frozen=True)
class OperationGraph:
    """Closure of the identity mapping under chain steps by the seed's
    support operations; edges carry the support index of the step."""

    vertices: tuple[Operation, ...]
    edges: tuple[tuple[tuple[int, int], ...], ...]  # per vertex: (support idx, successor idx)
    seed: FractionalOperation

    @property
    def identity_index(self) -> int:
        return 0


def build_closure_graph(omega: FractionalOperation, *, caps: Caps = DESK,
                        width: Optional[int] = None) -> OperationGraph:
    """Breadth-first closure of the width->width identity under steps.

    For the default width 2 the seed must be binary; every vertex then has
    the paired form (g, g-swapped).  For width m >= 3 the seed must have
    arity m-1.
    """
    if omega.out_arity != 1:
        raise VcspError("seed must be a distribution over plain operations")
    m = 2 if width is None else width
    if m == 2:
        if omega.in_arity != 2:
            raise VcspError("width-2 closure needs a binary seed")
    elif omega.in_arity != m - 1:
        raise VcspError(f"width-{m} closure needs a seed of arity {m - 1}")
    domain = omega.domain
    support = omega.support()
    start = Operation.identity_map(m, domain)
    vertices = [start]
    index = {start.table: 0}
    edges: list[tuple[tuple[int, int], ...]] = []
    frontier = [0]
    while frontier:
        next_frontier = []
        for v in frontier:
            out = []
            for hi, h in enumerate(support):
                succ = _step(vertices[v], h)
                j = index.get(succ.table)
                if j is None:
                    j = len(vertices)
                    if j >= caps.closure_vertices:
                        raise CapExceeded(
                            f"closure graph exceeds {caps.closure_vertices} vertices")
                    index[succ.table] = j
                    vertices.append(succ)
                    next_frontier.append(j)
                out.append((hi, j))
            edges.append(tuple(out))
        frontier = next_frontier
    graph = OperationGraph(tuple(vertices), tuple(edges), omega)
    _verify_graph(graph, m)
    return graph


def _swap2(g: Operation) -> tuple[tuple[int, ...], ...]:
    """Table of the coordinate-swapped companion of a 2->2 mapping."""
    size = g.domain.size
    return tuple(tuple(reversed(g.apply((y, x)))) for x, y in all_tuples(size, 2))


def _verify_graph(graph: OperationGraph, width: int):
    if width == 2:
        for g in graph.vertices:
            if g.table != _swap2(g):
                raise VerificationError("width-2 closure vertex lacks the paired form")


@dataclass(frozen=True)
class MarkovChain:
    """Lazy chain on a closure graph: at least half the mass stays put."""

    graph: OperationGraph
    transition: tuple[tuple[Fraction, ...], ...]


def build_chain(graph: OperationGraph) -> MarkovChain:
    weights = [w for _, w in graph.seed.items()]
    n = len(graph.vertices)
    rows = []
    for v in range(n):
        row = [Fraction(0)] * n
        row[v] += Fraction(1, 2)
        for hi, j in graph.edges[v]:
            row[j] += weights[hi] / 2
        if sum(row, Fraction(0)) != 1 or row[v] < Fraction(1, 2):
            raise VerificationError("chain row is not lazy-stochastic")
        rows.append(tuple(row))
    return MarkovChain(graph, tuple(rows))


def strongly_connected_components(nvertices: int, succ) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components in reverse topological
    order (every edge leaves a later component or stays inside one)."""
    indices = [-1] * nvertices
    low = [0] * nvertices
    on_stack = [False] * nvertices
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(nvertices):
        if indices[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        indices[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if indices[w] == -1:
                    indices[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], indices[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == indices[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def recurrent_states(graph: OperationGraph) -> set[int]:
    """Vertices whose strongly connected component has no outgoing edge."""
    def succ(v):
        return [j for _, j in graph.edges[v]]

    comps = strongly_connected_components(len(graph.vertices), succ)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    recurrent: set[int] = set()
    for ci, comp in enumerate(comps):
        if all(comp_of[j] == ci for v in comp for j in succ(v)):
            recurrent.update(comp)
    return recurrent


def _sink_components(graph: OperationGraph) -> list[list[int]]:
    def succ(v):
        return [j for _, j in graph.edges[v]]

    comps = strongly_connected_components(len(graph.vertices), succ)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    return [sorted(comp) for ci, comp in enumerate(comps)
            if all(comp_of[j] == ci for v in comp for j in succ(v))]


def _component_stationary(chain: MarkovChain, comp: list[int]) -> dict[int, Fraction]:
    """Exact stationary distribution of the chain restricted to one sink
    component: solve lambda P = lambda with a normalisation row."""
    pos = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    # rows of (P^T - I); replace the first with the normalisation sum = 1
    matrix = []
    for i in range(k):
        row = [chain.transition[comp[j]][comp[i]] for j in range(k)]
        row[i] -= 1
        matrix.append(row)
    matrix[0] = [Fraction(1)] * k
    rhs = [Fraction(1)] + [Fraction(0)] * (k - 1)
    lam = gauss_solve(matrix, rhs)
    for v in lam:
        if v <= 0:
            raise VerificationError("stationary distribution must be strictly positive")
    # residual check: exact fixed point
    for i in range(k):
        if sum((lam[j] * chain.transition[comp[j]][comp[i]] for j in range(k)),
               Fraction(0)) != lam[i]:
            raise VerificationError("stationary distribution is not an exact fixed point")
    return {v: lam[pos[v]] for v in comp}


def limit_distribution(chain: MarkovChain, sigma: dict[int, Fraction]) -> dict[int, Fraction]:
    """Exact limit of sigma under the chain: absorption probabilities into
    each sink component times its stationary distribution."""
    graph = chain.graph
    n = len(graph.vertices)
    sinks = _sink_components(graph)
    in_sink = {v: si for si, comp in enumerate(sinks) for v in comp}
    transient = [v for v in range(n) if v not in in_sink]
    tpos = {v: i for i, v in enumerate(transient)}
    absorb = [[Fraction(0)] * len(sinks) for _ in transient]
    if transient:
        k = len(transient)
        matrix = [[(Fraction(1) if i == j else Fraction(0)) - chain.transition[transient[i]][transient[j]]
                   for j in range(k)] for i in range(k)]
        for si, comp in enumerate(sinks):
            rhs = [sum((chain.transition[t][v] for v in comp), Fraction(0)) for t in transient]
            q = gauss_solve(matrix, rhs)
            for i in range(k):
                absorb[i][si] = q[i]
        for i in range(k):
            if sum(absorb[i], Fraction(0)) != 1:
                raise VerificationError("absorption probabilities do not sum to 1")
    alpha = [Fraction(0)] * len(sinks)
    for v, w in sigma.items():
        if v in in_sink:
            alpha[in_sink[v]] += w
        else:
            for si in range(len(sinks)):
                alpha[si] += w * absorb[tpos[v]][si]
    limit: dict[int, Fraction] = {}
    for si, comp in enumerate(sinks):
        if alpha[si] == 0:
            continue
        lam = _component_stationary(chain, comp)
        for v, w in lam.items():
            limit[v] = limit.get(v, Fraction(0)) + alpha[si] * w
    if sum(limit.values(), Fraction(0)) != 1:
        raise VerificationError("limit distribution does not sum to 1")
    for v in range(n):
        if sum((limit.get(w, Fraction(0)) * chain.transition[w][v] for w in limit),
               Fraction(0)) != limit.get(v, Fraction(0)):
            raise VerificationError("limit distribution is not stationary for the full chain")
    return limit


def _swap_op(h: Operation) -> Operation:
    size = h.domain.size
    return Operation(2, 1, h.domain,
                     tuple((h.apply1((y, x)),) for x, y in all_tuples(size, 2)))


def stationary_rho(language: ValuedLanguage, omega: FractionalOperation, *,
                   caps: Caps = DESK) -> tuple[FractionalOperation, OperationGraph]:
    """The 2->2 fractional polymorphism supported on the recurrent states.

    Starts the lazy chain in the distribution placing omega(h) on the
    paired mapping (h, h-swapped) and computes its exact limit; verified
    against the language's improvement inequality.
    """
    seed_check = check_fractional_polymorphism(language, omega)
    if not seed_check.holds:
        raise VcspError("seed is not a fractional polymorphism of the language")
    graph = build_closure_graph(omega, caps=caps)
    chain = build_chain(graph)
    index = {g.table: i for i, g in enumerate(graph.vertices)}
    sigma: dict[int, Fraction] = {}
    for h, w in omega.items():
        hb = _swap_op(h)
        table = tuple((h.apply1(t), hb.apply1(t)) for t in all_tuples(h.domain.size, 2))
        v = index.get(table)
        if v is None:
            raise VerificationError("start state (h, h-swapped) missing from the closure")
        sigma[v] = sigma.get(v, Fraction(0)) + w
    limit = limit_distribution(chain, sigma)
    rho = FractionalOperation.make([(graph.vertices[v], w) for v, w in limit.items()])
    recurrent = recurrent_states(graph)
    for v in limit:
        if v not in recurrent:
            raise VerificationError("limit mass on a non-recurrent state")
    check = check_fractional_polymorphism(language, rho)
    if not check.holds:
        raise VerificationError("stationary distribution is not a fractional polymorphism")
    return rho, graph


def submodular_pairs(rho: FractionalOperation) -> set[frozenset[int]]:
    """Edges {a,b} where exactly half the mass maps (a,b) to (a,a) and
    half to (b,b)."""
    if rho.out_arity != 2 or rho.in_arity != 2:
        raise VcspError("expected a 2->2 fractional operation")
    size = rho.domain.size
    edges = set()
    for a in range(size):
        for b in range(a + 1, size):
            wa = sum((w for g, w in rho.items() if g.apply((a, b)) == (a, a)), Fraction(0))
            wb = sum((w for g, w in rho.items() if g.apply((a, b)) == (b, b)), Fraction(0))
            if wa == wb == Fraction(1, 2):
                edges.add(frozenset((a, b)))
    return edges


def is_connected(size: int, edges: set[frozenset[int]]) -> bool:
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for e in edges:
            if v in e:
                for w in e:
                    if w not in seen:
                        seen.add(w)
                        frontier.append(w)
    return len(seen) == size


def exchange_property(language: ValuedLanguage, rho: FractionalOperation, *,
                      caps: Caps = DESK) -> Optional[tuple]:
    """Exhaustive check: for every support mapping, every family in its
    range, and every coordinate, the mean of f is invariant under swapping
    that coordinate between the rows.  Returns the first violation."""
    size = language.domain.size
    m = rho.out_arity
    for f in language.functions:
        n = f.arity
        caps.check_states(size ** (n * m), "exchange-property enumeration")
        for g in rho.support():
            ranges = set()
            for family in _families(size, n, m):
                ranges.add(apply_componentwise(g, family))
            for family in sorted(ranges):
                base = f_power_mean(f, family)
                for i in range(n):
                    for j1 in range(m):
                        for j2 in range(j1 + 1, m):
                            swapped = [list(t) for t in family]
                            swapped[j1][i], swapped[j2][i] = swapped[j2][i], swapped[j1][i]
                            if f_power_mean(f, [tuple(t) for t in swapped]) != base:
                                return (f, family, i, j1, j2)
    return None


def _families(size: int, n: int, m: int):
    import itertools
    return itertools.product(all_tuples(size, n), repeat=m)


def symmetrize(language: ValuedLanguage, rho: FractionalOperation, *,
               caps: Caps = DESK) -> FractionalOperation:
    """Sort each support mapping's output coordinates, then split the
    coordinates with equal weight; the result is a symmetric fractional
    polymorphism of the language of plain operations."""
    if rho.out_arity < 2:
        raise VcspError("expected a mapping-valued fractional operation")
    violation = exchange_property(language, rho, caps=caps)
    if violation is not None:
        raise VerificationError(f"exchange property fails: {violation[0].name} at "
                                f"{violation[1]} coordinate {violation[2]}")
    m = rho.out_arity
    weights: dict[Operation, Fraction] = {}
    for g, w in rho.items():
        sorted_table = tuple(tuple(sorted(out)) for out in g.table)
        for j in range(m):
            op = Operation(g.in_arity, 1, g.domain,
                           tuple((out[j],) for out in sorted_table))
            weights[op] = weights.get(op, Fraction(0)) + w / m
    result = FractionalOperation.make(weights)
    for op in result.support():
        if not op_predicates(op).symmetric:
            raise VerificationError("symmetrized support operation is not symmetric")
    check = check_fractional_polymorphism(language, result)
    if not check.holds:
        raise VerificationError("symmetrized distribution is not a fractional polymorphism")
    return result


def lift_arity(language: ValuedLanguage, omega: FractionalOperation,
               target_arity: int, *, caps: Caps = DESK) -> FractionalOperation:
    """Lift a symmetric polymorphism of arity m-1 to a symmetric
    polymorphism of arity m via the width-m chain."""
    m = target_arity
    if m < 3:
        raise VcspError("target arity must be >= 3")
    if omega.in_arity != m - 1 or omega.out_arity != 1:
        raise VcspError(f"need a seed of arity {m - 1}")
    for h in omega.support():
        if not op_predicates(h).symmetric:
            raise VcspError("seed operations must be symmetric")
    check = check_fractional_polymorphism(language, omega)
    if not check.holds:
        raise VcspError("seed is not a fractional polymorphism of the language")
    caps.check_states(language.domain.size ** m, "width-m mapping tables")
    graph = build_closure_graph(omega, caps=caps, width=m)
    chain = build_chain(graph)
    index = {g.table: i for i, g in enumerate(graph.vertices)}
    identity = graph.vertices[graph.identity_index]
    sigma: dict[int, Fraction] = {}
    for h, w in omega.items():
        v = index[_step(identity, h).table]
        sigma[v] = sigma.get(v, Fraction(0)) + w
    limit = limit_distribution(chain, sigma)
    rho = FractionalOperation.make([(graph.vertices[v], w) for v, w in limit.items()])
    recurrent = recurrent_states(graph)
    for v in limit:
        if v not in recurrent:
            raise VerificationError("limit mass on a non-recurrent state")
    return symmetrize(language, rho, caps=caps)
