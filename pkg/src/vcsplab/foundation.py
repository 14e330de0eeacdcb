"""Core vocabulary: domains, cost functions, languages, instances, operations.

Everything here is immutable after construction and safe to share.  Tuples
over a domain are indexed row-major into flat tables:
``index(t) = sum(t[i] * size**(m-1-i))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import VcspError
from .rationals import rat


def tuple_index(t: Sequence[int], size: int) -> int:
    idx = 0
    for x in t:
        idx = idx * size + x
    return idx


def index_tuple(idx: int, size: int, arity: int) -> tuple[int, ...]:
    out = [0] * arity
    for i in range(arity - 1, -1, -1):
        out[i] = idx % size
        idx //= size
    return tuple(out)


def all_tuples(size: int, arity: int) -> Iterator[tuple[int, ...]]:
    """All of D^arity in row-major (lexicographic) order."""
    return itertools.product(range(size), repeat=arity)


@dataclass(frozen=True)
class Domain:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise VcspError("domain size must be >= 1")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise VcspError("labels must have one entry per element")
            if len(set(self.labels)) != self.size:
                raise VcspError("labels must be distinct")

    def elements(self) -> range:
        return range(self.size)

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)


@dataclass(frozen=True)
class CostFunction:
    """Total table of nonnegative exact rationals over D^arity."""

    name: str
    arity: int
    domain: Domain
    table: tuple[Fraction, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise VcspError(f"{self.name}: arity must be >= 1")
        expected = self.domain.size ** self.arity
        if len(self.table) != expected:
            raise VcspError(f"{self.name}: table has {len(self.table)} entries, expected {expected}")
        for v in self.table:
            if not isinstance(v, Fraction):
                raise VcspError(f"{self.name}: table entries must be Fractions")
            if v < 0:
                raise VcspError(f"{self.name}: negative cost {v}")

    @classmethod
    def from_values(cls, name: str, arity: int, domain: Domain, values) -> "CostFunction":
        return cls(name, arity, domain, tuple(rat(v) for v in values))

    @classmethod
    def from_callable(cls, name: str, arity: int, domain: Domain, fn) -> "CostFunction":
        return cls(name, arity, domain,
                   tuple(rat(fn(*t)) for t in all_tuples(domain.size, arity)))

    def evaluate(self, t: Sequence[int]) -> Fraction:
        if len(t) != self.arity:
            raise VcspError(f"{self.name}: expected {self.arity} arguments, got {len(t)}")
        size = self.domain.size
        for x in t:
            if not 0 <= x < size:
                raise VcspError(f"{self.name}: argument {x} outside domain of size {size}")
        return self.table[tuple_index(t, size)]

    def __call__(self, *args: int) -> Fraction:
        return self.evaluate(args)


def evaluate(f: CostFunction, t: Sequence[int]) -> Fraction:
    return f.evaluate(t)


@dataclass(frozen=True)
class ValuedLanguage:
    """A named finite set of cost functions over one domain."""

    domain: Domain
    functions: tuple[CostFunction, ...]

    def __post_init__(self):
        names = [f.name for f in self.functions]
        if len(set(names)) != len(names):
            raise VcspError("function names must be distinct")
        for f in self.functions:
            if f.domain != self.domain:
                raise VcspError(f"{f.name}: domain differs from the language's")

    def get(self, name: str) -> CostFunction:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    def __iter__(self):
        return iter(self.functions)

    def __len__(self):
        return len(self.functions)


@dataclass(frozen=True)
class Constraint:
    weight: Fraction
    function: CostFunction
    scope: tuple[str, ...]

    def __post_init__(self):
        if self.weight < 0:
            raise VcspError("constraint weight must be >= 0")
        if len(self.scope) != self.function.arity:
            raise VcspError(f"scope length {len(self.scope)} != arity {self.function.arity} of {self.function.name}")


@dataclass(frozen=True)
class VcspInstance:
    """Weighted sum of scoped cost-function applications."""

    domain: Domain
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise VcspError("variables must be distinct")
        declared = set(self.variables)
        for c in self.constraints:
            if c.function.domain != self.domain:
                raise VcspError(f"{c.function.name}: domain differs from the instance's")
            for v in c.scope:
                if v not in declared:
                    raise VcspError(f"scope variable {v!r} not declared")


Assignment = Mapping[str, int]


def instance_value(instance: VcspInstance, h: Assignment) -> Fraction:
    """Exact measure of an assignment: sum of weight * f(h(scope))."""
    for v in instance.variables:
        if v not in h:
            raise VcspError(f"assignment misses variable {v!r}")
    total = Fraction(0)
    for c in instance.constraints:
        total += c.weight * c.function.evaluate(tuple(h[v] for v in c.scope))
    return total


@dataclass(frozen=True)
class Operation:
    """A total mapping D^m -> D^k, stored as a flat table of output tuples.

    Plain operations have out_arity 1; generalised mappings (used by the
    Markov-chain machinery) have out_arity >= 2.
    """

    in_arity: int
    out_arity: int
    domain: Domain
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = self.domain.size
        if self.in_arity < 1 or self.out_arity < 1:
            raise VcspError("operation arities must be >= 1")
        if len(self.table) != size ** self.in_arity:
            raise VcspError("operation table has wrong length")
        for out in self.table:
            if len(out) != self.out_arity:
                raise VcspError("operation table entry has wrong width")
            for x in out:
                if not 0 <= x < size:
                    raise VcspError("operation table entry outside domain")

    @classmethod
    def from_callable(cls, in_arity: int, out_arity: int, domain: Domain, fn) -> "Operation":
        rows = []
        for t in all_tuples(domain.size, in_arity):
            out = fn(*t)
            if out_arity == 1 and isinstance(out, int):
                out = (out,)
            rows.append(tuple(out))
        return cls(in_arity, out_arity, domain, tuple(rows))

    @classmethod
    def from_unary_images(cls, domain: Domain, images: Sequence[int]) -> "Operation":
        return cls(1, 1, domain, tuple((x,) for x in images))

    @classmethod
    def identity_map(cls, arity: int, domain: Domain) -> "Operation":
        """The identity in D^m -> D^m."""
        return cls(arity, arity, domain, tuple(t for t in all_tuples(domain.size, arity)))

    @classmethod
    def projection(cls, arity: int, coord: int, domain: Domain) -> "Operation":
        return cls(arity, 1, domain, tuple((t[coord],) for t in all_tuples(domain.size, arity)))

    def apply(self, args: Sequence[int]) -> tuple[int, ...]:
        return self.table[tuple_index(args, self.domain.size)]

    def apply1(self, args: Sequence[int]) -> int:
        out = self.apply(args)
        if len(out) != 1:
            raise VcspError("apply1 on a mapping with out_arity != 1")
        return out[0]

    def __call__(self, *args: int):
        out = self.apply(args)
        return out[0] if self.out_arity == 1 else out

    def coordinate(self, i: int) -> "Operation":
        """Coordinate i of the mapping as a plain operation."""
        return Operation(self.in_arity, 1, self.domain, tuple((out[i],) for out in self.table))

    def image(self) -> tuple[int, ...]:
        """Sorted set of elements appearing in the output tables."""
        return tuple(sorted({x for out in self.table for x in out}))


def apply_componentwise(g: Operation, tuples: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Apply g: D^m -> D^k position by position to m parallel tuples.

    Returns k tuples; position i of output j is component j of
    g(t1[i], ..., tm[i]).
    """
    if len(tuples) != g.in_arity:
        raise VcspError(f"expected {g.in_arity} tuples, got {len(tuples)}")
    n = len(tuples[0])
    for t in tuples:
        if len(t) != n:
            raise VcspError("tuples must have equal length")
    outs = [g.apply(tuple(t[i] for t in tuples)) for i in range(n)]
    return tuple(tuple(out[j] for out in outs) for j in range(g.out_arity))


@dataclass(frozen=True)
class OpPredicates:
    idempotent: bool
    symmetric: bool
    cyclic: bool
    injective: bool | None  # unary operations only


def op_predicates(g: Operation) -> OpPredicates:
    """Exhaustive table checks; g must be a plain operation."""
    if g.out_arity != 1:
        raise VcspError("op_predicates is defined for out_arity 1")
    size = g.domain.size
    m = g.in_arity
    idem = all(g.apply1((x,) * m) == x for x in range(size))
    symmetric = True
    cyclic = True
    for t in all_tuples(size, m):
        v = g.apply1(t)
        if cyclic and g.apply1(t[1:] + t[:1]) != v:
            cyclic = False
        if symmetric:
            for p in itertools.permutations(t):
                if g.apply1(p) != v:
                    symmetric = False
                    break
        if not symmetric and not cyclic:
            break
    injective = None
    if m == 1:
        images = [g.apply1((x,)) for x in range(size)]
        injective = len(set(images)) == size
    return OpPredicates(idempotent=idem, symmetric=symmetric, cyclic=cyclic, injective=injective)


def is_injective(g: Operation) -> bool:
    if g.in_arity != 1 or g.out_arity != 1:
        raise VcspError("injectivity is defined for unary operations")
    return len({g.apply1((x,)) for x in range(g.domain.size)}) == g.domain.size


@dataclass(frozen=True)
class FractionalOperation:
    """A probability distribution over generalised operations of one shape.

    Weights are strictly positive and sum to exactly 1; the support is
    stored in canonical (table-sorted) order so equal distributions compare
    and serialize identically.
    """

    in_arity: int
    out_arity: int
    terms: tuple[tuple[Operation, Fraction], ...]

    def __post_init__(self):
        if not self.terms:
            raise VcspError("fractional operation needs a nonempty support")
        total = Fraction(0)
        seen = set()
        for g, w in self.terms:
            if g.in_arity != self.in_arity or g.out_arity != self.out_arity:
                raise VcspError("support operation has mismatched arity")
            if g.domain != self.terms[0][0].domain:
                raise VcspError("support operations must share a domain")
            if w <= 0:
                raise VcspError("weights must be > 0")
            if g.table in seen:
                raise VcspError("duplicate support operation")
            seen.add(g.table)
            total += w
        if total != 1:
            raise VcspError(f"weights must sum to 1, got {total}")
        tables = [g.table for g, _ in self.terms]
        if tables != sorted(tables):
            raise VcspError("terms must be in canonical table order; use FractionalOperation.make")

    @classmethod
    def make(cls, weights: Mapping[Operation, Fraction] | Sequence[tuple[Operation, Fraction]]) -> "FractionalOperation":
        """Build from op -> weight pairs; merges duplicates, drops zeros, sorts."""
        if isinstance(weights, Mapping):
            pairs = list(weights.items())
        else:
            pairs = list(weights)
        merged: dict[Operation, Fraction] = {}
        for g, w in pairs:
            w = rat(w)
            if w == 0:
                continue
            merged[g] = merged.get(g, Fraction(0)) + w
        if not merged:
            raise VcspError("fractional operation needs a nonempty support")
        terms = tuple(sorted(merged.items(), key=lambda item: item[0].table))
        g0 = terms[0][0]
        return cls(g0.in_arity, g0.out_arity, terms)

    @classmethod
    def chi(cls, g: Operation) -> "FractionalOperation":
        return cls.make([(g, Fraction(1))])

    @property
    def domain(self) -> Domain:
        return self.terms[0][0].domain

    def support(self) -> tuple[Operation, ...]:
        return tuple(g for g, _ in self.terms)

    def weight(self, g: Operation) -> Fraction:
        for op, w in self.terms:
            if op == g:
                return w
        return Fraction(0)

    def items(self) -> tuple[tuple[Operation, Fraction], ...]:
        return self.terms


@dataclass(frozen=True)
class UnaryFunctionPair:
    """A unary u and a binary h over the same domain: the normalised
    hardness-witness shape (u minimises exactly on a pair {a,b}, and h has
    h(a,b) = h(b,a) strictly below the equal diagonal values)."""

    u: CostFunction
    h: CostFunction

    def __post_init__(self):
        if self.u.arity != 1 or self.h.arity != 2:
            raise VcspError("expected a unary u and binary h")
        if self.u.domain != self.h.domain:
            raise VcspError("u and h must share a domain")
