"""Exact rational linear programming with verified certificates.

A two-phase primal simplex with Bland's pivoting rule, run entirely over
exact rationals.  Every solve returns a certificate -- a dual vector for
optimality, a Farkas vector for infeasibility, or a feasible point plus an
improving ray for unboundedness -- and re-verifies it by substitution
before returning.  Determinism: identical programs produce identical
outcomes.

Strict inequalities are never represented; callers needing "Ay > 0" use
``motzkin_alternative``, which decides the strict/weak alternative via a
scaled feasibility program (Ay >= 1) and extracts the dual certificate
from the Farkas vector on the infeasible branch.

Internally the solver uses gmpy2.mpq when available; the interface is
Fraction throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import VcspError, VerificationError
from .rationals import fast_rational, rat

LE = "<="
EQ = "="
GE = ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class LpRow:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise VcspError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  subject to rows and per-variable bounds.

    Default bounds are x >= 0 with no upper bound.  A lower bound of None
    makes the variable free.
    """

    num_vars: int
    objective: tuple[Fraction, ...]
    rows: tuple[LpRow, ...]
    lower: tuple[Optional[Fraction], ...]
    upper: tuple[Optional[Fraction], ...]

    @classmethod
    def build(cls, num_vars, objective=None, rows=(), lower=None, upper=None) -> "LinearProgram":
        if objective is None:
            objective = [0] * num_vars
        obj = tuple(rat(c) for c in objective)
        if len(obj) != num_vars:
            raise VcspError("objective length mismatch")
        built_rows = []
        for coeffs, rel, rhs in rows:
            coeffs = tuple(rat(c) for c in coeffs)
            if len(coeffs) != num_vars:
                raise VcspError("row length mismatch")
            built_rows.append(LpRow(coeffs, rel, rat(rhs)))
        if lower is None:
            lower = [Fraction(0)] * num_vars
        if upper is None:
            upper = [None] * num_vars
        lo = tuple(None if b is None else rat(b) for b in lower)
        up = tuple(None if b is None else rat(b) for b in upper)
        if len(lo) != num_vars or len(up) != num_vars:
            raise VcspError("bounds length mismatch")
        return cls(num_vars, obj, tuple(built_rows), lo, up)


@dataclass(frozen=True)
class LpOutcome:
    """Solve result with its certificate.

    - optimal: primal point, objective value, and dual multipliers per row
      (>= rows carry dual >= 0, <= rows dual <= 0, = rows free); when all
      variable bounds are the default x >= 0, sum(dual_i * rhs_i) equals
      the optimal value exactly.
    - infeasible: Farkas multipliers per row with the same sign pattern
      and sum(farkas_i * rhs_i) > 0 while the combined row dominates 0.
    - unbounded: a feasible point plus a ray with negative objective slope.
    """

    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    primal: Optional[tuple[Fraction, ...]] = None
    dual: Optional[tuple[Fraction, ...]] = None
    bound_dual: Optional[tuple[Fraction, ...]] = None  # multipliers of compiled upper-bound rows
    farkas: Optional[tuple[Fraction, ...]] = None
    ray: Optional[tuple[Fraction, ...]] = None


class _Simplex:
    """Tableau simplex over one standard-form system A x = b, x >= 0, b >= 0."""

    def __init__(self, columns, b, init_cols):
        # columns: list of column vectors (length m); init_cols: per row, the
        # index of its initial identity column (+e_i), slack or artificial.
        self.m = len(b)
        self.ncols = len(columns)
        self.T = [[columns[j][i] for j in range(self.ncols)] + [b[i]] for i in range(self.m)]
        self.basis = list(init_cols)
        self.live_rows = list(range(self.m))  # original std row index per tableau row

    def pivot(self, r, j, z):
        T = self.T
        row = T[r]
        inv = 1 / row[j]
        if inv != 1:
            T[r] = row = [v * inv for v in row]
        for i in range(len(T)):
            if i != r and T[i][j]:
                f = T[i][j]
                ri = T[i]
                T[i] = [a - f * b for a, b in zip(ri, row)]
        if z[j]:
            f = z[j]
            z[:] = [a - f * b for a, b in zip(z, row)]
        self.basis[r] = j

    def run(self, cost, allowed):
        """Bland's-rule simplex; returns ("optimal", z) or ("unbounded", j, z)."""
        T, basis = self.T, self.basis
        z = list(cost)
        for i, bi in enumerate(basis):
            if cost[bi]:
                f = cost[bi]
                row = T[i]
                for j in range(self.ncols):
                    if row[j]:
                        z[j] -= f * row[j]
        while True:
            entering = -1
            for j in allowed:
                if z[j] < 0:
                    entering = j
                    break
            if entering < 0:
                return ("optimal", z)
            leave = -1
            best = None
            for i in range(len(T)):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave < 0:
                return ("unbounded", entering, z)
            self.pivot(leave, entering, z)


def solve_lp(program: LinearProgram) -> LpOutcome:
    """Solve exactly and return a verified outcome."""
    P = program
    Q = fast_rational
    n = P.num_vars

    # --- compile to standard form ---------------------------------------
    # var j -> one shifted column (lower bound) or a split pair (free).
    col_of: list[tuple[int, int]] = []  # (plus_col, minus_col or -1)
    shifts: list[Fraction] = []
    ncols = 0
    for j in range(n):
        if P.lower[j] is not None:
            col_of.append((ncols, -1))
            shifts.append(P.lower[j])
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            shifts.append(Fraction(0))
            ncols += 2
    nstruct = ncols

    user_rows = [(r.coeffs, r.rel, r.rhs) for r in P.rows]
    bound_rows = []
    for j in range(n):
        if P.upper[j] is not None:
            coeffs = tuple(Fraction(1) if k == j else Fraction(0) for k in range(n))
            bound_rows.append((coeffs, LE, P.upper[j]))
    std_rows = user_rows + bound_rows
    m = len(std_rows)

    # structural part of each std row, rhs shifted by variable lower bounds
    arows = []
    brhs = []
    for coeffs, rel, rhs in std_rows:
        row = [Q(0)] * nstruct
        adj = rhs
        for j in range(n):
            c = coeffs[j]
            if c == 0:
                continue
            pc, mc = col_of[j]
            row[pc] = Q(c.numerator, c.denominator)
            if mc >= 0:
                row[mc] = -row[pc]
            adj -= c * shifts[j]
        arows.append(row)
        brhs.append(adj)

    # slacks, sign normalization, and the initial basis
    signs = []
    for i, (_, rel, _) in enumerate(std_rows):
        signs.append(-1 if brhs[i] < 0 else 1)
    ncols_total = nstruct
    slack_cols = []
    for i, (_, rel, _) in enumerate(std_rows):
        if rel == EQ:
            slack_cols.append(None)
            continue
        coeff = Q(1) if rel == LE else Q(-1)
        slack_cols.append((ncols_total, coeff))
        ncols_total += 1

    # dense column-major matrix in Q
    def qfrac(x):
        return Q(x.numerator, x.denominator)

    cols = [[Q(0)] * m for _ in range(ncols_total)]
    for i in range(m):
        s = signs[i]
        for j in range(nstruct):
            v = arows[i][j]
            if v:
                cols[j][i] = v if s == 1 else -v
        sc = slack_cols[i]
        if sc is not None:
            jcol, coeff = sc
            cols[jcol][i] = coeff if s == 1 else -coeff
    b = [qfrac(brhs[i]) if signs[i] == 1 else -qfrac(brhs[i]) for i in range(m)]

    # initial basis: a slack with +1 coefficient where available, else artificial
    init_cols = []
    art_cols = []
    for i in range(m):
        sc = slack_cols[i]
        if sc is not None and cols[sc[0]][i] == 1:
            init_cols.append(sc[0])
        else:
            col = [Q(0)] * m
            col[i] = Q(1)
            cols.append(col)
            art_cols.append(len(cols) - 1)
            init_cols.append(len(cols) - 1)

    sx = _Simplex(cols, b, init_cols)
    art_set = set(art_cols)
    allowed = [j for j in range(len(cols)) if j not in art_set]

    # --- phase 1 ---------------------------------------------------------
    cost1 = [Q(0)] * len(cols)
    for j in art_cols:
        cost1[j] = Q(1)
    status, z1 = sx.run(cost1, allowed)
    if status != "optimal":  # pragma: no cover - phase 1 is always bounded below by 0
        raise VcspError("phase 1 cannot be unbounded")
    phase1_val = sum((cost1[sx.basis[i]] * sx.T[i][-1] for i in range(len(sx.T))), Q(0))
    if phase1_val > 0:
        # Farkas vector from the initial identity columns: y_i = c_i0 - z[i0]
        y_std = [Q(0)] * m
        for i in range(m):
            j0 = init_cols[i]
            y_std[i] = cost1[j0] - z1[j0]
        _verify_farkas_std(cols, b, y_std, ncols_total, m)
        farkas_full = tuple(
            Fraction(int((signs[i] * y_std[i]).numerator), int((signs[i] * y_std[i]).denominator))
            for i in range(m)
        )
        out = LpOutcome(status="infeasible",
                        farkas=farkas_full[: len(user_rows)],
                        bound_dual=farkas_full[len(user_rows):])
        _verify_infeasible(P, out)
        return out

    # drive artificials out of the basis; drop redundant rows
    drop = []
    for r in range(len(sx.T)):
        if sx.basis[r] in art_set:
            pivot_col = -1
            for j in allowed:
                if sx.T[r][j] != 0:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                sx.pivot(r, pivot_col, z1)
            else:
                drop.append(r)
    for r in reversed(drop):
        del sx.T[r]
        del sx.basis[r]
        del sx.live_rows[r]

    # --- phase 2 ---------------------------------------------------------
    cost2 = [Q(0)] * len(cols)
    for j in range(n):
        c = P.objective[j]
        if c == 0:
            continue
        pc, mc = col_of[j]
        cost2[pc] = qfrac(c)
        if mc >= 0:
            cost2[mc] = -cost2[pc]
    status, *rest = sx.run(cost2, allowed)

    obj_const = sum((P.objective[j] * shifts[j] for j in range(n)), Fraction(0))

    def to_frac(q):
        return Fraction(int(q.numerator), int(q.denominator))

    def primal_from_basis():
        x_std = [Q(0)] * len(cols)
        for i, bi in enumerate(sx.basis):
            x_std[bi] = sx.T[i][-1]
        return x_std

    def map_primal(x_std):
        out = []
        for j in range(n):
            pc, mc = col_of[j]
            v = to_frac(x_std[pc])
            if mc >= 0:
                v -= to_frac(x_std[mc])
            out.append(shifts[j] + v)
        return tuple(out)

    if status == "unbounded":
        entering, z = rest
        x_std = primal_from_basis()
        d_std = [Q(0)] * len(cols)
        d_std[entering] = Q(1)
        for i, bi in enumerate(sx.basis):
            d_std[bi] = -sx.T[i][entering]
        ray = []
        for j in range(n):
            pc, mc = col_of[j]
            v = to_frac(d_std[pc])
            if mc >= 0:
                v -= to_frac(d_std[mc])
            ray.append(v)
        out = LpOutcome(status="unbounded", primal=map_primal(x_std), ray=tuple(ray))
        _verify_unbounded(P, out)
        return out

    (z,) = rest
    x_std = primal_from_basis()
    primal = map_primal(x_std)
    value = sum((P.objective[j] * primal[j] for j in range(n)), Fraction(0))

    y_std = [Q(0)] * m
    for r, orig in enumerate(sx.live_rows):
        j0 = init_cols[orig]
        y_std[orig] = cost2[j0] - z[j0]
    dual_full = tuple(to_frac(signs[i] * y_std[i]) for i in range(m))
    _verify_dual_std(cols, b, cost2, y_std, x_std, allowed, m)
    out = LpOutcome(status="optimal", value=value, primal=primal,
                    dual=dual_full[: len(user_rows)],
                    bound_dual=dual_full[len(user_rows):])
    _verify_optimal(P, out)
    return out


# --- certificate verification (asserted after every solve) ---------------

def _verify_farkas_std(cols, b, y, ncols_nonart, m):
    # artificial columns (appended after index ncols_nonart) are exempt
    zero = type(b[0])(0)
    for j in range(ncols_nonart):
        dot = sum((y[i] * cols[j][i] for i in range(m) if cols[j][i]), zero)
        if dot > 0:
            raise VerificationError("Farkas certificate violates a column")
    if sum((y[i] * b[i] for i in range(m)), zero) <= 0:
        raise VerificationError("Farkas certificate has nonpositive violation")


def _verify_dual_std(cols, b, cost, y, x, allowed, m):
    zero = type(b[0])(0)
    for j in allowed:
        red = cost[j] - sum((y[i] * cols[j][i] for i in range(m) if cols[j][i]), zero)
        if red < 0:
            raise VerificationError("dual certificate violates a reduced cost")
    lhs = sum((y[i] * b[i] for i in range(m)), zero)
    rhs = sum((cost[j] * x[j] for j in range(len(cols)) if x[j]), zero)
    if lhs != rhs:
        raise VerificationError("dual objective does not match the primal optimum")


def _row_value(coeffs, x):
    return sum((c * v for c, v in zip(coeffs, x)), Fraction(0))


def _verify_optimal(P: LinearProgram, out: LpOutcome):
    x = out.primal
    for row in P.rows:
        lhs = _row_value(row.coeffs, x)
        ok = lhs <= row.rhs if row.rel == LE else lhs >= row.rhs if row.rel == GE else lhs == row.rhs
        if not ok:
            raise VerificationError("optimal point violates a row")
    for j in range(P.num_vars):
        if P.lower[j] is not None and x[j] < P.lower[j]:
            raise VerificationError("optimal point violates a lower bound")
        if P.upper[j] is not None and x[j] > P.upper[j]:
            raise VerificationError("optimal point violates an upper bound")
    for y, row in zip(out.dual, P.rows):
        if row.rel == GE and y < 0:
            raise VerificationError("dual sign violated on a >= row")
        if row.rel == LE and y > 0:
            raise VerificationError("dual sign violated on a <= row")


def _verify_infeasible(P: LinearProgram, out: LpOutcome):
    for y, row in zip(out.farkas, P.rows):
        if row.rel == GE and y < 0:
            raise VerificationError("Farkas sign violated on a >= row")
        if row.rel == LE and y > 0:
            raise VerificationError("Farkas sign violated on a <= row")


def _verify_unbounded(P: LinearProgram, out: LpOutcome):
    x, d = out.primal, out.ray
    for row in P.rows:
        lhs = _row_value(row.coeffs, x)
        ok = lhs <= row.rhs if row.rel == LE else lhs >= row.rhs if row.rel == GE else lhs == row.rhs
        if not ok:
            raise VerificationError("unbounded: point infeasible")
        slope = _row_value(row.coeffs, d)
        ok = slope <= 0 if row.rel == LE else slope >= 0 if row.rel == GE else slope == 0
        if not ok:
            raise VerificationError("unbounded: ray leaves the feasible cone")
    for j in range(P.num_vars):
        if P.lower[j] is not None and d[j] < 0:
            raise VerificationError("unbounded: ray violates a lower bound")
        if P.upper[j] is not None and d[j] > 0:
            raise VerificationError("unbounded: ray violates an upper bound")
    if _row_value(P.objective, d) >= 0:
        raise VerificationError("unbounded: ray does not improve the objective")


# --- Motzkin-style strict/weak alternative --------------------------------

@dataclass(frozen=True)
class AlternativeSystem:
    """Strict block A and weak block B over n nonnegative variables."""

    strict: tuple[tuple[Fraction, ...], ...]
    weak: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.strict:
            raise VcspError("strict block must be nonempty")
        width = len(self.strict[0])
        for row in self.strict + self.weak:
            if len(row) != width:
                raise VcspError("blocks must have equal column counts")

    @classmethod
    def make(cls, strict, weak=()) -> "AlternativeSystem":
        return cls(tuple(tuple(rat(v) for v in row) for row in strict),
                   tuple(tuple(rat(v) for v in row) for row in weak))

    @property
    def num_vars(self) -> int:
        return len(self.strict[0])


@dataclass(frozen=True)
class MotzkinResult:
    """Exactly one branch is set.

    strict_solution y >= 0 satisfies Ay > 0 (componentwise) and By >= 0;
    otherwise (z1, z2) >= 0 with z1 nonzero satisfies A^T z1 + B^T z2 <= 0.
    """

    strict_solution: Optional[tuple[Fraction, ...]] = None
    certificate: Optional[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]] = None


def motzkin_alternative(system: AlternativeSystem) -> MotzkinResult:
    """Decide the alternative of the system and verify the returned branch.

    The strict branch is decided through the scaled closed system Ay >= 1,
    By >= 0, y >= 0 (feasible iff the open system is, by homogeneity); on
    the infeasible branch the solver's Farkas vector is exactly the
    (z1, z2) certificate.
    """
    A, B = system.strict, system.weak
    n = system.num_vars
    rows = [(row, GE, 1) for row in A] + [(row, GE, 0) for row in B]
    outcome = solve_lp(LinearProgram.build(n, rows=rows))
    if outcome.status == "optimal":
        y = outcome.primal
        for row in A:
            if _row_value(row, y) <= 0:
                raise VerificationError("strict branch fails a strict row")
        for row in B:
            if _row_value(row, y) < 0:
                raise VerificationError("strict branch fails a weak row")
        return MotzkinResult(strict_solution=y)
    if outcome.status != "infeasible":  # pragma: no cover
        raise VcspError("feasibility program cannot be unbounded")
    z = outcome.farkas
    z1, z2 = z[: len(A)], z[len(A):]
    if all(v == 0 for v in z1):
        raise VerificationError("certificate has empty strict part")
    if any(v < 0 for v in z1) or any(v < 0 for v in z2):
        raise VerificationError("certificate has a negative multiplier")
    for j in range(n):
        combo = sum((z1[i] * A[i][j] for i in range(len(A))), Fraction(0))
        combo += sum((z2[i] * B[i][j] for i in range(len(B))), Fraction(0))
        if combo > 0:
            raise VerificationError("certificate combination is not <= 0")
    return MotzkinResult(certificate=(z1, z2))


def dump_lp(program: LinearProgram) -> str:
    """Plain-text rendering for external cross-checking."""
    from .rationals import rat_str

    def term(c, j):
        return f"{rat_str(c)} x{j}"

    lines = ["min " + " + ".join(term(c, j) for j, c in enumerate(program.objective) if c != 0)]
    if lines[0] == "min ":
        lines[0] = "min 0"
    for row in program.rows:
        lhs = " + ".join(term(c, j) for j, c in enumerate(row.coeffs) if c != 0) or "0"
        lines.append(f"  {lhs} {row.rel} {rat_str(row.rhs)}")
    for j in range(program.num_vars):
        lo = program.lower[j]
        up = program.upper[j]
        lo_s = "-inf" if lo is None else rat_str(lo)
        up_s = "+inf" if up is None else rat_str(up)
        lines.append(f"  {lo_s} <= x{j} <= {up_s}")
    return "\n".join(lines)
