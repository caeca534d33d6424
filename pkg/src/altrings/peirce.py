"""Peirce decomposition at a nontrivial idempotent and ring-side checkers.

The decomposition R = R11 + R12 + R21 + R22 is built from the operators
a -> e1*a and a -> a*e1 alone, so no unit is required.  The checkers
reduce universally quantified annihilator conditions to exact kernel
computations wherever the condition is linear in the quantified
variable; genuinely nonlinear conditions get three-valued verdicts.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field as dataclass_field

from .algebra import (
    Algebra,
    AlgebraElement,
    BudgetError,
    LinearMap,
    center,
    is_idempotent,
)
from .linalg import Matrix, Subspace, echelon, kernel, rank
from .verdict import ConditionVerdict, Verdict, combine


class PeirceError(ValueError):
    """Context construction failure; kind names the broken precondition."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


_SLOTS = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class PeirceContext:
    """Validated Peirce data at one idempotent."""

    algebra: Algebra
    e1: tuple
    projections: dict
    components: dict
    center: Subspace

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return tuple(self.components[s].dim for s in _SLOTS)

    def projection(self, i: int, j: int) -> LinearMap:
        return self.projections[(i, j)]

    def component(self, i: int, j: int) -> Subspace:
        return self.components[(i, j)]

    def e1_element(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.e1)

    def component_part(self, x, i: int, j: int) -> tuple:
        """Coordinates of the R_ij part of x."""
        coords = x.coords if isinstance(x, AlgebraElement) else tuple(x)
        return self.projections[(i, j)].apply_coords(coords)


def peirce_context(A: Algebra, e1) -> PeirceContext:
    """Build and validate the four projections and components at e1."""
    coords = A._coerce_coords(e1)
    check = is_idempotent(A, coords)
    if not check.idempotent:
        raise PeirceError("not_idempotent", "e1 does not satisfy e1*e1 = e1 (or is zero)")
    if not check.nontrivial:
        raise PeirceError("trivial_idempotent", "e1 is the multiplicative identity")

    F = A.field
    d = A.dim
    L1 = A.left_mult_matrix(coords)
    R1 = A.right_mult_matrix(coords)
    ident = Matrix.identity(F, d)

    # compatibility e1(a e1) = (e1 a)e1, needed for well-defined projections
    if L1 @ R1 != R1 @ L1:
        raise PeirceError(
            "decomposition_failure",
            "e1-(a)-e1 brackets disagree: e1(a e1) != (e1 a)e1 on some a",
        )

    pi = {
        (1, 1): L1 @ R1,
        (1, 2): L1 @ (ident - R1),
        (2, 1): (ident - L1) @ R1,
        (2, 2): (ident - L1) @ (ident - R1),
    }

    total = Matrix.zeros(F, d, d)
    for m in pi.values():
        total = total + m
    if total != ident:
        raise PeirceError("decomposition_failure", "projections do not sum to identity")
    for s, m in pi.items():
        if m @ m != m:
            raise PeirceError(
                "decomposition_failure", f"projection onto R{s[0]}{s[1]} is not idempotent"
            )
        for t, m2 in pi.items():
            if t != s and not (m @ m2).is_zero():
                raise PeirceError(
                    "decomposition_failure",
                    f"projections onto R{s[0]}{s[1]} and R{t[0]}{t[1]} overlap",
                )

    components = {
        s: Subspace.from_vectors(F, d, [m.column(j) for j in range(d)])
        for s, m in pi.items()
    }
    if sum(c.dim for c in components.values()) != d:
        raise PeirceError("decomposition_failure", "component dimensions do not sum to d")

    projections = {s: LinearMap(A, m) for s, m in pi.items()}
    return PeirceContext(
        algebra=A,
        e1=coords,
        projections=projections,
        components=components,
        center=center(A),
    )


@dataclass(frozen=True)
class RelationViolation:
    relation: str
    source: tuple
    product: tuple
    detail: str


@dataclass(frozen=True)
class PeirceRelationsReport:
    """Outcome of the four component-product relations.

    ``square_free`` (x_ij^2 = 0 off-diagonal) is None when undecidable
    within the enumeration budget (characteristic 2 with a large ring).
    """

    composition: bool            # R_ij R_jl inside R_il
    same_component: bool         # R_ij R_ij inside R_ji
    orthogonality: bool          # R_ij R_kl = 0 for j != k, (i,j) != (k,l)
    square_free: bool | None     # x_ij^2 = 0 for i != j
    violations: tuple = dataclass_field(default_factory=tuple)

    @property
    def all_hold(self) -> bool:
        return bool(
            self.composition
            and self.same_component
            and self.orthogonality
            and self.square_free
        )


def verify_peirce_relations(ctx: PeirceContext, budget: int = 2 ** 16) -> PeirceRelationsReport:
    """Check relations on all component-basis pairs; collect violations."""
    A = ctx.algebra
    F = A.field
    violations = []

    def basis_of(s):
        return ctx.components[s].basis

    # (composition) R_ij R_jl inside R_il
    composition = True
    for i in (1, 2):
        for j in (1, 2):
            for l in (1, 2):
                target = ctx.components[(i, l)]
                for x in basis_of((i, j)):
                    for y in basis_of((j, l)):
                        prod = A.mul_coords(x, y)
                        if not target.contains(prod):
                            composition = False
                            violations.append(RelationViolation(
                                "composition", (i, j, l), prod,
                                f"R{i}{j}*R{j}{l} escapes R{i}{l}",
                            ))

    # (same component) R_ij R_ij inside R_ji
    same_component = True
    for i in (1, 2):
        for j in (1, 2):
            target = ctx.components[(j, i)]
            for x in basis_of((i, j)):
                for y in basis_of((i, j)):
                    prod = A.mul_coords(x, y)
                    if not target.contains(prod):
                        same_component = False
                        violations.append(RelationViolation(
                            "same_component", (i, j), prod,
                            f"R{i}{j}*R{i}{j} escapes R{j}{i}",
                        ))

    # (orthogonality) R_ij R_kl = 0 for j != k and (i,j) != (k,l)
    orthogonality = True
    for (i, j) in _SLOTS:
        for (k, l) in _SLOTS:
            if j == k or (i, j) == (k, l):
                continue
            for x in basis_of((i, j)):
                for y in basis_of((k, l)):
                    prod = A.mul_coords(x, y)
                    if any(not F.is_zero(v) for v in prod):
                        orthogonality = False
                        violations.append(RelationViolation(
                            "orthogonality", (i, j, k, l), prod,
                            f"R{i}{j}*R{k}{l} is nonzero",
                        ))

    # (square free) x^2 = 0 for x in an off-diagonal component
    square_free: bool | None = True
    if F.characteristic != 2:
        # polarisation: x y + y x = 0 on basis pairs decides x^2 = 0
        for (i, j) in ((1, 2), (2, 1)):
            for x in basis_of((i, j)):
                for y in basis_of((i, j)):
                    s = tuple(
                        F.add(a, b)
                        for a, b in zip(A.mul_coords(x, y), A.mul_coords(y, x))
                    )
                    if any(not F.is_zero(v) for v in s):
                        square_free = False
                        violations.append(RelationViolation(
                            "square_free", (i, j), s,
                            f"polarised square on R{i}{j} is nonzero",
                        ))
    else:
        for (i, j) in ((1, 2), (2, 1)):
            comp = ctx.components[(i, j)]
            size = F.p ** comp.dim
            if size > budget:
                square_free = None
                continue
            for vec in comp.vectors():
                sq = A.mul_coords(vec, vec)
                if any(not F.is_zero(v) for v in sq):
                    square_free = False
                    violations.append(RelationViolation(
                        "square_free", (i, j), sq, f"square of {vec} is nonzero"
                    ))
                    break

    return PeirceRelationsReport(
        composition=composition,
        same_component=same_component,
        orthogonality=orthogonality,
        square_free=square_free,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class CommutantReport:
    subspace: Subspace
    contained_in_center: bool


def check_offdiag_commutant(ctx: PeirceContext, side) -> CommutantReport:
    """S = {a in R11+R22 : [a, R_side] = 0}, and whether S lies in Z(R).

    side 12 instantiates the hypothesis that commuting with all of R12
    forces centrality; side 21 is the mirror.
    """
    side = str(side)
    if side not in ("12", "21"):
        raise ValueError("side must be 12 or 21")
    slot = (1, 2) if side == "12" else (2, 1)
    A = ctx.algebra
    F = A.field
    d = A.dim
    acc = echelon(F, d)
    for b in ctx.components[slot].basis:
        bracket = A.right_mult_matrix(b) - A.left_mult_matrix(b)
        for row in bracket.rows:
            acc.add(row)
    commutes = kernel(Matrix(F, acc.rref_rows(), ncols=d))
    diagonal = ctx.components[(1, 1)].sum_with(ctx.components[(2, 2)])
    S = commutes.intersect(diagonal)
    return CommutantReport(
        subspace=S, contained_in_center=ctx.center.contains_subspace(S)
    )


@dataclass(frozen=True)
class ConditionsReport:
    """Verdicts for the four ring conditions, keyed by sub-check."""

    entries: dict

    @property
    def overall(self) -> Verdict:
        return combine(v.status for v in self.entries.values())

    def __getitem__(self, key: str) -> ConditionVerdict:
        return self.entries[key]


def _annihilator(A: Algebra, domain: Subspace, others: Subspace, side: str) -> Subspace:
    """{x in domain : x*b = 0 for all b} (side right) or {x : b*x = 0} (left)."""
    F = A.field
    d = A.dim
    acc = echelon(F, d)
    for b in others.basis:
        m = A.right_mult_matrix(b) if side == "right" else A.left_mult_matrix(b)
        for row in m.rows:
            acc.add(row)
    killed = kernel(Matrix(F, acc.rref_rows(), ncols=d))
    return killed.intersect(domain)


def _kernel_condition(A: Algebra, domain: Subspace, others: Subspace,
                      side: str, label: str) -> ConditionVerdict:
    ann = _annihilator(A, domain, others, side)
    if ann.is_zero():
        return ConditionVerdict(Verdict.HOLDS, f"{label}: annihilator is zero")
    return ConditionVerdict(
        Verdict.FAILS,
        f"{label}: annihilator has dim {ann.dim}",
        witness=ann.basis[0],
    )


def check_conditions_1_to_4(ctx: PeirceContext) -> ConditionsReport:
    """Decide conditions (1)-(4); (4) may be undecided over an infinite field."""
    A = ctx.algebra
    F = A.field
    d = A.dim
    R11, R12, R21, R22 = (ctx.components[s] for s in _SLOTS)
    entries = {}

    entries["1(1,2)"] = _kernel_condition(
        A, R12, R21, "right", "x12 with x12*R21 = 0"
    )
    entries["1(2,1)"] = _kernel_condition(
        A, R21, R12, "right", "x21 with x21*R12 = 0"
    )
    entries["2a"] = _kernel_condition(A, R11, R12, "right", "x11 with x11*R12 = 0")
    entries["2b"] = _kernel_condition(A, R11, R21, "left", "x11 with R21*x11 = 0")
    entries["3a"] = _kernel_condition(A, R22, R12, "left", "x22 with R12*x22 = 0")
    entries["3b"] = _kernel_condition(A, R22, R21, "right", "x22 with x22*R21 = 0")

    Z = ctx.center
    if Z.is_zero():
        entries["4"] = ConditionVerdict(
            Verdict.HOLDS, "center is zero; nothing to check"
        )
    elif F.is_finite:
        bad = None
        for z in Z.vectors():
            if all(F.is_zero(v) for v in z):
                continue
            if rank(A.left_mult_matrix(z)) != d:
                bad = z
                break
        if bad is None:
            entries["4"] = ConditionVerdict(
                Verdict.HOLDS, "all nonzero central z have zR = R (enumerated)"
            )
        else:
            entries["4"] = ConditionVerdict(
                Verdict.FAILS, "central z with zR != R", witness=bad
            )
    elif Z.dim == 1 and A.unit is not None:
        z0 = Z.basis[0]
        if rank(A.left_mult_matrix(z0)) == d:
            entries["4"] = ConditionVerdict(
                Verdict.HOLDS,
                "dim Z = 1 and the central generator is invertible",
            )
        else:
            entries["4"] = ConditionVerdict(
                Verdict.FAILS, "the central generator is a zero divisor", witness=z0
            )
    else:
        entries["4"] = ConditionVerdict(
            Verdict.UNDECIDED,
            "zR = R is nonlinear in z; undecidable over an infinite field here",
        )

    return ConditionsReport(entries=entries)


@dataclass(frozen=True)
class PrimeReport:
    status: Verdict
    mode: str                      # exhaustive | sampled
    checked: int
    witness: tuple | None = None   # (a coords, b coords) with a R b = 0
    detail: str = ""


def _ray_representatives(A: Algebra):
    """Nonzero vectors up to scale: basis vectors first, then by leading slot."""
    from itertools import product as iter_product

    F = A.field
    d = A.dim
    one, zero = F.one, F.zero
    basis = []
    for i in range(d):
        vec = [zero] * d
        vec[i] = one
        vec = tuple(vec)
        basis.append(vec)
        yield vec
    seen = set(basis)
    for lead in range(d):
        tail = d - lead - 1
        for rest in iter_product(F.elements(), repeat=tail):
            vec = (zero,) * lead + (one,) + rest
            if vec not in seen:
                yield vec


def _kernel_after_left_products(A: Algebra, a, p: int) -> list | None:
    """Basis of {b : (a e_t) b = 0 for all t} over GF(p), or None when zero.

    Maintains a small mod-p elimination; exits as soon as the rank hits d.
    """
    d = A.dim
    pairs = A._pairs
    pivots: dict[int, list[int]] = {}

    for t in range(d):
        # y = a * e_t, computed sparsely
        y = [0] * d
        for i, ai in enumerate(a):
            if ai:
                for k, c in pairs[i][t]:
                    y[k] = (y[k] + ai * c) % p
        if not any(y):
            continue
        # rows of L_y: (y * x)_m = sum_j x_j * sum_i y_i c[i][j][m]
        rows = [[0] * d for _ in range(d)]
        for i, yi in enumerate(y):
            if yi:
                for j in range(d):
                    for k, c in pairs[i][j]:
                        rows[k][j] = (rows[k][j] + yi * c) % p
        for row in rows:
            work = row[:]
            for col, prow in pivots.items():
                v = work[col]
                if v:
                    for idx in range(d):
                        work[idx] = (work[idx] - v * prow[idx]) % p
            lead = -1
            for idx, v in enumerate(work):
                if v:
                    lead = idx
                    break
            if lead < 0:
                continue
            inv = pow(work[lead], -1, p)
            if inv != 1:
                work = [(v * inv) % p for v in work]
            for prow in pivots.values():
                v = prow[lead]
                if v:
                    for idx in range(d):
                        prow[idx] = (prow[idx] - v * work[idx]) % p
            pivots[lead] = work
            if len(pivots) == d:
                return None
    # back out a kernel basis from the reduced rows
    pivot_cols = sorted(pivots)
    free = [j for j in range(d) if j not in pivots]
    vectors = []
    for f in free:
        vec = [0] * d
        vec[f] = 1
        for pc in pivot_cols:
            vec[pc] = (-pivots[pc][f]) % p
        vectors.append(vec)
    return vectors


def is_prime(A: Algebra, budget: int = 2 ** 17, samples: int = 50,
             seed: int = 0) -> PrimeReport:
    """Theorem-style primality: a R b = 0 forces a = 0 or b = 0.

    Exhaustive over GF(p) by looping a over scalar rays (one representative
    each) and requiring the stacked left-multiplication kernel in b to be
    trivial.  Over Q the loop is sampled, so "no witness" is undecided.
    Char-3 rings get a torsion warning: the equivalence with ideal-primality
    needs 3-torsion-freeness.
    """
    # warn before the cache lookup: a warm cache must not silence this
    if A.field.characteristic == 3:
        warnings.warn(
            "primality loop on a char-3 ring: the ideal-theoretic equivalence "
            "assumes 3-torsion-freeness",
            stacklevel=2,
        )
    key = ("is_prime", budget, samples, seed)
    if key in A._prime_cache:
        return A._prime_cache[key]
    report = _is_prime_uncached(A, budget, samples, seed)
    A._prime_cache[key] = report
    return report


def _first_kernel_witness(A: Algebra, a, vectors) -> tuple:
    """Prefer b = a itself when a kills itself; else the first basis vector."""
    F = A.field
    acc = echelon(F, A.dim)
    for v in vectors:
        acc.add(v)
    if acc.contains(list(a)):
        return tuple(a)
    return tuple(F.coerce(v) for v in vectors[0])


def _is_prime_uncached(A: Algebra, budget: int, samples: int, seed: int) -> PrimeReport:
    F = A.field
    d = A.dim
    if F.is_finite:
        p = F.p
        rays = (p ** d - 1) // (p - 1)
        if rays > budget:
            raise BudgetError(f"{rays} rays exceed the primality budget {budget}")
        checked = 0
        for a in _ray_representatives(A):
            checked += 1
            vectors = _kernel_after_left_products(A, a, p)
            if vectors:
                witness_b = _first_kernel_witness(A, a, vectors)
                return PrimeReport(
                    status=Verdict.FAILS,
                    mode="exhaustive",
                    checked=checked,
                    witness=(tuple(a), witness_b),
                    detail="a R b = 0 with both nonzero",
                )
        return PrimeReport(
            status=Verdict.HOLDS,
            mode="exhaustive",
            checked=checked,
            detail=f"all {checked} rays have trivial annihilator",
        )

    rng = random.Random(seed)
    checked = 0
    for _ in range(samples):
        a = tuple(F.coerce(rng.randint(-9, 9)) for _ in range(d))
        if all(F.is_zero(v) for v in a):
            continue
        checked += 1
        acc = echelon(F, d)
        full = False
        for t in range(d):
            y = A.mul_coords(a, A.basis_element(t).coords)
            if all(F.is_zero(v) for v in y):
                continue
            for row in A.left_mult_matrix(y).rows:
                acc.add(row)
            if acc.rank == d:
                full = True
                break
        if not full:
            ker = kernel(Matrix(F, acc.rref_rows(), ncols=d))
            if not ker.is_zero():
                return PrimeReport(
                    status=Verdict.FAILS,
                    mode="sampled",
                    checked=checked,
                    witness=(a, ker.basis[0]),
                    detail="a R b = 0 with both nonzero",
                )
    return PrimeReport(
        status=Verdict.UNDECIDED,
        mode="sampled",
        checked=checked,
        detail=f"no witness among {checked} random samples; not exhaustive over Q",
    )
