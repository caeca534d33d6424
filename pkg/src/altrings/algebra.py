"""Finite-dimensional algebras given by structure constants.

An algebra over a field F with basis e_1..e_d is described by the tensor
c[i][j][k] with e_i * e_j = sum_k c[i][j][k] e_k.  Elements are coordinate
vectors; all products, commutators, associators, centres and nuclei are
computed exactly from the tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

from .fields import FieldError
from .linalg import Matrix, Subspace, echelon, kernel, solve


class AlgebraError(ValueError):
    """Raised for inconsistent algebra data (bad unit, bad idempotent, ...)."""


class BudgetError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its budget."""


class Algebra:
    """A structure-constant algebra over an exact field."""

    def __init__(self, field, dim: int, triples, unit=None, idempotent=None,
                 name: str | None = None):
        if dim < 1:
            raise AlgebraError("dimension must be at least 1")
        self.field = field
        self.dim = dim
        self.name = name
        zero = field.zero
        tensor = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        if isinstance(triples, dict):
            items = triples.items()
        else:
            items = [((i, j, k), c) for (i, j, k, c) in triples]
        for (i, j, k), c in items:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise AlgebraError(f"structure index ({i},{j},{k}) out of range")
            tensor[i][j][k] = field.add(tensor[i][j][k], field.coerce(c))
        self.tensor = tuple(
            tuple(tuple(row) for row in plane) for plane in tensor
        )
        # sparse view: _pairs[i][j] lists the nonzero (k, c) of e_i * e_j
        self._pairs = tuple(
            tuple(
                tuple((k, c) for k, c in enumerate(self.tensor[i][j])
                      if not field.is_zero(c))
                for j in range(dim)
            )
            for i in range(dim)
        )
        self._left_cache: dict[int, Matrix] = {}
        self._right_cache: dict[int, Matrix] = {}
        self._prime_cache: dict = {}
        self.unit = None
        if unit is not None:
            u = self._coerce_coords(unit)
            if not self._is_unit(u):
                raise AlgebraError("declared unit is not a two-sided identity")
            self.unit = u
        self.idempotent = None
        if idempotent is not None:
            e = self._coerce_coords(idempotent)
            if self.mul_coords(e, e) != e:
                raise AlgebraError("declared idempotent does not square to itself")
            self.idempotent = e

    def _coerce_coords(self, coords) -> tuple:
        if isinstance(coords, AlgebraElement):
            if coords.algebra is not self:
                raise AlgebraError("element belongs to a different algebra")
            return coords.coords
        vec = tuple(self.field.coerce(v) for v in coords)
        if len(vec) != self.dim:
            raise AlgebraError("coordinate length mismatch")
        return vec

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (self.field.zero,) * self.dim)

    def basis_element(self, i: int) -> "AlgebraElement":
        coords = [self.field.zero] * self.dim
        coords[i] = self.field.one
        return AlgebraElement(self, tuple(coords))

    def basis(self) -> list["AlgebraElement"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, self._coerce_coords(coords))

    def unit_element(self) -> "AlgebraElement | None":
        return AlgebraElement(self, self.unit) if self.unit is not None else None

    def idempotent_element(self) -> "AlgebraElement | None":
        if self.idempotent is None:
            return None
        return AlgebraElement(self, self.idempotent)

    def mul_coords(self, x, y) -> tuple:
        F = self.field
        zero, add, mul = F.zero, F.add, F.mul
        out = [zero] * self.dim
        pairs = self._pairs
        for i, xi in enumerate(x):
            if F.is_zero(xi):
                continue
            row = pairs[i]
            for j, yj in enumerate(y):
                if F.is_zero(yj):
                    continue
                scale = mul(xi, yj)
                for k, c in row[j]:
                    out[k] = add(out[k], mul(scale, c))
        return tuple(out)

    def basis_product(self, i: int, j: int) -> tuple:
        return self.tensor[i][j]

    def left_mult_matrix(self, y) -> Matrix:
        """Matrix of x -> y * x."""
        y = self._coerce_coords(y)
        F = self.field
        rows = [[F.zero] * self.dim for _ in range(self.dim)]
        for i, yi in enumerate(y):
            if F.is_zero(yi):
                continue
            for j in range(self.dim):
                for k, c in self._pairs[i][j]:
                    rows[k][j] = F.add(rows[k][j], F.mul(yi, c))
        return Matrix(F, rows)

    def right_mult_matrix(self, y) -> Matrix:
        """Matrix of x -> x * y."""
        y = self._coerce_coords(y)
        F = self.field
        rows = [[F.zero] * self.dim for _ in range(self.dim)]
        for j, yj in enumerate(y):
            if F.is_zero(yj):
                continue
            for i in range(self.dim):
                for k, c in self._pairs[i][j]:
                    rows[k][i] = F.add(rows[k][i], F.mul(yj, c))
        return Matrix(F, rows)

    def basis_left_matrix(self, i: int) -> Matrix:
        if i not in self._left_cache:
            self._left_cache[i] = self.left_mult_matrix(self.basis_element(i))
        return self._left_cache[i]

    def basis_right_matrix(self, i: int) -> Matrix:
        if i not in self._right_cache:
            self._right_cache[i] = self.right_mult_matrix(self.basis_element(i))
        return self._right_cache[i]

    def _is_unit(self, u) -> bool:
        for i in range(self.dim):
            e = self.basis_element(i).coords
            if self.mul_coords(u, e) != e or self.mul_coords(e, u) != e:
                return False
        return True

    def elements(self):
        """Enumerate all elements (finite fields only).

        Coordinate 0 varies fastest: the k-th element carries the base-p
        digits of k as its coordinates, so enumeration order and the
        digit-index of an element agree.
        """
        if not self.field.is_finite:
            raise FieldError("cannot enumerate an algebra over an infinite field")
        for coords in iter_product(self.field.elements(), repeat=self.dim):
            yield AlgebraElement(self, coords[::-1])

    def size(self) -> int | None:
        if not self.field.is_finite:
            return None
        return self.field.p ** self.dim

    def __repr__(self):
        label = self.name or "algebra"
        return f"Algebra({label}, dim={self.dim}, field={self.field})"


class AlgebraElement:
    """An element of an :class:`Algebra`, stored as a coordinate tuple."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: Algebra, coords):
        self.algebra = algebra
        self.coords = tuple(coords)

    def _same(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise AlgebraError("elements belong to different algebras")
        return other

    def __add__(self, other):
        other = self._same(other)
        add = self.algebra.field.add
        return AlgebraElement(
            self.algebra, tuple(add(a, b) for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        other = self._same(other)
        sub = self.algebra.field.sub
        return AlgebraElement(
            self.algebra, tuple(sub(a, b) for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        neg = self.algebra.field.neg
        return AlgebraElement(self.algebra, tuple(neg(a) for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(
                self.algebra, self.algebra.mul_coords(self.coords, other.coords)
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "AlgebraElement":
        F = self.algebra.field
        c = F.coerce(c)
        return AlgebraElement(self.algebra, tuple(F.mul(c, v) for v in self.coords))

    def is_zero(self) -> bool:
        F = self.algebra.field
        return all(F.is_zero(v) for v in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and other.algebra is self.algebra
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        fmt = self.algebra.field.format
        return "(" + ", ".join(fmt(v) for v in self.coords) + ")"


class LinearMap:
    """A linear endomorphism of an algebra's underlying vector space."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: Algebra, matrix: Matrix):
        if matrix.nrows != algebra.dim or matrix.ncols != algebra.dim:
            raise AlgebraError("map matrix has the wrong shape")
        self.algebra = algebra
        self.matrix = matrix

    @classmethod
    def from_images(cls, algebra: Algebra, images) -> "LinearMap":
        """Build a map from the images of the basis elements."""
        cols = []
        for img in images:
            cols.append(algebra._coerce_coords(img))
        if len(cols) != algebra.dim:
            raise AlgebraError("need one image per basis element")
        return cls(algebra, Matrix.from_columns(algebra.field, cols))

    @classmethod
    def from_vector(cls, algebra: Algebra, flat) -> "LinearMap":
        """Inverse of :meth:`to_vector` (row-major d*d coordinates)."""
        d = algebra.dim
        if len(flat) != d * d:
            raise AlgebraError("flat vector has the wrong length")
        rows = [flat[r * d:(r + 1) * d] for r in range(d)]
        return cls(algebra, Matrix(algebra.field, rows))

    @classmethod
    def zero(cls, algebra: Algebra) -> "LinearMap":
        return cls(algebra, Matrix.zeros(algebra.field, algebra.dim, algebra.dim))

    @classmethod
    def identity(cls, algebra: Algebra) -> "LinearMap":
        return cls(algebra, Matrix.identity(algebra.field, algebra.dim))

    def to_vector(self) -> tuple:
        """Row-major flattening; the coordinate order used by map spaces."""
        return tuple(v for row in self.matrix.rows for v in row)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.algebra is not self.algebra:
            raise AlgebraError("element belongs to a different algebra")
        return AlgebraElement(self.algebra, self.matrix.apply(x.coords))

    def apply_coords(self, coords) -> tuple:
        return self.matrix.apply(coords)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix - other.matrix)

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.algebra, -self.matrix)

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix.scale(c))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix @ other.matrix)

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and other.algebra is self.algebra
            and other.matrix == self.matrix
        )

    def __hash__(self):
        return hash(self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __repr__(self):
        return f"LinearMap({self.matrix!r})"


def mul(A: Algebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return A.element(A.mul_coords(A._coerce_coords(x), A._coerce_coords(y)))


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y - y * x


def jordan_product(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y + y * x


def associator(x: AlgebraElement, y: AlgebraElement, z: AlgebraElement) -> AlgebraElement:
    return (x * y) * z - x * (y * z)


def mul_operator(A: Algebra, y, side: str) -> LinearMap:
    """Left or right multiplication by y as a linear map."""
    if side == "left":
        return LinearMap(A, A.left_mult_matrix(y))
    if side == "right":
        return LinearMap(A, A.right_mult_matrix(y))
    raise ValueError("side must be 'left' or 'right'")


@dataclass(frozen=True)
class IdentityReport:
    """Which standard identities the multiplication satisfies.

    ``alternative`` and ``flexible`` are None when undecidable within the
    enumeration budget (only possible in characteristic 2).
    """

    associative: bool
    alternative: bool | None
    flexible: bool | None


def _associative(A: Algebra) -> bool:
    d = A.dim
    for i in range(d):
        for j in range(d):
            pij = A.tensor[i][j]
            for k in range(d):
                lhs = A.mul_coords(pij, A.basis_element(k).coords)
                rhs = A.mul_coords(A.basis_element(i).coords, A.tensor[j][k])
                if lhs != rhs:
                    return False
    return True


def _assoc_coords(A: Algebra, x, y, z) -> tuple:
    return tuple(
        A.field.sub(a, b)
        for a, b in zip(
            A.mul_coords(A.mul_coords(x, y), z),
            A.mul_coords(x, A.mul_coords(y, z)),
        )
    )


def _zero_coords(A: Algebra, coords) -> bool:
    return all(A.field.is_zero(v) for v in coords)


def _linearised_swap(A: Algebra, s1: int, s2: int) -> bool:
    """Check assoc(t) + assoc(t with slots s1,s2 swapped) = 0 on basis triples.

    This is the polarisation of the identity whose repeated variable sits
    in slots s1 and s2; equivalent to the identity itself away from
    characteristic 2.
    """
    d = A.dim
    basis = [A.basis_element(i).coords for i in range(d)]
    F = A.field
    for t in iter_product(range(d), repeat=3):
        args = [basis[t[0]], basis[t[1]], basis[t[2]]]
        first = _assoc_coords(A, *args)
        args[s1], args[s2] = args[s2], args[s1]
        second = _assoc_coords(A, *args)
        if any(not F.is_zero(F.add(a, b)) for a, b in zip(first, second)):
            return False
    return True


def _enumerated_two_slot(A: Algebra, slots, budget: int) -> bool | None:
    """Exhaustive check of the same identity over a small finite ring.

    Enumerates only the repeated variable x and compares the operator
    matrices acting on the linear slot, so the cost is |R| matrix products.
    """
    size = A.size()
    if size is None or size > budget:
        return None
    for x in A.elements():
        xc = x.coords
        xx = A.mul_coords(xc, xc)
        L_x = A.left_mult_matrix(xc)
        R_x = A.right_mult_matrix(xc)
        if slots == (0, 1):
            # (x, x, y) = 0 for all y  <=>  L_{xx} = L_x L_x
            if A.left_mult_matrix(xx) != L_x @ L_x:
                return False
        elif slots == (1, 2):
            # (y, x, x) = 0 for all y  <=>  R_{xx} = R_x R_x
            if A.right_mult_matrix(xx) != R_x @ R_x:
                return False
        else:
            # (x, y, x) = 0 for all y  <=>  L_x R_x = R_x L_x
            if L_x @ R_x != R_x @ L_x:
                return False
    return True


def classify_identities(A: Algebra, budget: int = 2 ** 16) -> IdentityReport:
    """Decide associativity, alternativity and flexibility of the product.

    Associativity is a basis check.  The other two are quadratic in one
    variable: away from characteristic 2 a polarised basis check decides
    them; in characteristic 2 the polarisation is not trusted and small
    rings are enumerated instead (None when the ring exceeds the budget).
    """
    associative = _associative(A)
    if associative:
        return IdentityReport(True, True, True)
    if A.field.characteristic != 2:
        left = _linearised_swap(A, 0, 1)
        right = _linearised_swap(A, 1, 2) if left else False
        alternative = left and right
        flexible = True if alternative else _linearised_swap(A, 0, 2)
        return IdentityReport(False, alternative, flexible)
    left = _enumerated_two_slot(A, (0, 1), budget)
    right = _enumerated_two_slot(A, (1, 2), budget) if left else left
    if left is None or right is None:
        alternative = None
    else:
        alternative = left and right
    if alternative:
        flexible: bool | None = True
    else:
        flexible = _enumerated_two_slot(A, (0, 2), budget)
    return IdentityReport(False, alternative, flexible)


def nucleus(A: Algebra) -> Subspace:
    """{ n : (n,R,R) = (R,n,R) = (R,R,n) = 0 }, computed from basis constraints."""
    d = A.dim
    acc = echelon(A.field, d)
    for i in range(d):
        L_i = A.basis_left_matrix(i)
        R_i = A.basis_right_matrix(i)
        for j in range(d):
            R_j = A.basis_right_matrix(j)
            L_j = A.basis_left_matrix(j)
            prod = A.tensor[i][j]
            # (x, e_i, e_j): (x e_i) e_j - x (e_i e_j)
            m1 = R_j @ R_i - A.right_mult_matrix(prod)
            # (e_i, x, e_j): (e_i x) e_j - e_i (x e_j)
            m2 = R_j @ L_i - L_i @ R_j
            # (e_i, e_j, x): (e_i e_j) x - e_i (e_j x)
            m3 = A.left_mult_matrix(prod) - L_i @ L_j
            for m in (m1, m2, m3):
                for row in m.rows:
                    acc.add(row)
    return kernel(Matrix(A.field, acc.rref_rows(), ncols=d))


def center(A: Algebra) -> Subspace:
    """The commutative centre { z : [z, x] = 0 for all x }.

    Note this is the commutant only; use ``center(A).intersect(nucleus(A))``
    for the stricter commuting-and-associating notion.
    """
    d = A.dim
    acc = echelon(A.field, d)
    for i in range(d):
        diff = A.basis_right_matrix(i) - A.basis_left_matrix(i)
        for row in diff.rows:
            acc.add(row)
    return kernel(Matrix(A.field, acc.rref_rows(), ncols=d))


def find_unit(A: Algebra) -> AlgebraElement | None:
    """Solve for a two-sided identity element, if one exists."""
    if A.unit is not None:
        return AlgebraElement(A, A.unit)
    d = A.dim
    F = A.field
    rows = []
    rhs = []
    for j in range(d):
        # u * e_j = e_j : sum_i u_i c[i][j][m] = delta_{jm}
        for m in range(d):
            rows.append([A.tensor[i][j][m] for i in range(d)])
            rhs.append(F.one if m == j else F.zero)
        # e_j * u = e_j : sum_i u_i c[j][i][m] = delta_{jm}
        for m in range(d):
            rows.append([A.tensor[j][i][m] for i in range(d)])
            rhs.append(F.one if m == j else F.zero)
    result = solve(Matrix(F, rows), tuple(rhs))
    if result is None:
        return None
    u = result[0]
    A.unit = u
    return AlgebraElement(A, u)


@dataclass(frozen=True)
class IdempotentCheck:
    """Result of testing e² = e; nontrivial is None when not idempotent."""

    idempotent: bool
    nontrivial: bool | None


def is_idempotent(A: Algebra, e) -> IdempotentCheck:
    """Nonzero square-stable check; nontrivial additionally excludes the unit."""
    coords = A._coerce_coords(e)
    if all(A.field.is_zero(v) for v in coords):
        return IdempotentCheck(False, None)
    if A.mul_coords(coords, coords) != coords:
        return IdempotentCheck(False, None)
    unit = find_unit(A)
    nontrivial = unit is None or unit.coords != coords
    return IdempotentCheck(True, nontrivial)


def find_idempotents(A: Algebra, budget: int = 2 ** 16) -> list[tuple[AlgebraElement, bool]]:
    """Exhaustively enumerate idempotents of a finite algebra.

    Returns (element, nontrivial) pairs; zero and the unit are the
    trivial ones.  Squaring is quadratic, so enumeration cannot decide
    this over an infinite field; rationals are rejected (curated
    algebras carry a designated idempotent instead).  Raises BudgetError
    when the ring size p^d exceeds the budget.
    """
    if not A.field.is_finite:
        raise FieldError("idempotent search requires a finite field")
    size = A.size()
    if size > budget:
        raise BudgetError(
            f"idempotent search over {size} elements exceeds budget {budget}"
        )
    unit = find_unit(A)
    found = []
    for x in A.elements():
        if A.mul_coords(x.coords, x.coords) == x.coords:
            nontrivial = not x.is_zero() and (unit is None or x != unit)
            found.append((x, nontrivial))
    return found


def torsion_free(A: Algebra, k: int) -> bool:
    """Whether k x = 0 forces x = 0 in the additive group."""
    if k < 1:
        raise ValueError(
            "k must be a positive integer: every element is 0-torsion, "
            "so k = 0 would make the property vacuously false"
        )
    p = A.field.characteristic
    if p == 0:
        return True
    return k % p != 0
