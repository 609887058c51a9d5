"""Derivation bases: the Z(A)-module frames forms are stored against.

A basis carries its bracket table [Xᵢ, Xⱼ] = Σₖ cᵏᵢⱼ Xₖ (central cᵏᵢⱼ), the
star table Xₖ* = Σₗ sₖₗ Xₗ and an expander that writes any derivation as a
Z(A)-combination of the basis, raising NotInSpan when that is impossible.

Expansion works generator by generator.  Each basis derivation sends every
algebra generator into the constant fiber (see ``algebra.fibers``), so the
equations X(g) = Σₖ cₖ Xₖ(g) split into one least-squares problem per
central monomial, all sharing a single pseudo-inverse.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..algebra.descriptors import AlgebraDescriptor
from ..algebra.elements import AlgebraElement, embed_left, embed_right, zero
from ..algebra.fibers import FiberKey, central_element, fibers, fiber_dim, scalar_part
from ..algebra.matrices import gellmann_generators
from ..algebra.sampling import generators
from ..errors import AlgebraMismatch, BasisMismatch, NotInSpan, NotLieSubalgebra
from .derivation import (
    DEFAULT_MAX_FIELD_DEGREE,
    LEFT,
    RIGHT,
    Derivation,
    InnerDerivation,
    LiftedDerivation,
    VectorField,
    ZeroDerivation,
    lie_bracket,
)

COMPLEX_SCALARS = "ComplexScalars"
CENTER_POLYNOMIALS = "CenterPolynomials"

GELLMANN = "gellmann"
COORDINATE = "coordinate"
SUBALGEBRA = "subalgebra"
PRODUCT = "product"
LIFTED = "lifted"

Coefficients = Tuple[AlgebraElement, ...]


class CompositeDerivation(Derivation):
    """Σₖ cₖ Xₖ over a basis, with central coefficients cₖ."""

    def __init__(self, basis: "DerivationBasis", coefficients: Sequence[AlgebraElement]):
        coefficients = tuple(coefficients)
        if len(coefficients) != basis.size:
            raise ValueError(f"expected {basis.size} coefficients, got {len(coefficients)}")
        self.basis = basis
        self.algebra = basis.algebra
        self.coefficients = coefficients

    def _apply(self, a):
        total = zero(self.algebra)
        for c, x in zip(self.coefficients, self.basis.derivations):
            if c.norm() > 0.0:
                total = total + c * x.apply(a)
        return total

    def star(self):
        return self.basis.combine(self.basis.star_coefficients(self.coefficients))

    def scaled(self, z):
        return CompositeDerivation(self.basis, [c.scale(z) for c in self.coefficients])

    def simplify(self) -> Derivation:
        """A cheaper equivalent: a vector field on coordinate bases, an inner
        derivation when every basis member is inner."""
        if self.basis.kind == COORDINATE:
            comps = [c.polynomial for c in self.coefficients]
            bound = max([DEFAULT_MAX_FIELD_DEGREE] + [p.degree() for p in comps])
            return VectorField(self.algebra, comps, bound)
        gens = self.basis.inner_generators()
        if gens is None:
            return self
        total = zero(self.algebra)
        for c, g in zip(self.coefficients, gens):
            total = total + c * g
        if self.algebra.is_commutative:
            return ZeroDerivation(self.algebra)
        return InnerDerivation(total)

    def __repr__(self):
        return f"CompositeDerivation({self.basis.kind}, {list(self.coefficients)})"


class DerivationBasis:
    """An ordered frame X₁..X_m of derivations with bracket and star tables."""

    def __init__(
        self,
        algebra: AlgebraDescriptor,
        derivations: Sequence[Derivation],
        kind: str,
        normalization: str = "",
        factors: Optional[Tuple["DerivationBasis", ...]] = None,
    ):
        derivations = tuple(derivations)
        for x in derivations:
            if x.algebra != algebra:
                raise AlgebraMismatch(f"basis member acts on {x.algebra.label}, expected {algebra.label}")
        self.algebra = algebra
        self.derivations = derivations
        self.kind = kind
        self.normalization = normalization
        self.factors = factors
        self.coefficient_domain = (
            COMPLEX_SCALARS if algebra.is_matrix or algebra.is_matrix_product else CENTER_POLYNOMIALS
        )
        self._generators = generators(algebra)
        self._fdim = fiber_dim(algebra)
        self._action = self._action_matrix()
        self._pinv = scipy.linalg.pinv(self._action) if self.size else np.zeros((0, 0))
        if self.size and np.linalg.matrix_rank(self._action) < self.size:
            raise ValueError("basis derivations are linearly dependent over the center")
        self._table: List[List[Coefficients]] = []
        self._star: List[Coefficients] = []

    # -- construction helpers ------------------------------------------------

    def _action_matrix(self) -> np.ndarray:
        cols = []
        for x in self.derivations:
            parts = []
            for g in self._generators:
                image = fibers(x.apply(g))
                extra = [k for k in image if any(k)]
                if extra:
                    raise ValueError("basis derivations must map generators into the constant fiber")
                parts.append(next(iter(image.values())) if image else np.zeros(self._fdim, dtype=complex))
            cols.append(np.concatenate(parts) if parts else np.zeros(0))
        if not cols:
            return np.zeros((len(self._generators) * self._fdim, 0), dtype=complex)
        return np.array(cols, dtype=complex).T

    def _build_tables(self, strict_closure: bool = False) -> None:
        m = self.size
        table: List[List[Coefficients]] = [[()] * m for _ in range(m)]
        zeros = tuple(zero(self.algebra) for _ in range(m))
        for i in range(m):
            table[i][i] = zeros
            for j in range(i + 1, m):
                bracket = lie_bracket(self.derivations[i], self.derivations[j])
                try:
                    coeffs = self.expand(bracket)
                except NotInSpan as exc:
                    if strict_closure:
                        raise NotLieSubalgebra(
                            f"[X{i + 1}, X{j + 1}] leaves the span",
                            {"pair": [i, j], "residual": exc.details.get("residual")},
                        ) from None
                    raise
                table[i][j] = coeffs
                table[j][i] = tuple(c.scale(-1.0) for c in coeffs)
        self._table = table
        self._star = [self.expand(x.star()) for x in self.derivations]

    # -- access --------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.derivations)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, index: int) -> Derivation:
        return self.derivations[index]

    def bracket_coefficients(self, i: int, j: int) -> Coefficients:
        return self._table[i][j]

    def star_coefficients(self, coefficients: Sequence[AlgebraElement]) -> Coefficients:
        """Coefficients of (Σ cₖ Xₖ)* = Σₖ cₖ* Σₗ sₖₗ Xₗ."""
        out = [zero(self.algebra) for _ in range(self.size)]
        for k, c in enumerate(coefficients):
            if c.norm() == 0.0:
                continue
            cs = c.star()
            for l, s in enumerate(self._star[k]):
                if s.norm() > 0.0:
                    out[l] = out[l] + cs * s
        return tuple(out)

    def check_compatible(self, other: "DerivationBasis") -> None:
        if other is not self:
            raise BasisMismatch(
                f"forms over different bases ({self.kind} vs {other.kind})",
                {"left": self.kind, "right": other.kind},
            )

    def inner_generators(self) -> Optional[List[AlgebraElement]]:
        """Generators gₖ with Xₖ = D_gₖ, or None if some member is not inner."""
        out = []
        for x in self.derivations:
            if isinstance(x, InnerDerivation):
                out.append(x.generator)
            elif isinstance(x, LiftedDerivation) and isinstance(x.inner, InnerDerivation):
                embed = embed_left if x.side == LEFT else embed_right
                out.append(embed(x.inner.generator, self.algebra))
            else:
                return None
        return out

    # -- expansion -----------------------------------------------------------

    def combine(self, coefficients: Sequence[AlgebraElement]) -> CompositeDerivation:
        return CompositeDerivation(self, coefficients)

    def combine_scalars(self, values: Sequence[complex]) -> CompositeDerivation:
        return CompositeDerivation(self, [central_element(self.algebra, {_zero_key(self.algebra): v}) for v in values])

    def expand(self, x: Derivation) -> Coefficients:
        """Central coefficients cₖ with x = Σ cₖ Xₖ."""
        if x.algebra != self.algebra:
            raise AlgebraMismatch(f"{x.algebra.label} derivation vs {self.algebra.label} basis")
        if isinstance(x, CompositeDerivation) and x.basis is self:
            return x.coefficients
        if isinstance(x, ZeroDerivation):
            return tuple(zero(self.algebra) for _ in range(self.size))
        keys: List[FiberKey] = []
        columns: Dict[FiberKey, List[np.ndarray]] = {}
        images = [fibers(x.apply(g)) for g in self._generators]
        for image in images:
            for key in image:
                if key not in columns:
                    columns[key] = []
                    keys.append(key)
        if not keys:
            return tuple(zero(self.algebra) for _ in range(self.size))
        rhs = np.zeros((len(self._generators) * self._fdim, len(keys)), dtype=complex)
        for g_idx, image in enumerate(images):
            for key, vec in image.items():
                rhs[g_idx * self._fdim:(g_idx + 1) * self._fdim, keys.index(key)] = vec
        solution = self._pinv @ rhs
        residual = float(np.linalg.norm(self._action @ solution - rhs))
        scale = max(1.0, float(np.linalg.norm(rhs)))
        if residual > self.algebra.tolerance * scale:
            raise NotInSpan(
                f"derivation is not a Z(A)-combination of the {self.kind} basis",
                {"residual": residual, "basis": self.kind},
            )
        return tuple(
            central_element(self.algebra, {key: solution[k, idx] for idx, key in enumerate(keys)})
            for k in range(self.size)
        )

    def expand_scalars(self, x: Derivation) -> np.ndarray:
        """Complex coordinates of x (scalar-coefficient bases only)."""
        return np.array([scalar_part(c) for c in self.expand(x)])

    def bracket_of_coefficients(self, a: Sequence[AlgebraElement], b: Sequence[AlgebraElement]) -> Coefficients:
        """Coefficients of [Σ aᵢXᵢ, Σ bⱼXⱼ] using [X, KY] = X(K)Y + K[X,Y]."""
        m = self.size
        out = [zero(self.algebra) for _ in range(m)]
        for i in range(m):
            if a[i].norm() == 0.0:
                continue
            xi = self.derivations[i]
            for k in range(m):
                if b[k].norm() > 0.0:
                    out[k] = out[k] + a[i] * xi.apply(b[k])
        for j in range(m):
            if b[j].norm() == 0.0:
                continue
            xj = self.derivations[j]
            for k in range(m):
                if a[k].norm() > 0.0:
                    out[k] = out[k] - b[j] * xj.apply(a[k])
        for i in range(m):
            if a[i].norm() == 0.0:
                continue
            for j in range(m):
                if i == j or b[j].norm() == 0.0:
                    continue
                ab = a[i] * b[j]
                for k, c in enumerate(self._table[i][j]):
                    if c.norm() > 0.0:
                        out[k] = out[k] + ab * c
        return tuple(out)

    def jacobi_residual(self) -> float:
        """max ‖[[Xᵢ,Xⱼ],Xₖ] + cyclic‖ over basis triples, via the table."""
        m = self.size
        worst = 0.0
        units = [self.unit_coefficients(i) for i in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    total = [zero(self.algebra) for _ in range(m)]
                    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self._table[x][y]
                        outer = self.bracket_of_coefficients(inner, units[z])
                        total = [t + o for t, o in zip(total, outer)]
                    worst = max(worst, max(t.norm() for t in total))
        return worst

    def unit_coefficients(self, index: int) -> Coefficients:
        one = central_element(self.algebra, {_zero_key(self.algebra): 1.0})
        return tuple(one if k == index else zero(self.algebra) for k in range(self.size))

    def __repr__(self):
        return f"DerivationBasis({self.kind}, {self.algebra.label}, m={self.size})"


def _zero_key(algebra: AlgebraDescriptor) -> FiberKey:
    if algebra.is_matrix or algebra.is_matrix_product:
        return ()
    if algebra.is_polynomial:
        return (0,) * algebra.nvars
    left, right = algebra.left, algebra.right
    if left.is_polynomial and right.is_polynomial:
        return (0,) * (left.nvars + right.nvars)
    return (0,) * (left.nvars if left.is_polynomial else right.nvars)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def gellmann_basis(algebra: AlgebraDescriptor) -> DerivationBasis:
    """IDer(Matrix(n)) = Der(Matrix(n)) via the n²−1 Gell-Mann generators."""
    if not algebra.is_matrix:
        raise AlgebraMismatch(f"Gell-Mann basis needs a matrix algebra, got {algebra.label}")
    members = [InnerDerivation(AlgebraElement(algebra, g)) for g in gellmann_generators(algebra.n)]
    basis = DerivationBasis(algebra, members, GELLMANN, normalization="gellmann: Tr(g_j g_k) = 2 delta_jk")
    basis._build_tables()
    return basis


def coordinate_basis(algebra: AlgebraDescriptor) -> DerivationBasis:
    """∂/∂ξᵃ, a = 1..2n (q's first, then p's)."""
    if not algebra.is_polynomial:
        raise AlgebraMismatch(f"coordinate basis needs a polynomial algebra, got {algebra.label}")
    members = [VectorField.coordinate(algebra, a) for a in range(algebra.nvars)]
    basis = DerivationBasis(algebra, members, COORDINATE, normalization="coordinate fields")
    basis._build_tables()
    return basis


def default_basis(algebra: AlgebraDescriptor) -> DerivationBasis:
    if algebra.is_matrix:
        return gellmann_basis(algebra)
    if algebra.is_polynomial:
        return coordinate_basis(algebra)
    return product_basis(default_basis(algebra.left), default_basis(algebra.right))


def from_derivations(algebra: AlgebraDescriptor, derivations: Sequence[Derivation]) -> DerivationBasis:
    """Basis of the Lie subalgebra spanned by ``derivations``.

    Raises NotLieSubalgebra when some bracket leaves the span.
    """
    basis = DerivationBasis(algebra, derivations, SUBALGEBRA, normalization="user generators")
    basis._build_tables(strict_closure=True)
    return basis


def product_basis(left: DerivationBasis, right: DerivationBasis) -> DerivationBasis:
    """{X̃ᵢ⁽¹⁾} ∪ {Ỹⱼ⁽²⁾} on left ⊗ right."""
    from ..algebra.descriptors import tensor_algebra

    algebra = tensor_algebra(left.algebra, right.algebra)
    members = [LiftedDerivation(algebra, LEFT, x) for x in left.derivations]
    members += [LiftedDerivation(algebra, RIGHT, y) for y in right.derivations]
    basis = DerivationBasis(
        algebra,
        members,
        PRODUCT,
        normalization=f"product of ({left.normalization}) and ({right.normalization})",
        factors=(left, right),
    )
    basis._build_tables()
    return basis


def lifted_basis(algebra: AlgebraDescriptor, side: str, factor: DerivationBasis) -> DerivationBasis:
    """One factor's basis lifted to the tensor algebra.

    On Poly ⊗ Matrix with the right Gell-Mann basis this is IDer over the
    center-polynomial coefficients.
    """
    members = [LiftedDerivation(algebra, side, x) for x in factor.derivations]
    basis = DerivationBasis(
        algebra,
        members,
        LIFTED,
        normalization=f"{side} lift of ({factor.normalization})",
        factors=(factor,),
    )
    basis._build_tables()
    return basis


def random_derivation(basis: DerivationBasis, rng: np.random.Generator, max_degree: int = 1) -> CompositeDerivation:
    """Seeded Σ cₖXₖ; polynomial coefficients of degree <= max_degree on phase spaces."""
    if basis.coefficient_domain == COMPLEX_SCALARS:
        return basis.combine_scalars(rng.normal(size=basis.size) + 1j * rng.normal(size=basis.size))
    from ..algebra.polynomial import monomials_up_to

    algebra = basis.algebra
    nvars = len(_zero_key(algebra))
    keys = list(monomials_up_to(nvars, max_degree))
    return basis.combine([
        central_element(algebra, {k: complex(rng.normal(), rng.normal()) for k in keys})
        for _ in range(basis.size)
    ])
