"""Local systems of rational vector spaces and the maps between them.

A local system assigns a dimension to every object of its base groupoid and
an invertible transport matrix to every morphism, multiplicatively.  Each
fiber comes with a chosen basis, so "canonical isomorphism" always means an
explicit matrix; the two exceptions, baked in as strict equalities, are
pullback functoriality (f* g* = (g∘f)*) and strong monoidality of pullback
(f*(A⊗B) = f*A ⊗ f*B), which hold on the nose in this presentation.

Tensor is the Kronecker product with row-major block convention; with that
choice tensoring with the unit system is literally the identity, and the
double dual is literally the original system, so those structural
isomorphisms are identity maps while associator and braiding are honest
permutation matrices.
"""

from fractions import Fraction

from .errors import (
    BaseMismatch,
    CarrierMismatch,
    Composability,
    NotAnEquivalence,
    ValidationError,
)
from .ratmat import F0, F1, Mat, SingularMatrix


class LocalSystem:
    __slots__ = ("base", "dims", "transport", "_hash")

    def __init__(self, base, dims, transport, validate=True):
        self.base = base
        self.dims = tuple(int(d) for d in dims)
        self.transport = tuple(transport)
        self._hash = None
        if validate:
            self._validate()

    def _validate(self):
        G = self.base
        if len(self.dims) != G.n_objects or any(d < 0 for d in self.dims):
            raise ValidationError("dimension table has wrong shape")
        if len(self.transport) != G.n_morphisms:
            raise ValidationError("transport table has wrong length")
        for m, t in enumerate(self.transport):
            if t.shape != (self.dims[G.tgt[m]], self.dims[G.src[m]]):
                raise ValidationError("transport %d has shape %s, expected %s"
                                      % (m, t.shape,
                                         (self.dims[G.tgt[m]], self.dims[G.src[m]])))
        for x in range(G.n_objects):
            if not self.transport[G.id_of[x]].is_identity():
                raise ValidationError("transport of id_%d is not the identity" % x)
        for (m2, m1), m in G.comp.items():
            if self.transport[m] != self.transport[m2] @ self.transport[m1]:
                raise ValidationError("transport not multiplicative at (%d, %d)"
                                      % (m2, m1))
        for m in range(G.n_morphisms):
            prod = self.transport[G.inv[m]] @ self.transport[m]
            if not prod.is_identity():
                raise ValidationError("transport %d is not invertible" % m)

    def dim(self, x):
        return self.dims[x]

    def total_dim(self):
        return sum(self.dims)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LocalSystem):
            return NotImplemented
        return (self.base == other.base and self.dims == other.dims
                and self.transport == other.transport)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.base), self.dims, self.transport))
        return self._hash

    def __repr__(self):
        return "LocalSystem(dims=%r)" % (list(self.dims),)


class SystemMap:
    """Morphism of local systems over a shared base: one matrix per object,
    natural with respect to every transport."""

    __slots__ = ("source", "target", "components", "_hash")

    def __init__(self, source, target, components, validate=True):
        self.source = source
        self.target = target
        self.components = tuple(components)
        self._hash = None
        if validate:
            self._validate()

    def _validate(self):
        if self.source.base != self.target.base:
            raise BaseMismatch("source and target live over different bases")
        G = self.source.base
        if len(self.components) != G.n_objects:
            raise ValidationError("wrong number of components")
        for x, c in enumerate(self.components):
            if c.shape != (self.target.dims[x], self.source.dims[x]):
                raise ValidationError("component %d has shape %s, expected %s"
                                      % (x, c.shape,
                                         (self.target.dims[x], self.source.dims[x])))
        for m in range(G.n_morphisms):
            x, y = G.src[m], G.tgt[m]
            lhs = self.components[y] @ self.source.transport[m]
            rhs = self.target.transport[m] @ self.components[x]
            if lhs != rhs:
                raise ValidationError("naturality fails at morphism %d" % m)

    def component(self, x):
        return self.components[x]

    def is_equivalence(self):
        return all(c.is_invertible() for c in self.components)

    def inverse(self):
        try:
            return SystemMap(self.target, self.source,
                             [c.inverse() for c in self.components],
                             validate=False)
        except SingularMatrix:
            raise NotAnEquivalence("a component is singular")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SystemMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.source), hash(self.target),
                               self.components))
        return self._hash

    def __repr__(self):
        return "SystemMap(%r -> %r)" % (self.source, self.target)


def unit_system(base):
    one = Mat.identity(1)
    return LocalSystem(base, [1] * base.n_objects,
                       [one] * base.n_morphisms, validate=False)


def tensor(A, B):
    if A.base != B.base:
        raise BaseMismatch("tensor needs a shared base")
    dims = [a * b for a, b in zip(A.dims, B.dims)]
    transport = [ta.kron(tb) for ta, tb in zip(A.transport, B.transport)]
    return LocalSystem(A.base, dims, transport, validate=False)


def dual(A):
    transport = [t.inverse().T for t in A.transport]
    return LocalSystem(A.base, A.dims, transport, validate=False)


def pullback(f, A):
    if A.base != f.codomain:
        raise BaseMismatch("pullback needs the system on the functor's codomain")
    dims = [A.dims[f.obj_map[x]] for x in range(f.domain.n_objects)]
    transport = [A.transport[f.mor_map[m]] for m in range(f.domain.n_morphisms)]
    return LocalSystem(f.domain, dims, transport, validate=False)


def identity_map(A):
    return SystemMap(A, A, [Mat.identity(d) for d in A.dims], validate=False)


def compose(g, f):
    if f.target != g.source:
        raise Composability("maps do not compose: target/source differ")
    return SystemMap(f.source, g.target,
                     [cg @ cf for cg, cf in zip(g.components, f.components)],
                     validate=False)


def invert(h):
    """Objectwise inverse when every component is invertible."""
    return h.inverse()


def tensor_map(h, k):
    return SystemMap(tensor(h.source, k.source), tensor(h.target, k.target),
                     [ch.kron(ck) for ch, ck in zip(h.components, k.components)])


def dual_map(h):
    """𝔻h: dual(target) → dual(source), componentwise transpose."""
    return SystemMap(dual(h.target), dual(h.source),
                     [c.T for c in h.components])


def pullback_map(f, h):
    return SystemMap(pullback(f, h.source), pullback(f, h.target),
                     [h.components[f.obj_map[x]] for x in range(f.domain.n_objects)],
                     validate=False)


def double_dual_iso(A):
    """A → 𝔻𝔻A.  Inverse-transpose twice is the original matrix, so the
    double dual is the same system on the nose and the map is the identity."""
    DD = dual(dual(A))
    assert DD == A
    return identity_map(A)


def unitor_iso(A):
    """A ⊗ 1 → A; Kronecker with a 1×1 identity is a strict no-op."""
    T = tensor(A, unit_system(A.base))
    assert T == A
    return identity_map(A)


def _commutation_matrix(p, q):
    """Permutation with K @ vec(a⊗b) = vec(b⊗a) for dim a = p, dim b = q."""
    entries = {}
    for i in range(p):
        for j in range(q):
            entries[(j * p + i, i * q + j)] = F1
    return Mat.from_entries(p * q, p * q, entries)


def braiding_iso(A, B):
    """A ⊗ B → B ⊗ A via the commutation permutation at each object."""
    return SystemMap(tensor(A, B), tensor(B, A),
                     [_commutation_matrix(a, b) for a, b in zip(A.dims, B.dims)])


def associator_iso(A, B, C):
    """(A⊗B)⊗C → A⊗(B⊗C); strict for the row-major Kronecker convention."""
    L = tensor(tensor(A, B), C)
    R = tensor(A, tensor(B, C))
    assert L == R
    return identity_map(L)


def zero_map(A, B):
    if A.base != B.base:
        raise BaseMismatch("zero map needs a shared base")
    return SystemMap(A, B, [Mat.zero(db, da) for da, db in zip(A.dims, B.dims)],
                     validate=False)


class InnerProduct:
    """A self-duality A ≃ 𝔻A with symmetric (as bilinear form) components."""

    __slots__ = ("carrier", "pairing")

    def __init__(self, carrier, pairing, validate=True):
        self.carrier = carrier
        self.pairing = pairing
        if validate:
            if pairing.source != carrier or pairing.target != dual(carrier):
                raise CarrierMismatch("pairing must map the carrier to its dual")
            if not pairing.is_equivalence():
                raise NotAnEquivalence("inner product pairing is degenerate")
            for x, c in enumerate(pairing.components):
                if c != c.T:
                    raise ValidationError("pairing at object %d is not symmetric" % x)

    def gram(self, x):
        return self.pairing.components[x]

    def inverse_gram(self, x):
        return self.pairing.components[x].inverse()


def standard_inner_product(A):
    """Identity-matrix pairing.  Only natural when every transport is
    orthogonal (permutation-like systems); validation enforces that."""
    pairing = SystemMap(A, dual(A), [Mat.identity(d) for d in A.dims])
    return InnerProduct(A, pairing)


def pullback_inner_product(f, ip):
    return InnerProduct(pullback(f, ip.carrier),
                        pullback_map(f, ip.pairing), validate=False)
