"""Pull-push quantization: fundamental classes, integral kernels, the
secondary transform, dagger structure and the anomaly checks.

The wrong-way machinery is normalized once and for all: the canonical
fundamental class on f is the un-normalized norm map (sum of transports
over all fiber morphisms) inverted against the product-side unit,

    [f]_A = Nm⁻¹ ∘ η : A → Σ_f f*A   (twist = 1).

With this choice the transform of the trivial kernel on point ← X → point
is exactly the groupoid cardinality of X, which is what makes the finite
gauge theory models come out as homomorphism counting.  Any other choice
rescales transforms by computable units; none is implemented.

Directions follow the kernel convention ξ: i₂*A₂ → i₁*A₁, and the (dual)
secondary transform runs Σ_{X₂}(A₂⊗τ) → Σ_{X₁}A₁ as the five-arrow
composite; middle equivalences are the computed composition isomorphisms,
never identifications.
"""

from .errors import (
    BaseMismatch,
    CarrierMismatch,
    InterfaceMismatch,
    InternalAxiomFailure,
    NotAnEquivalence,
    ShapeMismatch,
    TwistedClassUnsupported,
    ValidationError,
)
from .groupoids import (
    GroupoidFunctor,
    compose_functors,
    identity_functor,
    iso_comma,
    point_groupoid,
    product,
    terminal_functor,
)
from .kan import (
    ambidexterity_map,
    counit_sum,
    de_morgan_iso,
    dependent_product,
    dependent_sum,
    frobenius_iso,
    norm_map,
    sum_compose_iso,
    sum_map,
    unit_prod,
)
from .ratmat import Mat
from .systems import (
    InnerProduct,
    LocalSystem,
    SystemMap,
    compose,
    dual,
    dual_map,
    identity_map,
    pullback,
    pullback_map,
    tensor,
    tensor_map,
    unit_system,
)


class Correspondence:
    """A span of contexts X₁ ← Z → X₂."""

    __slots__ = ("apex", "left", "right")

    def __init__(self, apex, left, right):
        if left.domain != apex or right.domain != apex:
            raise InterfaceMismatch("legs must start at the apex")
        self.apex = apex
        self.left = left
        self.right = right

    def __eq__(self, other):
        if not isinstance(other, Correspondence):
            return NotImplemented
        return (self.apex == other.apex and self.left == other.left
                and self.right == other.right)

    def __repr__(self):
        return "Correspondence(%r <- %r -> %r)" % (
            self.left.codomain, self.apex, self.right.codomain)


class PrequantumKernel:
    """A correspondence with coefficients and the kernel map ξ: i₂*A₂ → i₁*A₁."""

    __slots__ = ("corr", "a1", "a2", "xi")

    def __init__(self, corr, a1, a2, xi):
        if a1.base != corr.left.codomain:
            raise BaseMismatch("A1 must live on the left context")
        if a2.base != corr.right.codomain:
            raise BaseMismatch("A2 must live on the right context")
        if xi.source != pullback(corr.right, a2) or xi.target != pullback(corr.left, a1):
            raise InterfaceMismatch("kernel map must run i2*A2 -> i1*A1 over the apex")
        self.corr = corr
        self.a1 = a1
        self.a2 = a2
        self.xi = xi


def trivial_kernel(corr):
    """Unit coefficients, identity kernel map."""
    u = unit_system(corr.apex)
    return PrequantumKernel(corr, unit_system(corr.left.codomain),
                            unit_system(corr.right.codomain),
                            SystemMap(u, u, [Mat.identity(1)] * corr.apex.n_objects,
                                      validate=False))


def identity_kernel(X, A):
    """The identity correspondence X ← X → X with identity kernel on A."""
    i = identity_functor(X)
    return PrequantumKernel(Correspondence(X, i, i), A, A, identity_map(A))


class FundamentalClass:
    """A twist τ on the codomain of f plus the defining comparison
    Σ_f f*1 ≃ Π_f f*τ, stored as verified norm data."""

    __slots__ = ("along", "twist", "norm_equivalence")

    def __init__(self, along, twist, norm_equivalence):
        Y = along.codomain
        if twist.base != Y:
            raise BaseMismatch("twist must live on the codomain")
        if any(d != 1 for d in twist.dims):
            raise ValidationError("twist must be invertible (all fibers 1-dimensional)")
        expected_src = dependent_sum(along, pullback(along, unit_system(Y))).system
        expected_tgt = dependent_product(along, pullback(along, twist)).system
        if norm_equivalence.source != expected_src or norm_equivalence.target != expected_tgt:
            raise InterfaceMismatch("comparison must run Σ_f f*1 -> Π_f f*τ")
        if not norm_equivalence.is_equivalence():
            raise NotAnEquivalence("the defining comparison map is not invertible")
        self.along = along
        self.twist = twist
        self.norm_equivalence = norm_equivalence

    @property
    def is_untwisted(self):
        return self.twist == unit_system(self.along.codomain)


def canonical_fundamental_class(f):
    """Untwisted class with the norm map as the defining equivalence."""
    Y = f.codomain
    nm = norm_map(f, unit_system(Y))
    return FundamentalClass(f, unit_system(Y), nm)


def twisted_fundamental_class(f, twist, comparison):
    """User-supplied twist and comparison; validated, never searched for."""
    return FundamentalClass(f, twist, comparison)


def fundamental_class_map(fc, A):
    """[f]_A: A ⊗ τ → Σ_f f*A, natural in A.

    Canonical classes use Nm⁻¹ ∘ η directly; twisted classes extend the
    stored unit-level datum along the projection formula.
    """
    f = fc.along
    if A.base != f.codomain:
        raise BaseMismatch("coefficients must live on the codomain")
    if fc.is_untwisted and fc.norm_equivalence == norm_map(f, unit_system(f.codomain)):
        nm = norm_map(f, A)
        return compose(nm.inverse(), unit_prod(f, A))
    # τ-level class: τ → Σ_f f*1
    eta = unit_prod(f, fc.twist)
    cls1 = compose(fc.norm_equivalence.inverse(), eta)
    # tensor with A and push through the projection formula
    X = f.domain
    fr = frobenius_iso(f, unit_system(X), A)   # Σ_f f*A → A ⊗ Σ_f f*1
    return compose(fr.inverse(), tensor_map(identity_map(A), cls1))


def measure(fc, A):
    """dμ_f(A): the dual of the global dependent sum of [f]_A, as a matrix
    𝔻(Σ_Y Σ_f f*A) → 𝔻(Σ_Y (A⊗τ))."""
    t = terminal_functor(fc.along.codomain)
    return sum_map(t, fundamental_class_map(fc, A)).components[0].T


def global_sum(X, A):
    """Σ_X A as a KanResult over the point."""
    return dependent_sum(terminal_functor(X), A)


def secondary_transform(k, fc):
    """The dual secondary integral transform of a kernel with a fundamental
    class on its right leg, as one matrix Σ_{X₂}(A₂⊗τ) → Σ_{X₁}A₁."""
    corr = k.corr
    if fc.along != corr.right:
        raise InterfaceMismatch("class must orient the right leg of the kernel")
    X1, X2, Z = corr.left.codomain, corr.right.codomain, corr.apex
    t1, t2, tz = terminal_functor(X1), terminal_functor(X2), terminal_functor(Z)
    c2 = pullback(corr.right, k.a2)
    c1 = pullback(corr.left, k.a1)
    m_class = sum_map(t2, fundamental_class_map(fc, k.a2)).components[0]
    chi2 = sum_compose_iso(t2, corr.right, c2).components[0]
    m_xi = sum_map(tz, k.xi).components[0]
    chi1 = sum_compose_iso(t1, corr.left, c1).components[0]
    m_eps = sum_map(t1, counit_sum(corr.left, k.a1)).components[0]
    return m_eps @ chi1 @ m_xi @ chi2.inverse() @ m_class


def secondary_transform_dual(k, fc):
    """The transform on dual section spaces 𝔻Σ_{X₁}A₁ → 𝔻Σ_{X₂}(A₂⊗τ):
    the matrix transpose, read through the de Morgan pairings."""
    return secondary_transform(k, fc).T


def compose_kernels(k2, k1):
    """Composite of X₁ ← Z₁ → X₂ and X₂ ← Z₂ → X₃ over the iso-comma of the
    middle legs; kernel maps paste through the filling isomorphism."""
    if k1.corr.right.codomain != k2.corr.left.codomain:
        raise InterfaceMismatch("middle contexts differ")
    if k1.a2 != k2.a1:
        raise InterfaceMismatch("middle coefficients differ")
    ic = iso_comma(k1.corr.right, k2.corr.left)
    q1, q2 = ic.proj1, ic.proj2
    left = compose_functors(k1.corr.left, q1)
    right = compose_functors(k2.corr.right, q2)
    corr = Correspondence(ic.groupoid, left, right)
    A2 = k1.a2
    xi1_w = pullback_map(q1, k1.xi)
    xi2_w = pullback_map(q2, k2.xi)
    # middle correction: transport A2 backwards along the filling component
    mid = SystemMap(xi2_w.target, xi1_w.source,
                    [A2.transport[ic.filling.component(w)].inverse()
                     for w in range(ic.groupoid.n_objects)],
                    validate=False)
    xi = compose(xi1_w, compose(mid, xi2_w))
    # re-validate against the composite legs
    xi = SystemMap(pullback(right, k2.a2), pullback(left, k1.a1), xi.components)
    return PrequantumKernel(corr, k1.a1, k2.a2, xi)


class AnomalyReport:
    __slots__ = ("composite", "pasted", "equal", "difference")

    def __init__(self, composite, pasted, equal, difference):
        self.composite = composite
        self.pasted = pasted
        self.equal = equal
        self.difference = difference

    def __repr__(self):
        return "AnomalyReport(equal=%r)" % self.equal


def anomaly_defect(k2, k1):
    """Compare quantize(k₂ ∘ k₁) against quantize(k₂)·quantize(k₁) with
    canonical classes everywhere; exact equality means no anomaly."""
    kk = compose_kernels(k2, k1)
    lhs = secondary_transform(kk, canonical_fundamental_class(kk.corr.right))
    t2 = secondary_transform(k2, canonical_fundamental_class(k2.corr.right))
    t1 = secondary_transform(k1, canonical_fundamental_class(k1.corr.right))
    # transforms run Σ_{X₂} → Σ_{X₁}, so the composite applies t2 first
    rhs = t1 @ t2
    return AnomalyReport(lhs, rhs, lhs == rhs, lhs - rhs)


class PolyDiagram:
    """X₁ ←f₁− W −g→ V −f₂→ X₂."""

    __slots__ = ("f1", "g", "f2")

    def __init__(self, f1, g, f2):
        if f1.domain != g.domain:
            raise BaseMismatch("f1 and g must share their domain")
        if f2.domain != g.codomain:
            raise BaseMismatch("f2 must start where g ends")
        self.f1 = f1
        self.g = g
        self.f2 = f2


def polynomial_functor(diagram, A):
    """Σ_{f₂} Π_g f₁* A."""
    if A.base != diagram.f1.codomain:
        raise BaseMismatch("coefficients must live on X1")
    pulled = pullback(diagram.f1, A)
    mid = dependent_product(diagram.g, pulled).system
    return dependent_sum(diagram.f2, mid).system


def pair_functor(prod_res, f1, f2):
    """⟨f1, f2⟩: Z → X₁ × X₂ for the given product construction."""
    if f1.domain != f2.domain:
        raise BaseMismatch("pairing needs a shared domain")
    X2 = f2.codomain
    nY, mY = X2.n_objects, X2.n_morphisms
    obj = [f1.obj_map[z] * nY + f2.obj_map[z] for z in range(f1.domain.n_objects)]
    mor = [f1.mor_map[m] * mY + f2.mor_map[m] for m in range(f1.domain.n_morphisms)]
    return GroupoidFunctor(f1.domain, prod_res.groupoid, obj, mor)


def kernel_factorization(corr, A):
    """Factor pull-push through the product correspondence: the kernel
    K = Σ_{(f₁,f₂)} 1_Z on X₁ × X₂ and the verified equivalence
    Σ_{f₂} f₁*A → Σ_{p₂}((p₁*A) ⊗ K)."""
    f1, f2 = corr.left, corr.right
    Z = corr.apex
    pr = product(f1.codomain, f2.codomain)
    q = pair_functor(pr, f1, f2)
    K = dependent_sum(q, unit_system(Z)).system
    pulled = pullback(pr.proj1, A)        # p₁*A on X₁ × X₂
    # Σ_{f₂} f₁*A → Σ_{p₂} Σ_q q*(p₁*A): composition isomorphism
    chi = sum_compose_iso(pr.proj2, q, pullback(f1, A))
    # Σ_q (q*(p₁*A) ⊗ 1_Z) → (p₁*A) ⊗ Σ_q 1_Z: projection formula
    fr = frobenius_iso(q, unit_system(Z), pulled)
    equivalence = compose(sum_map(pr.proj2, fr), chi)
    if not equivalence.is_equivalence():
        raise InternalAxiomFailure("kernel factorization comparison is singular")
    return K, equivalence


def transpose(h, ip_source, ip_target):
    """h† = ⟨-,-⟩_A⁻¹ ∘ 𝔻h ∘ ⟨-,-⟩_B for h: A → B."""
    if ip_source.carrier != h.source:
        raise CarrierMismatch("source inner product does not match")
    if ip_target.carrier != h.target:
        raise CarrierMismatch("target inner product does not match")
    comps = [ip_source.inverse_gram(x) @ h.components[x].T @ ip_target.gram(x)
             for x in range(h.source.base.n_objects)]
    return SystemMap(h.target, h.source, comps)


def induced_inner_product(f, ip):
    """The pairing on Σ_f f*A induced by a fiberwise pairing on A and the
    canonical (untwisted) class on f: norm, then de Morgan, then the dual
    of the summed fiberwise pairing.  Reduces to the literal standard
    product in the discrete case."""
    A = ip.carrier
    if A.base != f.codomain:
        raise BaseMismatch("carrier must live on the codomain")
    nm = norm_map(f, A)
    dm = de_morgan_iso(f, pullback(f, dual(A)))
    summed = sum_map(f, pullback_map(f, ip.pairing))
    pairing = compose(dual_map(summed), compose(dm, nm))
    carrier = dependent_sum(f, pullback(f, A)).system
    return InnerProduct(carrier, pairing)


def global_inner_product(ip, fc):
    """Inner product on Σ_X A from a fiberwise one and an untwisted class
    on X → point: summed pairing, then norm, then de Morgan."""
    if not fc.is_untwisted:
        raise TwistedClassUnsupported("global products need an untwisted class")
    t = fc.along
    if t.codomain != point_groupoid():
        raise CarrierMismatch("class must orient a map to the point")
    A = ip.carrier
    if A.base != t.domain:
        raise CarrierMismatch("carrier must live over the class's domain")
    s1 = sum_map(t, ip.pairing)
    s2 = ambidexterity_map(t, dual(A))
    s3 = de_morgan_iso(t, A)
    pairing = compose(s3, compose(s2, s1))
    return InnerProduct(dependent_sum(t, A).system, pairing)


def global_counit_matrix(i, A):
    """Σ_Z i*A → Σ_X A: composition isomorphism followed by the summed
    counit; the global push-forward of sections along i."""
    t = terminal_functor(i.codomain)
    chi = sum_compose_iso(t, i, pullback(i, A)).components[0]
    eps = sum_map(t, counit_sum(i, A)).components[0]
    return eps @ chi


def quantum_operation(k, ip):
    """Ξ ↦ (Σε₁) ∘ Ξ ∘ (Σε₂)† for a kernel whose legs land in the same
    context with the same coefficients (a square kernel); checked against
    the secondary transform of the same kernel."""
    corr = k.corr
    if corr.left.codomain != corr.right.codomain:
        raise ShapeMismatch("quantum operation needs legs into the same context")
    if k.a1 != k.a2:
        raise ShapeMismatch("quantum operation needs equal coefficients")
    if ip.carrier != k.a1:
        raise CarrierMismatch("inner product must live on the coefficients")
    X, Z = corr.left.codomain, corr.apex
    eps1 = global_counit_matrix(corr.left, k.a1)
    eps2 = global_counit_matrix(corr.right, k.a2)
    gram_x = global_inner_product(ip, canonical_fundamental_class(terminal_functor(X))).gram(0)
    ip_z = InnerProduct(pullback(corr.right, ip.carrier),
                        pullback_map(corr.right, ip.pairing))
    gram_z = global_inner_product(ip_z, canonical_fundamental_class(terminal_functor(Z))).gram(0)
    dagger = gram_z.inverse() @ eps2.T @ gram_x
    xi_global = sum_map(terminal_functor(Z), k.xi).components[0]
    out = eps1 @ xi_global @ dagger
    expected = secondary_transform(k, canonical_fundamental_class(corr.right))
    if out != expected:
        raise InternalAxiomFailure("dagger form disagrees with the transform")
    return out


class PastingReport:
    __slots__ = ("pasted", "direct", "equal", "difference")

    def __init__(self, pasted, direct, equal, difference):
        self.pasted = pasted
        self.direct = direct
        self.equal = equal
        self.difference = difference

    def __repr__(self):
        return "PastingReport(equal=%r)" % self.equal


def boundary_pasting_check(k, fc):
    """Recompute the transform as the unit component of the boundary
    pasting: the class map into Σ_{X₁}Σ_{i₁}i₂*A₂ followed by the summed
    adjunct ε ∘ Σ_{i₁}ξ; compare with the five-arrow composite."""
    corr = k.corr
    if fc.along != corr.right:
        raise InterfaceMismatch("class must orient the right leg of the kernel")
    X1, X2 = corr.left.codomain, corr.right.codomain
    t1, t2, tz = terminal_functor(X1), terminal_functor(X2), terminal_functor(corr.apex)
    c2 = pullback(corr.right, k.a2)
    adjunct = compose(counit_sum(corr.left, k.a1), sum_map(corr.left, k.xi))
    m_class = sum_map(t2, fundamental_class_map(fc, k.a2)).components[0]
    chi2 = sum_compose_iso(t2, corr.right, c2).components[0]
    chi1 = sum_compose_iso(t1, corr.left, c2).components[0]
    pasted = (sum_map(t1, adjunct).components[0]
              @ chi1 @ chi2.inverse() @ m_class)
    direct = secondary_transform(k, fc)
    return PastingReport(pasted, direct, pasted == direct, pasted - direct)


def linearize(f):
    """Σ_f 1: the linearization of a context over the codomain of f."""
    return dependent_sum(f, unit_system(f.domain)).system


def linearize_map(f, f2, r):
    """For a strict triangle f = f₂ ∘ r over the common codomain, the
    induced map Σ_f 1 → Σ_{f₂} 1: the summed counit through the
    composition isomorphism (the degenerate-correspondence transform)."""
    if compose_functors(f2, r) != f:
        raise InterfaceMismatch("triangle does not commute")
    u2 = unit_system(f2.domain)
    chi = sum_compose_iso(f2, r, unit_system(r.domain))
    return compose(sum_map(f2, counit_sum(r, u2)), chi)
