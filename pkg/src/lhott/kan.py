"""Dependent sum and product along a functor, with all canonical maps.

Both Kan extensions are computed pointwise over the comma fiber f/y:

* the sum is the coequalizer of "transport minus inclusion" over the fiber
  morphisms (coinvariants), presented on the reduced-echelon quotient basis
  with an explicit section;
* the product is the corresponding equalizer (invariants), presented on the
  free-column kernel basis with an explicit coordinate pick.

Transports of the resulting systems are induced by whiskering the fiber
along morphisms of the codomain, so every structure map is an actual matrix
and functoriality is a computation, never an identification.  The canonical
comparison maps live here too: adjunction units/counits, the composition
isomorphism Σ_g Σ_f ≅ Σ_{g∘f}, the projection formula, linear de Morgan
duality, the ambidexterity (norm) map, and the Beck-Chevalley map of a
filled square.

Everything that the model guarantees to be invertible is verified at
construction time and raises InternalAxiomFailure otherwise; nothing is
silently assumed.
"""

from functools import lru_cache

from .errors import (
    BaseMismatch,
    IncoherentSquare,
    InternalAxiomFailure,
    NonInvertibleNorm,
)
from .groupoids import compose_functors, homotopy_fiber
from .ratmat import F1, Mat, block_diag, coker, hstack, nullspace, picker, vstack
from .systems import (
    LocalSystem,
    SystemMap,
    compose as compose_maps,
    dual,
    pullback,
    pullback_map,
    tensor,
)

_fiber = lru_cache(maxsize=4096)(homotopy_fiber)


class KanResult:
    """A computed Kan extension: the system on the codomain plus, per
    codomain object, the fiber it was computed over and the structure maps
    (cocone components into the sum / cone components out of the product)."""

    __slots__ = ("kind", "functor", "coefficients", "system", "fibers",
                 "structure_maps", "offsets", "sections", "projections")

    def __init__(self, kind, functor, coefficients, system, fibers,
                 structure_maps, offsets, sections, projections):
        self.kind = kind
        self.functor = functor
        self.coefficients = coefficients
        self.system = system
        self.fibers = fibers
        self.structure_maps = structure_maps
        # per codomain object: slot offsets into the fiber direct sum
        self.offsets = offsets
        # sum:  sections = quotient sections,     projections = quotient maps
        # prod: sections = kernel inclusions,     projections = coordinate picks
        self.sections = sections
        self.projections = projections

    def structure_map(self, y, slot):
        """slot: either an index or an (x, φ) fiber object label."""
        if not isinstance(slot, int):
            slot = self.fibers[y].obj_index[slot]
        return self.structure_maps[y][slot]


def _layout(fib, A):
    dims = [A.dims[x] for (x, _) in fib.objects]
    offsets = [0]
    for d in dims:
        offsets.append(offsets[-1] + d)
    return dims, offsets


def _sum_presentation(fib, A):
    """Sparse columns of the relation map for the coequalizer."""
    dims, off = _layout(fib, A)
    total = off[-1]
    cols = []
    G = fib.groupoid
    for k, (i, m) in enumerate(fib.morphisms):
        j = G.tgt[k]
        t = A.transport[m]
        for c in range(dims[i]):
            col = {}
            for r in range(dims[j]):
                v = t.rows[r][c]
                if v:
                    col[off[j] + r] = v
            col[off[i] + c] = col.get(off[i] + c, 0) - F1
            if not col[off[i] + c]:
                del col[off[i] + c]
            if col:
                cols.append(col)
    return cols, off, total


def _prod_presentation(fib, A):
    """Sparse rows of the relation map for the equalizer."""
    dims, off = _layout(fib, A)
    total = off[-1]
    rows = []
    G = fib.groupoid
    for k, (i, m) in enumerate(fib.morphisms):
        j = G.tgt[k]
        t = A.transport[m]
        for r in range(dims[j]):
            row = {}
            for c in range(dims[i]):
                v = t.rows[r][c]
                if v:
                    row[off[i] + c] = v
            row[off[j] + r] = row.get(off[j] + r, 0) - F1
            if not row[off[j] + r]:
                del row[off[j] + r]
            if row:
                rows.append(row)
    return rows, off, total


def _whisker_rows(src_kr_matrix_rows, fib_y, fib_y2, off_y, off_y2, dims, Y, psi):
    """Rows of (block-permutation @ M) where the permutation relabels the
    fiber of y to the fiber of y' along ψ: slot (x, φ) goes to (x, ψ∘φ)."""
    ncols = len(src_kr_matrix_rows[0]) if src_kr_matrix_rows else 0
    out = [None] * (off_y2[-1] if off_y2 else 0)
    for i, (x, phi) in enumerate(fib_y.objects):
        j = fib_y2.obj_index[(x, Y.comp[(psi, phi)])]
        for r in range(dims[i]):
            out[off_y2[j] + r] = src_kr_matrix_rows[off_y[i] + r]
    return out


@lru_cache(maxsize=1024)
def dependent_sum(f, A):
    """Left Kan extension Σ_f A: fiberwise coinvariants."""
    if A.base != f.domain:
        raise BaseMismatch("dependent sum needs the system on the functor's domain")
    Y = f.codomain
    fibers, projs, sects, offs, struct = [], [], [], [], []
    for y in range(Y.n_objects):
        fib = _fiber(f, y)
        cols, off, total = _sum_presentation(fib, A)
        P, S = coker(cols, total)
        fibers.append(fib)
        projs.append(P)
        sects.append(S)
        offs.append(off)
        struct.append(tuple(P.col_slice(off[i], off[i + 1])
                            for i in range(len(fib.objects))))
    dims_out = [P.nrows for P in projs]
    transports = []
    for psi in range(Y.n_morphisms):
        y, y2 = Y.src[psi], Y.tgt[psi]
        fib, fib2 = fibers[y], fibers[y2]
        dims, _ = _layout(fib, A)
        rows = _whisker_rows(sects[y].rows, fib, fib2, offs[y], offs[y2], dims, Y, psi)
        moved = Mat(rows, ncols=sects[y].ncols)
        transports.append(projs[y2] @ moved)
    system = LocalSystem(Y, dims_out, transports)
    return KanResult("sum", f, A, system, tuple(fibers),
                     tuple(struct), tuple(offs), tuple(sects), tuple(projs))


@lru_cache(maxsize=1024)
def dependent_product(f, A):
    """Right Kan extension Π_f A: fiberwise invariants."""
    if A.base != f.domain:
        raise BaseMismatch("dependent product needs the system on the functor's domain")
    Y = f.codomain
    fibers, incls, picks, offs, struct = [], [], [], [], []
    for y in range(Y.n_objects):
        fib = _fiber(f, y)
        rows, off, total = _prod_presentation(fib, A)
        N, free = nullspace(rows, total)
        L = picker(free, total)
        fibers.append(fib)
        incls.append(N)
        picks.append(L)
        offs.append(off)
        struct.append(tuple(N.row_slice(off[i], off[i + 1])
                            for i in range(len(fib.objects))))
    dims_out = [N.ncols for N in incls]
    transports = []
    for psi in range(Y.n_morphisms):
        y, y2 = Y.src[psi], Y.tgt[psi]
        fib, fib2 = fibers[y], fibers[y2]
        dims, _ = _layout(fib, A)
        rows = _whisker_rows(incls[y].rows, fib, fib2, offs[y], offs[y2], dims, Y, psi)
        moved = Mat(rows, ncols=incls[y].ncols)
        transports.append(picks[y2] @ moved)
    system = LocalSystem(Y, dims_out, transports)
    return KanResult("prod", f, A, system, tuple(fibers),
                     tuple(struct), tuple(offs), tuple(incls), tuple(picks))


def sum_map(f, h):
    """Σ_f applied to a map of systems on the domain."""
    krs = dependent_sum(f, h.source)
    krt = dependent_sum(f, h.target)
    comps = []
    for y in range(f.codomain.n_objects):
        fib = krs.fibers[y]
        blocks = block_diag([h.components[x] for (x, _) in fib.objects])
        comps.append(krt.projections[y] @ (blocks @ krs.sections[y]))
    return SystemMap(krs.system, krt.system, comps)


def prod_map(f, h):
    """Π_f applied to a map of systems on the domain."""
    krs = dependent_product(f, h.source)
    krt = dependent_product(f, h.target)
    comps = []
    for y in range(f.codomain.n_objects):
        fib = krs.fibers[y]
        blocks = block_diag([h.components[x] for (x, _) in fib.objects])
        comps.append(krt.projections[y] @ (blocks @ krs.sections[y]))
    return SystemMap(krs.system, krt.system, comps)


def counit_sum(f, B):
    """ε: Σ_f f*B → B, induced by transporting each slot along its witness."""
    C = pullback(f, B)
    kr = dependent_sum(f, C)
    comps = []
    for y in range(f.codomain.n_objects):
        fib = kr.fibers[y]
        row = hstack([B.transport[phi] for (_, phi) in fib.objects],
                     nrows=B.dims[y])
        comps.append(row @ kr.sections[y])
    return SystemMap(kr.system, B, comps)


def unit_sum(f, A):
    """η̃: A → f*Σ_f A, the cocone component at the identity witness."""
    kr = dependent_sum(f, A)
    comps = []
    for x in range(f.domain.n_objects):
        y = f.obj_map[x]
        comps.append(kr.structure_map(y, (x, f.codomain.id_of[y])))
    return SystemMap(A, pullback(f, kr.system), comps)


def unit_prod(f, B):
    """η: B → Π_f f*B, the inverse-transported family at each slot."""
    C = pullback(f, B)
    kr = dependent_product(f, C)
    Y = f.codomain
    comps = []
    for y in range(Y.n_objects):
        fib = kr.fibers[y]
        st = vstack([B.transport[Y.inv[phi]] for (_, phi) in fib.objects],
                    ncols=B.dims[y])
        coords = kr.projections[y] @ st
        if kr.sections[y] @ coords != st:
            raise InternalAxiomFailure("unit family is not invariant")
        comps.append(coords)
    return SystemMap(B, kr.system, comps)


def counit_prod(f, A):
    """ε̃: f*Π_f A → A, the cone component at the identity witness."""
    kr = dependent_product(f, A)
    comps = []
    for x in range(f.domain.n_objects):
        y = f.obj_map[x]
        comps.append(kr.structure_map(y, (x, f.codomain.id_of[y])))
    return SystemMap(pullback(f, kr.system), A, comps)


class AdjunctionMaps:
    """The four canonical natural maps of (Σ_f ⊣ f* ⊣ Π_f), as constructors."""

    __slots__ = ("functor",)

    def __init__(self, functor):
        self.functor = functor

    def counit_sum(self, B):
        return counit_sum(self.functor, B)

    def unit_sum(self, A):
        return unit_sum(self.functor, A)

    def unit_prod(self, B):
        return unit_prod(self.functor, B)

    def counit_prod(self, A):
        return counit_prod(self.functor, A)


def adjunction_maps(f):
    return AdjunctionMaps(f)


def ambidexterity_map(f, C):
    """The norm Σ_f C → Π_f C: sum of transports over all fiber morphisms.

    Well-definedness on the coequalizer and landing in the equalizer are
    checked block by block before the quotient/kernel bases are applied.
    """
    krs = dependent_sum(f, C)
    krp = dependent_product(f, C)
    comps = []
    for y in range(f.codomain.n_objects):
        fib = krs.fibers[y]
        dims, off = _layout(fib, C)
        total = off[-1]
        entries = {}
        G = fib.groupoid
        for k, (i, m) in enumerate(fib.morphisms):
            j = G.tgt[k]
            t = C.transport[m]
            for r in range(dims[j]):
                for c in range(dims[i]):
                    v = t.rows[r][c]
                    if v:
                        key = (off[j] + r, off[i] + c)
                        entries[key] = entries.get(key, 0) + v
        T = Mat.from_entries(total, total, entries)
        for k, (i, m) in enumerate(fib.morphisms):
            j = G.tgt[k]
            t = C.transport[m]
            if T.col_slice(off[j], off[j + 1]) @ t != T.col_slice(off[i], off[i + 1]):
                raise InternalAxiomFailure("transfer not constant on the quotient")
            if t @ T.row_slice(off[i], off[i + 1]) != T.row_slice(off[j], off[j + 1]):
                raise InternalAxiomFailure("transfer does not land in invariants")
        comps.append(krp.projections[y] @ (T @ krs.sections[y]))
    return SystemMap(krs.system, krp.system, comps)


def norm_map(f, A):
    """Norm Σ_f f*A → Π_f f*A for A on the codomain."""
    if A.base != f.codomain:
        raise BaseMismatch("norm map takes coefficients on the codomain")
    nm = ambidexterity_map(f, pullback(f, A))
    if not nm.is_equivalence():
        raise NonInvertibleNorm("norm map is singular; this cannot happen over ℚ")
    return nm


def frobenius_iso(f, A, B):
    """Projection formula Σ_f((f*B)⊗A) → B ⊗ Σ_f A, verified invertible."""
    if A.base != f.domain:
        raise BaseMismatch("A must live on the domain")
    if B.base != f.codomain:
        raise BaseMismatch("B must live on the codomain")
    src_kr = dependent_sum(f, tensor(pullback(f, B), A))
    krA = dependent_sum(f, A)
    target = tensor(B, krA.system)
    comps = []
    for y in range(f.codomain.n_objects):
        fib = src_kr.fibers[y]
        blocks = [B.transport[phi].kron(krA.structure_maps[y][i])
                  for i, (_, phi) in enumerate(fib.objects)]
        row = hstack(blocks, nrows=target.dims[y])
        comps.append(row @ src_kr.sections[y])
    out = SystemMap(src_kr.system, target, comps)
    if not out.is_equivalence():
        raise InternalAxiomFailure("projection formula map is singular")
    return out


def de_morgan_iso(f, A):
    """Π_f 𝔻A → 𝔻 Σ_f A: pair an invariant covector family against a
    section of the quotient; verified invertible."""
    if A.base != f.domain:
        raise BaseMismatch("de Morgan needs the system on the domain")
    krs = dependent_sum(f, A)
    krp = dependent_product(f, dual(A))
    target = dual(krs.system)
    comps = []
    for y in range(f.codomain.n_objects):
        comps.append(krs.sections[y].T @ krp.sections[y])
    out = SystemMap(krp.system, target, comps)
    if not out.is_equivalence():
        raise InternalAxiomFailure("de Morgan comparison is singular")
    return out


def sum_compose_iso(g, f, A):
    """Σ_{g∘f} A → Σ_g Σ_f A, built from the two layers of cocone structure
    maps; verified invertible.  This is the computed middle equivalence used
    by every pull-push composite."""
    gf = compose_functors(g, f)
    kr_gf = dependent_sum(gf, A)
    kr_f = dependent_sum(f, A)
    kr_g = dependent_sum(g, kr_f.system)
    comps = []
    for w in range(g.codomain.n_objects):
        fib = kr_gf.fibers[w]
        blocks = []
        for (x, phi) in fib.objects:
            y = f.obj_map[x]
            inner = kr_f.structure_map(y, (x, f.codomain.id_of[y]))
            outer = kr_g.structure_map(w, (y, phi))
            blocks.append(outer @ inner)
        row = hstack(blocks, nrows=kr_g.system.dims[w])
        comps.append(row @ kr_gf.sections[w])
    out = SystemMap(kr_gf.system, kr_g.system, comps)
    if not out.is_equivalence():
        raise InternalAxiomFailure("composition comparison is singular")
    return out


class BeckChevalleySquare:
    """A filled square k∘h ⇒ g∘f over a common corner, as produced by
    iso_comma (h, f the projections; k, g the cospan)."""

    __slots__ = ("h", "f", "k", "g", "filling")

    def __init__(self, h, f, k, g, filling):
        if h.domain != f.domain:
            raise IncoherentSquare("h and f must share their domain")
        if k.codomain != g.codomain:
            raise IncoherentSquare("k and g must share their codomain")
        if h.codomain != k.domain or f.codomain != g.domain:
            raise IncoherentSquare("square corners do not match")
        if (filling.source_functor != compose_functors(k, h)
                or filling.target_functor != compose_functors(g, f)):
            raise IncoherentSquare("filling cell does not fill this square")
        self.h = h
        self.f = f
        self.k = k
        self.g = g
        self.filling = filling

    @staticmethod
    def from_iso_comma(ic, k, g):
        return BeckChevalleySquare(ic.proj1, ic.proj2, k, g, ic.filling)


def beck_chevalley(square, A):
    """The canonical map Σ_f h*A → g* Σ_k A for a filled square.

    An equivalence whenever the square is the iso-comma (homotopy pullback);
    for arbitrary filled squares the map is still defined and the caller can
    interrogate is_equivalence().
    """
    h, f, k, g = square.h, square.f, square.k, square.g
    if A.base != k.domain:
        raise BaseMismatch("coefficients must live on the source corner")
    S = dependent_sum(k, A).system
    step1 = pullback_map(h, unit_sum(k, A))          # h*A → h*k*Σ_k A
    Ssq = pullback(compose_functors(k, h), S)
    Tsq = pullback(compose_functors(g, f), S)
    mid = SystemMap(Ssq, Tsq,
                    [S.transport[square.filling.component(z)]
                     for z in range(h.domain.n_objects)])
    eps = counit_sum(f, pullback(g, S))              # Σ_f f*g*Σ_k A → g*Σ_k A
    return compose_maps(eps, sum_map(f, compose_maps(mid, step1)))


def verify_sum_universality(f, A, y):
    """Check the computed colimit against every competing cocone.

    The space of scalar cocones is the kernel of the transposed relation
    map, computed independently of the quotient basis; each one must factor
    through the projection, uniquely.  Returns the number of cocones checked.
    """
    kr = dependent_sum(f, A)
    fib = kr.fibers[y]
    cols, off, total = _sum_presentation(fib, A)
    basis, _ = nullspace([dict(c) for c in cols], total)
    # basis columns are independent scalar cocones λ: ⊕ → ℚ with λ∘R = 0
    if basis.ncols != kr.system.dims[y]:
        raise InternalAxiomFailure("cocone space dimension mismatch")
    P, S = kr.projections[y], kr.sections[y]
    for c in range(basis.ncols):
        lam = Mat([ [basis.rows[r][c] for r in range(total)] ], ncols=total)
        t = lam @ S
        if t @ P != lam:
            raise InternalAxiomFailure("a cocone fails to factor through the sum")
    if not (P @ S).is_identity():
        raise InternalAxiomFailure("projection admits no section")
    return basis.ncols


def verify_prod_universality(f, A, y):
    """Check the computed limit against every competing cone: the cone space
    is recomputed as the kernel of the relation rows and must coincide with
    the image of the inclusion, with unique factorization."""
    kr = dependent_product(f, A)
    fib = kr.fibers[y]
    rows, off, total = _prod_presentation(fib, A)
    basis, _ = nullspace([dict(r) for r in rows], total)
    N, L = kr.sections[y], kr.projections[y]
    if basis.ncols != N.ncols:
        raise InternalAxiomFailure("cone space dimension mismatch")
    for c in range(basis.ncols):
        v = Mat.column([basis.rows[r][c] for r in range(total)])
        s = L @ v
        if N @ s != v:
            raise InternalAxiomFailure("a cone fails to factor through the product")
    if not (L @ N).is_identity():
        raise InternalAxiomFailure("inclusion admits no retraction")
    return basis.ncols
