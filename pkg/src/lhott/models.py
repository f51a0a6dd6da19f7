"""End-to-end models with independent oracles.

Two worked instantiations of the quantization pipeline, each paired with a
verification route that bypasses the linear algebra entirely:

* matrix calculus over discrete contexts, checked against plain matrix
  multiplication;
* untwisted finite gauge theory on closed orientable surfaces, checked
  against brute-force homomorphism counting (and, when character data is
  supplied, against the closed-form irrep sum).

Surfaces appear only through their fundamental group presentation; a genus
g surface contributes the single relation ∏ᵢ [aᵢ, bᵢ] = e.  Partition
function values are never hard-coded: the counting oracle is the ground
truth.
"""

from fractions import Fraction

from .errors import BadCharacterData, ShapeMismatch, SizeLimit, ValidationError
from .groupoids import (
    GroupoidFunctor,
    action_groupoid,
    discrete,
    group_identity,
    group_inverses,
    point_groupoid,
    product,
    terminal_functor,
)
from .homcount import count_relation_solutions, decode_tuple, relation_solutions
from .quantize import (
    Correspondence,
    PrequantumKernel,
    canonical_fundamental_class,
    compose_kernels,
    secondary_transform,
    trivial_kernel,
)
from .ratmat import Mat
from .systems import SystemMap, unit_system

DEFAULT_LIMIT = 10 ** 6


class SurfaceSpec:
    """A closed orientable surface, described by its genus."""

    __slots__ = ("genus",)

    def __init__(self, genus):
        if genus < 0:
            raise ValidationError("genus must be nonnegative")
        self.genus = int(genus)

    def __repr__(self):
        return "SurfaceSpec(genus=%d)" % self.genus


def _check_limit(table, genus, limit):
    total = len(table) ** (2 * genus)
    if total > limit:
        raise SizeLimit("would enumerate %d tuples, limit is %d" % (total, limit))
    return total


def _conjugation_action(table, flats, length):
    """Action rows of G on encoded tuples by coordinatewise conjugation."""
    n = len(table)
    inv = group_inverses(table)
    index = {int(t): i for i, t in enumerate(flats)}
    rows = []
    for g in range(n):
        row = []
        for t in flats:
            tup = decode_tuple(int(t), n, length)
            flat = 0
            for x in tup:
                flat = flat * n + table[table[g][x]][inv[g]]
            row.append(index[flat])
        rows.append(row)
    return rows


def rep_groupoid(spec, table, limit=DEFAULT_LIMIT):
    """Hom(π₁Σ_g, G) // G: solution tuples of the surface relation with
    simultaneous conjugation, enumerated by brute force."""
    _check_limit(table, spec.genus, limit)
    flats = relation_solutions(table, spec.genus)
    rows = _conjugation_action(table, flats, 2 * spec.genus)
    return action_groupoid(len(flats), table, rows)


def dw_brute_force(table, spec, limit=DEFAULT_LIMIT):
    """|Hom(π₁Σ_g, G)| / |G| by pure counting; the oracle of record."""
    _check_limit(table, spec.genus, limit)
    return Fraction(count_relation_solutions(table, spec.genus), len(table))


def dw_partition(table, spec, limit=DEFAULT_LIMIT):
    """The untwisted finite-gauge partition function, computed as the
    secondary transform of the trivial kernel on point ← Hom//G → point."""
    rep = rep_groupoid(spec, table, limit=limit)
    t = terminal_functor(rep)
    k = trivial_kernel(Correspondence(rep, t, t))
    out = secondary_transform(k, canonical_fundamental_class(t))
    return out.rows[0][0]


def mednykh_cross_check(irrep_dims, order, spec):
    """Closed-form irrep sum Σ (|G|/d)^{2g-2}; character data is supplied by
    the caller and sanity-checked against the group order."""
    dims = [int(d) for d in irrep_dims]
    if any(d <= 0 for d in dims):
        raise BadCharacterData("irrep dimensions must be positive")
    if sum(d * d for d in dims) != order:
        raise BadCharacterData("sum of squared dimensions must equal the order")
    e = 2 * spec.genus - 2
    return sum((Fraction(order, d) ** e for d in dims), Fraction(0))


class MatrixModelReport:
    __slots__ = ("transform", "oracle", "equal")

    def __init__(self, transform, oracle, equal):
        self.transform = transform
        self.oracle = oracle
        self.equal = equal

    def __repr__(self):
        return "MatrixModelReport(equal=%r)" % self.equal


def matrix_kernel(K):
    """The discrete-context kernel of a rational matrix: unit coefficients
    on the product correspondence, entrywise multiplication as the kernel."""
    n1, n2 = K.nrows, K.ncols
    pr = product(discrete(n1), discrete(n2))
    corr = Correspondence(pr.groupoid, pr.proj1, pr.proj2)
    u = unit_system(pr.groupoid)
    comps = [Mat([[K.rows[x][y]]]) for x in range(n1) for y in range(n2)]
    return PrequantumKernel(corr, unit_system(discrete(n1)),
                            unit_system(discrete(n2)),
                            SystemMap(u, u, comps, validate=False))


def matrix_model(K, v):
    """Run a rational matrix through the transform pipeline and compare
    with direct multiplication."""
    K = K if isinstance(K, Mat) else Mat(K)
    v = v if isinstance(v, Mat) else Mat.column(v)
    if v.ncols != 1 or v.nrows != K.ncols:
        raise ShapeMismatch("vector must be a column of length %d" % K.ncols)
    k = matrix_kernel(K)
    T = secondary_transform(k, canonical_fundamental_class(k.corr.right))
    result = T @ v
    oracle = K @ v
    return MatrixModelReport(result, oracle, result == oracle)


def loop_groupoid(table):
    """G // G under conjugation (the free loop space of the delooping)."""
    n = len(table)
    inv = group_inverses(table)
    rows = [[table[table[g][x]][inv[g]] for x in range(n)] for g in range(n)]
    return action_groupoid(n, table, rows)


def punctured_rep(genus, table, limit=DEFAULT_LIMIT, reverse=False):
    """Hom(π₁(Σ_g ∖ disk), G) // G — all 2g-tuples under conjugation — with
    the boundary-holonomy functor to G // G.  `reverse` inverts the
    boundary word, which is the orientation the second glued piece needs."""
    n = len(table)
    total = _check_limit(table, genus, limit)
    inv = group_inverses(table)
    flats = list(range(total))
    rows = _conjugation_action(table, flats, 2 * genus)
    P = action_groupoid(total, table, rows)
    loop = loop_groupoid(table)
    e = group_identity(table)
    boundary = []
    for t in flats:
        tup = decode_tuple(t, n, 2 * genus)
        c = e
        for i in range(genus):
            a, b = tup[2 * i], tup[2 * i + 1]
            c = table[table[table[table[c][a]][b]][inv[a]]][inv[b]]
        boundary.append(inv[c] if reverse else c)
    obj_map = boundary
    mor_map = [boundary[m // n] * n + (m % n) for m in range(P.n_morphisms)]
    return P, GroupoidFunctor(P, loop, obj_map, mor_map)


class GlueReport:
    __slots__ = ("glued", "direct", "equal")

    def __init__(self, glued, direct, equal):
        self.glued = glued
        self.direct = direct
        self.equal = equal

    def __repr__(self):
        return "GlueReport(equal=%r)" % self.equal


def dw_glue_check(table, g1, g2, limit=DEFAULT_LIMIT):
    """Glue two punctured surfaces along their boundary circle: compose the
    two boundary-holonomy spans over G // G, quantize the composite, and
    compare with the closed-surface partition function."""
    n = len(table)
    # the composite apex holds up to |G|^{2g1+2g2+1} objects
    if n ** (2 * (g1 + g2) + 1) > limit:
        raise SizeLimit("glued span would exceed the enumeration limit")
    P1, b1 = punctured_rep(g1, table, limit=limit)
    P2, b2 = punctured_rep(g2, table, limit=limit, reverse=True)
    k1 = PrequantumKernel(
        Correspondence(P1, terminal_functor(P1), b1),
        unit_system(point_groupoid()), unit_system(b1.codomain),
        _unit_kernel_map(P1))
    k2 = PrequantumKernel(
        Correspondence(P2, b2, terminal_functor(P2)),
        unit_system(b2.codomain), unit_system(point_groupoid()),
        _unit_kernel_map(P2))
    kk = compose_kernels(k2, k1)
    glued = secondary_transform(
        kk, canonical_fundamental_class(kk.corr.right)).rows[0][0]
    direct = dw_partition(table, SurfaceSpec(g1 + g2), limit=limit)
    return GlueReport(glued, direct, glued == direct)


def _unit_kernel_map(apex):
    u = unit_system(apex)
    return SystemMap(u, u, [Mat.identity(1)] * apex.n_objects, validate=False)
