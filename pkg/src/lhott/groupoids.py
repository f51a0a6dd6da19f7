"""Finite groupoids, functors between them, and comma constructions.

A groupoid is stored completely explicitly: objects and morphisms are dense
integer ids, composition is a total table on composable pairs, and every
value is immutable and validated on construction.  Nothing is ever
skeletonized behind the caller's back; fibers and iso-commas come out
exactly as enumerated, so all the canonical maps built on top of them are
strictly functorial with no choice of representatives.

Composition convention: ``compose(m2, m1)`` is "m1 first, then m2", written
m2 ∘ m1 throughout.  Group multiplication tables use the same convention,
``table[a][b] = a·b`` acting as "apply b first", which is what makes group
actions satisfy action(a·b, x) = action(a, action(b, x)).
"""

from fractions import Fraction

from .errors import (
    Composability,
    CodomainMismatch,
    NotAGroup,
    NotAnAction,
    UnknownObject,
    ValidationError,
)


class FiniteGroupoid:
    __slots__ = ("n_objects", "src", "tgt", "id_of", "inv", "comp",
                 "out", "_hash", "_components")

    def __init__(self, n_objects, src, tgt, id_of, inv, comp, validate=True):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.id_of = tuple(id_of)
        self.inv = tuple(inv)
        self.comp = dict(comp)
        out = [[] for _ in range(n_objects)]
        for m, x in enumerate(self.src):
            out[x].append(m)
        self.out = tuple(tuple(ms) for ms in out)
        self._hash = None
        self._components = None
        if validate:
            self._validate()

    @property
    def n_morphisms(self):
        return len(self.src)

    def _validate(self):
        n, src, tgt = self.n_objects, self.src, self.tgt
        nm = len(src)
        if len(tgt) != nm or len(self.inv) != nm or len(self.id_of) != n:
            raise ValidationError("table sizes inconsistent")
        if any(not (0 <= x < n) for x in src + tgt):
            raise ValidationError("morphism endpoint out of range")
        for x, e in enumerate(self.id_of):
            if src[e] != x or tgt[e] != x:
                raise ValidationError("identity of %d has wrong endpoints" % x)
        comp = self.comp
        for (m2, m1), m in comp.items():
            if src[m2] != tgt[m1]:
                raise ValidationError("non-composable pair in table")
            if src[m] != src[m1] or tgt[m] != tgt[m2]:
                raise ValidationError("composite has wrong endpoints")
        # totality on composable pairs
        for m1 in range(nm):
            for m2 in self.out[tgt[m1]]:
                if (m2, m1) not in comp:
                    raise ValidationError("missing composite %d o %d" % (m2, m1))
        if len(comp) != sum(len(self.out[tgt[m1]]) for m1 in range(nm)):
            raise ValidationError("extra entries in composition table")
        for m in range(nm):
            if comp[(m, self.id_of[src[m]])] != m:
                raise ValidationError("right unit fails at %d" % m)
            if comp[(self.id_of[tgt[m]], m)] != m:
                raise ValidationError("left unit fails at %d" % m)
            i = self.inv[m]
            if src[i] != tgt[m] or tgt[i] != src[m]:
                raise ValidationError("inverse of %d has wrong endpoints" % m)
            if comp[(i, m)] != self.id_of[src[m]] or comp[(m, i)] != self.id_of[tgt[m]]:
                raise ValidationError("inverse law fails at %d" % m)
        for m1 in range(nm):
            for m2 in self.out[tgt[m1]]:
                m21 = comp[(m2, m1)]
                for m3 in self.out[tgt[m2]]:
                    if comp[(m3, m21)] != comp[(comp[(m3, m2)], m1)]:
                        raise ValidationError("associativity fails")

    def compose(self, m2, m1):
        try:
            return self.comp[(m2, m1)]
        except KeyError:
            raise Composability("morphisms %d, %d not composable" % (m2, m1))

    def identity(self, x):
        return self.id_of[x]

    def inverse(self, m):
        return self.inv[m]

    def hom(self, x, y):
        return tuple(m for m in self.out[x] if self.tgt[m] == y)

    def automorphisms(self, x):
        return self.hom(x, x)

    def components(self):
        """Connected components: (labels per object, representatives)."""
        if self._components is None:
            label = [-1] * self.n_objects
            reps = []
            for x in range(self.n_objects):
                if label[x] >= 0:
                    continue
                c = len(reps)
                reps.append(x)
                stack = [x]
                label[x] = c
                while stack:
                    u = stack.pop()
                    for m in self.out[u]:
                        v = self.tgt[m]
                        if label[v] < 0:
                            label[v] = c
                            stack.append(v)
            self._components = (tuple(label), tuple(reps))
        return self._components

    def cardinality(self):
        _, reps = self.components()
        return sum((Fraction(1, len(self.automorphisms(r))) for r in reps),
                   Fraction(0))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.n_objects == other.n_objects and self.src == other.src
                and self.tgt == other.tgt and self.id_of == other.id_of
                and self.inv == other.inv and self.comp == other.comp)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_objects, self.src, self.tgt,
                               self.id_of, self.inv,
                               frozenset(self.comp.items())))
        return self._hash

    def __repr__(self):
        return "FiniteGroupoid(%d objects, %d morphisms)" % (
            self.n_objects, self.n_morphisms)


class GroupoidFunctor:
    __slots__ = ("domain", "codomain", "obj_map", "mor_map", "_hash")

    def __init__(self, domain, codomain, obj_map, mor_map, validate=True):
        self.domain = domain
        self.codomain = codomain
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        self._hash = None
        if validate:
            self._validate()

    def _validate(self):
        dom, cod = self.domain, self.codomain
        if len(self.obj_map) != dom.n_objects or len(self.mor_map) != dom.n_morphisms:
            raise ValidationError("functor maps have wrong lengths")
        if any(not (0 <= y < cod.n_objects) for y in self.obj_map):
            raise ValidationError("object image out of range")
        if any(not (0 <= k < cod.n_morphisms) for k in self.mor_map):
            raise ValidationError("morphism image out of range")
        for m in range(dom.n_morphisms):
            k = self.mor_map[m]
            if cod.src[k] != self.obj_map[dom.src[m]] or cod.tgt[k] != self.obj_map[dom.tgt[m]]:
                raise ValidationError("functor breaks source/target at %d" % m)
        for x in range(dom.n_objects):
            if self.mor_map[dom.id_of[x]] != cod.id_of[self.obj_map[x]]:
                raise ValidationError("functor breaks identity at %d" % x)
        for (m2, m1), m in dom.comp.items():
            if cod.comp[(self.mor_map[m2], self.mor_map[m1])] != self.mor_map[m]:
                raise ValidationError("functor breaks composition")

    def on_obj(self, x):
        return self.obj_map[x]

    def on_mor(self, m):
        return self.mor_map[m]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroupoidFunctor):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.domain), hash(self.codomain),
                               self.obj_map, self.mor_map))
        return self._hash

    def __repr__(self):
        return "GroupoidFunctor(%r -> %r)" % (self.domain, self.codomain)


class NaturalIso:
    """A 2-cell between parallel functors, given by one morphism per object."""

    __slots__ = ("source_functor", "target_functor", "components")

    def __init__(self, source_functor, target_functor, components, validate=True):
        self.source_functor = source_functor
        self.target_functor = target_functor
        self.components = tuple(components)
        if validate:
            self._validate()

    def _validate(self):
        f, g = self.source_functor, self.target_functor
        if f.domain != g.domain or f.codomain != g.codomain:
            raise ValidationError("functors not parallel")
        dom, cod = f.domain, f.codomain
        if len(self.components) != dom.n_objects:
            raise ValidationError("wrong number of components")
        for x, c in enumerate(self.components):
            if cod.src[c] != f.obj_map[x] or cod.tgt[c] != g.obj_map[x]:
                raise ValidationError("component at %d has wrong endpoints" % x)
        for m in range(dom.n_morphisms):
            x, y = dom.src[m], dom.tgt[m]
            lhs = cod.comp[(self.components[y], f.mor_map[m])]
            rhs = cod.comp[(g.mor_map[m], self.components[x])]
            if lhs != rhs:
                raise ValidationError("naturality fails at morphism %d" % m)

    def component(self, x):
        return self.components[x]


# ---------------------------------------------------------------------------
# group tables


def is_group_table(table):
    n = len(table)
    if any(len(row) != n for row in table):
        return False
    for row in table:
        for v in row:
            if not (0 <= v < n):
                return False
    es = [e for e in range(n)
          if all(table[e][b] == b for b in range(n))
          and all(table[a][e] == a for a in range(n))]
    if len(es) != 1:
        return False
    e = es[0]
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            return False
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return False
    return True


def group_identity(table):
    for e in range(len(table)):
        if all(table[e][b] == b for b in range(len(table))):
            return e
    raise NotAGroup("no identity element")


def group_inverses(table):
    n = len(table)
    e = group_identity(table)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == e and table[b][a] == e:
                inv[a] = b
                break
        if inv[a] is None:
            raise NotAGroup("element %d has no inverse" % a)
    return inv


def cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_table(n):
    """S_n on {0..n-1}; elements are permutation tuples in lexicographic
    order, so the identity is element 0.  table[a][b] = a ∘ b."""
    from itertools import permutations
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(p[q[i]] for i in range(n))] for q in perms]
            for p in perms]


def group_product_table(t1, t2):
    n2 = len(t2)
    return [[t1[a1][b1] * n2 + t2[a2][b2]
             for b1 in range(len(t1)) for b2 in range(n2)]
            for a1 in range(len(t1)) for a2 in range(n2)]


# ---------------------------------------------------------------------------
# constructions


def delooping(table):
    """One-object groupoid with the given group as automorphisms."""
    table = [list(r) for r in table]
    if not is_group_table(table):
        raise NotAGroup("multiplication table fails the group axioms")
    n = len(table)
    e = group_identity(table)
    inv = group_inverses(table)
    comp = {(a, b): table[a][b] for a in range(n) for b in range(n)}
    return FiniteGroupoid(1, [0] * n, [0] * n, [e], inv, comp)


def _normalize_action(table, n_elements, action):
    if callable(action):
        rows = [[action(g, x) for x in range(n_elements)] for g in range(len(table))]
    else:
        rows = [list(r) for r in action]
    return rows


def action_groupoid(n_elements, table, action):
    """Action groupoid X//G: objects the set elements, a morphism
    x → action(g, x) for every (g, x).  Morphism id is x*|G| + g."""
    if not is_group_table(table):
        raise NotAGroup("multiplication table fails the group axioms")
    nG = len(table)
    e = group_identity(table)
    inv = group_inverses(table)
    rows = _normalize_action(table, n_elements, action)
    if len(rows) != nG or any(len(r) != n_elements for r in rows):
        raise NotAnAction("action table has wrong shape")
    for x in range(n_elements):
        if rows[e][x] != x:
            raise NotAnAction("identity does not act trivially")
    for a in range(nG):
        for b in range(nG):
            for x in range(n_elements):
                if rows[table[a][b]][x] != rows[a][rows[b][x]]:
                    raise NotAnAction("action is not compatible with multiplication")
    src, tgt, invs = [], [], []
    for x in range(n_elements):
        for g in range(nG):
            src.append(x)
            tgt.append(rows[g][x])
            invs.append(rows[g][x] * nG + inv[g])
    id_of = [x * nG + e for x in range(n_elements)]
    comp = {}
    for x in range(n_elements):
        for g1 in range(nG):
            m1 = x * nG + g1
            y = rows[g1][x]
            for g2 in range(nG):
                comp[(y * nG + g2, m1)] = x * nG + table[g2][g1]
    return FiniteGroupoid(n_elements, src, tgt, id_of, invs, comp)


def discrete(n):
    return FiniteGroupoid(n, range(n), range(n), range(n), range(n),
                          {(x, x): x for x in range(n)})


_POINT = None


def point_groupoid():
    global _POINT
    if _POINT is None:
        _POINT = discrete(1)
    return _POINT


def empty_groupoid():
    return discrete(0)


class ProductResult:
    __slots__ = ("groupoid", "proj1", "proj2")

    def __init__(self, groupoid, proj1, proj2):
        self.groupoid = groupoid
        self.proj1 = proj1
        self.proj2 = proj2


def product(X, Y):
    """Product groupoid with its projections; object (x, y) has id x*nY + y,
    morphism (m, k) has id m*mY + k."""
    nY, mY = Y.n_objects, Y.n_morphisms
    n = X.n_objects * nY
    src, tgt, inv, id_of = [], [], [], []
    for m in range(X.n_morphisms):
        for k in range(mY):
            src.append(X.src[m] * nY + Y.src[k])
            tgt.append(X.tgt[m] * nY + Y.tgt[k])
            inv.append(X.inv[m] * mY + Y.inv[k])
    for x in range(X.n_objects):
        for y in range(nY):
            id_of.append(X.id_of[x] * mY + Y.id_of[y])
    comp = {}
    for (m2, m1), m in X.comp.items():
        for (k2, k1), k in Y.comp.items():
            comp[(m2 * mY + k2, m1 * mY + k1)] = m * mY + k
    P = FiniteGroupoid(n, src, tgt, id_of, inv, comp)
    p1 = GroupoidFunctor(P, X,
                         [x for x in range(X.n_objects) for _ in range(nY)],
                         [m for m in range(X.n_morphisms) for _ in range(mY)])
    p2 = GroupoidFunctor(P, Y,
                         list(range(nY)) * X.n_objects,
                         list(range(mY)) * X.n_morphisms)
    return ProductResult(P, p1, p2)


class UnionResult:
    __slots__ = ("groupoid", "incl1", "incl2")

    def __init__(self, groupoid, incl1, incl2):
        self.groupoid = groupoid
        self.incl1 = incl1
        self.incl2 = incl2


def disjoint_union(X, Y):
    n0, m0 = X.n_objects, X.n_morphisms
    src = list(X.src) + [x + n0 for x in Y.src]
    tgt = list(X.tgt) + [x + n0 for x in Y.tgt]
    inv = list(X.inv) + [m + m0 for m in Y.inv]
    id_of = list(X.id_of) + [m + m0 for m in Y.id_of]
    comp = dict(X.comp)
    for (k2, k1), k in Y.comp.items():
        comp[(k2 + m0, k1 + m0)] = k + m0
    U = FiniteGroupoid(n0 + Y.n_objects, src, tgt, id_of, inv, comp)
    i1 = GroupoidFunctor(X, U, range(n0), range(m0))
    i2 = GroupoidFunctor(Y, U, [x + n0 for x in range(Y.n_objects)],
                         [m + m0 for m in range(Y.n_morphisms)])
    return UnionResult(U, i1, i2)


def identity_functor(X):
    return GroupoidFunctor(X, X, range(X.n_objects), range(X.n_morphisms),
                           validate=False)


def terminal_functor(X):
    pt = point_groupoid()
    return GroupoidFunctor(X, pt, [0] * X.n_objects, [0] * X.n_morphisms,
                           validate=False)


def constant_functor(X, Y, y):
    return GroupoidFunctor(X, Y, [y] * X.n_objects,
                           [Y.id_of[y]] * X.n_morphisms)


def compose_functors(g, f):
    if f.codomain != g.domain:
        raise Composability("functors not composable")
    return GroupoidFunctor(f.domain, g.codomain,
                           [g.obj_map[y] for y in f.obj_map],
                           [g.mor_map[k] for k in f.mor_map],
                           validate=False)


def delooping_functor(BH, BG, hom):
    """Functor B H → B G induced by a group homomorphism given elementwise."""
    return GroupoidFunctor(BH, BG, [0], list(hom))


class FiberResult:
    """Comma groupoid f/y: objects are (x, φ: f(x) → y), morphisms are the
    m: x → x' with φ' ∘ f(m) = φ.  Morphism k of the fiber is the pair
    (source object index, m); both orderings are lexicographic."""

    __slots__ = ("groupoid", "projection", "objects", "obj_index",
                 "morphisms", "mor_index")

    def __init__(self, groupoid, projection, objects, morphisms):
        self.groupoid = groupoid
        self.projection = projection
        self.objects = tuple(objects)
        self.obj_index = {ob: i for i, ob in enumerate(self.objects)}
        self.morphisms = tuple(morphisms)
        self.mor_index = {mk: i for i, mk in enumerate(self.morphisms)}


def homotopy_fiber(f, y):
    X, Y = f.domain, f.codomain
    if not (0 <= y < Y.n_objects):
        raise UnknownObject("object %r not in the codomain" % (y,))
    # Identity-witness slots (φ = id_y, i.e. the literal preimage) are listed
    # last: that makes the reduced-echelon quotient basis of any colimit over
    # the fiber coincide with those slots whenever possible, so e.g. the sum
    # along an identity functor returns its input on the nose.
    objects = []
    for x in range(X.n_objects):
        for phi in Y.hom(f.obj_map[x], y):
            objects.append((x, phi))
    id_y = Y.id_of[y]
    objects.sort(key=lambda ob: (ob[1] == id_y, ob[0], ob[1]))
    obj_index = {ob: i for i, ob in enumerate(objects)}
    morphisms = []   # (source object index, m)
    src, tgt = [], []
    for i, (x, phi) in enumerate(objects):
        for m in X.out[x]:
            morphisms.append((i, m))
            src.append(i)
            # φ' = φ ∘ f(m)⁻¹ makes (m, φ) a fiber morphism to (x', φ')
            phi2 = Y.comp[(phi, Y.inv[f.mor_map[m]])]
            tgt.append(obj_index[(X.tgt[m], phi2)])
    mor_index = {mk: i for i, mk in enumerate(morphisms)}
    id_of = [mor_index[(i, X.id_of[x])] for i, (x, phi) in enumerate(objects)]
    inv = []
    for k, (i, m) in enumerate(morphisms):
        inv.append(mor_index[(tgt[k], X.inv[m])])
    comp = {}
    for k1, (i1, m1) in enumerate(morphisms):
        j = tgt[k1]
        for m2 in X.out[X.tgt[m1]]:
            k2 = mor_index[(j, m2)]
            comp[(k2, k1)] = mor_index[(i1, X.comp[(m2, m1)])]
    F = FiniteGroupoid(len(objects), src, tgt, id_of, inv, comp)
    proj = GroupoidFunctor(F, X, [x for (x, _) in objects],
                           [m for (_, m) in morphisms], validate=False)
    return FiberResult(F, proj, objects, morphisms)


def fiber_whisker(f, y, psi, fib_y=None, fib_y2=None):
    """The functor f/y → f/y' induced by ψ: y → y' (postcomposition);
    an isomorphism of groupoids."""
    Y = f.codomain
    y2 = Y.tgt[psi]
    if Y.src[psi] != y:
        raise UnknownObject("whiskering morphism does not start at the fiber point")
    fib_y = fib_y or homotopy_fiber(f, y)
    fib_y2 = fib_y2 or homotopy_fiber(f, y2)
    obj_map = [fib_y2.obj_index[(x, Y.comp[(psi, phi)])]
               for (x, phi) in fib_y.objects]
    mor_map = [fib_y2.mor_index[(obj_map[i], m)]
               for (i, m) in fib_y.morphisms]
    return GroupoidFunctor(fib_y.groupoid, fib_y2.groupoid, obj_map, mor_map)


class IsoCommaResult:
    """Iso-comma groupoid of f: X → W ← Z :g — the model's homotopy
    pullback.  Objects are (x, z, φ: f(x) → g(z)); the filling NaturalIso
    has component φ at (x, z, φ)."""

    __slots__ = ("groupoid", "proj1", "proj2", "filling", "objects",
                 "obj_index", "morphisms", "mor_index")

    def __init__(self, groupoid, proj1, proj2, filling, objects, morphisms):
        self.groupoid = groupoid
        self.proj1 = proj1
        self.proj2 = proj2
        self.filling = filling
        self.objects = tuple(objects)
        self.obj_index = {ob: i for i, ob in enumerate(self.objects)}
        self.morphisms = tuple(morphisms)
        self.mor_index = {mk: i for i, mk in enumerate(self.morphisms)}


def iso_comma(f, g):
    if f.codomain != g.codomain:
        raise CodomainMismatch("iso_comma needs a shared codomain")
    X, Z, W = f.domain, g.domain, f.codomain
    objects = []
    for x in range(X.n_objects):
        for z in range(Z.n_objects):
            for phi in W.hom(f.obj_map[x], g.obj_map[z]):
                objects.append((x, z, phi))
    obj_index = {ob: i for i, ob in enumerate(objects)}
    morphisms = []   # (source object index, m, n)
    src, tgt = [], []
    for i, (x, z, phi) in enumerate(objects):
        for m in X.out[x]:
            fm_inv = W.inv[f.mor_map[m]]
            for n in Z.out[z]:
                morphisms.append((i, m, n))
                src.append(i)
                phi2 = W.comp[(W.comp[(g.mor_map[n], phi)], fm_inv)]
                tgt.append(obj_index[(X.tgt[m], Z.tgt[n], phi2)])
    mor_index = {mk: i for i, mk in enumerate(morphisms)}
    id_of = [mor_index[(i, X.id_of[x], Z.id_of[z])]
             for i, (x, z, phi) in enumerate(objects)]
    inv = [mor_index[(tgt[k], X.inv[m], Z.inv[n])]
           for k, (i, m, n) in enumerate(morphisms)]
    comp = {}
    for k1, (i1, m1, n1) in enumerate(morphisms):
        j = tgt[k1]
        for m2 in X.out[X.tgt[m1]]:
            for n2 in Z.out[Z.tgt[n1]]:
                k2 = mor_index[(j, m2, n2)]
                comp[(k2, k1)] = mor_index[(i1, X.comp[(m2, m1)], Z.comp[(n2, n1)])]
    A = FiniteGroupoid(len(objects), src, tgt, id_of, inv, comp)
    p1 = GroupoidFunctor(A, X, [x for (x, _, _) in objects],
                         [m for (_, m, _) in morphisms], validate=False)
    p2 = GroupoidFunctor(A, Z, [z for (_, z, _) in objects],
                         [n for (_, _, n) in morphisms], validate=False)
    filling = NaturalIso(compose_functors(f, p1), compose_functors(g, p2),
                         [phi for (_, _, phi) in objects])
    return IsoCommaResult(A, p1, p2, filling, objects, morphisms)


def groupoid_cardinality(X):
    """Sum over components of 1/|Aut|, the homotopy cardinality."""
    return X.cardinality()


class SkeletonResult:
    __slots__ = ("groupoid", "inclusion", "retraction")

    def __init__(self, groupoid, inclusion, retraction):
        self.groupoid = groupoid
        self.inclusion = inclusion
        self.retraction = retraction


def skeletonize(X):
    """Equivalent skeleton: one object per component, full automorphisms.

    Optional helper; no engine operation depends on it.  The retraction
    conjugates through a BFS tree of connecting morphisms, so inclusion and
    retraction are both equivalences.
    """
    label, reps = X.components()
    conn = [None] * X.n_objects        # conn[x]: x -> rep of its component
    for r in reps:
        conn[r] = X.id_of[r]
        queue = [r]
        while queue:
            u = queue.pop(0)
            for m in X.out[u]:
                v = X.tgt[m]
                if conn[v] is None:
                    # v -> u -> rep
                    conn[v] = X.comp[(conn[u], X.inv[m])]
                    queue.append(v)
    obj_of_rep = {r: i for i, r in enumerate(reps)}
    morphs = [m for m in range(X.n_morphisms)
              if X.src[m] in obj_of_rep and X.tgt[m] in obj_of_rep]
    mor_of = {m: i for i, m in enumerate(morphs)}
    src = [obj_of_rep[X.src[m]] for m in morphs]
    tgt = [obj_of_rep[X.tgt[m]] for m in morphs]
    id_of = [mor_of[X.id_of[r]] for r in reps]
    inv = [mor_of[X.inv[m]] for m in morphs]
    comp = {}
    for i1, m1 in enumerate(morphs):
        for m2 in X.out[X.tgt[m1]]:
            if X.tgt[m2] in obj_of_rep:
                comp[(mor_of[m2], i1)] = mor_of[X.comp[(m2, m1)]]
    S = FiniteGroupoid(len(reps), src, tgt, id_of, inv, comp)
    incl = GroupoidFunctor(S, X, reps, morphs, validate=False)
    retr_obj = [obj_of_rep[reps[label[x]]] for x in range(X.n_objects)]
    retr_mor = []
    for m in range(X.n_morphisms):
        x, y = X.src[m], X.tgt[m]
        w = X.comp[(X.comp[(conn[y], m)], X.inv[conn[x]])]
        retr_mor.append(mor_of[w])
    retr = GroupoidFunctor(X, S, retr_obj, retr_mor)
    return SkeletonResult(S, incl, retr)


def is_equivalence_functor(F):
    """Essentially surjective + fully faithful, checked by brute force."""
    X, Y = F.domain, F.codomain
    ylabel, _ = Y.components()
    hit = set(ylabel[F.obj_map[x]] for x in range(X.n_objects))
    if hit != set(range(len(set(ylabel)))):
        return False
    for x1 in range(X.n_objects):
        for x2 in range(X.n_objects):
            homs = X.hom(x1, x2)
            images = set(F.mor_map[m] for m in homs)
            if len(images) != len(homs):
                return False
            if len(homs) != len(Y.hom(F.obj_map[x1], F.obj_map[x2])):
                return False
    return True


def group_isomorphism(t1, t2):
    """Search for an isomorphism between two multiplication tables.

    Returns the element mapping as a list, or None.  Backtracking with
    order-profile pruning; meant for the desk-scale groups used here.
    """
    n = len(t1)
    if len(t2) != n:
        return None

    def orders(t):
        e = group_identity(t)
        out = []
        for a in range(n):
            k, b = 1, a
            while b != e:
                b = t[a][b]
                k += 1
            out.append(k)
        return out

    o1, o2 = orders(t1), orders(t2)
    if sorted(o1) != sorted(o2):
        return None
    cands = [[b for b in range(n) if o2[b] == o1[a]] for a in range(n)]
    mapping = [None] * n
    used = [False] * n

    def extend(a):
        if a == n:
            return True
        if mapping[a] is not None:
            return extend(a + 1)
        for b in cands[a]:
            if used[b]:
                continue
            # tentatively map a -> b, propagate products with settled elements
            trail = []
            ok = True
            mapping[a] = b
            used[b] = True
            trail.append(a)
            stack = [a]
            while stack and ok:
                u = stack.pop()
                for v in range(n):
                    if mapping[v] is None:
                        continue
                    for (p, q) in ((u, v), (v, u)):
                        w = t1[p][q]
                        img = t2[mapping[p]][mapping[q]]
                        if mapping[w] is None:
                            if used[img] or o1[w] != o2[img]:
                                ok = False
                                break
                            mapping[w] = img
                            used[img] = True
                            trail.append(w)
                            stack.append(w)
                        elif mapping[w] != img:
                            ok = False
                            break
                    if not ok:
                        break
            if ok and extend(a + 1):
                return True
            for w in trail:
                used[mapping[w]] = False
                mapping[w] = None
        return False

    if extend(0):
        return list(mapping)
    return None


def find_equivalence(X, Y):
    """Explicit equivalence functor X → Y, or None.

    Components are matched by automorphism-group isomorphism search; the
    resulting functor collapses each component onto the matched
    representative of Y.
    """
    lx, rx = X.components()
    ly, ry = Y.components()
    if len(rx) != len(ry):
        return None

    def vertex_table(G, r):
        auts = G.automorphisms(r)
        idx = {m: i for i, m in enumerate(auts)}
        return auts, [[idx[G.comp[(a, b)]] for b in auts] for a in auts]

    sx = skeletonize(X)
    tables_y = [vertex_table(Y, r) for r in ry]
    used = [False] * len(ry)
    assign = [None] * len(rx)   # (y component, element map)
    for i, r in enumerate(rx):
        auts_x, tx = vertex_table(X, r)
        found = False
        for j in range(len(ry)):
            if used[j]:
                continue
            iso = group_isomorphism(tx, tables_y[j][1])
            if iso is not None:
                used[j] = True
                assign[i] = (j, auts_x, iso)
                found = True
                break
        if not found:
            return None
    # functor X -> Y via the skeleton retraction
    obj_map = []
    for x in range(X.n_objects):
        j, _, _ = assign[lx[x]]
        obj_map.append(ry[j])
    mor_map = []
    for m in range(X.n_morphisms):
        c = lx[X.src[m]]
        j, auts_x, iso = assign[c]
        w = sx.retraction.mor_map[m]
        # w is an automorphism of the skeleton vertex for component c
        wm = sx.inclusion.mor_map[w]
        k = auts_x.index(wm)
        mor_map.append(tables_y[j][0][iso[k]])
    return GroupoidFunctor(X, Y, obj_map, mor_map)
