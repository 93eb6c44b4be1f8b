"""Finitely generated R-modules as presented cokernels.

A module is the cokernel of a matrix over R = S/I (rows = generators,
columns = relations).  Everything downstream — minimal resolutions,
syzygies, Fitting ideals, duals, freeness loci — is driven by the syzygy
engine of `groebner`, with minimal presentations normalized by pivoting on
unit entries (exact in the graded-local model by Nakayama).
"""

from __future__ import annotations

import threading

from .errors import RingMismatchError, NotInvertibleError, ValidationError
from .groebner import (
    Ideal,
    express_in_span,
    module_syzygies,
    vec_is_zero,
    vector_in_span,
)
from .spectra import SpecSubset, _minors


class ModulePres:
    """Cokernel presentation of a finitely generated R-module."""

    def __init__(self, ring, matrix):
        self.ring = ring
        rows = []
        width = None
        for raw in matrix:
            row = []
            for entry in raw:
                if isinstance(entry, str):
                    entry = ring.base.parse(entry)
                if entry.ring != ring.base:
                    raise RingMismatchError("matrix entry over a different ring")
                row.append(ring.nf(entry))
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValidationError("ragged presentation matrix")
            rows.append(tuple(row))
        self.matrix = tuple(rows)
        self.rows = len(rows)
        self.cols = width or 0

    @property
    def minimal(self):
        return all(e.constant_term() == self.ring.base.field.zero for row in self.matrix for e in row)

    def column(self, j):
        return tuple(self.matrix[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def row_vectors(self):
        return [self.matrix[i] for i in range(self.rows)]

    def __repr__(self):
        return f"ModulePres({self.rows}x{self.cols} over {self.ring!r})"

    def __eq__(self, other):
        return (
            isinstance(other, ModulePres)
            and self.ring == other.ring
            and self.matrix == other.matrix
        )


def free_module(ring, rank):
    return ModulePres(ring, [()] * rank)


def quotient_module(ring, gens):
    """R/(gens) presented by a single row."""
    row = []
    for g in gens:
        if isinstance(g, str):
            g = ring.base.parse(g)
        g = ring.nf(g)
        if not g.is_zero():
            row.append(g)
    return ModulePres(ring, [tuple(row)])


def residue_field(ring):
    return quotient_module(ring, [ring.base.var(v) for v in ring.base.vars])


def quotient_by_prime(ring, prime):
    return quotient_module(ring, prime.ideal.gens)


def direct_sum(a, b):
    if a.ring != b.ring:
        raise RingMismatchError("summands over different rings")
    zero = a.ring.base.zero()
    rows = []
    for i in range(a.rows):
        rows.append(tuple(a.matrix[i]) + (zero,) * b.cols)
    for i in range(b.rows):
        rows.append((zero,) * a.cols + tuple(b.matrix[i]))
    return ModulePres(a.ring, rows)


def matrix_from_columns(cols, rows):
    if not cols:
        return [()] * rows
    return [tuple(c[i] for c in cols) for i in range(rows)]


# ---------------------------------------------------------------------------
# minimal presentations


def ring_inverse(ring, element):
    """Inverse of a unit of R = S/I; units have nonzero constant term."""
    e = ring.nf(element)
    c = e.constant_term()
    field = ring.base.field
    if c == field.zero:
        raise NotInvertibleError(f"{e} lies in the maximal ideal")
    if e.degree() == 0:
        return ring.base.constant(field.inv(c))
    cof = express_in_span((ring.base.one(),), [(e,)], ring.defining, ring.base)
    if cof is None:
        raise NotInvertibleError(f"{e} is not invertible in the quotient ring")
    return ring.nf(cof[0])


def minimalize(module):
    """Pivot away unit entries; idempotent.  Zero rows are retained (they
    witness free summands); zero relation columns are dropped."""
    ring = module.ring
    mat = [list(row) for row in module.matrix]
    while True:
        pivot = None
        for i, row in enumerate(mat):
            for j, e in enumerate(row):
                if e.constant_term() != ring.base.field.zero:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        u = ring_inverse(ring, mat[i][j])
        ncols = len(mat[0])
        # clear the pivot row by column operations, then the pivot column by
        # row operations; the cleared row makes the second pass local.
        for l in range(ncols):
            if l == j:
                continue
            factor = ring.nf(mat[i][l] * u)
            if factor.is_zero():
                continue
            for k in range(len(mat)):
                mat[k][l] = ring.nf(mat[k][l] - factor * mat[k][j])
        for k in range(len(mat)):
            if k == i:
                continue
            factor = ring.nf(mat[k][j] * u)
            if factor.is_zero():
                continue
            for l in range(ncols):
                mat[k][l] = ring.nf(mat[k][l] - factor * mat[i][l])
        mat = [
            [row[l] for l in range(ncols) if l != j]
            for k, row in enumerate(mat)
            if k != i
        ]
        if mat and not mat[0]:
            break
    if mat:
        keep = [j for j in range(len(mat[0])) if any(not mat[i][j].is_zero() for i in range(len(mat)))]
        mat = [[row[j] for j in keep] for row in mat]
    return ModulePres(ring, mat)


def is_zero_module(module):
    return minimalize(module).rows == 0


def strip_free(module):
    """Delete zero rows of the minimal presentation (the free summands)."""
    m = minimalize(module)
    rows = [row for row in m.matrix if any(not e.is_zero() for e in row)]
    return ModulePres(m.ring, rows)


def is_free(module):
    """(free?, rank).  Free iff no relation columns survive minimalization."""
    m = minimalize(module)
    return m.cols == 0, m.rows


# ---------------------------------------------------------------------------
# syzygies and resolutions


def minimal_generators(vectors, ring):
    """Greedy reduction to a minimal generating set over R (graded Nakayama:
    a homogeneous generator is redundant iff it lies in the span of the
    others)."""
    current = [tuple(ring.nf(p) for p in v) for v in vectors]
    current = [v for v in current if not vec_is_zero(v)]
    i = 0
    while i < len(current):
        others = current[:i] + current[i + 1 :]
        if vector_in_span(current[i], others, ring.defining, ring.base):
            current.pop(i)
        else:
            i += 1
    return current


def syzygy_generators(vectors, ring):
    """Minimal generating set of the syzygy module of `vectors` over R."""
    syz = module_syzygies(vectors, ring.defining, ring.base, rank=len(vectors[0]) if vectors else 0)
    syz = [tuple(ring.nf(p) for p in v) for v in syz]
    syz = [v for v in syz if not vec_is_zero(v)]
    return minimal_generators(syz, ring)


class Resolution:
    """Minimal free resolution, extended lazily to any length."""

    def __init__(self, module):
        self.module = module
        self.ring = module.ring
        self._lock = threading.Lock()
        start = minimalize(module)
        cols = minimal_generators(start.columns(), self.ring) if start.cols else []
        d1 = ModulePres(self.ring, matrix_from_columns(cols, start.rows))
        self.start = start
        self.differentials = [d1]
        self.betti = [start.rows, d1.cols]

    def extend(self, steps):
        """Ensure betti has length steps + 1 (differentials d_1 .. d_steps)."""
        with self._lock:
            while len(self.differentials) < steps:
                last = self.differentials[-1]
                if last.cols == 0:
                    nxt = ModulePres(self.ring, [()] * 0)
                else:
                    syz = syzygy_generators(last.columns(), self.ring)
                    nxt = ModulePres(self.ring, matrix_from_columns(syz, last.cols))
                self.differentials.append(nxt)
                self.betti.append(nxt.cols)
        return self

    def betti_numbers(self, steps):
        self.extend(steps)
        return tuple(self.betti[: steps + 1])

    def differential(self, i):
        """d_i : F_i -> F_{i-1} as a presentation-shaped matrix."""
        self.extend(i)
        return self.differentials[i - 1]


def resolution(module, steps):
    return Resolution(module).extend(steps)


def syzygy(module, n):
    """The n-th syzygy, presented minimally; syzygies of free modules are 0."""
    if n < 0:
        raise ValidationError("syzygy index must be nonnegative")
    if n == 0:
        return minimalize(module)
    res = Resolution(module).extend(n + 1)
    rank = res.betti[n]
    if rank == 0:
        return ModulePres(module.ring, [])
    d_next = res.differentials[n]
    return ModulePres(module.ring, d_next.matrix)


# ---------------------------------------------------------------------------
# depth, dimension, projective dimension


def _ambient(ring):
    """R's ambient polynomial ring S wrapped as a (regular) RingPres."""
    if getattr(ring, "_ambient_pres", None) is None:
        from .spectra import PrimeId, RingFlags, RingPres

        base = ring.base
        m = PrimeId("m", Ideal(base, [base.var(v) for v in base.vars]))
        flags = RingFlags(is_hypersurface=True, is_gorenstein=True, lci_punctured=True, is_regular=True)
        ring._ambient_pres = RingPres(base, Ideal(base, []), [m], flags, name="ambient")
    return ring._ambient_pres


def over_ambient(module):
    """The same module presented over S (defining relations adjoined)."""
    ring = module.ring
    amb = _ambient(ring)
    cols = module.columns()
    for i in range(module.rows):
        for q in ring.defining.gens:
            col = [ring.base.zero()] * module.rows
            col[i] = q
            cols.append(tuple(col))
    return ModulePres(amb, matrix_from_columns(cols, module.rows))


def pd_over_ambient(module):
    """Projective dimension over S; finite by Hilbert's syzygy theorem.
    Returns None for the zero module."""
    amb_mod = over_ambient(module)
    if is_zero_module(amb_mod):
        return None
    nvars = module.ring.base.nvars
    betti = Resolution(amb_mod).betti_numbers(nvars + 1)
    return max(i for i, b in enumerate(betti) if b)


def depth_and_dim(module):
    """(depth, dim) of the module; (None, -1) for the zero module."""
    pd = pd_over_ambient(module)
    if pd is None:
        return None, -1
    depth = module.ring.base.nvars - pd
    fitt0 = fitting_chain(module).ideals[0]
    dim = fitt0.dimension()
    return depth, dim


def is_mcm(module):
    """(mcm?, depth, dim); the zero module reports (False, None, -1)."""
    depth, dim = depth_and_dim(module)
    if depth is None:
        return False, None, -1
    return depth == module.ring.dim, depth, dim


def pd_finite(module):
    """Exact projective dimension over Gorenstein R, or None if infinite.

    pd is finite iff the d-th syzygy is free (Auslander-Buchsbaum bound)."""
    ring = module.ring
    if not ring.flags.is_gorenstein:
        raise ValidationError("projective dimension test requires a Gorenstein ring")
    if is_zero_module(module):
        return 0
    d = ring.dim
    res = Resolution(module).extend(d + 1)
    omega_d = syzygy(module, d)
    if not is_free(omega_d)[0]:
        return None
    betti = res.betti_numbers(d + 1)
    return max(i for i, b in enumerate(betti) if b)


# ---------------------------------------------------------------------------
# Fitting ideals and loci


class FittChain:
    """Ascending chain Fitt_0 <= ... <= Fitt_rows = R of a module."""

    def __init__(self, module, ideals):
        self.module = module
        self.ideals = ideals


def fitting_chain(module):
    m = minimalize(module)
    base = module.ring.base
    rel = module.ring.defining
    ideals = []
    mat = [list(row) for row in m.matrix]
    for j in range(m.rows + 1):
        size = m.rows - j
        minors = _minors(mat, size, base) if size > 0 else [base.one()]
        ideals.append(Ideal(base, list(rel.gens) + minors))
    return FittChain(m, ideals)


def _localizes_to_zero(gens, prime, ring):
    """Every listed element maps to 0 in R_p: its annihilator escapes p."""
    for g in gens:
        g = ring.nf(g)
        if g.is_zero():
            continue
        ann = ring.defining.colon(g)
        if all(prime.ideal.contains_poly(a) for a in ann.groebner_basis()):
            return False
    return True


def nonfree_locus(module):
    """Registry primes where the localized module is not free.

    Freeness at p: some Fitt_r is not contained in p while Fitt_{r-1}
    localizes to zero at p (Fitt_{-1} = 0 localizes to zero trivially)."""
    ring = module.ring
    m = minimalize(module)
    if m.rows == 0:
        return SpecSubset(ring, [])
    chain = fitting_chain(m)
    base = ring.base
    # the interesting generators of Fitt_j are the minors (the defining
    # relations lie in every registry prime)
    minor_gens = []
    mat = [list(row) for row in chain.module.matrix]
    for j in range(m.rows + 1):
        size = m.rows - j
        minors = _minors(mat, size, base) if size > 0 else [base.one()]
        minor_gens.append([ring.nf(g) for g in minors])
    bad = []
    for p in ring.registry:
        free_here = False
        for r in range(m.rows + 1):
            fitt_r_outside = any(
                not p.ideal.contains_poly(g) for g in minor_gens[r] if not g.is_zero()
            )
            if not fitt_r_outside:
                continue
            prev = minor_gens[r - 1] if r >= 1 else []
            if _localizes_to_zero(prev, p, ring):
                free_here = True
                break
        if not free_here:
            bad.append(p)
    return SpecSubset(ring, bad)


def q_locus(module):
    """Primes where the module has infinite projective dimension."""
    ring = module.ring
    if not ring.flags.is_gorenstein:
        raise ValidationError("infinite-pd locus requires a Gorenstein ring")
    return nonfree_locus(syzygy(module, ring.dim))


def annihilator(module):
    m = minimalize(module)
    ring = module.ring
    base = ring.base
    if m.rows == 0:
        return Ideal(base, [base.one()])
    result = None
    cols = m.columns()
    for i in range(m.rows):
        e_i = [base.zero()] * m.rows
        e_i[i] = base.one()
        syz = module_syzygies([tuple(e_i)] + cols, ring.defining, base, rank=m.rows)
        gens = [v[0] for v in syz if not v[0].is_zero()]
        ideal_i = Ideal(base, gens + list(ring.defining.gens))
        result = ideal_i if result is None else result.intersection(ideal_i)
    return Ideal(base, list(result.groebner_basis()) + list(ring.defining.gens))


# ---------------------------------------------------------------------------
# duals and cosyzygies


def dual(module):
    """Hom(M, R), presented via the kernel of the transposed presentation."""
    ring = module.ring
    m = minimalize(module)
    if m.rows == 0:
        return ModulePres(ring, [])
    if m.cols == 0:
        return free_module(ring, m.rows)
    gens = module_syzygies(m.row_vectors(), ring.defining, ring.base, rank=m.cols)
    gens = [tuple(ring.nf(p) for p in v) for v in gens]
    gens = [v for v in gens if not vec_is_zero(v)]
    if not gens:
        return ModulePres(ring, [])
    rel = module_syzygies(gens, ring.defining, ring.base, rank=m.rows)
    pres = ModulePres(ring, matrix_from_columns(rel, len(gens)))
    return minimalize(pres)


def cosyzygy(module):
    """Omega^{-1} of an MCM module over a Gorenstein ring, free summands
    stripped; inverse of the syzygy up to free summands."""
    ring = module.ring
    if not ring.flags.is_gorenstein:
        raise ValidationError("cosyzygy requires a Gorenstein ring")
    if is_zero_module(module):
        return ModulePres(ring, [])
    mcm, _, _ = is_mcm(module)
    if not mcm:
        raise ValidationError("cosyzygy requires a maximal Cohen-Macaulay module")
    return strip_free(dual(syzygy(dual(module), 1)))


# ---------------------------------------------------------------------------
# maps and subquotients


def span_relations(num, den, ring):
    """Relations of span(num) modulo span(den): coefficient vectors a with
    sum(a_i num_i) falling into span(den) over R."""
    if not num:
        return []
    rank = len(num[0])
    combined = list(num) + list(den)
    syz = module_syzygies(combined, ring.defining, ring.base, rank=rank)
    rels = [v[: len(num)] for v in syz]
    rels = [tuple(ring.nf(p) for p in v) for v in rels]
    return [v for v in rels if not vec_is_zero(v)]


def subquotient(num, den, ring):
    """span(num) / (span(num) ∩ span(den)) as an abstract ModulePres."""
    num = [tuple(ring.nf(p) for p in v) for v in num]
    num = [v for v in num if not vec_is_zero(v)]
    if not num:
        return ModulePres(ring, [])
    rels = span_relations(num, den, ring)
    return minimalize(ModulePres(ring, matrix_from_columns(rels, len(num))))


class ModuleMap:
    """Map of presented modules given on generators by a matrix."""

    def __init__(self, source, target, matrix):
        if source.ring != target.ring:
            raise RingMismatchError("map between modules over different rings")
        self.source = source
        self.target = target
        self.ring = source.ring
        rows = []
        for raw in matrix:
            row = []
            for e in raw:
                if isinstance(e, str):
                    e = self.ring.base.parse(e)
                row.append(self.ring.nf(e))
            rows.append(tuple(row))
        self.matrix = tuple(rows)
        if len(rows) != target.rows or any(len(r) != source.rows for r in rows):
            raise ValidationError("map matrix shape mismatch")

    def apply_column(self, vec):
        """Image in R^{target.rows} of a coefficient vector over the source."""
        out = []
        for i in range(self.target.rows):
            s = self.ring.base.zero()
            for j in range(self.source.rows):
                s = s + self.matrix[i][j] * vec[j]
            out.append(self.ring.nf(s))
        return tuple(out)

    def is_well_defined(self):
        targets = self.target.columns()
        for col in self.source.columns():
            img = self.apply_column(col)
            if not vector_in_span(img, targets, self.ring.defining, self.ring.base):
                return False
        return True

    def kernel_preimage(self):
        """Generators of {v : F v in span(target relations)} in R^{source.rows}."""
        fcols = [self.apply_column(self._unit(j)) for j in range(self.source.rows)]
        combined = fcols + self.target.columns()
        if self.target.rows == 0:
            # everything maps to zero
            return [self._unit(j) for j in range(self.source.rows)]
        syz = module_syzygies(combined, self.ring.defining, self.ring.base, rank=self.target.rows)
        pre = [v[: self.source.rows] for v in syz]
        pre = [tuple(self.ring.nf(p) for p in v) for v in pre]
        return [v for v in pre if not vec_is_zero(v)]

    def _unit(self, j):
        v = [self.ring.base.zero()] * self.source.rows
        v[j] = self.ring.base.one()
        return tuple(v)

    def kernel_module(self):
        return subquotient(self.kernel_preimage(), self.source.columns(), self.ring)

    def cokernel_module(self):
        cols = [self.apply_column(self._unit(j)) for j in range(self.source.rows)]
        cols += self.target.columns()
        return minimalize(ModulePres(self.ring, matrix_from_columns(cols, self.target.rows)))

    def compose(self, other):
        """self after other (other: A->B, self: B->C)."""
        if other.target.rows != self.source.rows:
            raise ValidationError("maps are not composable")
        rows = []
        for i in range(self.target.rows):
            row = []
            for j in range(other.source.rows):
                s = self.ring.base.zero()
                for k in range(self.source.rows):
                    s = s + self.matrix[i][k] * other.matrix[k][j]
                row.append(self.ring.nf(s))
            rows.append(tuple(row))
        return ModuleMap(other.source, self.target, rows)

    def is_zero_map(self):
        targets = self.target.columns()
        for j in range(self.source.rows):
            img = self.apply_column(self._unit(j))
            if not vector_in_span(img, targets, self.ring.defining, self.ring.base):
                return False
        return True


def sequence_is_exact(inj, surj):
    """Exactness of 0 -> A -> B -> C -> 0 given by two composable maps."""
    if not inj.is_well_defined() or not surj.is_well_defined():
        return False
    if not surj.compose(inj).is_zero_map():
        return False
    ring = inj.ring
    # at A: the kernel of inj vanishes
    if not is_zero_module(inj.kernel_module()):
        return False
    # at B: ker(surj) / im(inj) vanishes
    ker = surj.kernel_preimage()
    image_cols = [inj.apply_column(inj._unit(j)) for j in range(inj.source.rows)]
    middle = subquotient(ker, image_cols + inj.target.columns(), ring)
    if not is_zero_module(middle):
        return False
    # at C: surj is onto
    if not is_zero_module(surj.cokernel_module()):
        return False
    return True
