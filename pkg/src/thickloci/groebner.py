"""Buchberger engine for ideals and submodules of free modules.

One engine serves everything: an ideal is the rank-1 case, and syzygies
over a quotient ring R = S/I are computed in S by adjoining I*e_j
generators for every free-module coordinate.  Free-module elements are
tuples of Poly; the module order is the position-over-term extension of
the ring order (lower positions dominate), which has the elimination
property used by the syzygy embedding.
"""

from __future__ import annotations

import itertools
import threading

from .arith import Poly
from .errors import ResourceBudgetError, RingMismatchError, ValidationError

DEFAULT_SPAIR_BUDGET = 100_000


# ---------------------------------------------------------------------------
# free-module vectors


def vec_zero(ring, rank):
    return tuple(ring.zero() for _ in range(rank))


def vec_is_zero(u):
    return all(p.is_zero() for p in u)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u):
    return tuple(-a for a in u)


def vec_scale(u, f):
    return tuple(a * f for a in u)


def vec_mul_monomial(u, exps, coeff):
    return tuple(a.mul_monomial(exps, coeff) for a in u)


def vec_leading(u, order):
    """POT leading term: (position, exponents, coefficient)."""
    for pos, p in enumerate(u):
        if not p.is_zero():
            e, c = p.leading_term(order)
            return pos, e, c
    raise ValidationError("leading term of the zero vector")


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _exp_sub(e2, e1):
    return tuple(b - a for a, b in zip(e1, e2))


def _exp_lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


# ---------------------------------------------------------------------------
# the Buchberger engine


class SubmoduleGB:
    """Submodule of a free module S^rank with a lazily computed reduced GB.

    With track=True every GB element carries its representation in terms of
    the input generators, enabling cofactor extraction via `express`.
    """

    def __init__(self, ring, rank, gens, budget=DEFAULT_SPAIR_BUDGET, track=False):
        self.ring = ring
        self.rank = rank
        self.budget = budget
        self.track = track
        self.gens = []
        self._reps = []
        for i, g in enumerate(gens):
            if len(g) != rank:
                raise RingMismatchError("generator rank mismatch")
            for p in g:
                if p.ring != ring:
                    raise RingMismatchError("generator over a different ring")
            self.gens.append(tuple(g))
        self._gb = None
        self._gb_reps = None
        self._lock = threading.Lock()

    # -- reduction ----------------------------------------------------------

    def _reduce_full(self, vec, basis, reps=None, rep=None):
        """Full normal form of vec against basis; tracks rep if given."""
        order = self.ring.order
        remainder = list(vec_zero(self.ring, self.rank))
        work = tuple(vec)
        while not vec_is_zero(work):
            pos, e, c = vec_leading(work, order)
            reduced = False
            for k, g in enumerate(basis):
                gpos, ge, gc = g[1]
                if gpos == pos and _divides(ge, e):
                    q_exp = _exp_sub(e, ge)
                    q_c = self.ring.field.div(c, gc)
                    work = vec_sub(work, vec_mul_monomial(g[0], q_exp, q_c))
                    if rep is not None:
                        rep = vec_sub(rep, vec_mul_monomial(reps[k], q_exp, q_c))
                    reduced = True
                    break
            if not reduced:
                mono = self.ring.monomial(e, c)
                remainder[pos] = remainder[pos] + mono
                lead = list(vec_zero(self.ring, self.rank))
                lead[pos] = mono
                work = vec_sub(work, tuple(lead))
        return tuple(remainder), rep

    # -- Buchberger ---------------------------------------------------------

    def _compute_gb(self):
        order = self.ring.order
        field = self.ring.field
        ngens = len(self.gens)
        basis = []  # list of (vector, (pos, exps, coeff))
        reps = []  # representation of each basis element over self.gens

        def unit_rep(i):
            r = list(vec_zero(self.ring, ngens))
            r[i] = self.ring.one()
            return tuple(r)

        for i, g in enumerate(self.gens):
            if vec_is_zero(g):
                continue
            basis.append((g, vec_leading(g, order)))
            reps.append(unit_rep(i) if self.track else None)

        def make_pair(i, j):
            (gi, (pi, ei, _)), (gj, (pj, ej, _)) = basis[i], basis[j]
            if pi != pj:
                return None
            lcm = _exp_lcm(ei, ej)
            return (sum(lcm), lcm, i, j)

        pairs = []
        for i in range(len(basis)):
            for j in range(i):
                p = make_pair(j, i)
                if p is not None:
                    pairs.append(p)
        done = set()
        processed = 0
        while pairs:
            pairs.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
            _, lcm, i, j = pairs.pop(0)
            done.add((i, j))
            processed += 1
            if processed > self.budget:
                raise ResourceBudgetError(
                    f"S-pair budget of {self.budget} exceeded"
                )
            (gi, (pi, ei, ci)) = basis[i]
            (gj, (pj, ej, cj)) = basis[j]
            # product criterion (valid for the rank-1 / ideal case)
            if self.rank == 1 and all(a + b == m for a, b, m in zip(ei, ej, lcm)):
                continue
            # chain criterion
            skip = False
            for k, (gk, (pk, ek, _)) in enumerate(basis):
                if k in (i, j) or pk != pi or not _divides(ek, lcm):
                    continue
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in done and b in done:
                    skip = True
                    break
            if skip:
                continue
            s = vec_sub(
                vec_mul_monomial(gi, _exp_sub(lcm, ei), field.inv(ci)),
                vec_mul_monomial(gj, _exp_sub(lcm, ej), field.inv(cj)),
            )
            srep = None
            if self.track:
                srep = vec_sub(
                    vec_mul_monomial(reps[i], _exp_sub(lcm, ei), field.inv(ci)),
                    vec_mul_monomial(reps[j], _exp_sub(lcm, ej), field.inv(cj)),
                )
            nf, srep = self._reduce_full(s, basis, reps, srep)
            if vec_is_zero(nf):
                continue
            basis.append((nf, vec_leading(nf, order)))
            reps.append(srep)
            newi = len(basis) - 1
            for k in range(newi):
                p = make_pair(k, newi)
                if p is not None:
                    pairs.append(p)

        return self._reduce_basis(basis, reps)

    def _reduce_basis(self, basis, reps):
        """Minimalize and inter-reduce: the unique reduced, monic GB."""
        order = self.ring.order
        field = self.ring.field
        # drop elements whose leading term is divisible by another's
        keep = []
        for i, (g, (p, e, c)) in enumerate(basis):
            dominated = False
            for j, (h, (q, f, _)) in enumerate(basis):
                if i == j or q != p or not _divides(f, e):
                    continue
                if f != e or j < i:
                    dominated = True
                    break
            if not dominated:
                keep.append(i)
        basis = [basis[i] for i in keep]
        reps = [reps[i] for i in keep]
        # tail-reduce each element against the others, normalize monic
        reduced = []
        red_reps = []
        for i, (g, lead) in enumerate(basis):
            others = basis[:i] + basis[i + 1 :]
            other_reps = reps[:i] + reps[i + 1 :]
            nf, rep = self._reduce_full(g, others, other_reps, reps[i])
            if vec_is_zero(nf):
                continue
            pos, e, c = vec_leading(nf, order)
            inv = field.inv(c)
            nf = vec_scale(nf, self.ring.constant(inv))
            if rep is not None:
                rep = vec_scale(rep, self.ring.constant(inv))
            reduced.append((nf, (pos, e, field.one)))
            red_reps.append(rep)
        idx = sorted(
            range(len(reduced)),
            key=lambda k: (reduced[k][1][0], tuple(self.ring.order.key(reduced[k][1][1]))),
        )
        return [reduced[k] for k in idx], [red_reps[k] for k in idx]

    @property
    def gb(self):
        with self._lock:
            if self._gb is None:
                self._gb, self._gb_reps = self._compute_gb()
        return self._gb

    def gb_vectors(self):
        return [g for g, _ in self.gb]

    def normal_form(self, vec):
        if len(vec) != self.rank:
            raise RingMismatchError("vector rank mismatch")
        nf, _ = self._reduce_full(tuple(vec), self.gb, None, None)
        return nf

    def contains(self, vec):
        return vec_is_zero(self.normal_form(vec))

    def express(self, vec):
        """Cofactors of vec over the original generators, or None.

        Requires track=True.  Returns q with vec == sum(q_i * gens_i).
        """
        if not self.track:
            raise ValidationError("SubmoduleGB built without tracking")
        gb = self.gb  # force reps
        order = self.ring.order
        ngens = len(self.gens)
        quotients = list(vec_zero(self.ring, len(gb)))
        work = tuple(vec)
        remainder_seen = False
        while not vec_is_zero(work):
            pos, e, c = vec_leading(work, order)
            hit = None
            for k, (g, (gpos, ge, gc)) in enumerate(gb):
                if gpos == pos and _divides(ge, e):
                    hit = (k, _exp_sub(e, ge), self.ring.field.div(c, gc))
                    break
            if hit is None:
                return None
            k, q_exp, q_c = hit
            quotients[k] = quotients[k] + self.ring.monomial(q_exp, q_c)
            work = vec_sub(work, vec_mul_monomial(gb[k][0], q_exp, q_c))
        result = list(vec_zero(self.ring, ngens))
        for k, q in enumerate(quotients):
            if q.is_zero():
                continue
            rep = self._gb_reps[k]
            for j in range(ngens):
                result[j] = result[j] + q * rep[j]
        return tuple(result)


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """Finitely generated ideal of a polynomial ring with a cached GB."""

    def __init__(self, ring, gens, budget=DEFAULT_SPAIR_BUDGET):
        self.ring = ring
        self.budget = budget
        gs = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError("generator over a different ring")
            if not g.is_zero():
                gs.append(g)
        self.gens = tuple(gs)
        self._engine = None
        self._lock = threading.Lock()

    def _gb_engine(self):
        with self._lock:
            if self._engine is None:
                self._engine = SubmoduleGB(
                    self.ring, 1, [(g,) for g in self.gens], budget=self.budget
                )
        return self._engine

    def groebner_basis(self):
        """The unique reduced Groebner basis under the ring order."""
        return tuple(g[0] for g in self._gb_engine().gb_vectors())

    def normal_form(self, f):
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.ring != self.ring:
            raise RingMismatchError("polynomial over a different ring")
        return self._gb_engine().normal_form((f,))[0]

    def contains_poly(self, f):
        return self.normal_form(f).is_zero()

    def contains(self, other):
        self._check(other)
        return all(self.contains_poly(g) for g in other.gens)

    def _check(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise RingMismatchError("ideals over different rings")

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return self.groebner_basis() == other.groebner_basis()

    def __hash__(self):
        return hash((self.ring, self.groebner_basis()))

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def is_zero(self):
        return not self.groebner_basis()

    def is_unit(self):
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].degree() == 0

    def is_proper(self):
        return not self.is_unit()

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.gens)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return Ideal(self.ring, self.gens + other.gens, self.budget)

    def product(self, other):
        self._check(other)
        return Ideal(
            self.ring,
            [a * b for a in self.gens for b in other.gens],
            self.budget,
        )

    def intersection(self, other):
        self._check(other)
        if not self.gens or not other.gens:
            return Ideal(self.ring, [], self.budget)
        tname = "t_elim"
        while tname in self.ring.vars:
            tname += "_"
        ext = self.ring.extended((tname,))
        t = ext.var(tname)
        one = ext.one()
        gens = [t * a.lift_to(ext) for a in self.gens]
        gens += [(one - t) * b.lift_to(ext) for b in other.gens]
        j = Ideal(ext, gens, self.budget)
        kept = []
        for g in j.groebner_basis():
            if all(e[0] == 0 for e in g.terms):
                kept.append(g.project_to(self.ring))
        return Ideal(self.ring, kept, self.budget)

    def colon(self, f):
        """(self : f) = { g : g*f in self }."""
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.is_zero():
            return Ideal(self.ring, [self.ring.one()], self.budget)
        inter = self.intersection(Ideal(self.ring, [f], self.budget))
        return Ideal(
            self.ring,
            [exact_divide(g, f) for g in inter.groebner_basis()],
            self.budget,
        )

    def dimension(self):
        """Krull dimension of S/I via leading-term combinatorics; -1 if unit."""
        gb = self.groebner_basis()
        if self.is_unit():
            return -1
        order = self.ring.order
        leads = [g.leading_term(order)[0] for g in gb]
        supports = [frozenset(i for i, e in enumerate(lead) if e) for lead in leads]
        n = self.ring.nvars
        best = 0
        for size in range(n, 0, -1):
            for subset in itertools.combinations(range(n), size):
                sub = set(subset)
                if all(not s <= sub for s in supports):
                    return size
        return best


def exact_divide(g, f):
    """Quotient g/f for g in the principal ideal (f); exact, no remainder."""
    ring = g.ring
    order = ring.order
    fe, fc = f.leading_term(order)
    q = ring.zero()
    work = g
    while not work.is_zero():
        e, c = work.leading_term(order)
        if not _divides(fe, e):
            raise ValidationError("exact division failed")
        mono = ring.monomial(_exp_sub(e, fe), ring.field.div(c, fc))
        q = q + mono
        work = work - mono * f
    return q


# ---------------------------------------------------------------------------
# syzygies and membership over quotient rings


def _relation_padding(ring, rank, relations):
    pads = []
    if relations is None:
        return pads
    for j in range(rank):
        for q in relations.gens:
            v = list(vec_zero(ring, rank))
            v[j] = q
            pads.append(tuple(v))
    return pads


def quotient_submodule(ring, rank, gens, relations, budget=DEFAULT_SPAIR_BUDGET, track=False):
    """GB of the submodule of (S/I)^rank generated by gens, computed in S.

    The defining ideal's generators are adjoined on every coordinate, so
    membership modulo the quotient is plain normal-form vanishing.
    """
    all_gens = [tuple(g) for g in gens] + _relation_padding(ring, rank, relations)
    return SubmoduleGB(ring, rank, all_gens, budget=budget, track=track)


def vector_in_span(vec, gens, relations, ring, budget=DEFAULT_SPAIR_BUDGET):
    if not gens:
        rank = len(vec)
        sub = quotient_submodule(ring, rank, [], relations, budget)
        return sub.contains(vec) if relations is not None and relations.gens else vec_is_zero(vec)
    rank = len(gens[0])
    sub = quotient_submodule(ring, rank, gens, relations, budget)
    return sub.contains(vec)


def express_in_span(vec, gens, relations, ring, budget=DEFAULT_SPAIR_BUDGET):
    """Cofactors q with vec == sum(q_i * gens_i) modulo the relations, or None."""
    if not gens:
        return [] if vec_is_zero(vec) else None
    rank = len(gens[0])
    sub = quotient_submodule(ring, rank, gens, relations, budget, track=True)
    expr = sub.express(tuple(vec))
    if expr is None:
        return None
    cofactors = list(expr[: len(gens)])
    if relations is not None and relations.gens:
        cofactors = [relations.normal_form(q) for q in cofactors]
    return cofactors


def module_syzygies(gens, relations, ring, rank=None, budget=DEFAULT_SPAIR_BUDGET):
    """Generators of the syzygy module of `gens` over R = S/relations.

    gens are vectors in S^rank; returns vectors a in S^len(gens) with
    sum(a_i * gens_i) lying in relations * S^rank.  Computed by the
    elimination embedding into S^(rank + len(gens)) under POT.
    """
    s = len(gens)
    if s == 0:
        return []
    if rank is None:
        rank = len(gens[0])
    if any(len(g) != rank for g in gens):
        raise RingMismatchError("mixed ranks in syzygy input")
    if rank == 0:
        # the zero module: everything is a syzygy
        out = []
        for i in range(s):
            v = list(vec_zero(ring, s))
            v[i] = ring.one()
            out.append(tuple(v))
        return out
    total = rank + s
    embedded = []
    for i, g in enumerate(gens):
        v = list(g) + list(vec_zero(ring, s))
        v[rank + i] = ring.one()
        embedded.append(tuple(v))
    embedded += [
        tuple(list(p) + list(vec_zero(ring, s)))
        for p in _relation_padding(ring, rank, relations)
    ]
    sub = SubmoduleGB(ring, total, embedded, budget=budget)
    syz = []
    for g in sub.gb_vectors():
        if all(p.is_zero() for p in g[:rank]):
            tail = g[rank:]
            if relations is not None and relations.gens:
                tail = tuple(relations.normal_form(p) for p in tail)
            if not vec_is_zero(tail):
                syz.append(tail)
    # canonical order for reproducible downstream matrices
    syz.sort(key=lambda v: (vec_leading(v, ring.order)[0], ring.order.key(vec_leading(v, ring.order)[1])))
    return syz
