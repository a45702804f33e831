"""Minimal generator degrees via the graded Nakayama lemma.

Three graded objects are analyzed over A = k[V]^G:

  * the invariant algebra A itself (minimal algebra generators),
  * k[V] as an A-module (the coinvariant dimensions; the top nonzero
    degree is called gamma),
  * the covariant module k[V,W]^G for an indecomposable W, identified
    with { f in k[V] : Delta^n f = 0 } via its chain representation.

In each case the count of minimal generators in degree d is
dim(object)_d - dim(span of products with lower-degree pieces)_d, and a
certified degree cap guarantees that no generators exist beyond it:
max(p, m*p - dim V, gamma) for the algebra (norms, the degree bound on
non-norm generators, and A-linearity of the transfer), and
max(gamma, m*p - dim V) for covariant modules.

Spans are computed per multidegree piece.  Because every element of A_+
is a polynomial in the minimal algebra generators found so far, the span
of lower-degree products equals the sum over known minimal generators g
of (invariants of positive degree) * g, which keeps the number of rows
fed to the rank computations small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import PieceChains, multiplication_map
from .fastlinalg import Echelon, asmod
from .fastlinalg import matmul_mod as _mm
from .modules import ModuleSpec
from .poly import Polynomial, _compositions

__all__ = [
    "BetaReport",
    "algebra_beta",
    "coinvariants_dims",
    "covariant_beta",
    "gamma",
    "is_decomposable_covariant",
    "is_decomposable_invariant",
    "module_generators",
]


@dataclass
class BetaReport:
    """Minimal generator degrees of one graded object, with a certified cap.

    ``target`` is one of "algebra", "polynomial-module", "covariant-module".
    ``generator_counts`` maps degree -> number of minimal generators;
    ``beta`` is the largest degree with a nonzero count.  ``certified`` is
    False when a cap override cut the search below the certified cap, in
    which case degrees above ``cap_used`` are unexplored.  ``witnesses``
    holds one minimal generator per generating degree (a Polynomial, or a
    weight polynomial f_1 for covariant modules).
    """

    target: str
    generator_counts: dict
    beta: int
    cap_used: int
    cap_certificate: str
    certified: bool = True
    witnesses: dict = field(default_factory=dict)

    def generator_degrees(self):
        """Sorted multiset of generator degrees."""
        out = []
        for d in sorted(self.generator_counts):
            out.extend([d] * self.generator_counts[d])
        return out

    def total_generators(self) -> int:
        return sum(self.generator_counts.values())


@dataclass(frozen=True)
class _Gen:
    degree: int
    multidegree: tuple
    poly: Polynomial


def _permute_poly(f: Polynomial, blockperm) -> Polynomial:
    """Relabel block variables: block t takes its exponents from block
    blockperm[t] (blocks of equal size only, an algebra automorphism
    commuting with the group action)."""
    vspec = f.vspec
    offsets = []
    off = 0
    for n in vspec.blocks:
        offsets.append(off)
        off += n
    varmap = [0] * vspec.dim
    for t, s in enumerate(blockperm):
        for r in range(vspec.blocks[t]):
            varmap[offsets[t] + r] = offsets[s] + r
    terms = {}
    for mon, c in f.terms.items():
        terms[tuple(mon[varmap[i]] for i in range(vspec.dim))] = c
    return Polynomial(vspec, terms)


class GradedEngine:
    """Caches chain bases and generator computations for one V."""

    def __init__(self, vspec: ModuleSpec):
        if vspec.num_blocks == 0:
            raise ValueError("V must have at least one block")
        self.vspec = vspec
        self.p = vspec.p
        self.m = vspec.num_blocks
        self._pieces = {}  # multidegree -> PieceChains
        self._inv = {}  # multidegree -> invariant row matrix
        self._canon = {}  # multidegree -> (canonical md, block permutation)
        # algebra / coinvariant state, extended degree by degree
        self._alg_gens = []  # _Gen, in discovery order
        self._alg_counts = {}
        self._coinv_counts = {0: 1}
        self._module_gens = [
            _Gen(0, (0,) * self.m, Polynomial.constant(vspec, 1))
        ]
        self._gamma = None  # known once coinvariants hit zero
        self._alg_done = 0  # algebra counts computed through this degree
        self._cov = {}  # n -> (counts, gens, done_through)

    # -- pieces ---------------------------------------------------------

    def _multidegrees(self, d):
        return list(_compositions(d, self.m))

    def _canonical_md(self, md):
        """(canonical multidegree, block permutation) under permutations of
        equal-size blocks; the permutation maps the canonical piece onto
        this one (block t reads from canonical block perm[t]).

        Pieces in the same orbit are isomorphic as graded representations,
        so generator counts agree and generators transport by relabeling;
        only canonical pieces are computed directly.
        """
        cached = self._canon.get(md)
        if cached is not None:
            return cached
        canon = list(md)
        perm = list(range(self.m))
        for size in set(self.vspec.blocks):
            positions = [i for i, n in enumerate(self.vspec.blocks) if n == size]
            degs = sorted((md[i] for i in positions), reverse=True)
            for pos, deg in zip(positions, degs):
                canon[pos] = deg
            # match each original degree to a canonical slot holding it
            unused = list(positions)
            for pos in positions:
                for k, src in enumerate(unused):
                    if canon[src] == md[pos]:
                        perm[pos] = src
                        del unused[k]
                        break
        result = (tuple(canon), perm)
        self._canon[md] = result
        return result

    def _chains(self, md) -> PieceChains:
        if md not in self._pieces:
            self._pieces[md] = PieceChains(self.vspec, md)
        return self._pieces[md]

    def _inv_rows(self, md):
        if md not in self._inv:
            self._inv[md] = self._chains(md).invariant_matrix()
        return self._inv[md]

    # -- spans of lower-degree products ---------------------------------

    def _span_echelon(self, md, d, gens) -> Echelon:
        """Echelon of sum over gens g of (positive-degree invariants)*g
        inside the degree-d piece of multidegree md."""
        target = self._chains(md).index
        ech = Echelon(self.p, target.size)
        batches = []
        for g in gens:
            if g.degree >= d:
                continue
            qmd = tuple(a - b for a, b in zip(md, g.multidegree))
            if any(q < 0 for q in qmd):
                continue
            inv = self._inv_rows(qmd)
            if inv.shape[0] == 0:
                continue
            if g.degree == 0:
                batches.append(inv)  # multiplying by a nonzero constant
            else:
                mult = multiplication_map(g.poly, self._chains(qmd).index, target)
                batches.append(_mm(inv, mult.T, self.p))
        if batches:
            # one bulk insertion: the recursive rref is much cheaper than
            # reducing many small batches against a growing basis
            ech.add_rows(np.concatenate(batches, axis=0))
        return ech

    # -- algebra generators and coinvariants, interleaved ----------------

    def _algebra_step(self, d):
        count = 0
        produced = {}  # canonical md -> new generator polynomials
        mds = self._multidegrees(d)
        for md in mds:
            if self._canonical_md(md)[0] != md:
                continue
            inv = self._inv_rows(md)
            if inv.shape[0] == 0:
                produced[md] = []
                continue
            ech = self._span_echelon(md, d, self._alg_gens)
            new = ech.add_rows(inv, origins=list(range(inv.shape[0])))
            index = self._chains(md).index
            polys = [index.vector_to_poly(inv[i]) for i in new]
            produced[md] = polys
            for f in polys:
                self._alg_gens.append(_Gen(d, md, f))
            count += len(polys)
        for md in mds:
            canon, perm = self._canonical_md(md)
            if canon == md:
                continue
            for f in produced[canon]:
                self._alg_gens.append(_Gen(d, md, _permute_poly(f, perm)))
            count += len(produced[canon])
        self._alg_counts[d] = count

    def _coinv_step(self, d):
        """Coinvariant dimension in degree d; records monomial lifts of a
        coinvariant basis (module generators of k[V] over A)."""
        total = 0
        produced = {}  # canonical md -> new module generator monomials
        mds = self._multidegrees(d)
        for md in mds:
            if self._canonical_md(md)[0] != md:
                continue
            produced[md] = []
            target = self._chains(md).index
            c = target.size
            marked = np.zeros(c, dtype=bool)
            batches = []
            for g in self._alg_gens:
                if g.degree > d:
                    continue
                qmd = tuple(a - b for a, b in zip(md, g.multidegree))
                if any(q < 0 for q in qmd):
                    continue
                qidx = self._chains(qmd).index
                if len(g.poly.terms) == 1:
                    # monomial generator: its multiples are monomials
                    (mon,) = g.poly.terms
                    shifted = qidx.exponents() + np.array(mon, dtype=np.int64)
                    marked[target.rank(shifted)] = True
                else:
                    mult = multiplication_map(g.poly, qidx, target)
                    batches.append(mult.T)
            ech = Echelon(self.p, c)
            if batches:
                rows = asmod(np.concatenate(batches, axis=0), self.p)
                # iterated singleton elimination: a row with a single
                # nonzero entry puts that unit vector in the span, so its
                # column can be cleared from every other row
                while True:
                    rows[:, marked] = 0
                    nnz = np.count_nonzero(rows, axis=1)
                    singles = np.nonzero(nnz == 1)[0]
                    if singles.size == 0:
                        rows = rows[nnz > 1]
                        break
                    marked[(rows[singles] != 0).argmax(axis=1)] = True
                    rows = rows[nnz > 1]
                ech.add_rows(rows)
            count = c - int(marked.sum()) - ech.rank
            if count:
                pivset = set(int(x) for x in ech.pivcols)
                exps = target.exponents()
                for i in range(c):
                    if not marked[i] and i not in pivset:
                        f = Polynomial.from_monomial(
                            self.vspec, [int(e) for e in exps[i]]
                        )
                        produced[md].append(f)
                        self._module_gens.append(_Gen(d, md, f))
            total += count
        for md in mds:
            canon, perm = self._canonical_md(md)
            if canon == md:
                continue
            for f in produced[canon]:
                self._module_gens.append(_Gen(d, md, _permute_poly(f, perm)))
            total += len(produced[canon])
        return total

    def _gamma_bound(self) -> int:
        """Certified upper bound for gamma from the block profile of the
        reduced part of V (trivial blocks do not change the coinvariants)."""
        from .formulas import coinvariant_top_degree_bound

        kept = [n for n in self.vspec.blocks if n > 1]
        if not kept:
            return 0
        return coinvariant_top_degree_bound(ModuleSpec(self.vspec.field, kept))

    def ensure_algebra(self, through=None):
        """Advance the algebra/coinvariant computation far enough that the
        certified algebra cap (and degree ``through``, if given) is covered."""
        bound = self._gamma_bound()
        if self._gamma is None and bound == 0:
            self._gamma = 0
        d = self._alg_done
        while True:
            cap = self.algebra_cap() if self._gamma is not None else None
            need = max(through or 0, cap or 0)
            if cap is not None and d >= need:
                return
            d += 1
            self._algebra_step(d)
            if self._gamma is None:
                total = self._coinv_step(d)
                if total == 0:
                    self._gamma = d - 1
                else:
                    self._coinv_counts[d] = total
                    if d >= bound:
                        # still nonzero at the certified top-degree bound:
                        # the bound pins gamma exactly, no need to watch
                        # the coinvariants vanish one degree later
                        self._gamma = d
            self._alg_done = d

    @property
    def gamma(self) -> int:
        if self._gamma is None:
            self.ensure_algebra()
        return self._gamma

    def algebra_cap(self) -> int:
        return max(self.p, self.m * self.p - self.vspec.dim, self.gamma)

    def covariant_cap(self) -> int:
        return max(self.gamma, self.m * self.p - self.vspec.dim)

    # -- covariant modules ----------------------------------------------

    def ensure_covariant(self, n: int, through=None):
        """Generator counts for k[V,V_n]^G through max(certified cap, through)."""
        cap = self.covariant_cap()
        need = max(cap, through or 0)
        if n == 1 or n >= self.p:
            # weight <= 1 cuts out A itself (generated by 1); weight <= p
            # is no constraint at all, so the module is k[V] and its
            # minimal generators are the coinvariant lifts
            self.ensure_algebra()
            if n not in self._cov or self._cov[n][2] < need:
                if n == 1:
                    counts = {d: (1 if d == 0 else 0) for d in range(need + 1)}
                    gens = [self._module_gens[0]]
                else:
                    counts = {
                        d: self._coinv_counts.get(d, 0) for d in range(need + 1)
                    }
                    gens = list(self._module_gens)
                self._cov[n] = (counts, gens, need)
            return
        counts, gens, done = self._cov.get(
            n, ({0: 1}, [_Gen(0, (0,) * self.m, Polynomial.constant(self.vspec, 1))], 0)
        )
        self.ensure_algebra()
        for d in range(done + 1, need + 1):
            cnt = 0
            produced = {}  # canonical md -> new generator weight polynomials
            mds = self._multidegrees(d)
            for md in mds:
                if self._canonical_md(md)[0] != md:
                    continue
                produced[md] = []
                pc = self._chains(md)
                dim_m = pc.dim_weight_le(n)
                if dim_m == 0:
                    continue
                ech = self._span_echelon(md, d, gens)
                rank = ech.rank
                assert rank <= dim_m
                if rank == dim_m:
                    continue
                if dim_m == pc.index.size:
                    # full piece: non-pivot unit monomials are generators
                    pivset = set(int(x) for x in ech.pivcols)
                    exps = pc.index.exponents()
                    new_polys = [
                        Polynomial.from_monomial(
                            self.vspec, [int(e) for e in exps[i]]
                        )
                        for i in range(pc.index.size)
                        if i not in pivset
                    ]
                else:
                    cand = pc.weight_le_matrix(n)
                    new = ech.add_rows(cand, origins=list(range(cand.shape[0])))
                    new_polys = [pc.index.vector_to_poly(cand[i]) for i in new]
                assert len(new_polys) == dim_m - rank
                produced[md] = new_polys
                gens.extend(_Gen(d, md, f) for f in new_polys)
                cnt += len(new_polys)
            for md in mds:
                canon, perm = self._canonical_md(md)
                if canon == md:
                    continue
                gens.extend(
                    _Gen(d, md, _permute_poly(f, perm)) for f in produced[canon]
                )
                cnt += len(produced[canon])
            counts[d] = cnt
        self._cov[n] = (counts, gens, max(done, need))


_engine_slot = [None]


def _engine(vspec: ModuleSpec) -> GradedEngine:
    """Single-slot engine cache: chain bases are large, so only the engine
    for the most recent V is retained (sweeps iterate W innermost)."""
    eng = _engine_slot[0]
    if eng is None or eng.vspec != vspec:
        eng = GradedEngine(vspec)
        _engine_slot[0] = eng
    return eng


def _finish_report(target, counts, certified_cap, certificate, cap_override, witnesses):
    if cap_override is None:
        cap_used = certified_cap
        certified = True
    else:
        if cap_override < 0:
            raise ValueError("cap override must be >= 0")
        cap_used = cap_override
        certified = cap_override >= certified_cap
    kept = {d: c for d, c in counts.items() if d <= cap_used}
    nonzero = [d for d, c in kept.items() if c]
    beta = max(nonzero) if nonzero else 0
    wit = {d: w for d, w in witnesses.items() if d <= cap_used}
    return BetaReport(
        target=target,
        generator_counts=kept,
        beta=beta,
        cap_used=cap_used,
        cap_certificate=certificate,
        certified=certified,
        witnesses=wit,
    )


def coinvariants_dims(vspec: ModuleSpec):
    """dim (k[V]/A_+ k[V])_d for d = 0 .. gamma (all nonzero; the dimension
    is zero in every higher degree because k[V] is generated in degree 1)."""
    eng = _engine(vspec)
    eng.ensure_algebra()
    return [eng._coinv_counts[d] for d in range(eng.gamma + 1)]


def gamma(vspec: ModuleSpec) -> int:
    """Top degree of the coinvariants = beta(k[V], k[V]^G)."""
    return _engine(vspec).gamma


def module_generators(vspec: ModuleSpec):
    """Monomials generating k[V] as a module over k[V]^G (lifts of a
    coinvariant basis), in increasing degree; starts with 1."""
    eng = _engine(vspec)
    eng.ensure_algebra()
    return [g.poly for g in eng._module_gens]


def polynomial_module_beta(vspec: ModuleSpec) -> BetaReport:
    """Minimal generators of k[V] over k[V]^G; counts = coinvariant dims."""
    eng = _engine(vspec)
    eng.ensure_algebra()
    g = eng.gamma
    counts = {d: eng._coinv_counts[d] for d in range(g + 1)}
    witnesses = {}
    for gen in eng._module_gens:
        witnesses.setdefault(gen.degree, gen.poly)
    return BetaReport(
        target="polynomial-module",
        generator_counts=counts,
        beta=g,
        cap_used=g,
        cap_certificate=f"coinvariants vanish above degree gamma = {g}",
        witnesses=witnesses,
    )


def algebra_beta(vspec: ModuleSpec, cap_override=None) -> BetaReport:
    """Minimal generator degrees of the invariant algebra k[V]^G.

    The certified cap is max(p, m*p - dim V, gamma): norms have degree p,
    non-norm non-transfer generators are bounded by m*p - dim V, and the
    transfer ideal is generated in degrees <= gamma by A-linearity.
    """
    eng = _engine(vspec)
    cap = eng.algebra_cap()
    eng.ensure_algebra(through=cap_override)
    counts = dict(eng._alg_counts)
    witnesses = {}
    for g in eng._alg_gens:
        witnesses.setdefault(g.degree, g.poly)
    cert = (
        f"max(p = {eng.p}, m*p - dim(V) = {eng.m * eng.p - vspec.dim}, "
        f"gamma = {eng.gamma}) = {cap}"
    )
    return _finish_report("algebra", counts, cap, cert, cap_override, witnesses)


def covariant_beta(vspec: ModuleSpec, wspec: ModuleSpec, cap_override=None) -> BetaReport:
    """Minimal generator degrees of k[V, V_n]^G over k[V]^G.

    W must be indecomposable (a single block).  The degree-0 generator w_1
    is counted, so W = V_1 gives beta 0.  The certified cap is
    max(gamma, m*p - dim V).
    """
    if wspec.num_blocks != 1:
        raise ValueError("W must be indecomposable (a single block)")
    if wspec.p != vspec.p:
        raise ValueError("V and W must share the same prime")
    n = wspec.blocks[0]
    eng = _engine(vspec)
    cap = eng.covariant_cap()
    eng.ensure_covariant(n, through=cap_override)
    counts, gens, _ = eng._cov[n]
    witnesses = {}
    for g in gens:
        witnesses.setdefault(g.degree, g.poly)
    cert = (
        f"max(gamma = {eng.gamma}, m*p - dim(V) = "
        f"{eng.m * eng.p - vspec.dim}) = {cap}"
    )
    return _finish_report(
        "covariant-module", counts, cap, cert, cap_override, witnesses
    )


def is_decomposable_invariant(f: Polynomial, lower_gens=None) -> bool:
    """Is f in the subalgebra generated by invariants of smaller degree?

    ``lower_gens`` may list polynomials that generate k[V]^G in degrees
    below deg f (only their positive-degree members below deg f are used);
    by default the minimal algebra generators are computed.
    """
    if f.is_zero():
        return True
    if not f.is_homogeneous():
        raise ValueError("input must be homogeneous")
    d = f.total_degree()
    eng = _engine(f.vspec)
    if lower_gens is None:
        eng.ensure_algebra(through=d)
        gens = [g for g in eng._alg_gens if g.degree < d]
    else:
        gens = [
            _Gen(g.total_degree(), g.multidegree(), g)
            for g in lower_gens
            if not g.is_zero() and 0 < g.total_degree() < d
        ]
    return _components_in_span(eng, f, d, gens)


def is_decomposable_covariant(h) -> bool:
    """Is h in the submodule generated by covariants of smaller degree?"""
    if h.is_zero():
        return True
    f1 = h.components[0]
    if not f1.is_homogeneous():
        raise ValueError("input must be homogeneous")
    d = f1.total_degree()
    n = h.n
    eng = _engine(h.vspec)
    eng.ensure_covariant(n, through=d)
    _, gens, _ = eng._cov[n]
    return _components_in_span(eng, f1, d, [g for g in gens if g.degree < d])


def _components_in_span(eng, f, d, gens):
    for md, comp in f.multihomogeneous_components().items():
        ech = eng._span_echelon(md, d, gens)
        vec = eng._chains(md).index.poly_to_vector(comp)
        if not ech.contains(vec):
            return False
    return True
