"""The acted polynomial ring k[V] for V a kG-module, G cyclic of order p.

Variables are x_{i,j} with j indexing the Jordan block of V and i the row
within that block.  The generator sigma acts by

    sigma(x_{i,j}) = x_{i,j} + x_{i+1,j}   (i < n_j),
    sigma(x_{n_j,j}) = x_{n_j,j},

which preserves total degree and the per-block multidegree.  Polynomials
are sparse: a dict from exponent tuples (one slot per variable, block-major
row-minor order) to nonzero residues mod p.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .field import FpMatrix, kernel_basis, solve
from .modules import ModuleSpec


def variables(vspec: ModuleSpec) -> list:
    """All (i, j) variable labels of k[V], block-major row-minor."""
    out = []
    for j, n in enumerate(vspec.blocks, start=1):
        for i in range(1, n + 1):
            out.append((i, j))
    return out


def var_index(vspec: ModuleSpec, i: int, j: int) -> int:
    """Position of x_{i,j} in the exponent tuple."""
    if not 1 <= j <= vspec.num_blocks:
        raise IndexError(f"block index {j} out of range")
    if not 1 <= i <= vspec.blocks[j - 1]:
        raise IndexError(f"row index {i} out of range for block {j}")
    return sum(vspec.blocks[: j - 1]) + (i - 1)


class Polynomial:
    """Sparse multivariate polynomial over F_p with an ambient V spec."""

    __slots__ = ("vspec", "terms")

    def __init__(self, vspec: ModuleSpec, terms=None):
        self.vspec = vspec
        self.terms = {}
        if terms:
            p = vspec.p
            for mon, c in terms.items():
                c %= p
                if c:
                    self.terms[tuple(mon)] = c

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vspec):
        return cls(vspec)

    @classmethod
    def constant(cls, vspec, c):
        return cls(vspec, {(0,) * vspec.dim: c})

    @classmethod
    def variable(cls, vspec, i, j, e=1, coeff=1):
        mon = [0] * vspec.dim
        mon[var_index(vspec, i, j)] = e
        return cls(vspec, {tuple(mon): coeff})

    @classmethod
    def from_monomial(cls, vspec, mon, coeff=1):
        return cls(vspec, {tuple(mon): coeff})

    # -- basics -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.vspec == other.vspec
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vspec, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        p = self.vspec.p
        out = dict(self.terms)
        for mon, c in other.terms.items():
            s = (out.get(mon, 0) + c) % p
            if s:
                out[mon] = s
            else:
                out.pop(mon, None)
        return Polynomial(self.vspec, out)

    def __neg__(self):
        p = self.vspec.p
        return Polynomial(self.vspec, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.vspec.p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = (out.get(m, 0) + c1 * c2) % p
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.vspec, out)

    __rmul__ = __mul__

    def scale(self, c: int):
        c %= self.vspec.p
        if c == 0:
            return Polynomial.zero(self.vspec)
        p = self.vspec.p
        return Polynomial(self.vspec, {m: (cc * c) % p for m, cc in self.terms.items()})

    def _check(self, other):
        if self.vspec != other.vspec:
            raise ValueError("ambient module specs differ")

    # -- grading ------------------------------------------------------

    def total_degree(self):
        """Max total degree of the terms; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def multidegree(self):
        """Per-block degree vector; raises if not multihomogeneous."""
        mds = {monomial_multidegree(self.vspec, m) for m in self.terms}
        if len(mds) > 1:
            raise ValueError("polynomial is not multihomogeneous")
        return next(iter(mds)) if mds else None

    def homogeneous_components(self):
        """Split into (total degree -> Polynomial)."""
        out = {}
        for m, c in self.terms.items():
            out.setdefault(sum(m), {})[m] = c
        return {d: Polynomial(self.vspec, t) for d, t in sorted(out.items())}

    def multihomogeneous_components(self):
        out = {}
        for m, c in self.terms.items():
            out.setdefault(monomial_multidegree(self.vspec, m), {})[m] = c
        return {md: Polynomial(self.vspec, t) for md, t in sorted(out.items())}

    def __repr__(self):
        from .parsing import format_polynomial

        return f"Polynomial({format_polynomial(self)!r})"


def monomial_multidegree(vspec: ModuleSpec, mon) -> tuple:
    out = []
    off = 0
    for n in vspec.blocks:
        out.append(sum(mon[off : off + n]))
        off += n
    return tuple(out)


def mon_sort_key(mon):
    """Canonical term order: total degree descending, then lex descending.

    Sorting with this key ascending puts terms in canonical order, because
    both components are negated.
    """
    return (-sum(mon), tuple(-e for e in mon))


# -- the action -------------------------------------------------------


@lru_cache(maxsize=None)
def _sigma_var_image(vspec: ModuleSpec, i: int, j: int, e: int) -> Polynomial:
    """sigma(x_{i,j}^e), expanded."""
    n = vspec.blocks[j - 1]
    if i == n:
        return Polynomial.variable(vspec, i, j, e)
    img = Polynomial.variable(vspec, i, j) + Polynomial.variable(vspec, i + 1, j)
    out = Polynomial.constant(vspec, 1)
    base = img
    # binary powering keeps intermediate blowup down for large e
    while e:
        if e & 1:
            out = out * base
        e >>= 1
        if e:
            base = base * base
    return out


def apply_sigma(f: Polynomial) -> Polynomial:
    """The ring automorphism sigma applied to f."""
    vspec = f.vspec
    vars_ = variables(vspec)
    out = Polynomial.zero(vspec)
    for mon, c in f.terms.items():
        term = Polynomial.constant(vspec, c)
        for idx, e in enumerate(mon):
            if e:
                i, j = vars_[idx]
                term = term * _sigma_var_image(vspec, i, j, e)
        out = out + term
    return out


def delta(f: Polynomial) -> Polynomial:
    """Delta = sigma - 1."""
    return apply_sigma(f) - f


def delta_power(f: Polynomial, k: int) -> Polynomial:
    if k < 0:
        raise ValueError("negative power")
    for _ in range(k):
        if f.is_zero():
            break
        f = delta(f)
    return f


def transfer(f: Polynomial) -> Polynomial:
    """The transfer Tr = Delta^(p-1)."""
    return delta_power(f, f.vspec.p - 1)


def orbit_sum(f: Polynomial) -> Polynomial:
    """Sum of sigma^i(f) over i = 0..p-1; agrees with ``transfer``."""
    out = Polynomial.zero(f.vspec)
    g = f
    for _ in range(f.vspec.p):
        out = out + g
        g = apply_sigma(g)
    return out


def weight(f: Polynomial) -> int:
    """Smallest d >= 1 with Delta^d(f) = 0; rejects the zero polynomial."""
    if f.is_zero():
        raise ValueError("weight of the zero polynomial is undefined")
    d = 0
    while not f.is_zero():
        f = delta(f)
        d += 1
        if d > f.vspec.p:  # unreachable: Delta^p = 0
            raise AssertionError("weight exceeded p")
    return d


def is_invariant(f: Polynomial) -> bool:
    return delta(f).is_zero()


def norm(vspec: ModuleSpec, j: int) -> Polynomial:
    """N_j: the orbit product of x_{1,j}, an invariant of degree p monic in x_{1,j}."""
    if not 1 <= j <= vspec.num_blocks:
        raise IndexError(f"block index {j} out of range")
    out = Polynomial.constant(vspec, 1)
    g = Polynomial.variable(vspec, 1, j)
    for _ in range(vspec.p):
        out = out * g
        g = apply_sigma(g)
    return out


def divide_by_norm(f: Polynomial, j: int):
    """Long division f = q*N_j + r with deg_{x_{1,j}}(r) < p.

    N_j is monic of degree p in x_{1,j}, so q and r are unique.  If f is
    invariant, so are q and r (the splitting is G-stable).
    """
    vspec = f.vspec
    p = vspec.p
    nj = norm(vspec, j)
    xidx = var_index(vspec, 1, j)
    # nj minus its leading term x_{1,j}^p, used to fold the remainder down
    lead_mon = [0] * vspec.dim
    lead_mon[xidx] = p
    tail = nj - Polynomial.from_monomial(vspec, lead_mon)

    q = Polynomial.zero(vspec)
    r = f
    while True:
        # highest x_{1,j}-degree term block of r with degree >= p
        top = {m: c for m, c in r.terms.items() if m[xidx] >= p}
        if not top:
            break
        d = max(m[xidx] for m in top)
        cur = {m: c for m, c in top.items() if m[xidx] == d}
        # factor out x_{1,j}^p
        shifted = {}
        for m, c in cur.items():
            mm = list(m)
            mm[xidx] -= p
            shifted[tuple(mm)] = c
        qpart = Polynomial(vspec, shifted)
        q = q + qpart
        r = r - qpart * nj
    return q, r


# -- graded pieces ----------------------------------------------------


def _compositions(total: int, parts: int):
    """All tuples of `parts` naturals summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def graded_basis(vspec: ModuleSpec, d=None, multidegree=None) -> list:
    """Monomials of total degree d (or the given multidegree), canonical order."""
    if multidegree is not None:
        if len(multidegree) != vspec.num_blocks:
            raise ValueError("multidegree length != number of blocks")
        per_block = [
            list(_compositions(md, n)) for md, n in zip(multidegree, vspec.blocks)
        ]
        mons = [tuple(itertools.chain(*combo)) for combo in itertools.product(*per_block)]
    else:
        if d < 0:
            raise ValueError("degree must be >= 0")
        mons = [tuple(m) for m in _compositions(d, vspec.dim)]
    return sorted(mons, key=mon_sort_key)


def coefficient_vector(f: Polynomial, basis_index: dict) -> list:
    v = [0] * len(basis_index)
    for m, c in f.terms.items():
        v[basis_index[m]] = c
    return v


def _operator_matrix(vspec: ModuleSpec, mons, op) -> FpMatrix:
    """Matrix (columns = images of basis monomials) of a linear operator on a piece."""
    index = {m: k for k, m in enumerate(mons)}
    mat = FpMatrix(vspec.field, len(mons), len(mons))
    for col, m in enumerate(mons):
        img = op(Polynomial.from_monomial(vspec, m))
        for mm, c in img.terms.items():
            mat[index[mm], col] = c
    return mat


def invariant_basis(vspec: ModuleSpec, d: int) -> list:
    """Basis of k[V]^G in total degree d, as the kernel of Delta on the piece."""
    mons = graded_basis(vspec, d)
    mat = _operator_matrix(vspec, mons, delta)
    out = []
    for vec in kernel_basis(mat):
        out.append(Polynomial(vspec, {m: c for m, c in zip(mons, vec) if c}))
    return out


def delta_power_preimage(g: Polynomial, k: int):
    """Some f with Delta^k(f) = g, or None if g is not in the image of Delta^k.

    g must be homogeneous; the solve happens on its graded piece with free
    variables set to 0, so the result is deterministic.
    """
    if k == 0:
        return g
    if g.is_zero():
        return g
    if not g.is_homogeneous():
        raise ValueError("delta_power_preimage requires a homogeneous input")
    vspec = g.vspec
    d = g.total_degree()
    mons = graded_basis(vspec, d)
    index = {m: i for i, m in enumerate(mons)}
    mat = _operator_matrix(vspec, mons, lambda f: delta_power(f, k))
    x = solve(mat, coefficient_vector(g, index))
    if x is None:
        return None
    return Polynomial(vspec, {m: c for m, c in zip(mons, x) if c})


def graded_piece_block_structure(vspec: ModuleSpec, d: int):
    """Jordan block sizes of k[V]_d as a kG-module (multiset as a Counter)."""
    from .modules import decompose_by_delta_ranks

    mons = graded_basis(vspec, d)
    mat = _operator_matrix(vspec, mons, apply_sigma)
    return decompose_by_delta_ranks(mat)
