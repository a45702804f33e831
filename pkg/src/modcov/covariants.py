"""Covariants: G-fixed elements of k[V] (x) W, i.e. equivariant maps V -> W.

A nonzero covariant h = f_1 w_1 + ... + f_n w_n is determined by its first
component: f_j = Delta^(j-1)(f_1) and Delta^n(f_1) = 0, so f_1 is a
polynomial of weight at most n and every such polynomial yields a
covariant.  The weight polynomial f_1 is the single source of truth here;
construction re-validates the chain.
"""

from __future__ import annotations

from .field import FpMatrix, kernel_basis, solve
from .modules import ModuleSpec, sigma_on_w
from .poly import (
    Polynomial,
    apply_sigma,
    coefficient_vector,
    delta_power,
    delta_power_preimage,
    divide_by_norm,
    graded_basis,
    invariant_basis,
    norm,
    transfer,
    weight,
)


class ChainError(ValueError):
    """Components do not form the Delta-chain of their first entry."""


class NormDecompositionError(RuntimeError):
    """A linear solve that the norm-splitting hypothesis guarantees has failed."""


class Covariant:
    """An n-tuple of polynomial components against the W-basis w_1..w_n."""

    __slots__ = ("vspec", "wspec", "components")

    def __init__(self, vspec: ModuleSpec, wspec: ModuleSpec, components, validate=True):
        if wspec.num_blocks != 1:
            raise ValueError("W must be a single block at this layer")
        n = wspec.blocks[0]
        comps = list(components)
        if len(comps) > n:
            raise ValueError("more components than dim W")
        while len(comps) < n:
            comps.append(Polynomial.zero(vspec))
        self.vspec = vspec
        self.wspec = wspec
        self.components = tuple(comps)
        if validate:
            self.validate_chain()

    @property
    def n(self) -> int:
        return self.wspec.blocks[0]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def support(self) -> int:
        """Largest j with f_j != 0; 0 for the zero covariant."""
        s = 0
        for j, c in enumerate(self.components, start=1):
            if not c.is_zero():
                s = j
        return s

    def validate_chain(self):
        f = self.components[0]
        g = f
        for j in range(1, self.n):
            g = delta_power(g, 1)
            if g != self.components[j]:
                raise ChainError(f"component {j + 1} is not Delta^{j} of component 1")
        if not delta_power(g, 1).is_zero():
            raise ChainError(f"Delta^{self.n} of component 1 is nonzero")

    def is_equivariant(self) -> bool:
        """Direct check of invariance under the diagonal action.

        Collects w-coordinates of sigma(h) = sum_i sigma(f_i) sigma(w_i) and
        compares with h.  Independent of the chain property.
        """
        p = self.vspec.p
        sig = [apply_sigma(c) for c in self.components]
        for j in range(1, self.n + 1):
            acc = Polynomial.zero(self.vspec)
            for i in range(j, self.n + 1):
                coef = sigma_on_w(self.wspec, i)[j - 1]
                if coef:
                    acc = acc + sig[i - 1].scale(coef)
            if acc != self.components[j - 1]:
                return False
        return True

    def multidegree(self):
        """Multidegree of the first component (all components share it)."""
        if self.is_zero():
            return None
        return self.components[0].multidegree()

    def total_degree(self):
        if self.is_zero():
            return None
        return self.components[0].total_degree()

    def __add__(self, other):
        self._check(other)
        return Covariant(
            self.vspec,
            self.wspec,
            [a + b for a, b in zip(self.components, other.components)],
            validate=False,
        )

    def __sub__(self, other):
        self._check(other)
        return Covariant(
            self.vspec,
            self.wspec,
            [a - b for a, b in zip(self.components, other.components)],
            validate=False,
        )

    def scale_by_invariant(self, q: Polynomial) -> "Covariant":
        """q * h for an invariant q; the chain property is preserved."""
        return Covariant(
            self.vspec, self.wspec, [q * c for c in self.components], validate=False
        )

    def __eq__(self, other):
        return (
            isinstance(other, Covariant)
            and self.vspec == other.vspec
            and self.wspec == other.wspec
            and self.components == other.components
        )

    def _check(self, other):
        if self.vspec != other.vspec or self.wspec != other.wspec:
            raise ValueError("covariants live over different (V, W)")

    def __repr__(self):
        from .parsing import format_polynomial

        return "Covariant[" + "; ".join(format_polynomial(c) for c in self.components) + "]"


def zero_covariant(vspec: ModuleSpec, wspec: ModuleSpec) -> Covariant:
    return Covariant(vspec, wspec, [], validate=False)


def from_weight_poly(f: Polynomial, wspec: ModuleSpec) -> Covariant:
    """The covariant (f, Delta f, ..., Delta^(d-1) f, 0, ..., 0), d = weight(f)."""
    n = wspec.blocks[0]
    if f.is_zero():
        return zero_covariant(f.vspec, wspec)
    if weight(f) > n:
        raise ValueError(f"weight {weight(f)} exceeds dim W = {n}")
    comps = []
    g = f
    for _ in range(n):
        comps.append(g)
        g = delta_power(g, 1)
    return Covariant(f.vspec, wspec, comps, validate=False)


def to_weight_poly(h: Covariant) -> Polynomial:
    """The weight polynomial f_1 of a nonzero covariant; re-validates the chain."""
    if h.is_zero():
        raise ValueError("the zero covariant has no weight polynomial")
    h.validate_chain()
    return h.components[0]


def covariant_basis(vspec: ModuleSpec, wspec: ModuleSpec, d: int) -> list:
    """Basis of k[V,W]^G in degree d: kernel of (diagonal sigma - 1) on k[V]_d (x) W."""
    n = wspec.blocks[0]
    mons = graded_basis(vspec, d)
    index = {m: k for k, m in enumerate(mons)}
    dim = len(mons) * n
    mat = FpMatrix(vspec.field, dim, dim)
    sig_w = [sigma_on_w(wspec, i) for i in range(1, n + 1)]
    for col_m, m in enumerate(mons):
        img = apply_sigma(Polynomial.from_monomial(vspec, m))
        for i in range(1, n + 1):
            col = col_m * n + (i - 1)
            for mm, c in img.terms.items():
                row_m = index[mm]
                for l in range(n):
                    coef = (c * sig_w[i - 1][l]) % vspec.p
                    if coef:
                        row = row_m * n + l
                        mat[row, col] = mat[row, col] + coef
    # kernel of sigma_diag - 1
    for k in range(dim):
        mat[k, k] = mat[k, k] - 1
    out = []
    for vec in kernel_basis(mat):
        comps = [Polynomial.zero(vspec) for _ in range(n)]
        for flat, c in enumerate(vec):
            if c:
                m = mons[flat // n]
                i = flat % n
                comps[i] = comps[i] + Polynomial.from_monomial(vspec, m, c)
        out.append(Covariant(vspec, wspec, comps))
    return out


def make_transfer_covariant(f: Polynomial, wspec: ModuleSpec, s: int) -> Covariant:
    """Components (Delta^(p-s) f, ..., Delta^(p-1) f, 0, ..., 0)."""
    vspec = f.vspec
    p = vspec.p
    n = wspec.blocks[0]
    if not 1 <= s <= n:
        raise ValueError(f"support size {s} out of range 1..{n}")
    if s > p:
        raise ValueError(f"support size {s} exceeds p = {p}")
    comps = []
    g = delta_power(f, p - s)
    for _ in range(s):
        comps.append(g)
        g = delta_power(g, 1)
    return Covariant(vspec, wspec, comps, validate=False)


def transfer_witness(h: Covariant):
    """A polynomial f whose Delta-chain ending at Delta^(p-1)(f) gives h, or None.

    Solves f_1 = Delta^(p-s)(f) on the graded piece; the rest of the chain
    then matches automatically.
    """
    if h.is_zero():
        raise ValueError("the zero covariant is excluded")
    s = h.support()
    p = h.vspec.p
    out = Polynomial.zero(h.vspec)
    for comp in h.components[0].homogeneous_components().values():
        pre = delta_power_preimage(comp, p - s)
        if pre is None:
            return None
        out = out + pre
    return out


def decompose_by_norm(h: Covariant, j: int):
    """Split h = N_j * h1 + h2 with h2 a transfer covariant, returning (h1, h2, u).

    Requires h homogeneous of multidegree (d_1..d_m) with d_j > p - n_j.
    Works down the support levels: the top component of the running
    remainder is invariant; divide it by N_j, solve the two preimage
    problems, and subtract.  The transfer witness u accumulates as
    u <- u + Delta^(k_top - k)(t) across levels, so that h2's components
    are exactly the Delta-chain of u ending at Delta^(p-1)(u).
    """
    vspec, wspec = h.vspec, h.wspec
    p = vspec.p
    if h.is_zero():
        z = zero_covariant(vspec, wspec)
        return z, z, Polynomial.zero(vspec)
    md = h.multidegree()
    nj = vspec.blocks[j - 1]
    if md[j - 1] <= p - nj:
        raise ValueError(
            f"multidegree {md} violates the hypothesis d_{j} > p - n_{j} = {p - nj}"
        )
    njpoly = norm(vspec, j)
    h_cur = h
    h1 = zero_covariant(vspec, wspec)
    u = None
    k_top = None
    while not h_cur.is_zero():
        k = h_cur.support()
        f1 = to_weight_poly(h_cur)
        top = delta_power(f1, k - 1)  # the support-level component, invariant
        q, r = divide_by_norm(top, j)
        t = delta_power_preimage(r, p - 1)
        if t is None:
            raise NormDecompositionError(
                "remainder is not a transfer; the freeness guarantee for the "
                f"degree-{md[j - 1]} component failed (violated precondition or bug)"
            )
        fprime = delta_power_preimage(q, k - 1) if not q.is_zero() else q
        if fprime is None:
            raise NormDecompositionError(
                f"quotient is not in the image of Delta^{k - 1}; norm "
                "multiplication should preserve isomorphism type"
            )
        h1_lvl = from_weight_poly(fprime, wspec)
        h2_lvl = make_transfer_covariant(t, wspec, k)
        if u is None:
            u, k_top = t, k
        else:
            u = u + delta_power(t, k_top - k)
        h1 = h1 + h1_lvl
        nxt = h_cur - h1_lvl.scale_by_invariant(njpoly) - h2_lvl
        if not nxt.is_zero() and nxt.support() >= k:
            raise NormDecompositionError("support failed to decrease")
        h_cur = nxt
    h2 = make_transfer_covariant(u, wspec, k_top)
    if h != h1.scale_by_invariant(njpoly) + h2:
        raise NormDecompositionError("reconstruction check failed")
    return h1, h2, u


def decompose_transfer_covariant(h: Covariant, module_gens, witness=None, gamma=None):
    """Write a transfer covariant of degree > gamma as sum q_i * c_i.

    ``module_gens`` must generate k[V] as a module over k[V]^G up to the
    degree of the witness.  Returns a list of (q_i, c_i) pairs with each
    q_i an invariant of positive degree and each c_i a covariant of degree
    < deg(h), reconstructing h exactly.
    """
    if h.is_zero():
        raise ValueError("the zero covariant is excluded")
    d = h.total_degree()
    if gamma is not None and d <= gamma:
        raise ValueError(f"degree {d} is not above gamma = {gamma}")
    if witness is None:
        witness = transfer_witness(h)
        if witness is None:
            raise ValueError("h is not a transfer covariant")
    vspec, wspec = h.vspec, h.wspec
    s = h.support()
    mons = graded_basis(vspec, d)
    index = {m: k for k, m in enumerate(mons)}
    # columns: q * g for invariant basis q of degree d - deg(g)
    cols = []
    col_meta = []  # (gen index, invariant q)
    for gi, g in enumerate(module_gens):
        e = g.total_degree()
        if e is None or e >= d:
            continue
        for q in invariant_basis(vspec, d - e):
            cols.append(coefficient_vector(q * g, index))
            col_meta.append((gi, q))
    if not cols:
        raise ValueError("no admissible generator products in this degree")
    mat = FpMatrix.from_rows(vspec.field, [list(col) for col in zip(*cols)])
    x = solve(mat, coefficient_vector(witness, index))
    if x is None:
        raise ValueError(
            "witness could not be expressed over module_gens; "
            "generators are incomplete or degree <= gamma"
        )
    qs = {}
    for coef, (gi, q) in zip(x, col_meta):
        if coef:
            qs[gi] = qs.get(gi, Polynomial.zero(vspec)) + q.scale(coef)
    pairs = []
    recon = zero_covariant(vspec, wspec)
    for gi, q in qs.items():
        if q.is_zero():
            continue
        c = make_transfer_covariant(module_gens[gi], wspec, s)
        if c.is_zero():
            continue
        pairs.append((q, c))
        recon = recon + c.scale_by_invariant(q)
    if recon != h:
        raise ValueError("reconstruction failed; witness chain mismatch")
    return pairs
