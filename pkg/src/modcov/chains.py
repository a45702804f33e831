"""Jordan chain bases for graded pieces of k[V].

The action of G preserves the per-block multidegree, and a multidegree
piece of k[V] is the tensor product of symmetric powers of the duals of
the individual Jordan blocks.  Chains are therefore built structurally:

  * a symmetric power of a single block is small (its dimension is a
    binomial coefficient in the block size), so its chains come from a
    direct nilpotent-chain computation on the Delta matrix;
  * the chain type of a tensor product of two chains of lengths a and b
    depends only on (p, a, b), so a chain basis of V_a (x) V_b is computed
    once per shape and instantiated for every pair of chains.

From a chain basis everything the generator computations need is cheap:
invariants are the chain bottoms, polynomials of weight <= k are the
bottom k levels, and the Jordan type is the multiset of chain lengths.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fastlinalg import Echelon, _dtype, asmod, matmul_mod, rref_mod
from .modules import ModuleSpec
from .poly import Polynomial, delta


# -- nilpotent chain decomposition (dense, small) ----------------------


def _kernel_mod(m, p):
    """Basis (rows) of the right null space of m over F_p."""
    rows, pivs, _ = rref_mod(m, p)
    n = m.shape[1]
    pivset = set(int(c) for c in pivs)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for r, pc in enumerate(pivs):
            out[i, pc] = (-int(rows[r, fc])) % p
    return asmod(out, p)


def nilpotent_chains(n_mat, p):
    """Jordan chains of a nilpotent matrix over F_p.

    Returns a list of 2-d arrays; chains[i][k] is the level-(k+1) vector of
    chain i, bottom first, with N @ chain[k] = chain[k-1] and
    N @ chain[0] = 0.
    """
    n_mat = asmod(np.asarray(n_mat), p)
    dim = n_mat.shape[0]
    if dim == 0:
        return []
    powers = [np.eye(dim, dtype=np.int64)]
    while True:
        nxt = matmul_mod(powers[-1], n_mat, p)
        powers.append(nxt)
        if not nxt.any():
            break
        if len(powers) > dim + 1:
            raise ValueError("matrix is not nilpotent")
    top_len = len(powers) - 1  # N^top_len = 0
    kernels = [np.zeros((0, dim), dtype=np.int64)]
    for k in range(1, top_len + 1):
        kernels.append(_kernel_mod(powers[k], p))
    chains = []
    for k in range(top_len, 0, -1):
        ech = Echelon(p, dim)
        ech.add_rows(kernels[k - 1])
        # level-k vectors of the longer chains already chosen
        for ch in chains:
            ech.add_rows(ch[k - 1 : k])
        cands = kernels[k]
        new = ech.add_rows(cands, origins=list(range(cands.shape[0])))
        for idx in new:
            top = cands[idx].astype(np.int64)
            ch = [top]
            for _ in range(k - 1):
                ch.append(matmul_mod(ch[-1][None, :], n_mat.T, p)[0].astype(np.int64))
            ch.reverse()
            chains.append(np.array(ch, dtype=np.int64))
    assert sum(c.shape[0] for c in chains) == dim
    return chains


# -- single-block symmetric powers --------------------------------------


def _compositions_matrix(total, parts):
    rows = []

    def rec(prefix, rem, k):
        if k == 1:
            rows.append(prefix + [rem])
            return
        for v in range(rem + 1):
            rec(prefix + [v], rem - v, k - 1)

    if parts == 0:
        return np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    rec([], total, parts)
    return np.array(rows, dtype=np.int64)


class BlockPiece:
    """Monomials of one degree in the variables of a single block, indexed."""

    def __init__(self, n_vars: int, degree: int):
        self.n_vars = n_vars
        self.degree = degree
        exps = _compositions_matrix(degree, n_vars)
        base = degree + 1
        if n_vars and float(base) ** n_vars >= 2**62:
            raise OverflowError("piece too large to index")
        self._base = base
        codes = self._encode(exps)
        order = np.argsort(codes)
        self.exps = exps[order]
        self.codes = codes[order]
        self.size = self.exps.shape[0]

    def _encode(self, exps):
        if self.n_vars == 0:
            return np.zeros(exps.shape[0], dtype=np.int64)
        weights = self._base ** np.arange(self.n_vars, dtype=np.int64)
        return exps.astype(np.int64) @ weights

    def rank(self, exps):
        """Indices of the given exponent rows (must belong to the piece)."""
        codes = self._encode(np.atleast_2d(exps))
        idx = np.searchsorted(self.codes, codes)
        if np.any(idx >= self.size) or np.any(self.codes[np.minimum(idx, self.size - 1)] != codes):
            raise KeyError("exponent row not in piece")
        return idx


@lru_cache(maxsize=None)
def _block_delta_chains(p: int, n: int, d: int):
    """(BlockPiece, chains) for Delta acting on Sym^d of an n-dim block."""
    from .field import PrimeField

    piece = BlockPiece(n, d)
    vspec = ModuleSpec(PrimeField(p), [n])
    dmat = np.zeros((piece.size, piece.size), dtype=np.int64)
    for col in range(piece.size):
        mono = tuple(int(e) for e in piece.exps[col])
        img = delta(Polynomial.from_monomial(vspec, mono))
        for mm, c in img.terms.items():
            dmat[piece.rank(np.array(mm))[0], col] = c
    return piece, nilpotent_chains(dmat, p)


@lru_cache(maxsize=None)
def _tensor_templates(p: int, a: int, b: int):
    """Chain basis of V_a (x) V_b over F_p, in product-chain coordinates.

    Coordinates are (s, t) -> s*b + t for chain levels s < a, t < b, with
    Delta(e_s (x) f_t) = e_{s-1} f_t + e_s f_{t-1} + e_{s-1} f_{t-1}.
    """
    dim = a * b
    dmat = np.zeros((dim, dim), dtype=np.int64)
    for s in range(a):
        for t in range(b):
            col = s * b + t
            if s > 0:
                dmat[(s - 1) * b + t, col] += 1
            if t > 0:
                dmat[s * b + (t - 1), col] += 1
            if s > 0 and t > 0:
                dmat[(s - 1) * b + (t - 1), col] += 1
    return nilpotent_chains(dmat, p)


# -- multidegree pieces of k[V] -----------------------------------------


class PieceIndex:
    """Monomial indexing for one multidegree piece of k[V].

    The flat index nests block indices block-major: a monomial
    (m_1, ..., m_m) has index ((i_1 * c_2 + i_2) * c_3 + ...) so that
    tensor products of per-block vectors are plain Kronecker products.
    """

    def __init__(self, vspec: ModuleSpec, multidegree):
        self.vspec = vspec
        self.multidegree = tuple(multidegree)
        self.blocks = [
            BlockPiece(n, d) for n, d in zip(vspec.blocks, self.multidegree)
        ]
        self.size = 1
        for b in self.blocks:
            self.size *= b.size
        self._exps = None

    def rank(self, exps):
        """Flat indices for exponent rows over all of V's variables."""
        exps = np.atleast_2d(exps)
        idx = np.zeros(exps.shape[0], dtype=np.int64)
        off = 0
        for bp in self.blocks:
            idx = idx * bp.size + bp.rank(exps[:, off : off + bp.n_vars])
            off += bp.n_vars
        return idx

    def exponents(self):
        """Full exponent matrix, shape (size, dim V), in index order; cached."""
        if self._exps is None:
            parts = [bp.exps for bp in self.blocks]
            out = parts[0]
            for nxt in parts[1:]:
                left = np.repeat(out, nxt.shape[0], axis=0)
                right = np.tile(nxt, (out.shape[0], 1))
                out = np.concatenate([left, right], axis=1)
            self._exps = out
        return self._exps

    def vector_to_poly(self, vec) -> Polynomial:
        exps = self.exponents()
        terms = {}
        for i in np.nonzero(vec)[0]:
            terms[tuple(int(e) for e in exps[i])] = int(vec[i])
        return Polynomial(self.vspec, terms)

    def poly_to_vector(self, f: Polynomial):
        out = np.zeros(self.size, dtype=np.int64)
        if f.terms:
            exps = np.array([list(m) for m in f.terms], dtype=np.int64)
            coefs = np.array(list(f.terms.values()), dtype=np.int64)
            out[self.rank(exps)] = coefs
        return out


class PieceChains:
    """Chain basis of a multidegree piece, built by folding tensor factors."""

    def __init__(self, vspec: ModuleSpec, multidegree):
        self.index = PieceIndex(vspec, multidegree)
        p = vspec.p
        chains = None
        for n, d in zip(vspec.blocks, multidegree):
            _, blk = _block_delta_chains(p, n, d)
            if chains is None:
                chains = [asmod(c, p) for c in blk]
            else:
                chains = _fold_tensor(chains, blk, p)
        self.chains = chains if chains is not None else []
        assert sum(c.shape[0] for c in self.chains) == self.index.size

    def block_lengths(self):
        return sorted((c.shape[0] for c in self.chains), reverse=True)

    def invariant_matrix(self):
        """Rows: a basis of the invariants of the piece (chain bottoms)."""
        if not self.chains:
            return np.zeros((0, self.index.size), dtype=np.int64)
        return np.array([c[0] for c in self.chains], dtype=np.int64)

    def weight_le_matrix(self, k: int):
        """Rows: a basis of { f : Delta^k f = 0 } (bottom k chain levels)."""
        rows = []
        for c in self.chains:
            rows.extend(c[: min(k, c.shape[0])])
        if not rows:
            return np.zeros((0, self.index.size), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    def dim_weight_le(self, k: int) -> int:
        return sum(min(k, c.shape[0]) for c in self.chains)


def _fold_tensor(left_chains, right_chains, p):
    """Chains of (span of left_chains) (x) (span of right_chains)."""
    out = []
    for lc in left_chains:
        a, c1 = lc.shape
        for rc in right_chains:
            b, c2 = rc.shape
            for tmpl in _tensor_templates(p, a, b):
                vecs = []
                for tv in tmpl:
                    coef = tv.reshape(a, b).astype(np.float64)
                    # sum_{s,t} coef[s,t] * (lc[s] (x) rc[t]) as a flat vector
                    mid = coef @ rc.astype(np.float64)  # (a, c2)
                    big = lc.astype(np.float64).T @ mid  # (c1, c2)
                    vecs.append(np.mod(big, p).reshape(-1))
                out.append(np.asarray(vecs).astype(_dtype(p)))
    return out


def multiplication_map(g: Polynomial, source: PieceIndex, target: PieceIndex):
    """Dense matrix of 'multiply by g' from the source piece to the target.

    Exact mod p; columns indexed by source monomials.  Multidegrees must be
    compatible (target = source + multidegree of g), which holds for the
    multihomogeneous g used by the generator computations.
    """
    p = g.vspec.p
    cs, ct = source.size, target.size
    out = np.zeros((ct, cs), dtype=_dtype(p))
    src_exps = source.exponents()
    mons = np.array([list(m) for m in g.terms], dtype=np.int64)
    coefs = np.array([c % p for c in g.terms.values()], dtype=_dtype(p))
    cols = np.arange(cs)
    # vectorize over terms, chunked to bound the temporary
    chunk = max(1, int(2e6) // max(1, cs))
    for t0 in range(0, mons.shape[0], chunk):
        mm = mons[t0 : t0 + chunk]
        shifted = (src_exps[None, :, :] + mm[:, None, :]).reshape(-1, src_exps.shape[1])
        rows = target.rank(shifted)
        # distinct terms of g never collide on (row, col): row - col
        # determines the term's exponent vector
        flat = rows * cs + np.tile(cols, mm.shape[0])
        out.reshape(-1)[flat] = np.repeat(coefs[t0 : t0 + chunk], cs)
    return out
