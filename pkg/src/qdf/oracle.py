"""Dense exact-diagonalization ground truth for small instances.

Builds the many-body matrix of a molecular Hamiltonian (or of its
double-factorized form) under the Jordan-Wigner encoding, with spin-up
orbitals on qubits 0..N-1 and spin-down on N..2N-1.  Capped at N = 6 spatial
orbitals (4096-dimensional).  Used to verify the factorization identity, the
one-body norm identity, and the truncation error bounds.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from qdf.factorization import DoubleFactorization
from qdf.integrals import MolecularIntegrals

__all__ = [
    "FockOperator",
    "build_from_df",
    "build_from_integrals",
    "df_fragments",
    "ground_energy",
    "majorana_pair_matrix",
    "one_body_norm_check",
    "particle_number_commutator_norm",
    "random_molecular_integrals",
    "spectral_norm",
]

#: Largest spatial-orbital count the dense backend accepts.
DENSE_ORBITAL_CAP = 6

HERMITICITY_TOLERANCE = 1e-10

_I2 = sp.identity(2, format="csr", dtype=complex)
_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))
_SMINUS = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))  # a on one mode


class FockOperator:
    """Dense Hermitian many-body matrix over 2N Jordan-Wigner qubits."""

    def __init__(self, n_spatial: int, matrix: np.ndarray):
        if n_spatial > DENSE_ORBITAL_CAP:
            raise ValueError(
                f"dense oracle capped at N <= {DENSE_ORBITAL_CAP} spatial orbitals, got {n_spatial}"
            )
        dim = 1 << (2 * n_spatial)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} != ({dim}, {dim})")
        herm = np.abs(matrix - matrix.conj().T).max()
        if herm > HERMITICITY_TOLERANCE:
            raise ValueError(f"matrix is not Hermitian: max deviation {herm:.3e}")
        self.n_spatial = n_spatial
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _kron_chain(ops: dict[int, sp.spmatrix], n_modes: int) -> sp.spmatrix:
    """Kronecker product over ``n_modes`` qubits, qubit 0 most significant,
    identity where ``ops`` has no entry."""
    out = None
    for q in range(n_modes):
        factor = ops.get(q, _I2)
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out


class _JordanWigner:
    """Cached sparse mode operators and pair products for one qubit count."""

    _cache: dict[int, "_JordanWigner"] = {}

    def __init__(self, n_modes: int):
        self.n_modes = n_modes
        self.a = []
        for p in range(n_modes):
            ops = {q: _Z for q in range(p)}
            ops[p] = _SMINUS
            self.a.append(_kron_chain(ops, n_modes))
        self.adag = [op.conj().T.tocsr() for op in self.a]
        gamma0 = [(self.a[p] + self.adag[p]).tocsr() for p in range(n_modes)]
        gamma1 = [(-1j * (self.a[p] - self.adag[p])).tocsr() for p in range(n_modes)]
        # E[p][q] = a+_p a_q;  majorana_pair[p][q] = gamma_{p,0} gamma_{q,1}
        self.excitation = [[self.adag[p] @ self.a[q] for q in range(n_modes)] for p in range(n_modes)]
        self.majorana_pair = [[gamma0[p] @ gamma1[q] for q in range(n_modes)] for p in range(n_modes)]

    @classmethod
    def get(cls, n_modes: int) -> "_JordanWigner":
        if n_modes not in cls._cache:
            cls._cache[n_modes] = cls(n_modes)
        return cls._cache[n_modes]


class _CooAccumulator:
    """Weighted sum of sparse matrices, materialized once at the end."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.cols: list[np.ndarray] = []
        self.vals: list[np.ndarray] = []

    def add(self, coeff: complex, matrix: sp.spmatrix):
        coo = matrix.tocoo()
        self.rows.append(coo.row)
        self.cols.append(coo.col)
        self.vals.append(coeff * coo.data)

    def to_csr(self) -> sp.csr_matrix:
        if not self.vals:
            return sp.csr_matrix((self.dim, self.dim), dtype=complex)
        rows = np.concatenate(self.rows)
        cols = np.concatenate(self.cols)
        vals = np.concatenate(self.vals)
        return sp.coo_matrix((vals, (rows, cols)), shape=(self.dim, self.dim)).tocsr()


def _check_cap(n: int):
    if n > DENSE_ORBITAL_CAP:
        raise ValueError(
            f"dense oracle capped at N <= {DENSE_ORBITAL_CAP} spatial orbitals, got {n}"
        )


def build_from_integrals(m: MolecularIntegrals) -> FockOperator:
    """Dense matrix of the second-quantized Hamiltonian

        H = core + sum_{ij,s} h_ij a+_{is} a_{js}
                 + 1/2 sum_{ijkl,sr} (ij|kl) a+_{is} a+_{kr} a_{lr} a_{js}.

    The two-body string is reduced through a+_p a+_t a_u a_q =
    E_pq E_tu - delta_{qt} E_pu with E_pq = a+_p a_q.
    """
    n = m.n_orbitals
    _check_cap(n)
    n_modes = 2 * n
    jw = _JordanWigner.get(n_modes)
    dim = 1 << n_modes
    acc = _CooAccumulator(dim)

    for i in range(n):
        for j in range(n):
            hij = m.one_body[i, j]
            if hij == 0.0:
                continue
            for s in (0, 1):
                acc.add(hij, jw.excitation[i + s * n][j + s * n])

    g = m.two_body
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    v = g[i, j, k, l]
                    if v == 0.0:
                        continue
                    for s in (0, 1):
                        for r in (0, 1):
                            p, q = i + s * n, j + s * n
                            t, u = k + r * n, l + r * n
                            acc.add(0.5 * v, jw.excitation[p][q] @ jw.excitation[t][u])
                            if q == t:
                                acc.add(-0.5 * v, jw.excitation[p][u])

    dense = acc.to_csr().toarray()
    dense += m.core_energy * np.eye(dim)
    return FockOperator(n, dense)


def _majorana_pair_sparse(l_matrix: np.ndarray) -> sp.csr_matrix:
    n = l_matrix.shape[0]
    n_modes = 2 * n
    jw = _JordanWigner.get(n_modes)
    acc = _CooAccumulator(1 << n_modes)
    for i in range(n):
        for j in range(n):
            lij = l_matrix[i, j]
            if lij == 0.0:
                continue
            for s in (0, 1):
                acc.add(0.5j * lij, jw.majorana_pair[i + s * n][j + s * n])
    return acc.to_csr()


def majorana_pair_matrix(l_matrix: np.ndarray) -> np.ndarray:
    """Dense matrix of G_L = (i/2) sum_{ij,s} L_ij gamma_{i,s,0} gamma_{j,s,1}
    on 2N Jordan-Wigner qubits."""
    _check_cap(l_matrix.shape[0])
    return _majorana_pair_sparse(l_matrix).toarray()


def build_from_df(df: DoubleFactorization) -> FockOperator:
    """Dense matrix of the double-factorized form

        H = (core_energy + scalar_shift) * I + G_{l_minus1} + 1/2 sum_r G_{L^(r)}^2,

    where each L^(r) is rebuilt from the retained eigenpairs.  For an
    untruncated factorization this equals :func:`build_from_integrals` of the
    source integrals up to the factorization residual.
    """
    n = df.n_orbitals
    _check_cap(n)
    dim = 1 << (2 * n)
    total = _majorana_pair_sparse(df.one_body.l_minus1).astype(complex)
    for r in range(df.rank):
        g_r = _majorana_pair_sparse(df.factor_matrix(r))
        total = total + 0.5 * (g_r @ g_r)
    dense = total.toarray()
    dense += (df.one_body.scalar_shift + df.one_body.core_energy) * np.eye(dim)
    return FockOperator(n, dense)


def df_fragments(df: DoubleFactorization) -> list[np.ndarray]:
    """Hermitian fragments {G_{l_minus1}, 1/2 G_{L^(r)}^2, ...} whose sum plus
    the scalar shift is the double-factorized Hamiltonian; input for the
    product-formula step bound."""
    _check_cap(df.n_orbitals)
    frags = [_majorana_pair_sparse(df.one_body.l_minus1).toarray()]
    for r in range(df.rank):
        g_r = _majorana_pair_sparse(df.factor_matrix(r))
        frags.append(0.5 * (g_r @ g_r).toarray())
    return frags


def _number_operator_diagonal(n_modes: int) -> np.ndarray:
    """Occupation count of each computational basis state."""
    states = np.arange(1 << n_modes, dtype=np.int64)
    counts = np.zeros(states.size, dtype=np.int64)
    for q in range(n_modes):
        counts += (states >> q) & 1
    return counts


def ground_energy(op: FockOperator, n_electrons: int) -> float:
    """Minimum eigenvalue within the fixed-particle-number sector."""
    n_modes = 2 * op.n_spatial
    if not (0 <= n_electrons <= n_modes):
        raise ValueError(f"no {n_electrons}-electron sector in {n_modes} spin-orbitals")
    counts = _number_operator_diagonal(n_modes)
    sector = np.where(counts == n_electrons)[0]
    if sector.size == 0:
        raise ValueError("empty particle-number sector")
    block = op.matrix[np.ix_(sector, sector)]
    return float(np.linalg.eigvalsh(block)[0])


def particle_number_commutator_norm(op: FockOperator) -> float:
    """Max |entry| of [H, N_hat]; zero for particle-conserving Hamiltonians."""
    counts = _number_operator_diagonal(2 * op.n_spatial).astype(float)
    delta = counts[None, :] - counts[:, None]  # [H, diag(c)]_xy = H_xy (c_y - c_x)
    return float(np.abs(op.matrix * delta).max())


def spectral_norm(op) -> float:
    """Largest |eigenvalue| of a FockOperator or Hermitian ndarray."""
    matrix = op.matrix if isinstance(op, FockOperator) else np.asarray(op)
    if matrix.shape[0] <= 1024:
        return float(np.abs(np.linalg.eigvalsh(matrix)).max())
    sparse = sp.csr_matrix(matrix)
    v0 = np.ones(matrix.shape[0])  # fixed start vector keeps runs deterministic
    val = spla.eigsh(sparse, k=1, which="LM", v0=v0, return_eigenvectors=False)
    return float(abs(val[0]))


def one_body_norm_check(l_matrix: np.ndarray) -> tuple[float, float]:
    """(spectral norm of G_L, Schatten norm of L); the two agree for any
    symmetric L, which pins the Majorana-pair normalization."""
    from qdf.factorization import schatten_norm

    g = majorana_pair_matrix(l_matrix)
    return spectral_norm(g), schatten_norm(l_matrix)


def random_molecular_integrals(
    n: int,
    rank: int | None = None,
    n_electrons: int | None = None,
    rng: np.random.Generator | None = None,
    scale: float = 1.0,
) -> MolecularIntegrals:
    """Random instance with a PSD ERI supermatrix: the two-body tensor is
    sum_r A_r[i,j] A_r[k,l] over random symmetric matrices A_r, which has the
    full 8-fold symmetry by construction."""
    rng = np.random.default_rng() if rng is None else rng
    rank = n if rank is None else rank
    n_electrons = n if n_electrons is None else n_electrons
    h1 = rng.normal(scale=scale, size=(n, n))
    h1 = 0.5 * (h1 + h1.T)
    g = np.zeros((n, n, n, n))
    for _ in range(rank):
        a = rng.normal(scale=scale, size=(n, n))
        a = 0.5 * (a + a.T)
        g += np.einsum("ij,kl->ijkl", a, a)
    return MolecularIntegrals(n, n_electrons, float(rng.normal(scale=scale)), h1, g)
