"""Dense matrices of operators between weighted Fourier/Taylor bases.

Basis conventions, fixed once and used everywhere:

* u_n = e^{i n theta}/sqrt(|n|), n in [-N..-1, 1..N]; the full composition
  matrix is stored with modes ordered ascending [-N..-1, 1..N].
* q_j = z^{-j}/sqrt(j) (outside basis), p_j = z^{j}/sqrt(j) (inside basis),
  j = 1..N ascending.
* Block index map for M in the u-basis: with pos(n) the position of mode n,
  a[j-1, k-1] = M[pos(-j), pos(-k)]   (negative -> negative modes, "pr+")
  b[j-1, k-1] = M[pos(-j), pos(+k)]   (positive -> negative)
  and the conjugate blocks are derived, not stored:
  c = conj(b), d = conj(a) entrywise (exact for real circle lifts).
  The graph of plus-parts over minus-parts then satisfies Gr = c a^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

__all__ = ["OperatorMatrix", "BlockDecomposition", "block_decompose", "pairing_matrix"]


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray = field(repr=False)
    row_basis: str
    col_basis: str
    order: int

    def __init__(self, entries, row_basis: str, col_basis: str, order: int):
        e = np.asarray(entries, dtype=complex).copy()
        if not np.all(np.isfinite(e)):
            raise InvalidInputError("non-finite matrix entry")
        expected = {"u": 2 * order, "p": order, "q": order}
        for basis, dim in ((row_basis, e.shape[0]), (col_basis, e.shape[1])):
            if basis in expected and dim != expected[basis]:
                raise InvalidInputError(
                    f"basis {basis!r} at order {order} needs dimension {expected[basis]}, got {dim}"
                )
            if basis not in expected and dim % order != 0:
                raise InvalidInputError(f"basis {basis!r} dimension {dim} not a multiple of {order}")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "row_basis", row_basis)
        object.__setattr__(self, "col_basis", col_basis)
        object.__setattr__(self, "order", int(order))

    @property
    def modes(self) -> np.ndarray:
        n = self.order
        return np.concatenate([np.arange(-n, 0), np.arange(1, n + 1)])

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.col_basis != other.row_basis or self.order != other.order:
            raise InvalidInputError("basis mismatch in operator product")
        return OperatorMatrix(self.entries @ other.entries, self.row_basis, other.col_basis, self.order)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries, "fro"))

    def spectral_norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))


def pairing_matrix(order: int) -> np.ndarray:
    """Symplectic pairing Omega[m, n] = (u_m, u_n) = i sign(n) delta_{m,-n}."""
    n = order
    modes = np.concatenate([np.arange(-n, 0), np.arange(1, n + 1)])
    pos = {m: i for i, m in enumerate(modes)}
    omega = np.zeros((2 * n, 2 * n), dtype=complex)
    for m in modes:
        omega[pos[-m], pos[m]] = 1j * np.sign(m)
    return omega


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks (a, b) of a composition operator; conjugates are derived."""

    a: OperatorMatrix
    b: OperatorMatrix

    @property
    def order(self) -> int:
        return self.a.order

    @property
    def c(self) -> np.ndarray:
        """Minus -> plus block, equal to conj(b) entrywise."""
        return np.conj(self.b.entries)

    @property
    def d(self) -> np.ndarray:
        """Plus -> plus block, equal to conj(a) entrywise."""
        return np.conj(self.a.entries)

    def reassemble(self) -> OperatorMatrix:
        n = self.order
        full = np.zeros((2 * n, 2 * n), dtype=complex)
        idx_neg = _positions_negative(n)
        idx_pos = _positions_positive(n)
        full[np.ix_(idx_neg, idx_neg)] = self.a.entries
        full[np.ix_(idx_neg, idx_pos)] = self.b.entries
        full[np.ix_(idx_pos, idx_neg)] = self.c
        full[np.ix_(idx_pos, idx_pos)] = self.d
        return OperatorMatrix(full, "u", "u", n)

    def grunsky_from_blocks(self) -> OperatorMatrix:
        """b-bar a^{-1}: the Grunsky matrix of the welded map (q -> p bases)."""
        gr = self.c @ np.linalg.inv(self.a.entries)
        return OperatorMatrix(gr, "p", "q", self.order)


def _positions_negative(n: int) -> np.ndarray:
    # mode -j sits at position n - j for j = 1..n; returned in j-ascending order
    return np.array([n - j for j in range(1, n + 1)])


def _positions_positive(n: int) -> np.ndarray:
    # mode +j sits at position n + j - 1
    return np.array([n + j - 1 for j in range(1, n + 1)])


def block_decompose(M: OperatorMatrix) -> BlockDecomposition:
    """Split a u-basis matrix into the (a, b) blocks documented above."""
    if M.row_basis != "u" or M.col_basis != "u":
        raise InvalidInputError("block decomposition expects a u-basis matrix")
    n = M.order
    idx_neg = _positions_negative(n)
    idx_pos = _positions_positive(n)
    a = OperatorMatrix(M.entries[np.ix_(idx_neg, idx_neg)], "q", "q", n)
    b = OperatorMatrix(M.entries[np.ix_(idx_neg, idx_pos)], "q", "p", n)
    return BlockDecomposition(a=a, b=b)
